#![allow(dead_code)]

use cooc_core::corpus::{SegmentAlignment, TokenizedHalf};
use cooc_core::geometry::{BitextMap, BitextSpace, Units};
use cooc_core::CoocGraph;
use rand::Rng;

/// Random text of `segments` lines drawn from a `vocab`-word vocabulary.
pub fn random_text<R: Rng>(
    rng: &mut R,
    segments: usize,
    max_per_segment: usize,
    vocab: usize,
) -> String {
    let mut lines = Vec::with_capacity(segments);
    for i in 0..segments {
        // The first line is never empty, so both axes have positive length.
        let n = rng.gen_range(usize::from(i == 0)..=max_per_segment.max(1));
        let words: Vec<String> = (0..n)
            .map(|_| {
                let w = rng.gen_range(0..vocab);
                // Varying word lengths spread the character offsets.
                format!("w{}{}", w, "x".repeat(w % 3))
            })
            .collect();
        lines.push(words.join(" "));
    }
    lines.join("\n")
}

/// Random monotone anchors inside `width x height`, possibly with vertical
/// and horizontal runs.
pub fn random_anchors<R: Rng>(
    rng: &mut R,
    width: f64,
    height: f64,
    count: usize,
) -> Vec<(f64, f64)> {
    let mut xs: Vec<f64> = (0..count)
        .map(|_| rng.gen_range(0.0..=width).floor())
        .collect();
    let mut ys: Vec<f64> = (0..count)
        .map(|_| rng.gen_range(0.0..=height).floor())
        .collect();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    xs.into_iter().zip(ys).collect()
}

pub fn random_map<R: Rng>(rng: &mut R, width: f64, height: f64, units: Units) -> BitextMap {
    let space = BitextSpace::new(width, height, units).unwrap();
    let count = rng.gen_range(0..8);
    BitextMap::load(&random_anchors(rng, width, height, count), space).unwrap()
}

/// Map over the halves' own dimensions.
pub fn map_for<R: Rng>(
    rng: &mut R,
    h1: &TokenizedHalf,
    h2: &TokenizedHalf,
    units: Units,
) -> BitextMap {
    random_map(rng, h1.length(units) as f64, h2.length(units) as f64, units)
}

/// Random valid alignment: monotone blocks of 1-3 segments per side,
/// some segments left unaligned.
pub fn random_alignment<R: Rng>(rng: &mut R, segs1: usize, segs2: usize) -> SegmentAlignment {
    let mut records = Vec::new();
    let (mut a, mut b) = (0, 0);
    while a < segs1 && b < segs2 {
        if rng.gen_bool(0.15) {
            if rng.gen_bool(0.5) {
                a += 1;
            } else {
                b += 1;
            }
            continue;
        }
        let n1 = rng.gen_range(1..=3).min(segs1 - a);
        let n2 = rng.gen_range(1..=3).min(segs2 - b);
        records.push(((a..a + n1).collect(), (b..b + n2).collect()));
        a += n1;
        b += n2;
    }
    SegmentAlignment::load(&records, (segs1, segs2)).unwrap()
}

pub fn random_graph<R: Rng>(rng: &mut R, max_side: usize) -> CoocGraph {
    let l = rng.gen_range(0..=max_side);
    let r = rng.gen_range(0..=max_side);
    let density: f64 = rng.gen_range(0.0..=1.0);
    let mut edges = Vec::new();
    for i in 0..l {
        for j in 0..r {
            if rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    CoocGraph::with_vertices(l, r, &edges)
}

/// The same graph with isolated vertices dropped.
pub fn without_isolated(g: &CoocGraph) -> CoocGraph {
    let tokens: Vec<(usize, usize)> = g.edges().to_vec();
    CoocGraph::from_token_edges(&tokens)
}
