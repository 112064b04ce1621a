//! Property tests for geometry, corpus, model and filter invariants.

mod common;

use std::collections::HashSet;

use cooc_core::cooc_model::{BoundaryModel, CombinedModel, CoocModel, DistanceModel};
use cooc_core::corpus::TokenizedHalf;
use cooc_core::counting::{count_all, CoocGraph, CountingAssumption};
use cooc_core::filters::{
    apply_exclusive, apply_filter_set, apply_pos, lcsr, CognateRule, Filter, FilterSet,
    LinkPredicate, Mrbd, PosCompat,
};
use cooc_core::formats::{parse_pretokenized, write_pretokenized};
use cooc_core::geometry::{BitextMap, BitextSpace, Units};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn anchors_strategy() -> impl Strategy<Value = (f64, f64, Vec<(f64, f64)>)> {
    (1u32..300, 1u32..300, 0usize..8, any::<u64>()).prop_map(|(w, h, n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w, h) = (w as f64, h as f64);
        (w, h, random_anchors(&mut rng, w, h, n))
    })
}

fn exhaustive(model: &CoocModel, h1: &TokenizedHalf, h2: &TokenizedHalf) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, s) in h1.tokens().iter().enumerate() {
        for (j, t) in h2.tokens().iter().enumerate() {
            if model.co_occurs(s, t) {
                out.push((i, j));
            }
        }
    }
    out
}

fn bitext(
    seed: u64,
    segments: usize,
    per_segment: usize,
) -> (TokenizedHalf, TokenizedHalf, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h1 = TokenizedHalf::tokenize(&random_text(&mut rng, segments, per_segment, 6), false);
    let h2 = TokenizedHalf::tokenize(&random_text(&mut rng, segments + 1, per_segment, 6), false);
    (h1, h2, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn distance_is_nonnegative_and_zero_on_the_map(
        (w, h, anchors) in anchors_strategy(),
        fx in 0.0..=1.0f64,
        fy in 0.0..=1.0f64,
        t in 0.0..=1.0f64,
    ) {
        let space = BitextSpace::new(w, h, Units::Characters).unwrap();
        let map = BitextMap::load(&anchors, space).unwrap();
        let (x, y) = (fx * w, fy * h);
        prop_assert!(map.distance(x, y).unwrap() >= 0.0);

        // A point interpolated on some segment is on the map.
        let a = map.anchors();
        let k = ((fx * (a.len() - 1) as f64) as usize).min(a.len() - 2);
        let (px, py) = (a[k].x + t * (a[k + 1].x - a[k].x), a[k].y + t * (a[k + 1].y - a[k].y));
        prop_assert!(map.distance(px, py).unwrap() < 1e-9);
    }

    #[test]
    fn within_agrees_with_distance(
        (w, h, anchors) in anchors_strategy(),
        fx in 0.0..=1.0f64,
        fy in 0.0..=1.0f64,
        radius in 0.0..60.0f64,
    ) {
        let space = BitextSpace::new(w, h, Units::Characters).unwrap();
        let map = BitextMap::load(&anchors, space).unwrap();
        let (x, y) = (fx * w, fy * h);
        prop_assert_eq!(map.is_within(x, y, radius), map.distance(x, y).unwrap() < radius);
    }

    #[test]
    fn anchor_on_the_map_leaves_distance_unchanged(
        (w, h, anchors) in anchors_strategy(),
        t in 0.0..=1.0f64,
        fx in 0.0..=1.0f64,
        fy in 0.0..=1.0f64,
    ) {
        let space = BitextSpace::new(w, h, Units::Characters).unwrap();
        let map = BitextMap::load(&anchors, space).unwrap();
        let a = map.anchors();
        let k = ((t * (a.len() - 1) as f64) as usize).min(a.len() - 2);
        let extra = (
            a[k].x + 0.5 * (a[k + 1].x - a[k].x),
            a[k].y + 0.5 * (a[k + 1].y - a[k].y),
        );
        let mut more: Vec<(f64, f64)> = a.iter().map(|p| (p.x, p.y)).collect();
        more.insert(k + 1, extra);
        let bigger = BitextMap::load(&more, space).unwrap();
        let (x, y) = (fx * w, fy * h);
        let (d0, d1) = (map.distance(x, y).unwrap(), bigger.distance(x, y).unwrap());
        prop_assert!((d0 - d1).abs() < 1e-9, "{} vs {}", d0, d1);
    }

    #[test]
    fn loaded_maps_are_monotone_with_corners(
        (w, h, anchors) in anchors_strategy(),
    ) {
        let space = BitextSpace::new(w, h, Units::Tokens).unwrap();
        let map = BitextMap::load(&anchors, space).unwrap();
        let a = map.anchors();
        prop_assert!(a.len() >= 2);
        prop_assert_eq!((a[0].x, a[0].y), (0.0, 0.0));
        prop_assert_eq!((a[a.len() - 1].x, a[a.len() - 1].y), (w, h));
        for p in a.windows(2) {
            prop_assert!(p[0].x <= p[1].x && p[0].y <= p[1].y);
            prop_assert!(p[0] != p[1]);
        }
    }

    #[test]
    fn tokens_and_gaps_rebuild_the_text(text in "[a-cé \\n\\t]{0,60}") {
        let half = TokenizedHalf::tokenize(&text, false);
        let chars: Vec<char> = text.chars().collect();
        let mut rebuilt = String::new();
        let mut pos = 0;
        for t in half.tokens() {
            rebuilt.extend(&chars[pos..t.span.0]);
            prop_assert!(chars[pos..t.span.0].iter().all(|c| c.is_whitespace()));
            rebuilt.push_str(&t.surface);
            pos = t.span.1;
        }
        rebuilt.extend(&chars[pos..]);
        prop_assert_eq!(rebuilt, text.clone());
        prop_assert_eq!(half.length(Units::Characters), chars.len());
        for pair in half.tokens().windows(2) {
            prop_assert!(pair[0].span.1 < pair[1].span.0);
            prop_assert!(pair[0].segment_index <= pair[1].segment_index);
        }
        for t in half.tokens() {
            prop_assert!(t.segment_index < half.segment_count());
        }
    }

    #[test]
    fn pretokenized_round_trip(text in "[a-cA-C \\n]{0,60}", fold in any::<bool>()) {
        let half = TokenizedHalf::tokenize(&text, fold);
        let records: Vec<_> = parse_pretokenized(&write_pretokenized(&half))
            .unwrap()
            .into_iter()
            .map(|(_, r)| r)
            .collect();
        let back = TokenizedHalf::from_pretokenized(
            &records,
            Some(half.length(Units::Characters)),
            fold,
        )
        .unwrap();
        // Segment counts may differ when trailing lines hold no tokens.
        prop_assert_eq!(back.tokens(), half.tokens());
        prop_assert_eq!(back.length(Units::Characters), half.length(Units::Characters));
    }

    #[test]
    fn band_sweep_equals_exhaustive(seed in any::<u64>(), tokens_units in any::<bool>(), frac in 0.0..0.4f64) {
        let (h1, h2, mut rng) = bitext(seed, 6, 7);
        let units = if tokens_units { Units::Tokens } else { Units::Characters };
        let map = map_for(&mut rng, &h1, &h2, units);
        let delta = frac * h1.length(units).max(h2.length(units)) as f64;
        let distance = DistanceModel::new(map, delta).unwrap();
        let boundary = BoundaryModel::new(random_alignment(&mut rng, h1.segment_count(), h2.segment_count()));
        for model in [
            CoocModel::from(distance.clone()),
            CoocModel::from(boundary.clone()),
            CoocModel::from(CombinedModel::new(distance, boundary)),
        ] {
            prop_assert_eq!(model.candidate_edges(&h1, &h2), exhaustive(&model, &h1, &h2));
        }
    }

    #[test]
    fn combined_is_intersection(seed in any::<u64>(), frac in 0.0..0.4f64) {
        let (h1, h2, mut rng) = bitext(seed, 5, 6);
        let map = map_for(&mut rng, &h1, &h2, Units::Characters);
        let delta = frac * h1.length(Units::Characters) as f64;
        let distance = DistanceModel::new(map, delta).unwrap();
        let boundary = BoundaryModel::new(random_alignment(&mut rng, h1.segment_count(), h2.segment_count()));
        let d: HashSet<_> = CoocModel::from(distance.clone()).candidate_edges(&h1, &h2).into_iter().collect();
        let b: HashSet<_> = CoocModel::from(boundary.clone()).candidate_edges(&h1, &h2).into_iter().collect();
        let c: HashSet<_> = CoocModel::from(CombinedModel::new(distance, boundary)).candidate_edges(&h1, &h2).into_iter().collect();
        prop_assert_eq!(c, d.intersection(&b).copied().collect::<HashSet<_>>());
    }

    #[test]
    fn edges_and_counts_grow_with_delta(seed in any::<u64>(), a in 0.0..0.3f64, b in 0.0..0.3f64) {
        let (h1, h2, mut rng) = bitext(seed, 5, 6);
        let map = map_for(&mut rng, &h1, &h2, Units::Characters);
        let scale = h1.length(Units::Characters) as f64;
        let (lo, hi) = if a <= b { (a * scale, b * scale) } else { (b * scale, a * scale) };
        let small = CoocModel::from(DistanceModel::new(map.clone(), lo).unwrap());
        let large = CoocModel::from(DistanceModel::new(map, hi).unwrap());
        let e_small: HashSet<_> = small.candidate_edges(&h1, &h2).into_iter().collect();
        let e_large: HashSet<_> = large.candidate_edges(&h1, &h2).into_iter().collect();
        prop_assert!(e_small.is_subset(&e_large));
        for assumption in [CountingAssumption::Naive, CountingAssumption::AtMostOne] {
            let t_small = count_all(&small, &h1, &h2, assumption, None).unwrap();
            let t_large = count_all(&large, &h1, &h2, assumption, None).unwrap();
            for (u, v, c) in t_small.rows() {
                prop_assert!(t_large.get(u, v) >= c);
            }
        }
    }

    #[test]
    fn count_sandwich(seed in any::<u64>(), frac in 0.0..0.4f64) {
        let (h1, h2, mut rng) = bitext(seed, 5, 6);
        let map = map_for(&mut rng, &h1, &h2, Units::Characters);
        let model = CoocModel::from(DistanceModel::new(map, frac * h1.length(Units::Characters) as f64).unwrap());
        let naive = count_all(&model, &h1, &h2, CountingAssumption::Naive, None).unwrap();
        let most = count_all(&model, &h1, &h2, CountingAssumption::AtMostOne, None).unwrap();
        let least = count_all(&model, &h1, &h2, CountingAssumption::AtLeastOne, None).unwrap();
        prop_assert_eq!(naive.len(), most.len());
        prop_assert_eq!(naive.len(), least.len());
        for (u, v, n) in naive.rows() {
            prop_assert!(most.get(u, v) <= least.get(u, v));
            prop_assert!(least.get(u, v) <= n);
        }
    }

    #[test]
    fn filters_only_remove_and_consume_exclusively(seed in any::<u64>(), order in 0usize..6) {
        let (h1, h2, mut rng) = bitext(seed, 4, 6);
        let tags = |h: &TokenizedHalf| -> Vec<&str> {
            h.tokens().iter().map(|t| if t.surface.len() % 2 == 0 { "N" } else { "V" }).collect()
        };
        let h1 = h1.clone().with_pos(&tags(&h1)).unwrap();
        let h2 = h2.clone().with_pos(&tags(&h2)).unwrap();
        let map = map_for(&mut rng, &h1, &h2, Units::Characters);
        let model = CoocModel::from(DistanceModel::new(map, 0.3 * h1.length(Units::Characters) as f64).unwrap());
        let edges = model.candidate_edges(&h1, &h2);

        let mrbd = Mrbd::new([("w1x", "w2xx"), ("w3", "w3"), ("w0", "w0")], false);
        let rule = CognateRule::new(0.5, 2).unwrap();
        let mut filters = vec![
            Filter::Pos(PosCompat::identity()),
            Filter::Mrbd(mrbd.clone()),
            Filter::Cognate(rule),
        ];
        filters.rotate_left(order % 3);
        if order >= 3 {
            filters.swap(0, 1);
        }
        let set = FilterSet::new(filters).unwrap();
        let out = apply_filter_set(&edges, &h1, &h2, &set).unwrap();

        let input: HashSet<_> = edges.iter().copied().collect();
        prop_assert!(out.residual.iter().all(|e| input.contains(e)));
        prop_assert!(out.consumed.iter().all(|e| input.contains(e)));
        let used1: HashSet<_> = out.consumed.iter().map(|e| e.0).collect();
        let used2: HashSet<_> = out.consumed.iter().map(|e| e.1).collect();
        prop_assert_eq!(used1.len(), out.consumed.len());
        prop_assert_eq!(used2.len(), out.consumed.len());
        prop_assert!(out.residual.iter().all(|(i, j)| !used1.contains(i) && !used2.contains(j)));

        let name = |i: usize, j: usize| {
            (h1.type_name(h1.tokens()[i].type_id), h2.type_name(h2.tokens()[j].type_id))
        };
        for &(i, j) in &out.consumed {
            let (u, v) = name(i, j);
            prop_assert!(mrbd.accepts(u, v) || rule.accepts(u, v));
        }

        // Each filter alone also only removes edges.
        let pos_only = apply_pos(&edges, &h1, &h2, &PosCompat::identity()).unwrap();
        prop_assert!(pos_only.iter().all(|e| input.contains(e)));
        let excl = apply_exclusive(&edges, &h1, &h2, &mrbd);
        prop_assert!(excl.residual.iter().all(|e| input.contains(e)));
        for &(i, j) in &excl.consumed {
            let (u, v) = name(i, j);
            prop_assert!(mrbd.accepts(u, v));
        }

        // Consumed links are counted.
        for assumption in CountingAssumption::ALL {
            let table = count_all(&model, &h1, &h2, assumption, Some(&set)).unwrap();
            for &(i, j) in &out.consumed {
                let (u, v) = name(i, j);
                let links = out.consumed.iter().filter(|&&(a, b)| name(a, b) == (u, v)).count();
                prop_assert!(table.get(u, v) >= links as u64);
            }
        }
    }

    #[test]
    fn lcsr_is_symmetric_and_bounded(a in "[a-dé]{0,10}", b in "[a-dé]{0,10}") {
        let r = lcsr(&a, &b);
        prop_assert!((0.0..=1.0).contains(&r));
        prop_assert_eq!(r, lcsr(&b, &a));
        if !a.is_empty() {
            prop_assert_eq!(lcsr(&a, &a), 1.0);
        }
    }

    #[test]
    fn konig_and_gallai(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 12);
        let m = g.maximum_matching().len();
        let (cl, cr) = g.minimum_vertex_cover();
        prop_assert_eq!(cl.len() + cr.len(), m);
        let core: CoocGraph = without_isolated(&g);
        prop_assert_eq!(core.maximum_matching().len() + core.minimum_edge_cover().len(), core.vertex_count());
    }
}
