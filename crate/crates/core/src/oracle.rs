//! Exhaustive reference implementations for testing and `cooc verify`.
//!
//! Nothing here shares code with the production matching or enumeration
//! paths: co-occurrence is evaluated for every token pair and each graph
//! quantity is found by bounded exhaustive search.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cooc_model::CoocModel;
use crate::corpus::{TokenizedHalf, TypeId};
use crate::counting::{CoocGraph, CoocTable, CountingAssumption};
use crate::filters::{apply_filter_set, FilterError, FilterSet};

/// Largest graph, in vertices, the exhaustive searches accept.
pub const MAX_GRAPH_VERTICES: usize = 20;
/// Largest half, in tokens, `brute_count_all` accepts.
pub const MAX_HALF_TOKENS: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{what} has {size} elements, above the oracle limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("vertex {0} has no incident edge, so no edge cover exists")]
    IsolatedVertex(usize),
    #[error(transparent)]
    Filter(#[from] FilterError),
}

/// Graph with vertices `0..n` (left) and `n..n+m` (right) as bitmasks.
struct Small {
    left: usize,
    right: usize,
    edges: Vec<(usize, usize)>,
}

impl Small {
    fn of(graph: &CoocGraph) -> Result<Self, OracleError> {
        let size = graph.vertex_count();
        if size > MAX_GRAPH_VERTICES {
            return Err(OracleError::TooLarge {
                what: "graph",
                size,
                limit: MAX_GRAPH_VERTICES,
            });
        }
        Ok(Self {
            left: graph.left().len(),
            right: graph.right().len(),
            edges: graph.edges().to_vec(),
        })
    }

    fn bits(&self, (l, r): (usize, usize)) -> u32 {
        (1 << l) | (1 << (self.left + r))
    }

    fn all(&self) -> u32 {
        ((1u64 << (self.left + self.right)) - 1) as u32
    }
}

/// Maximum matching size by exhaustive search over matchings.
pub fn brute_matching(graph: &CoocGraph) -> Result<usize, OracleError> {
    let g = Small::of(graph)?;
    let mut by_left = vec![Vec::new(); g.left];
    for &(l, r) in &g.edges {
        by_left[l].push(r);
    }

    fn search(by_left: &[Vec<usize>], l: usize, used: u32, size: usize, best: &mut usize) {
        if size + (by_left.len() - l) <= *best {
            return;
        }
        if l == by_left.len() {
            *best = size;
            return;
        }
        for &r in &by_left[l] {
            if used & (1 << r) == 0 {
                search(by_left, l + 1, used | (1 << r), size + 1, best);
            }
        }
        search(by_left, l + 1, used, size, best);
    }

    let mut best = 0;
    search(&by_left, 0, 0, 0, &mut best);
    Ok(best)
}

/// Minimum edge cover size by exhaustive search. Every vertex must have an
/// incident edge.
pub fn brute_edge_cover(graph: &CoocGraph) -> Result<usize, OracleError> {
    let g = Small::of(graph)?;
    let mut incident = vec![Vec::new(); g.left + g.right];
    for &e in &g.edges {
        incident[e.0].push(g.bits(e));
        incident[g.left + e.1].push(g.bits(e));
    }
    if let Some(v) = incident.iter().position(Vec::is_empty) {
        return Err(OracleError::IsolatedVertex(v));
    }
    let all = g.all();

    fn search(incident: &[Vec<u32>], all: u32, covered: u32, size: usize, best: &mut usize) {
        let uncovered = (all & !covered).count_ones() as usize;
        if uncovered == 0 {
            *best = (*best).min(size);
            return;
        }
        // Each further edge covers at most two vertices.
        if size + uncovered.div_ceil(2) >= *best {
            return;
        }
        let v = (all & !covered).trailing_zeros() as usize;
        for &e in &incident[v] {
            search(incident, all, covered | e, size + 1, best);
        }
    }

    let mut best = g.edges.len();
    search(&incident, all, 0, 0, &mut best);
    Ok(best)
}

/// Minimum vertex cover size by exhaustive branching on uncovered edges.
pub fn brute_vertex_cover(graph: &CoocGraph) -> Result<usize, OracleError> {
    let g = Small::of(graph)?;
    let edges: Vec<(u32, u32)> = g
        .edges
        .iter()
        .map(|&(l, r)| (1 << l, 1 << (g.left + r)))
        .collect();

    fn search(edges: &[(u32, u32)], chosen: u32, best: &mut usize) {
        let size = chosen.count_ones() as usize;
        if size >= *best {
            return;
        }
        match edges.iter().find(|&&(a, b)| chosen & (a | b) == 0) {
            None => *best = size,
            Some(&(a, b)) => {
                search(edges, chosen | a, best);
                search(edges, chosen | b, best);
            }
        }
    }

    let mut best = g.left + g.right + 1;
    search(&edges, 0, &mut best);
    Ok(best.min(g.left + g.right))
}

/// Counts by evaluating the predicate on every token pair, splitting each
/// type pair's graph into connected components and searching each one
/// exhaustively.
pub fn brute_count_all(
    model: &CoocModel,
    half1: &TokenizedHalf,
    half2: &TokenizedHalf,
    assumption: CountingAssumption,
) -> Result<CoocTable, OracleError> {
    brute_count_all_filtered(model, half1, half2, assumption, None)
}

/// As [`brute_count_all`], with the production filter pipeline applied to
/// the exhaustively enumerated edges.
pub fn brute_count_all_filtered(
    model: &CoocModel,
    half1: &TokenizedHalf,
    half2: &TokenizedHalf,
    assumption: CountingAssumption,
    filters: Option<&FilterSet>,
) -> Result<CoocTable, OracleError> {
    for half in [half1, half2] {
        if half.len() > MAX_HALF_TOKENS {
            return Err(OracleError::TooLarge {
                what: "bitext half",
                size: half.len(),
                limit: MAX_HALF_TOKENS,
            });
        }
    }

    let mut edges = Vec::new();
    for (i, s) in half1.tokens().iter().enumerate() {
        for (j, t) in half2.tokens().iter().enumerate() {
            if model.co_occurs(s, t) {
                edges.push((i, j));
            }
        }
    }
    let (consumed, residual) = match filters {
        Some(set) => {
            let out = apply_filter_set(&edges, half1, half2, set)?;
            (out.consumed, out.residual)
        }
        None => (Vec::new(), edges),
    };

    let mut groups: BTreeMap<(TypeId, TypeId), Vec<(usize, usize)>> = BTreeMap::new();
    for &(i, j) in &residual {
        let key = (half1.tokens()[i].type_id, half2.tokens()[j].type_id);
        groups.entry(key).or_default().push((i, j));
    }

    let mut table = CoocTable::new();
    for ((u, v), group) in groups {
        let mut count = 0;
        for component in components(&group) {
            let graph = CoocGraph::from_token_edges(&component);
            count += match assumption {
                CountingAssumption::Naive => graph.edge_count(),
                CountingAssumption::AtMostOne => brute_matching(&graph)?,
                CountingAssumption::AtLeastOne => brute_edge_cover(&graph)?,
            };
        }
        table.add(half1.type_name(u), half2.type_name(v), count as u64);
    }
    for &(i, j) in &consumed {
        let (u, v) = (half1.tokens()[i].type_id, half2.tokens()[j].type_id);
        table.add(half1.type_name(u), half2.type_name(v), 1);
    }
    Ok(table)
}

/// Splits token-index edges into connected components.
fn components(edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    // Union-find over left vertices `2i` and right vertices `2j + 1`.
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let p = *parent.entry(x).or_insert(x);
        if p == x {
            return x;
        }
        let root = find(parent, p);
        parent.insert(x, root);
        root
    }
    for &(i, j) in edges {
        let (a, b) = (find(&mut parent, 2 * i), find(&mut parent, 2 * j + 1));
        if a != b {
            parent.insert(a, b);
        }
    }
    let mut out: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for &(i, j) in edges {
        let root = find(&mut parent, 2 * i);
        out.entry(root).or_default().push((i, j));
    }
    out.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(l: usize, r: usize) -> CoocGraph {
        let edges: Vec<_> = (0..l).flat_map(|i| (0..r).map(move |j| (i, j))).collect();
        CoocGraph::with_vertices(l, r, &edges)
    }

    #[test]
    fn complete_graphs() {
        assert_eq!(brute_matching(&complete(2, 3)), Ok(2));
        assert_eq!(brute_edge_cover(&complete(2, 3)), Ok(3));
        assert_eq!(brute_vertex_cover(&complete(2, 3)), Ok(2));
        assert_eq!(brute_matching(&complete(3, 3)), Ok(3));
        assert_eq!(brute_edge_cover(&complete(3, 3)), Ok(3));
        assert_eq!(brute_vertex_cover(&complete(3, 3)), Ok(3));
    }

    #[test]
    fn path_and_trivial_graphs() {
        let path = CoocGraph::with_vertices(2, 2, &[(0, 0), (1, 0), (1, 1)]);
        assert_eq!(brute_matching(&path), Ok(2));
        let single = CoocGraph::with_vertices(1, 1, &[(0, 0)]);
        assert_eq!(brute_edge_cover(&single), Ok(1));
        assert_eq!(brute_vertex_cover(&single), Ok(1));
        let empty = CoocGraph::default();
        assert_eq!(brute_matching(&empty), Ok(0));
        assert_eq!(brute_vertex_cover(&empty), Ok(0));
        assert_eq!(brute_edge_cover(&empty), Ok(0));
    }

    #[test]
    fn limits_and_isolated_vertices() {
        assert!(matches!(
            brute_matching(&complete(11, 10)),
            Err(OracleError::TooLarge { size: 21, .. })
        ));
        assert_eq!(brute_matching(&complete(10, 10)), Ok(10));
        let g = CoocGraph::with_vertices(2, 1, &[(0, 0)]);
        assert_eq!(brute_edge_cover(&g), Err(OracleError::IsolatedVertex(1)));
    }

    #[test]
    fn components_split_disjoint_edges() {
        let comps = components(&[(0, 0), (1, 1), (2, 1), (5, 7)]);
        assert_eq!(comps.len(), 3);
        assert!(comps.contains(&vec![(1, 1), (2, 1)]));
    }

    #[test]
    fn oversized_half_rejected() {
        use crate::cooc_model::BoundaryModel;
        use crate::corpus::SegmentAlignment;
        let big = TokenizedHalf::tokenize(&"w ".repeat(MAX_HALF_TOKENS + 1), false);
        let small = TokenizedHalf::tokenize("w", false);
        let model = CoocModel::from(BoundaryModel::new(SegmentAlignment::whole((1, 1)).unwrap()));
        assert!(matches!(
            brute_count_all(&model, &big, &small, CountingAssumption::Naive),
            Err(OracleError::TooLarge {
                what: "bitext half",
                ..
            })
        ));
    }
}
