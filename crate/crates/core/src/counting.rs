//! Co-occurrence counts per word-type pair.
//!
//! Every `(u, v)` type pair induces a bipartite graph whose edges are the
//! co-occurring token pairs. The naive count is its edge count, the
//! at-most-one count its maximum matching and the at-least-one count its
//! minimum edge cover. Under a pure boundary model these reduce to
//! `e * f`, `min(e, f)` and `max(e, f)` summed over alignment blocks.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::cooc_model::{CoocModel, ModelError};
use crate::corpus::{SegmentAlignment, SegmentPairStats, TokenizedHalf, TypeId};
use crate::filters::{apply_filter_set, FilterError, FilterSet};

#[derive(Debug, Error)]
pub enum CountError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Filter(#[from] FilterError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CountingAssumption {
    /// Product of frequencies; the edge count on graphs.
    Naive,
    /// Each word translates to at most one word; maximum matching.
    #[default]
    AtMostOne,
    /// Each word translates to at least one word; minimum edge cover.
    AtLeastOne,
}

impl CountingAssumption {
    pub const ALL: [CountingAssumption; 3] = [
        CountingAssumption::Naive,
        CountingAssumption::AtMostOne,
        CountingAssumption::AtLeastOne,
    ];
}

impl FromStr for CountingAssumption {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Self::Naive),
            "at-most-one" | "at_most_one" => Ok(Self::AtMostOne),
            "at-least-one" | "at_least_one" => Ok(Self::AtLeastOne),
            other => Err(format!(
                "unknown assumption {other:?}, expected naive, at-most-one or at-least-one"
            )),
        }
    }
}

impl fmt::Display for CountingAssumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Naive => "naive",
            Self::AtMostOne => "at-most-one",
            Self::AtLeastOne => "at-least-one",
        })
    }
}

/// Closed-form count for one aligned block. Zero whenever either word is
/// absent from its side.
pub fn count_segment_pair(stats: SegmentPairStats, assumption: CountingAssumption) -> u64 {
    let SegmentPairStats { e_u, f_v } = stats;
    if e_u == 0 || f_v == 0 {
        return 0;
    }
    match assumption {
        CountingAssumption::Naive => e_u * f_v,
        CountingAssumption::AtMostOne => e_u.min(f_v),
        CountingAssumption::AtLeastOne => e_u.max(f_v),
    }
}

/// Bipartite graph of co-occurring tokens for one word-type pair.
///
/// `left` and `right` hold token indices into the two halves; edges refer to
/// positions within those lists.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoocGraph {
    left: Vec<usize>,
    right: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl CoocGraph {
    /// Graph over `left_count + right_count` vertices identified with token
    /// indices `0..left_count` and `0..right_count`.
    pub fn with_vertices(left_count: usize, right_count: usize, edges: &[(usize, usize)]) -> Self {
        Self::new((0..left_count).collect(), (0..right_count).collect(), edges)
    }

    /// Edges are local positions into `left` and `right`; duplicates are
    /// dropped.
    pub fn new(left: Vec<usize>, right: Vec<usize>, edges: &[(usize, usize)]) -> Self {
        let mut edges = edges.to_vec();
        edges.sort_unstable();
        edges.dedup();
        assert!(
            edges
                .iter()
                .all(|&(l, r)| l < left.len() && r < right.len()),
            "edge endpoint outside the vertex lists"
        );
        Self { left, right, edges }
    }

    /// Builds the graph induced by token-index edges; vertices are the
    /// distinct endpoints, so no vertex is isolated.
    pub fn from_token_edges(token_edges: &[(usize, usize)]) -> Self {
        let mut left: Vec<usize> = token_edges.iter().map(|e| e.0).collect();
        let mut right: Vec<usize> = token_edges.iter().map(|e| e.1).collect();
        left.sort_unstable();
        left.dedup();
        right.sort_unstable();
        right.dedup();
        let local: Vec<(usize, usize)> = token_edges
            .iter()
            .map(|&(i, j)| {
                (
                    left.binary_search(&i).unwrap(),
                    right.binary_search(&j).unwrap(),
                )
            })
            .collect();
        Self::new(left, right, &local)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.left.len()];
        for &(l, r) in &self.edges {
            adj[l].push(r);
        }
        adj
    }

    /// Vertices with at least one incident edge.
    pub fn non_isolated_count(&self) -> usize {
        let mut seen_left = vec![false; self.left.len()];
        let mut seen_right = vec![false; self.right.len()];
        for &(l, r) in &self.edges {
            seen_left[l] = true;
            seen_right[r] = true;
        }
        seen_left.iter().chain(&seen_right).filter(|&&b| b).count()
    }

    pub fn maximum_matching(&self) -> Matching {
        Matching::hopcroft_karp(self.left.len(), self.right.len(), &self.adjacency())
    }

    /// A minimum vertex cover from König's construction, as
    /// `(left positions, right positions)`.
    pub fn minimum_vertex_cover(&self) -> (Vec<usize>, Vec<usize>) {
        let adj = self.adjacency();
        let matching = Matching::hopcroft_karp(self.left.len(), self.right.len(), &adj);
        let mut left_seen = vec![false; self.left.len()];
        let mut right_seen = vec![false; self.right.len()];
        let mut queue: VecDeque<usize> = (0..self.left.len())
            .filter(|&u| matching.mate_left[u].is_none())
            .collect();
        for &u in &queue {
            left_seen[u] = true;
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if right_seen[v] {
                    continue;
                }
                right_seen[v] = true;
                if let Some(w) = matching.mate_right[v] {
                    if !left_seen[w] {
                        left_seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let left = (0..self.left.len()).filter(|&u| !left_seen[u]).collect();
        let right = (0..self.right.len()).filter(|&v| right_seen[v]).collect();
        (left, right)
    }

    /// A minimum edge cover of the non-isolated vertices: a maximum matching
    /// plus one edge for every vertex it leaves uncovered.
    pub fn minimum_edge_cover(&self) -> Vec<(usize, usize)> {
        let matching = self.maximum_matching();
        let mut cover = matching.pairs();
        let mut left_done: Vec<bool> = matching.mate_left.iter().map(Option::is_some).collect();
        let mut right_done: Vec<bool> = matching.mate_right.iter().map(Option::is_some).collect();
        for &(l, r) in &self.edges {
            if !left_done[l] || !right_done[r] {
                left_done[l] = true;
                right_done[r] = true;
                cover.push((l, r));
            }
        }
        cover.sort_unstable();
        cover
    }
}

/// Size of a maximum-cardinality matching.
pub fn max_matching(graph: &CoocGraph) -> usize {
    graph.maximum_matching().len()
}

/// Size of a minimum edge cover after dropping isolated vertices
/// (non-isolated vertex count minus maximum matching).
pub fn min_edge_cover(graph: &CoocGraph) -> usize {
    graph.non_isolated_count() - max_matching(graph)
}

/// Size of a minimum vertex cover, built from a maximum matching.
pub fn min_vertex_cover(graph: &CoocGraph) -> usize {
    let (l, r) = graph.minimum_vertex_cover();
    l.len() + r.len()
}

/// A matching in a bipartite graph with `left` and `right` vertex sets
/// `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub mate_left: Vec<Option<usize>>,
    pub mate_right: Vec<Option<usize>>,
}

impl Matching {
    /// Hopcroft-Karp. Free left vertices are tried in ascending order and
    /// each adjacency list in its given order, so the result is
    /// deterministic for a fixed input.
    pub fn hopcroft_karp(left: usize, right: usize, adj: &[Vec<usize>]) -> Self {
        const UNSEEN: usize = usize::MAX;
        let mut mate_left = vec![None; left];
        let mut mate_right: Vec<Option<usize>> = vec![None; right];
        let mut dist = vec![UNSEEN; left];
        let mut next = vec![0usize; left];
        let mut queue = VecDeque::new();
        let mut stack = Vec::new();

        loop {
            queue.clear();
            for u in 0..left {
                if mate_left[u].is_none() {
                    dist[u] = 0;
                    queue.push_back(u);
                } else {
                    dist[u] = UNSEEN;
                }
            }
            let mut reachable_free = false;
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    match mate_right[v] {
                        None => reachable_free = true,
                        Some(w) if dist[w] == UNSEEN => {
                            dist[w] = dist[u] + 1;
                            queue.push_back(w);
                        }
                        Some(_) => {}
                    }
                }
            }
            if !reachable_free {
                break;
            }

            next.iter_mut().for_each(|n| *n = 0);
            for root in 0..left {
                if mate_left[root].is_some() {
                    continue;
                }
                stack.clear();
                stack.push(root);
                while let Some(&u) = stack.last() {
                    if next[u] == adj[u].len() {
                        dist[u] = UNSEEN;
                        stack.pop();
                        if let Some(&parent) = stack.last() {
                            next[parent] += 1;
                        }
                        continue;
                    }
                    let v = adj[u][next[u]];
                    match mate_right[v] {
                        None => {
                            for &x in &stack {
                                let vx = adj[x][next[x]];
                                mate_left[x] = Some(vx);
                                mate_right[vx] = Some(x);
                            }
                            break;
                        }
                        Some(w) if dist[w] != UNSEEN && dist[w] == dist[u] + 1 => stack.push(w),
                        Some(_) => next[u] += 1,
                    }
                }
            }
        }

        Self {
            mate_left,
            mate_right,
        }
    }

    pub fn len(&self) -> usize {
        self.mate_left.iter().filter(|m| m.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Matched `(left, right)` pairs in left order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate_left
            .iter()
            .enumerate()
            .filter_map(|(u, m)| m.map(|v| (u, v)))
            .collect()
    }
}

/// Counts keyed by word-type pair. Zero counts are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoocTable {
    entries: BTreeMap<(String, String), u64>,
}

impl CoocTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, u: &str, v: &str, count: u64) {
        if count == 0 {
            return;
        }
        *self
            .entries
            .entry((u.to_owned(), v.to_owned()))
            .or_insert(0) += count;
    }

    pub fn get(&self, u: &str, v: &str) -> u64 {
        self.entries
            .get(&(u.to_owned(), v.to_owned()))
            .copied()
            .unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries sorted by count descending, then by `(u, v)`.
    pub fn rows(&self) -> Vec<(&str, &str, u64)> {
        let mut rows: Vec<_> = self
            .entries
            .iter()
            .map(|((u, v), &c)| (u.as_str(), v.as_str(), c))
            .collect();
        rows.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| (a.0, a.1).cmp(&(b.0, b.1))));
        rows
    }

    /// `u<TAB>v<TAB>count` lines in [`CoocTable::rows`] order.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (u, v, c) in self.rows() {
            writeln!(out, "{u}\t{v}\t{c}")?;
        }
        Ok(())
    }

    pub fn to_tsv(&self) -> String {
        let mut buf = Vec::new();
        self.write_tsv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("table entries are UTF-8")
    }

    /// First entry, in row order, whose count differs between the tables:
    /// `(u, v, self count, other count)`.
    pub fn first_difference(&self, other: &CoocTable) -> Option<(String, String, u64, u64)> {
        let mut keys: Vec<&(String, String)> =
            self.entries.keys().chain(other.entries.keys()).collect();
        keys.sort_by(|a, b| {
            let ca = self.get(&a.0, &a.1).max(other.get(&a.0, &a.1));
            let cb = self.get(&b.0, &b.1).max(other.get(&b.0, &b.1));
            cb.cmp(&ca).then_with(|| a.cmp(b))
        });
        keys.into_iter().find_map(|(u, v)| {
            let (a, b) = (self.get(u, v), other.get(u, v));
            (a != b).then(|| (u.clone(), v.clone(), a, b))
        })
    }
}

/// Summary of one counting run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub table: CoocTable,
    pub candidate_edges: usize,
    pub residual_edges: usize,
    pub consumed_links: usize,
}

/// Counts every word-type pair with at least one co-occurring token pair.
///
/// Pure boundary models without filters take the per-block closed forms;
/// everything else goes through the per-type-pair graphs.
pub fn count_all(
    model: &CoocModel,
    half1: &TokenizedHalf,
    half2: &TokenizedHalf,
    assumption: CountingAssumption,
    filters: Option<&FilterSet>,
) -> Result<CoocTable, CountError> {
    Ok(count_with_report(model, half1, half2, assumption, filters)?.table)
}

pub fn count_with_report(
    model: &CoocModel,
    half1: &TokenizedHalf,
    half2: &TokenizedHalf,
    assumption: CountingAssumption,
    filters: Option<&FilterSet>,
) -> Result<CountReport, CountError> {
    model.check_halves(half1, half2)?;
    let filters = filters.filter(|f| !f.is_empty());
    if let (CoocModel::Boundary(b), None) = (model, filters) {
        let (table, edges) = count_blocks_closed_form(b.alignment(), half1, half2, assumption);
        return Ok(CountReport {
            table,
            candidate_edges: edges,
            residual_edges: edges,
            consumed_links: 0,
        });
    }
    count_graph_with_report(model, half1, half2, assumption, filters)
}

/// Graph-path counting regardless of model kind.
pub fn count_all_graph(
    model: &CoocModel,
    half1: &TokenizedHalf,
    half2: &TokenizedHalf,
    assumption: CountingAssumption,
    filters: Option<&FilterSet>,
) -> Result<CoocTable, CountError> {
    model.check_halves(half1, half2)?;
    Ok(count_graph_with_report(model, half1, half2, assumption, filters)?.table)
}

fn count_graph_with_report(
    model: &CoocModel,
    half1: &TokenizedHalf,
    half2: &TokenizedHalf,
    assumption: CountingAssumption,
    filters: Option<&FilterSet>,
) -> Result<CountReport, CountError> {
    let edges = model.candidate_edges(half1, half2);
    let candidate_edges = edges.len();
    let (consumed, residual) = match filters {
        Some(set) => {
            let outcome = apply_filter_set(&edges, half1, half2, set)?;
            (outcome.consumed, outcome.residual)
        }
        None => (Vec::new(), edges),
    };
    let table = count_edges(&residual, &consumed, half1, half2, assumption);
    Ok(CountReport {
        table,
        candidate_edges,
        residual_edges: residual.len(),
        consumed_links: consumed.len(),
    })
}

/// Groups token-index edges by type pair and counts each group's graph
/// under `assumption`. Each consumed link then adds 1 to its own pair.
pub fn count_edges(
    edges: &[(usize, usize)],
    consumed: &[(usize, usize)],
    half1: &TokenizedHalf,
    half2: &TokenizedHalf,
    assumption: CountingAssumption,
) -> CoocTable {
    let type_pair =
        |&(i, j): &(usize, usize)| (half1.tokens()[i].type_id, half2.tokens()[j].type_id);
    let mut groups: HashMap<(TypeId, TypeId), Vec<(usize, usize)>> = HashMap::new();
    for e in edges {
        groups.entry(type_pair(e)).or_default().push(*e);
    }
    let mut groups: Vec<_> = groups.into_iter().collect();
    groups.sort_unstable_by_key(|(k, _)| *k);

    let counts: Vec<((TypeId, TypeId), u64)> = groups
        .into_par_iter()
        .map(|(key, group)| {
            let count = match assumption {
                CountingAssumption::Naive => group.len(),
                CountingAssumption::AtMostOne => max_matching(&CoocGraph::from_token_edges(&group)),
                CountingAssumption::AtLeastOne => {
                    min_edge_cover(&CoocGraph::from_token_edges(&group))
                }
            };
            (key, count as u64)
        })
        .collect();

    let mut table = CoocTable::new();
    for ((u, v), c) in counts {
        table.add(half1.type_name(u), half2.type_name(v), c);
    }
    for e in consumed {
        let (u, v) = type_pair(e);
        table.add(half1.type_name(u), half2.type_name(v), 1);
    }
    table
}

/// Per-block closed forms summed over blocks. Also returns the number of
/// co-occurring token pairs.
pub fn count_blocks_closed_form(
    alignment: &SegmentAlignment,
    half1: &TokenizedHalf,
    half2: &TokenizedHalf,
    assumption: CountingAssumption,
) -> (CoocTable, usize) {
    let mut totals: HashMap<(TypeId, TypeId), u64> = HashMap::new();
    let mut edges = 0;
    for (side1, side2) in alignment.blocks() {
        let freq1 = type_frequencies(half1, half1.token_range(side1.clone()));
        let freq2 = type_frequencies(half2, half2.token_range(side2.clone()));
        for (&u, &e_u) in &freq1 {
            for (&v, &f_v) in &freq2 {
                let stats = SegmentPairStats { e_u, f_v };
                edges += (e_u * f_v) as usize;
                *totals.entry((u, v)).or_insert(0) += count_segment_pair(stats, assumption);
            }
        }
    }
    let mut table = CoocTable::new();
    for ((u, v), c) in totals {
        table.add(half1.type_name(u), half2.type_name(v), c);
    }
    (table, edges)
}

fn type_frequencies(half: &TokenizedHalf, range: std::ops::Range<usize>) -> HashMap<TypeId, u64> {
    let mut freq = HashMap::new();
    for t in &half.tokens()[range] {
        *freq.entry(t.type_id).or_insert(0) += 1;
    }
    freq
}
