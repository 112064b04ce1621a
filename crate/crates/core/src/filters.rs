//! Language-specific filters on the co-occurrence relation.
//!
//! The POS filter only removes edges. The dictionary and cognate filters
//! grant exclusive candidacy: a maximum matching of the edges they accept
//! is consumed as links, and every other edge touching a linked token is
//! dropped.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::{TokenizedHalf, TypeId};
use crate::counting::Matching;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FilterError {
    #[error("POS filter needs tags on both halves, but half {0} is untagged")]
    MissingTags(u8),
    #[error("filter {0} appears more than once in the filter set")]
    DuplicateFilter(FilterKind),
    #[error("cognate threshold must lie in [0, 1], got {0}")]
    InvalidThreshold(f64),
}

/// Compatible `(side-1 tag, side-2 tag)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosCompat {
    identity: bool,
    pairs: HashSet<(String, String)>,
}

impl Default for PosCompat {
    fn default() -> Self {
        Self::identity()
    }
}

impl PosCompat {
    /// Tags are compatible exactly when equal.
    pub fn identity() -> Self {
        Self {
            identity: true,
            pairs: HashSet::new(),
        }
    }

    /// Only the listed pairs are compatible.
    pub fn from_pairs<I, A, B>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        Self {
            identity: false,
            pairs: pairs
                .into_iter()
                .map(|(a, b)| (a.into(), b.into()))
                .collect(),
        }
    }

    pub fn with_pair(mut self, tag1: impl Into<String>, tag2: impl Into<String>) -> Self {
        self.pairs.insert((tag1.into(), tag2.into()));
        self
    }

    pub fn compatible(&self, tag1: &str, tag2: &str) -> bool {
        (self.identity && tag1 == tag2) || self.pairs.contains(&(tag1.to_owned(), tag2.to_owned()))
    }
}

/// Decides whether a word-type pair deserves exclusive candidacy.
pub trait LinkPredicate {
    fn accepts(&self, type1: &str, type2: &str) -> bool;
}

/// Machine-readable bilingual dictionary.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Mrbd {
    entries: HashSet<(String, String)>,
    fold_case: bool,
}

impl Mrbd {
    /// With `fold_case`, entries and lookups are lowercased, matching the
    /// type identity of case-folded halves.
    pub fn new<I, A, B>(entries: I, fold_case: bool) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        let fold = |s: String| if fold_case { s.to_lowercase() } else { s };
        Self {
            entries: entries
                .into_iter()
                .map(|(a, b)| (fold(a.into()), fold(b.into())))
                .collect(),
            fold_case,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, type1: &str, type2: &str) -> bool {
        if self.fold_case {
            self.entries
                .contains(&(type1.to_lowercase(), type2.to_lowercase()))
        } else {
            self.entries.contains(&(type1.to_owned(), type2.to_owned()))
        }
    }
}

impl LinkPredicate for Mrbd {
    fn accepts(&self, type1: &str, type2: &str) -> bool {
        self.contains(type1, type2)
    }
}

/// Orthographic cognate criterion on longest-common-subsequence ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CognateRule {
    lcsr_threshold: f64,
    min_length: usize,
}

impl Default for CognateRule {
    fn default() -> Self {
        Self {
            lcsr_threshold: 0.58,
            min_length: 4,
        }
    }
}

impl CognateRule {
    pub fn new(lcsr_threshold: f64, min_length: usize) -> Result<Self, FilterError> {
        if !(0.0..=1.0).contains(&lcsr_threshold) {
            return Err(FilterError::InvalidThreshold(lcsr_threshold));
        }
        Ok(Self {
            lcsr_threshold,
            min_length,
        })
    }

    pub fn threshold(&self) -> f64 {
        self.lcsr_threshold
    }

    pub fn min_length(&self) -> usize {
        self.min_length
    }
}

impl LinkPredicate for CognateRule {
    fn accepts(&self, type1: &str, type2: &str) -> bool {
        type1.chars().count() >= self.min_length
            && type2.chars().count() >= self.min_length
            && lcsr(type1, type2) >= self.lcsr_threshold
    }
}

/// Longest common subsequence of code points over the longer word's length.
pub fn lcsr(w1: &str, w2: &str) -> f64 {
    let a: Vec<char> = w1.chars().collect();
    let b: Vec<char> = w2.chars().collect();
    let longest = a.len().max(b.len());
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for &ca in &a {
        for (j, &cb) in b.iter().enumerate() {
            cur[j + 1] = if ca == cb {
                prev[j] + 1
            } else {
                cur[j].max(prev[j + 1])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()] as f64 / longest as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterKind {
    Pos,
    Mrbd,
    Cognate,
}

impl FromStr for FilterKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pos" => Ok(Self::Pos),
            "mrbd" => Ok(Self::Mrbd),
            "cognate" => Ok(Self::Cognate),
            other => Err(format!(
                "unknown filter {other:?}, expected pos, mrbd or cognate"
            )),
        }
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pos => "pos",
            Self::Mrbd => "mrbd",
            Self::Cognate => "cognate",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Filter {
    Pos(PosCompat),
    Mrbd(Mrbd),
    Cognate(CognateRule),
}

impl Filter {
    pub fn kind(&self) -> FilterKind {
        match self {
            Filter::Pos(_) => FilterKind::Pos,
            Filter::Mrbd(_) => FilterKind::Mrbd,
            Filter::Cognate(_) => FilterKind::Cognate,
        }
    }
}

/// Filters applied in list order. Each kind appears at most once.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FilterSet {
    filters: Vec<Filter>,
}

impl FilterSet {
    pub const DEFAULT_ORDER: [FilterKind; 3] =
        [FilterKind::Pos, FilterKind::Mrbd, FilterKind::Cognate];

    pub fn new(filters: Vec<Filter>) -> Result<Self, FilterError> {
        let mut seen = HashSet::new();
        for f in &filters {
            if !seen.insert(f.kind()) {
                return Err(FilterError::DuplicateFilter(f.kind()));
            }
        }
        Ok(Self { filters })
    }

    pub fn filters(&self) -> &[Filter] {
        &self.filters
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }
}

/// Edges consumed as exclusive links, and the edges left for counting.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FilterOutcome {
    pub consumed: Vec<(usize, usize)>,
    pub residual: Vec<(usize, usize)>,
}

/// Keeps the edges whose endpoint tags are compatible.
pub fn apply_pos(
    edges: &[(usize, usize)],
    half1: &TokenizedHalf,
    half2: &TokenizedHalf,
    compat: &PosCompat,
) -> Result<Vec<(usize, usize)>, FilterError> {
    if !half1.is_tagged() {
        return Err(FilterError::MissingTags(1));
    }
    if !half2.is_tagged() {
        return Err(FilterError::MissingTags(2));
    }
    let tag = |half: &TokenizedHalf, i: usize| half.tokens()[i].pos_tag.clone().unwrap_or_default();
    Ok(edges
        .iter()
        .copied()
        .filter(|&(i, j)| compat.compatible(&tag(half1, i), &tag(half2, j)))
        .collect())
}

/// Grants exclusive candidacy to the edges accepted by `predicate`.
///
/// A maximum matching of the accepted edges is consumed; the residual keeps
/// exactly the input edges with neither endpoint matched.
pub fn apply_exclusive<P: LinkPredicate + ?Sized>(
    edges: &[(usize, usize)],
    half1: &TokenizedHalf,
    half2: &TokenizedHalf,
    predicate: &P,
) -> FilterOutcome {
    let mut verdicts: HashMap<(TypeId, TypeId), bool> = HashMap::new();
    let mut accepted: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|&(i, j)| {
            let (u, v) = (half1.tokens()[i].type_id, half2.tokens()[j].type_id);
            *verdicts
                .entry((u, v))
                .or_insert_with(|| predicate.accepts(half1.type_name(u), half2.type_name(v)))
        })
        .collect();
    if accepted.is_empty() {
        return FilterOutcome {
            consumed: Vec::new(),
            residual: edges.to_vec(),
        };
    }
    accepted.sort_unstable();
    accepted.dedup();

    let mut left: Vec<usize> = accepted.iter().map(|e| e.0).collect();
    left.dedup();
    let mut right: Vec<usize> = accepted.iter().map(|e| e.1).collect();
    right.sort_unstable();
    right.dedup();
    let mut adj = vec![Vec::new(); left.len()];
    for &(i, j) in &accepted {
        let l = left.binary_search(&i).unwrap();
        adj[l].push(right.binary_search(&j).unwrap());
    }
    let matching = Matching::hopcroft_karp(left.len(), right.len(), &adj);

    let consumed: Vec<(usize, usize)> = matching
        .pairs()
        .into_iter()
        .map(|(l, r)| (left[l], right[r]))
        .collect();
    let used1: HashSet<usize> = consumed.iter().map(|e| e.0).collect();
    let used2: HashSet<usize> = consumed.iter().map(|e| e.1).collect();
    let residual = edges
        .iter()
        .copied()
        .filter(|(i, j)| !used1.contains(i) && !used2.contains(j))
        .collect();
    FilterOutcome { consumed, residual }
}

/// Runs every filter in order; exclusive filters see only the edges left by
/// their predecessors and their consumed links accumulate.
pub fn apply_filter_set(
    edges: &[(usize, usize)],
    half1: &TokenizedHalf,
    half2: &TokenizedHalf,
    filters: &FilterSet,
) -> Result<FilterOutcome, FilterError> {
    let mut outcome = FilterOutcome {
        consumed: Vec::new(),
        residual: edges.to_vec(),
    };
    for filter in filters.filters() {
        let step = match filter {
            Filter::Pos(compat) => FilterOutcome {
                consumed: Vec::new(),
                residual: apply_pos(&outcome.residual, half1, half2, compat)?,
            },
            Filter::Mrbd(mrbd) => apply_exclusive(&outcome.residual, half1, half2, mrbd),
            Filter::Cognate(rule) => apply_exclusive(&outcome.residual, half1, half2, rule),
        };
        outcome.consumed.extend(step.consumed);
        outcome.residual = step.residual;
    }
    outcome.consumed.sort_unstable();
    Ok(outcome)
}
