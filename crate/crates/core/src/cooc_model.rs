//! Boolean co-occurrence predicates over token pairs and candidate-edge
//! enumeration.

use std::ops::Range;

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{SegmentAlignment, Token, TokenizedHalf};
use crate::geometry::{BitextMap, Units};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("delta must be a finite nonnegative number, got {0}")]
    InvalidDelta(f64),
    #[error("model does not fit the bitext halves: {0}")]
    HalvesMismatch(String),
}

/// Token pairs closer than `delta` to the bitext map co-occur.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceModel {
    map: BitextMap,
    delta: f64,
}

impl DistanceModel {
    pub fn new(map: BitextMap, delta: f64) -> Result<Self, ModelError> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(ModelError::InvalidDelta(delta));
        }
        Ok(Self { map, delta })
    }

    pub fn map(&self) -> &BitextMap {
        &self.map
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn units(&self) -> Units {
        self.map.space().units()
    }

    pub fn co_occurs(&self, s: &Token, t: &Token) -> bool {
        let units = self.units();
        self.map
            .is_within(s.coordinate(units), t.coordinate(units), self.delta)
    }

    /// Side-2 coordinate interval that can hold partners of a side-1 token
    /// at `x`. Any point within `delta` of the map lies within `delta` of
    /// some map point whose abscissa is within `delta` of `x`.
    fn band(&self, x: f64) -> (f64, f64) {
        let lo = self.map.lowest_y_at(x - self.delta) - self.delta;
        let hi = self.map.highest_y_at(x + self.delta) + self.delta;
        (lo, hi)
    }
}

/// Token pairs in segments of the same alignment block co-occur.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryModel {
    alignment: SegmentAlignment,
}

impl BoundaryModel {
    pub fn new(alignment: SegmentAlignment) -> Self {
        Self { alignment }
    }

    pub fn alignment(&self) -> &SegmentAlignment {
        &self.alignment
    }

    pub fn co_occurs(&self, s: &Token, t: &Token) -> bool {
        match (
            self.alignment.block_of_side1(s.segment_index),
            self.alignment.block_of_side2(t.segment_index),
        ) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

/// Conjunction of the distance and boundary predicates.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedModel {
    distance: DistanceModel,
    boundary: BoundaryModel,
}

impl CombinedModel {
    pub fn new(distance: DistanceModel, boundary: BoundaryModel) -> Self {
        Self { distance, boundary }
    }

    pub fn distance(&self) -> &DistanceModel {
        &self.distance
    }

    pub fn boundary(&self) -> &BoundaryModel {
        &self.boundary
    }

    pub fn co_occurs(&self, s: &Token, t: &Token) -> bool {
        self.boundary.co_occurs(s, t) && self.distance.co_occurs(s, t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoocModel {
    Distance(DistanceModel),
    Boundary(BoundaryModel),
    Combined(CombinedModel),
}

impl From<DistanceModel> for CoocModel {
    fn from(m: DistanceModel) -> Self {
        CoocModel::Distance(m)
    }
}

impl From<BoundaryModel> for CoocModel {
    fn from(m: BoundaryModel) -> Self {
        CoocModel::Boundary(m)
    }
}

impl From<CombinedModel> for CoocModel {
    fn from(m: CombinedModel) -> Self {
        CoocModel::Combined(m)
    }
}

impl CoocModel {
    pub fn co_occurs(&self, s: &Token, t: &Token) -> bool {
        match self {
            CoocModel::Distance(m) => m.co_occurs(s, t),
            CoocModel::Boundary(m) => m.co_occurs(s, t),
            CoocModel::Combined(m) => m.co_occurs(s, t),
        }
    }

    fn distance(&self) -> Option<&DistanceModel> {
        match self {
            CoocModel::Distance(m) => Some(m),
            CoocModel::Combined(m) => Some(m.distance()),
            CoocModel::Boundary(_) => None,
        }
    }

    fn boundary(&self) -> Option<&BoundaryModel> {
        match self {
            CoocModel::Boundary(m) => Some(m),
            CoocModel::Combined(m) => Some(m.boundary()),
            CoocModel::Distance(_) => None,
        }
    }

    /// Checks that the model was built over halves of these dimensions.
    pub fn check_halves(
        &self,
        half1: &TokenizedHalf,
        half2: &TokenizedHalf,
    ) -> Result<(), ModelError> {
        if let Some(d) = self.distance() {
            let space = d.map().space();
            let units = space.units();
            let (w, h) = (half1.length(units) as f64, half2.length(units) as f64);
            if space.width() != w || space.height() != h {
                return Err(ModelError::HalvesMismatch(format!(
                    "map space is {} x {} {units}, halves are {w} x {h}",
                    space.width(),
                    space.height()
                )));
            }
        }
        if let Some(b) = self.boundary() {
            let counts = (half1.segment_count(), half2.segment_count());
            if b.alignment().segment_counts() != counts {
                return Err(ModelError::HalvesMismatch(format!(
                    "alignment covers {:?} segments, halves have {counts:?}",
                    b.alignment().segment_counts()
                )));
            }
        }
        Ok(())
    }

    /// All `(i, j)` token-index pairs for which [`CoocModel::co_occurs`]
    /// holds, sorted by `i` then `j`.
    ///
    /// Each side-1 token is only tested against a contiguous run of side-2
    /// tokens: the distance band around the map and/or the side-2 tokens of
    /// its alignment block.
    pub fn candidate_edges(
        &self,
        half1: &TokenizedHalf,
        half2: &TokenizedHalf,
    ) -> Vec<(usize, usize)> {
        let targets = half2.tokens();
        let units = self.distance().map(DistanceModel::units);
        let coords2: Vec<f64> = match units {
            Some(u) => targets.iter().map(|t| t.coordinate(u)).collect(),
            None => Vec::new(),
        };
        let block_ranges: Vec<Range<usize>> = self
            .boundary()
            .map(|b| {
                b.alignment()
                    .blocks()
                    .iter()
                    .map(|(_, side2)| half2.token_range(side2.clone()))
                    .collect()
            })
            .unwrap_or_default();

        let window = |s: &Token| -> Range<usize> {
            let mut range = 0..targets.len();
            if let Some(b) = self.boundary() {
                match b.alignment().block_of_side1(s.segment_index) {
                    Some(block) => range = block_ranges[block].clone(),
                    None => return 0..0,
                }
            }
            if let Some(d) = self.distance() {
                if d.delta() <= 0.0 {
                    return 0..0;
                }
                let (lo, hi) = d.band(s.coordinate(d.units()));
                let first = coords2.partition_point(|&y| y < lo);
                let last = coords2.partition_point(|&y| y <= hi);
                range = range.start.max(first)..range.end.min(last);
            }
            range
        };

        half1
            .tokens()
            .par_iter()
            .enumerate()
            .flat_map_iter(|(i, s)| {
                let range = window(s);
                range
                    .filter(move |&j| self.co_occurs(s, &targets[j]))
                    .map(move |j| (i, j))
                    .collect::<Vec<_>>()
            })
            .collect()
    }
}
