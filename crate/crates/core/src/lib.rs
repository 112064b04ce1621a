//! Word-type co-occurrence counting for bitexts.
//!
//! A bitext is modelled as two [`corpus::TokenizedHalf`] values. A
//! [`cooc_model::CoocModel`] decides which token pairs co-occur: those close
//! to an interpolated [`geometry::BitextMap`], those in aligned segments, or
//! both. [`counting::count_all`] then turns the co-occurring pairs into
//! per-type-pair counts under a [`counting::CountingAssumption`], optionally
//! after the language-specific [`filters`].
//!
//! ```
//! use cooc_core::cooc_model::{BoundaryModel, CoocModel};
//! use cooc_core::corpus::{SegmentAlignment, TokenizedHalf};
//! use cooc_core::counting::{count_all, CountingAssumption};
//!
//! let english = TokenizedHalf::tokenize("u u u", false);
//! let french = TokenizedHalf::tokenize("v v v", false);
//! let model = CoocModel::from(BoundaryModel::new(SegmentAlignment::whole((1, 1)).unwrap()));
//!
//! let naive = count_all(&model, &english, &french, CountingAssumption::Naive, None).unwrap();
//! assert_eq!(naive.get("u", "v"), 9);
//! let matched = count_all(&model, &english, &french, CountingAssumption::AtMostOne, None).unwrap();
//! assert_eq!(matched.get("u", "v"), 3);
//! ```

pub mod cooc_model;
pub mod corpus;
pub mod counting;
pub mod filters;
pub mod formats;
pub mod geometry;
pub mod oracle;

pub use cooc_model::{BoundaryModel, CombinedModel, CoocModel, DistanceModel};
pub use corpus::{SegmentAlignment, TokenizedHalf};
pub use counting::{count_all, CoocGraph, CoocTable, CountingAssumption};
pub use filters::{CognateRule, Filter, FilterSet, Mrbd, PosCompat};
pub use geometry::{BitextMap, BitextSpace, Units};
