//! Bitext space, interpolated bitext maps and point-to-map distance.
//!
//! A bitext map is a monotonic polyline through anchor points. Distances are
//! Euclidean, measured in the axis units of the owning [`BitextSpace`].

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("bitext space dimensions must be finite and positive, got {width} x {height}")]
    InvalidSpace { width: f64, height: f64 },
    #[error("anchor {index} is not a finite coordinate pair")]
    NonFinite { index: usize },
    #[error("anchor {index} ({x}, {y}) lies outside the bitext space {width} x {height}")]
    OutOfBounds {
        index: usize,
        x: f64,
        y: f64,
        width: f64,
        height: f64,
    },
    #[error("anchor {index} ({x}, {y}) decreases relative to its predecessor")]
    NonMonotonicMap { index: usize, x: f64, y: f64 },
    #[error("point ({x}, {y}) lies outside the bitext space")]
    PointOutOfBounds { x: f64, y: f64 },
}

/// Axis units shared by every coordinate measured in a bitext space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Units {
    #[default]
    Characters,
    Tokens,
}

impl FromStr for Units {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "characters" | "chars" => Ok(Units::Characters),
            "tokens" => Ok(Units::Tokens),
            other => Err(format!(
                "unknown units {other:?}, expected 'characters' or 'tokens'"
            )),
        }
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Units::Characters => "characters",
            Units::Tokens => "tokens",
        })
    }
}

/// The plane spanned by the two halves of a bitext.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BitextSpace {
    width: f64,
    height: f64,
    units: Units,
}

impl BitextSpace {
    pub fn new(width: f64, height: f64, units: Units) -> Result<Self, GeometryError> {
        if !(width.is_finite() && height.is_finite() && width > 0.0 && height > 0.0) {
            return Err(GeometryError::InvalidSpace { width, height });
        }
        Ok(Self {
            width,
            height,
            units,
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (0.0..=self.width).contains(&x) && (0.0..=self.height).contains(&y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnchorPoint {
    pub x: f64,
    pub y: f64,
}

impl AnchorPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

impl From<(f64, f64)> for AnchorPoint {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// Interpolated bitext map: a polyline from `(0, 0)` to `(width, height)`,
/// nondecreasing in both coordinates. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct BitextMap {
    anchors: Vec<AnchorPoint>,
    space: BitextSpace,
}

impl BitextMap {
    /// Validates anchor records and builds the map.
    ///
    /// Records are stably sorted by `x`; anchors tied in `x` must then be
    /// nondecreasing in `y` in their given order. Corner anchors are
    /// synthesized when absent and consecutive duplicates are collapsed.
    /// Error indices refer to positions in `records`.
    pub fn load(records: &[(f64, f64)], space: BitextSpace) -> Result<Self, GeometryError> {
        for (index, &(x, y)) in records.iter().enumerate() {
            if !(x.is_finite() && y.is_finite()) {
                return Err(GeometryError::NonFinite { index });
            }
            if !space.contains(x, y) {
                return Err(GeometryError::OutOfBounds {
                    index,
                    x,
                    y,
                    width: space.width,
                    height: space.height,
                });
            }
        }

        let mut order: Vec<usize> = (0..records.len()).collect();
        order.sort_by(|&a, &b| records[a].0.total_cmp(&records[b].0));
        for pair in order.windows(2) {
            let (prev, cur) = (records[pair[0]], records[pair[1]]);
            if cur.1 < prev.1 {
                return Err(GeometryError::NonMonotonicMap {
                    index: pair[1],
                    x: cur.0,
                    y: cur.1,
                });
            }
        }

        let mut anchors = Vec::with_capacity(records.len() + 2);
        anchors.push(AnchorPoint::new(0.0, 0.0));
        anchors.extend(order.iter().map(|&i| AnchorPoint::from(records[i])));
        anchors.push(AnchorPoint::new(space.width, space.height));
        anchors.dedup();

        Ok(Self { anchors, space })
    }

    pub fn anchors(&self) -> &[AnchorPoint] {
        &self.anchors
    }

    pub fn space(&self) -> &BitextSpace {
        &self.space
    }

    pub fn segment_count(&self) -> usize {
        self.anchors.len() - 1
    }

    /// Length of the longest straight stretch between consecutive anchors.
    pub fn max_gap(&self) -> f64 {
        self.anchors
            .windows(2)
            .map(|w| (w[1].x - w[0].x).hypot(w[1].y - w[0].y))
            .fold(0.0, f64::max)
    }

    /// Minimum Euclidean distance from `(x, y)` to the polyline.
    pub fn distance(&self, x: f64, y: f64) -> Result<f64, GeometryError> {
        if !(x.is_finite() && y.is_finite() && self.space.contains(x, y)) {
            return Err(GeometryError::PointOutOfBounds { x, y });
        }
        Ok(self
            .anchors
            .windows(2)
            .map(|w| segment_distance(x, y, w[0], w[1]))
            .fold(f64::INFINITY, f64::min))
    }

    /// True iff the point is strictly closer than `radius` to the polyline.
    ///
    /// Agrees exactly with `distance(x, y) < radius` but only inspects the
    /// segments whose bounding boxes come within `radius` of the point.
    pub fn is_within(&self, x: f64, y: f64, radius: f64) -> bool {
        if radius <= 0.0 {
            return false;
        }
        // Slack keeps floating-point rounding from pruning a segment whose
        // computed distance would still land below the radius.
        let reach = radius * (1.0 + 1e-9) + 1e-9;
        let range = self.segments_near(x, y, reach);
        self.anchors[range.start..range.end + 1]
            .windows(2)
            .any(|w| segment_distance(x, y, w[0], w[1]) < radius)
    }

    /// Index range of segments whose x-extent and y-extent both come within
    /// `reach` of the point. Segment `k` joins anchors `k` and `k + 1`.
    fn segments_near(&self, x: f64, y: f64, reach: f64) -> std::ops::Range<usize> {
        let a = &self.anchors;
        let segs = a.len() - 1;
        // Segment k has x-extent [a[k].x, a[k+1].x]; both ends are sorted.
        let x_lo = a[1..].partition_point(|p| p.x < x - reach);
        let x_hi = a[..segs].partition_point(|p| p.x <= x + reach);
        let y_lo = a[1..].partition_point(|p| p.y < y - reach);
        let y_hi = a[..segs].partition_point(|p| p.y <= y + reach);
        let lo = x_lo.max(y_lo);
        let hi = x_hi.min(y_hi);
        if lo >= hi {
            0..0
        } else {
            lo..hi
        }
    }

    /// Smallest y the polyline attains at abscissa `x` (clamped to the space).
    pub fn lowest_y_at(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, self.space.width);
        let a = &self.anchors;
        let i = a.partition_point(|p| p.x < x);
        if i >= a.len() {
            return self.space.height;
        }
        if a[i].x == x || i == 0 {
            return a[i].y;
        }
        lerp_y(a[i - 1], a[i], x)
    }

    /// Largest y the polyline attains at abscissa `x` (clamped to the space).
    pub fn highest_y_at(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, self.space.width);
        let a = &self.anchors;
        let i = a.partition_point(|p| p.x <= x);
        if i == 0 {
            return 0.0;
        }
        let last = a[i - 1];
        if last.x == x || i == a.len() {
            return last.y;
        }
        lerp_y(last, a[i], x)
    }
}

fn lerp_y(p: AnchorPoint, q: AnchorPoint, x: f64) -> f64 {
    let t = (x - p.x) / (q.x - p.x);
    p.y + t * (q.y - p.y)
}

/// Distance from `(x, y)` to the closed segment `p`–`q`.
pub(crate) fn segment_distance(x: f64, y: f64, p: AnchorPoint, q: AnchorPoint) -> f64 {
    let (dx, dy) = (q.x - p.x, q.y - p.y);
    let len_sq = dx * dx + dy * dy;
    if len_sq == 0.0 {
        return (x - p.x).hypot(y - p.y);
    }
    let t = (((x - p.x) * dx + (y - p.y) * dy) / len_sq).clamp(0.0, 1.0);
    (x - (p.x + t * dx)).hypot(y - (p.y + t * dy))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(w: f64, h: f64) -> BitextSpace {
        BitextSpace::new(w, h, Units::Characters).unwrap()
    }

    fn points(map: &BitextMap) -> Vec<(f64, f64)> {
        map.anchors().iter().map(|a| (a.x, a.y)).collect()
    }

    #[test]
    fn empty_records_synthesize_corners() {
        let map = BitextMap::load(&[], space(100.0, 100.0)).unwrap();
        assert_eq!(points(&map), vec![(0.0, 0.0), (100.0, 100.0)]);
    }

    #[test]
    fn single_interior_anchor() {
        let map = BitextMap::load(&[(50.0, 40.0)], space(100.0, 100.0)).unwrap();
        assert_eq!(points(&map), vec![(0.0, 0.0), (50.0, 40.0), (100.0, 100.0)]);
    }

    #[test]
    fn records_are_sorted_before_validation() {
        let map = BitextMap::load(&[(30.0, 50.0), (20.0, 10.0)], space(100.0, 100.0)).unwrap();
        assert_eq!(
            points(&map),
            vec![(0.0, 0.0), (20.0, 10.0), (30.0, 50.0), (100.0, 100.0)]
        );

        let err = BitextMap::load(&[(20.0, 50.0), (30.0, 10.0)], space(100.0, 100.0)).unwrap_err();
        assert!(matches!(
            err,
            GeometryError::NonMonotonicMap { index: 1, .. }
        ));
    }

    #[test]
    fn ties_in_x_must_rise_in_given_order() {
        assert!(BitextMap::load(&[(50.0, 10.0), (50.0, 60.0)], space(100.0, 100.0)).is_ok());
        let err = BitextMap::load(&[(50.0, 60.0), (50.0, 10.0)], space(100.0, 100.0)).unwrap_err();
        assert!(matches!(
            err,
            GeometryError::NonMonotonicMap { index: 1, .. }
        ));
    }

    #[test]
    fn duplicates_and_explicit_corners_collapse() {
        let recs = [(0.0, 0.0), (40.0, 40.0), (40.0, 40.0), (100.0, 100.0)];
        let map = BitextMap::load(&recs, space(100.0, 100.0)).unwrap();
        assert_eq!(points(&map), vec![(0.0, 0.0), (40.0, 40.0), (100.0, 100.0)]);
    }

    #[test]
    fn out_of_bounds_anchor_is_rejected() {
        let err = BitextMap::load(&[(10.0, 10.0), (120.0, 50.0)], space(100.0, 100.0)).unwrap_err();
        assert!(matches!(err, GeometryError::OutOfBounds { index: 1, .. }));
        let err = BitextMap::load(&[(-1.0, 0.0)], space(100.0, 100.0)).unwrap_err();
        assert!(matches!(err, GeometryError::OutOfBounds { index: 0, .. }));
    }

    #[test]
    fn degenerate_space_is_rejected() {
        assert!(BitextSpace::new(0.0, 10.0, Units::Characters).is_err());
        assert!(BitextSpace::new(10.0, f64::NAN, Units::Tokens).is_err());
    }

    #[test]
    fn distance_examples() {
        let diag = BitextMap::load(&[], space(100.0, 100.0)).unwrap();
        assert_eq!(diag.distance(50.0, 50.0).unwrap(), 0.0);
        let d = diag.distance(50.0, 60.0).unwrap();
        assert!((d - 10.0 / 2f64.sqrt()).abs() < 1e-12);

        let bent = BitextMap::load(&[(50.0, 0.0)], space(100.0, 100.0)).unwrap();
        assert!((bent.distance(25.0, 10.0).unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn distance_rejects_points_outside_space() {
        let diag = BitextMap::load(&[], space(100.0, 100.0)).unwrap();
        assert!(diag.distance(101.0, 0.0).is_err());
        assert!(diag.distance(0.0, -0.5).is_err());
    }

    #[test]
    fn within_uses_strict_inequality() {
        let diag = BitextMap::load(&[], space(100.0, 100.0)).unwrap();
        assert!(!diag.is_within(50.0, 50.0, 0.0));
        // (60, 50) sits exactly 10/sqrt(2) away.
        let r = 10.0 / 2f64.sqrt();
        assert!(diag.is_within(60.0, 50.0, r + 1e-9));
        assert!(!diag.is_within(60.0, 50.0, r - 1e-9));
    }

    #[test]
    fn vertical_and_horizontal_runs() {
        // Horizontal run at y=0 up to x=50, vertical run at x=50 up to y=80.
        let map = BitextMap::load(&[(50.0, 0.0), (50.0, 80.0)], space(100.0, 100.0)).unwrap();
        assert_eq!(map.lowest_y_at(50.0), 0.0);
        assert_eq!(map.highest_y_at(50.0), 80.0);
        assert_eq!(map.lowest_y_at(25.0), 0.0);
        assert_eq!(map.highest_y_at(25.0), 0.0);
        assert!((map.lowest_y_at(75.0) - 90.0).abs() < 1e-12);
        assert_eq!(map.highest_y_at(100.0), 100.0);
        assert_eq!(map.lowest_y_at(0.0), 0.0);
        assert!(map.is_within(52.0, 40.0, 2.5));
        assert!(!map.is_within(52.0, 40.0, 2.0));
    }

    #[test]
    fn max_gap_is_longest_segment() {
        let map = BitextMap::load(&[(30.0, 40.0)], space(100.0, 100.0)).unwrap();
        assert!((map.max_gap() - 70f64.hypot(60.0)).abs() < 1e-12);
    }
}
