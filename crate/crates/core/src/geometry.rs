//! Planar geometry over character-offset coordinates.
//!
//! A bitext space has the original text's character offsets on the x-axis
//! and the translation's on the y-axis. Everything here works on that
//! space: slope angles of map segments, the diagonal-slope baseline that
//! bounds the search for maximal omitted segments from below, the threshold
//! ray from a segment's left endpoint, and membership in the search triangle
//! those two lines cut out.
//!
//! Angles cross every public boundary in degrees. [`Threshold`] carries both
//! units so callers never convert by hand.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate segment: {0} and {1} are the same point")]
    Degenerate(MapPoint, MapPoint),
    #[error("segment runs backwards: {1} lies left of {0}")]
    Backward(MapPoint, MapPoint),
    #[error("segment descends: {1} lies below {0}")]
    Descending(MapPoint, MapPoint),
    #[error("baseline needs at least one point")]
    EmptyPointSet,
    #[error("bitext space must have positive width and height, got {width}x{height}")]
    EmptySpace { width: u64, height: u64 },
    #[error("threshold must lie strictly between 0 and 90 degrees, got {0}")]
    ThresholdOutOfRange(f64),
    #[error(
        "a ray at {threshold_degrees} degrees never meets a baseline of slope {baseline_slope} \
         (angle {baseline_degrees:.3} degrees); lower the threshold"
    )]
    NoIntersection {
        threshold_degrees: f64,
        baseline_slope: f64,
        baseline_degrees: f64,
    },
}

/// One corresponding pair of character offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MapPoint {
    /// Offset into the original text.
    pub x: u64,
    /// Offset into the translation.
    pub y: u64,
}

impl MapPoint {
    pub const fn new(x: u64, y: u64) -> Self {
        Self { x, y }
    }

    /// The same point with its axes swapped.
    pub const fn transposed(self) -> Self {
        Self {
            x: self.y,
            y: self.x,
        }
    }
}

impl fmt::Display for MapPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A real-valued point, used for constructions such as the ray/baseline
/// intersection that rarely land on integer offsets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealPoint {
    pub x: f64,
    pub y: f64,
}

impl From<MapPoint> for RealPoint {
    fn from(p: MapPoint) -> Self {
        Self {
            x: p.x as f64,
            y: p.y as f64,
        }
    }
}

/// A slope-angle threshold in the open interval (0°, 90°).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Threshold {
    degrees: f64,
    radians: f64,
}

impl Threshold {
    pub fn from_degrees(degrees: f64) -> Result<Self, GeometryError> {
        if !(degrees > 0.0 && degrees < 90.0) {
            return Err(GeometryError::ThresholdOutOfRange(degrees));
        }
        Ok(Self {
            degrees,
            radians: degrees.to_radians(),
        })
    }

    pub fn degrees(self) -> f64 {
        self.degrees
    }

    pub fn radians(self) -> f64 {
        self.radians
    }

    /// Slope of a line rising at this angle.
    pub fn tan(self) -> f64 {
        self.radians.tan()
    }

    /// Whether a ray at this angle meets `baseline` to the right of any point
    /// above it. Checked on both slopes and angles so the diagonal's own
    /// angle is rejected despite rounding in `tan`.
    pub fn rises_slower_than(self, baseline: &Baseline) -> bool {
        self.tan() < baseline.slope && self.degrees < baseline.angle_degrees()
    }

    /// Strict comparison: an angle equal to the threshold is not below it.
    pub fn admits(self, angle_degrees: f64) -> bool {
        angle_degrees < self.degrees
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}°", self.degrees)
    }
}

/// Slope angle in degrees of the segment from `a` to `b`, in `[0, 90]`.
///
/// Vertical segments give exactly 90 and horizontal ones exactly 0.
pub fn slope_angle(a: MapPoint, b: MapPoint) -> Result<f64, GeometryError> {
    if a == b {
        return Err(GeometryError::Degenerate(a, b));
    }
    if b.x < a.x {
        return Err(GeometryError::Backward(a, b));
    }
    if b.y < a.y {
        return Err(GeometryError::Descending(a, b));
    }
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    if dx == 0 {
        return Ok(90.0);
    }
    if dy == 0 {
        return Ok(0.0);
    }
    Ok((dy as f64).atan2(dx as f64).to_degrees())
}

/// A line whose slope matches the main diagonal of the bitext space,
/// placed so a given point set lies on or above it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub slope: f64,
    pub intercept: f64,
}

impl Baseline {
    /// Signed vertical offset of `p` from the family of lines with this
    /// slope through the origin: `p.y - slope * p.x`.
    pub fn offset(&self, p: RealPoint) -> f64 {
        p.y - self.slope * p.x
    }

    /// Ordinate of the line at abscissa `x`.
    pub fn at(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    /// `p.y >= slope * p.x + intercept`, evaluated in the same form the
    /// intercept was computed in so the supporting point tests as on-line.
    pub fn is_on_or_above(&self, p: MapPoint) -> bool {
        self.offset(p.into()) >= self.intercept
    }

    pub fn angle_degrees(&self) -> f64 {
        self.slope.atan().to_degrees()
    }
}

/// Build the diagonal-slope line supporting `points` from below.
pub fn build_baseline(
    points: impl IntoIterator<Item = MapPoint>,
    space_width: u64,
    space_height: u64,
) -> Result<Baseline, GeometryError> {
    if space_width == 0 || space_height == 0 {
        return Err(GeometryError::EmptySpace {
            width: space_width,
            height: space_height,
        });
    }
    let slope = space_height as f64 / space_width as f64;
    let probe = Baseline {
        slope,
        intercept: 0.0,
    };
    let intercept = points
        .into_iter()
        .map(|p| probe.offset(p.into()))
        .reduce(f64::min)
        .ok_or(GeometryError::EmptyPointSet)?;
    Ok(Baseline { slope, intercept })
}

/// Where the ray from `s` rising at `threshold` meets `baseline`.
///
/// The ray has to rise more slowly than the baseline, otherwise the two
/// never meet to the right of `s`.
pub fn ray_baseline_intersection(
    s: MapPoint,
    threshold: Threshold,
    baseline: &Baseline,
) -> Result<RealPoint, GeometryError> {
    let ray_slope = threshold.tan();
    if !threshold.rises_slower_than(baseline) {
        return Err(GeometryError::NoIntersection {
            threshold_degrees: threshold.degrees(),
            baseline_slope: baseline.slope,
            baseline_degrees: baseline.angle_degrees(),
        });
    }
    let s = RealPoint::from(s);
    // s.y + ray_slope * (x - s.x) = slope * x + intercept
    let x = (s.y - ray_slope * s.x - baseline.intercept) / (baseline.slope - ray_slope);
    Ok(RealPoint {
        x,
        y: baseline.at(x),
    })
}

/// Whether `e` lies in the triangle bounded by the vertical through `s`,
/// the baseline, and the threshold ray from `s`.
///
/// The vertical edge and the ray are open; the baseline edge is closed.
pub fn in_search_triangle(
    e: MapPoint,
    s: MapPoint,
    threshold: Threshold,
    baseline: &Baseline,
) -> bool {
    if e.x <= s.x || !baseline.is_on_or_above(e) {
        return false;
    }
    // Anything at or below s's ordinate is under a ray with positive slope.
    e.y <= s.y || slope_angle(s, e).is_ok_and(|angle| threshold.admits(angle))
}
