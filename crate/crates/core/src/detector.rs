//! Omission detection.
//!
//! A segment of the bitext map whose slope angle is below the threshold is
//! an omitted segment: a stretch of one text with (almost) nothing
//! corresponding in the other. The basic method reports the minimal ones,
//! between adjacent map points. Noisy maps break a long omission into
//! several short minimal segments separated by steeper interfering
//! segments; [`reconstruct_maximal`] glues them back together by searching,
//! from each segment's left endpoint, for the rightmost endpoint still
//! reachable below the threshold ray and above the diagonal-slope baseline.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitext_map::BitextMap;
use crate::geometry::{
    build_baseline, in_search_triangle, ray_baseline_intersection, slope_angle, Baseline,
    GeometryError, MapPoint, Threshold,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DetectError {
    #[error(
        "threshold {threshold_degrees}° is not below the diagonal's angle of {diagonal_degrees:.3}°; \
         the search triangle is unbounded, lower the threshold"
    )]
    ThresholdTooSteep {
        threshold_degrees: f64,
        diagonal_degrees: f64,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Which text is missing material.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Stretches of the original with no counterpart in the translation;
    /// nearly horizontal in bitext space.
    Translation,
    /// Stretches of the translation with no counterpart in the original;
    /// nearly vertical in bitext space.
    Original,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Translation => "translation",
            Axis::Original => "original",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "translation" => Ok(Axis::Translation),
            "original" => Ok(Axis::Original),
            other => Err(format!(
                "unknown axis {other:?} (expected translation or original)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Minimal omitted segments only.
    Basic,
    /// Maximal omitted segments reconstructed through interfering noise.
    Adomit,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Basic => "basic",
            Method::Adomit => "adomit",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basic" => Ok(Method::Basic),
            "adomit" => Ok(Method::Adomit),
            other => Err(format!(
                "unknown method {other:?} (expected basic or adomit)"
            )),
        }
    }
}

/// A flagged stretch of the bitext map.
///
/// `start` and `end` are always in the map's own coordinates. `length` is
/// the extent along the axis of the text that still has the material: x for
/// [`Axis::Translation`], y for [`Axis::Original`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OmittedSegment {
    pub start: MapPoint,
    pub end: MapPoint,
    pub axis: Axis,
    pub length: u64,
}

impl OmittedSegment {
    fn horizontal(start: MapPoint, end: MapPoint) -> Self {
        Self {
            start,
            end,
            axis: Axis::Translation,
            length: end.x - start.x,
        }
    }

    /// Endpoints as seen by the detector, where every omission is a
    /// low-slope run.
    pub fn oriented(&self) -> (MapPoint, MapPoint) {
        match self.axis {
            Axis::Translation => (self.start, self.end),
            Axis::Original => (self.start.transposed(), self.end.transposed()),
        }
    }

    /// Slope angle in the detection orientation; always below the threshold
    /// that produced the segment.
    pub fn angle_degrees(&self) -> f64 {
        let (a, b) = self.oriented();
        slope_angle(a, b).expect("omitted segments have positive length")
    }

    /// Half-open range `[start, end)` along the axis of the surviving text.
    pub fn span(&self) -> (u64, u64) {
        let (a, b) = self.oriented();
        (a.x, b.x)
    }

    fn relabeled(self, axis: Axis) -> Self {
        match axis {
            Axis::Translation => self,
            Axis::Original => Self {
                start: self.start.transposed(),
                end: self.end.transposed(),
                axis,
                length: self.length,
            },
        }
    }
}

/// Omitted segments sorted longest first, ties by ascending start abscissa.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub segments: Vec<OmittedSegment>,
    pub threshold_degrees: f64,
    pub method: Method,
    pub axis: Axis,
}

/// Adjacent-point segments of `map` with slope angle below `threshold`, in x
/// order.
pub fn minimal_omitted_segments(map: &BitextMap, threshold: Threshold) -> Vec<OmittedSegment> {
    map.segments()
        .filter(|seg| {
            let angle = slope_angle(seg.start, seg.end)
                .expect("validated maps have no degenerate segments");
            threshold.admits(angle)
        })
        .map(|seg| OmittedSegment::horizontal(seg.start, seg.end))
        .collect()
}

/// Merge fragmented minimal omitted segments into maximal ones.
///
/// `minimal` must be sorted by left endpoint with non-decreasing right
/// endpoint ordinates, as produced by [`minimal_omitted_segments`], and
/// `baseline` must lie under all of their endpoints. Output segments are
/// disjoint; the scan resumes after each emitted segment's last piece.
pub fn reconstruct_maximal(
    minimal: &[OmittedSegment],
    threshold: Threshold,
    baseline: &Baseline,
) -> Result<Vec<OmittedSegment>, DetectError> {
    if !threshold.rises_slower_than(baseline) {
        return Err(DetectError::ThresholdTooSteep {
            threshold_degrees: threshold.degrees(),
            diagonal_degrees: baseline.angle_degrees(),
        });
    }
    let mut out = Vec::new();
    let mut first = 0;
    while first < minimal.len() {
        let s = minimal[first].start;
        let apex = ray_baseline_intersection(s, threshold, baseline)?;
        let mut last = first;
        for (j, candidate) in minimal.iter().enumerate().skip(first + 1) {
            let e = candidate.end;
            if e.y as f64 > apex.y {
                break;
            }
            if in_search_triangle(e, s, threshold, baseline) {
                last = j;
            }
        }
        out.push(OmittedSegment::horizontal(s, minimal[last].end));
        first = last + 1;
    }
    Ok(out)
}

/// Diagonal-slope baseline under the endpoints of `minimal`, for a space of
/// the given size.
pub fn baseline_for(
    minimal: &[OmittedSegment],
    width: u64,
    height: u64,
) -> Result<Baseline, GeometryError> {
    build_baseline(minimal.iter().flat_map(|s| [s.start, s.end]), width, height)
}

/// Options for a single detection pass.
#[derive(Debug, Clone, Copy)]
pub struct DetectOptions {
    pub threshold: Threshold,
    pub method: Method,
    pub axis: Axis,
    pub min_length: u64,
}

/// Run one detection pass and sort the result for review.
pub fn detect(map: &BitextMap, options: DetectOptions) -> Result<DetectionReport, DetectError> {
    let transposed;
    let oriented = match options.axis {
        Axis::Translation => map,
        Axis::Original => {
            transposed = map.transpose();
            &transposed
        }
    };
    let minimal = minimal_omitted_segments(oriented, options.threshold);
    let found = match options.method {
        Method::Basic => minimal,
        Method::Adomit if minimal.is_empty() => minimal,
        Method::Adomit => {
            let baseline = baseline_for(&minimal, oriented.width(), oriented.height())?;
            reconstruct_maximal(&minimal, options.threshold, &baseline)?
        }
    };
    let mut segments: Vec<OmittedSegment> = found
        .into_iter()
        .filter(|s| s.length >= options.min_length)
        .map(|s| s.relabeled(options.axis))
        .collect();
    segments.sort_by(review_order);
    Ok(DetectionReport {
        segments,
        threshold_degrees: options.threshold.degrees(),
        method: options.method,
        axis: options.axis,
    })
}

fn review_order(a: &OmittedSegment, b: &OmittedSegment) -> Ordering {
    b.length.cmp(&a.length).then(a.start.x.cmp(&b.start.x))
}
