//! Generators and reference implementations shared by the integration tests.
#![allow(dead_code)]

use adomit::detector::OmittedSegment;
use adomit::geometry::{Baseline, MapPoint, Threshold};
use adomit::BitextMap;
use rand::Rng;

/// A random monotone map with `steps` segments. Roughly a third of the
/// segments are flat enough to fall under `low_degrees`, some of those sit
/// just above it, and the rest climb steeply.
pub fn random_map<R: Rng>(rng: &mut R, steps: usize, low_degrees: f64) -> BitextMap {
    let tan = low_degrees.to_radians().tan();
    let mut points = vec![MapPoint::new(0, 0)];
    let (mut x, mut y) = (0u64, 0u64);
    for _ in 0..steps {
        let dx = rng.gen_range(1..=120u64);
        let dy = match rng.gen_range(0..10) {
            0..=3 => (dx as f64 * tan * rng.gen_range(0.0..1.2)).round() as u64,
            4..=5 => rng.gen_range(0..=dx / 3),
            _ => rng.gen_range(dx..=4 * dx + 20),
        };
        x += dx;
        y += dy;
        points.push(MapPoint::new(x, y));
    }
    BitextMap::spanning(points).expect("strictly increasing x")
}

/// Whether `s -> e` is an omitted segment that stays on or above the
/// baseline, tested directly rather than through the triangle helpers.
pub fn spans_omission(s: MapPoint, e: MapPoint, degrees: f64, baseline: &Baseline) -> bool {
    if e.x <= s.x {
        return false;
    }
    if (e.y as f64 - baseline.slope * e.x as f64) < baseline.intercept {
        return false;
    }
    if e.y <= s.y {
        return true;
    }
    let angle = ((e.y - s.y) as f64).atan2((e.x - s.x) as f64).to_degrees();
    angle < degrees
}

/// Maximal omitted segments by exhaustive comparison of every start with
/// every later end (about n²/2 tests), followed by the same disjoint
/// leftmost-start, rightmost-end selection as the fast search.
pub fn brute_force_maximal(
    minimal: &[OmittedSegment],
    threshold: Threshold,
    baseline: &Baseline,
) -> Vec<(MapPoint, MapPoint)> {
    let n = minimal.len();
    let mut reach = vec![0usize; n];
    for i in 0..n {
        reach[i] = i;
        for j in i + 1..n {
            if spans_omission(
                minimal[i].start,
                minimal[j].end,
                threshold.degrees(),
                baseline,
            ) {
                reach[i] = j;
            }
        }
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        out.push((minimal[i].start, minimal[reach[i]].end));
        i = reach[i] + 1;
    }
    out
}

/// A baseline with slope in `[1.01, 4] * tan(t)` under every endpoint of
/// `minimal`; half the time it touches the lowest endpoint exactly.
pub fn random_baseline<R: Rng>(
    rng: &mut R,
    minimal: &[OmittedSegment],
    threshold: Threshold,
) -> Baseline {
    let slope = threshold.tan() * rng.gen_range(1.01..4.0);
    let lowest = minimal
        .iter()
        .flat_map(|s| [s.start, s.end])
        .map(|p| p.y as f64 - slope * p.x as f64)
        .reduce(f64::min)
        .unwrap_or(0.0);
    let drop = if rng.gen_bool(0.5) {
        0.0
    } else {
        rng.gen_range(0.0..300.0)
    };
    Baseline {
        slope,
        intercept: lowest - drop,
    }
}
