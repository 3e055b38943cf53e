use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SimError;
use crate::bitext_map::BitextMap;
use crate::geometry::MapPoint;

/// Gold points this close (in x) to an omission's boundary are dropped, so
/// the rounding of the boundary anchors cannot leave a sliver of flat map
/// next to the jump.
pub const ANCHOR_CLEARANCE: u64 = 10;

/// Rejection-sampling budget for placing omissions.
pub const MAX_PLACEMENT_ATTEMPTS: usize = 1_000_000;

/// A span deleted from the translation, and the stretch of the original it
/// corresponded to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Omission {
    /// Deleted span `[y_start, y_end)` in the gold translation's offsets.
    pub y_start: u64,
    pub y_end: u64,
    /// Projection of the deleted span onto the original, `[x_start, x_end)`.
    pub x_start: u64,
    pub x_end: u64,
    /// Where the jump sits in the translation after deletion.
    pub y_after: u64,
}

impl Omission {
    pub fn x_range(&self) -> (u64, u64) {
        (self.x_start, self.x_end)
    }
}

/// Delete `count` spans of `length` characters from the translation at
/// uniformly random positions at least `min_gap` characters apart.
///
/// Returns the map a perfect mapper would produce for the shortened
/// translation, and the deleted spans sorted by position.
pub fn inject_omissions(
    gold: &BitextMap,
    count: usize,
    length: u64,
    min_gap: u64,
    seed: u64,
) -> Result<(BitextMap, Vec<Omission>), SimError> {
    if length == 0 {
        return Err(SimError::InvalidParameter(
            "omission length must be positive".into(),
        ));
    }
    let height = gold.height();
    let placement_error = |placed| SimError::Placement {
        placed,
        requested: count,
        length,
        min_gap,
    };
    if count > 0 && length > height {
        return Err(placement_error(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<u64> = Vec::with_capacity(count);
    let mut attempts = 0;
    while starts.len() < count {
        if attempts == MAX_PLACEMENT_ATTEMPTS {
            return Err(placement_error(starts.len()));
        }
        attempts += 1;
        let candidate = rng.gen_range(0..=height - length);
        let clear = starts.iter().all(|&other| {
            let (lo, hi) = if other < candidate {
                (other, candidate)
            } else {
                (candidate, other)
            };
            hi >= lo + length + min_gap
        });
        if clear {
            starts.push(candidate);
        }
    }
    inject_at(gold, &starts, length, min_gap)
}

/// Delete spans of `length` characters starting at the given translation
/// offsets.
pub fn inject_at(
    gold: &BitextMap,
    starts: &[u64],
    length: u64,
    min_gap: u64,
) -> Result<(BitextMap, Vec<Omission>), SimError> {
    if length == 0 {
        return Err(SimError::InvalidParameter(
            "omission length must be positive".into(),
        ));
    }
    let height = gold.height();
    let mut starts = starts.to_vec();
    starts.sort_unstable();
    for &start in &starts {
        if start + length > height {
            return Err(SimError::OutOfBounds {
                start,
                length,
                height,
            });
        }
    }
    for pair in starts.windows(2) {
        let gap = pair[1].saturating_sub(pair[0] + length);
        if pair[1] < pair[0] + length + min_gap {
            return Err(SimError::TooClose {
                first: pair[0],
                second: pair[1],
                gap,
                min_gap,
            });
        }
    }

    // x as a function of y on the gold map
    let inverse = gold.transpose();
    let mut omissions = Vec::with_capacity(starts.len());
    for (k, &y_start) in starts.iter().enumerate() {
        let y_end = y_start + length;
        let x_start = inverse.interpolate(y_start as f64).round() as u64;
        let x_end = inverse.interpolate(y_end as f64).round() as u64;
        if x_end <= x_start {
            return Err(SimError::Degenerate { start: y_start });
        }
        omissions.push(Omission {
            y_start,
            y_end,
            x_start,
            x_end,
            y_after: y_start - k as u64 * length,
        });
    }

    let mut points: Vec<MapPoint> = gold
        .points()
        .iter()
        .filter(|p| {
            omissions
                .iter()
                .all(|o| p.x + ANCHOR_CLEARANCE < o.x_start || p.x > o.x_end + ANCHOR_CLEARANCE)
        })
        .map(|p| {
            let removed: u64 = omissions
                .iter()
                .filter(|o| o.y_end <= p.y)
                .map(|_| length)
                .sum();
            MapPoint::new(p.x, p.y - removed)
        })
        .collect();
    for o in &omissions {
        points.push(MapPoint::new(o.x_start, o.y_after));
        points.push(MapPoint::new(o.x_end, o.y_after));
    }
    let modified = BitextMap::new(points, gold.width(), height - starts.len() as u64 * length)?;
    Ok((modified, omissions))
}
