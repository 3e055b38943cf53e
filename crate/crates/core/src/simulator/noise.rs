use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use super::inject::{Omission, ANCHOR_CLEARANCE};
use super::SimError;
use crate::bitext_map::BitextMap;
use crate::geometry::MapPoint;

/// Extent along x of a spurious flat run.
pub const SPURIOUS_LENGTH: RangeInclusive<u64> = 10..=250;

/// Horizontal width of the steep step inside an interfering pair.
const STEP_WIDTH: RangeInclusive<u64> = 1..=3;
/// Vertical rise of the steep step inside an interfering pair.
const STEP_RISE: RangeInclusive<u64> = 3..=8;
const MAX_SPURIOUS_ATTEMPTS: usize = 10_000;

/// Parameters of the map noise model.
///
/// Interference stands for the extra points a mapper puts inside an
/// omitted region: they split the flat run into pieces joined by short
/// steep steps. Spurious runs stand for map errors that look exactly like
/// omissions where there are none. Jitter perturbs every other point's
/// ordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseParams {
    /// Probability that an omission receives interfering points.
    pub interfere_prob: f64,
    /// Interfering points per afflicted omission.
    pub interfere_count: usize,
    /// Standard deviation, in characters, of ordinate jitter.
    pub jitter_sigma: f64,
    /// Expected spurious flat runs per 100 000 characters of original.
    pub spurious_rate: f64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self {
            interfere_prob: 0.5,
            interfere_count: 4,
            jitter_sigma: 2.0,
            spurious_rate: 20.0,
        }
    }
}

impl NoiseParams {
    pub fn none() -> Self {
        Self {
            interfere_prob: 0.0,
            interfere_count: 0,
            jitter_sigma: 0.0,
            spurious_rate: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(0.0..=1.0).contains(&self.interfere_prob) {
            return Err(SimError::InvalidParameter(format!(
                "interfere_prob must lie in [0, 1], got {}",
                self.interfere_prob
            )));
        }
        if !(self.jitter_sigma >= 0.0 && self.jitter_sigma.is_finite()) {
            return Err(SimError::InvalidParameter(format!(
                "jitter_sigma must be >= 0, got {}",
                self.jitter_sigma
            )));
        }
        if !(self.spurious_rate >= 0.0 && self.spurious_rate.is_finite()) {
            return Err(SimError::InvalidParameter(format!(
                "spurious_rate must be >= 0, got {}",
                self.spurious_rate
            )));
        }
        Ok(())
    }
}

/// Degrade a clean post-omission map.
///
/// `omissions` must be the spans injected into `modified`, in order. Steps run in a
/// fixed order (interference, jitter, spurious runs) from one seeded stream.
pub fn synthesize_noisy_map(
    modified: &BitextMap,
    omissions: &[Omission],
    params: &NoiseParams,
    seed: u64,
) -> Result<BitextMap, SimError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = modified.points().to_vec();
    let height = modified.height();

    if params.interfere_prob > 0.0 && params.interfere_count > 0 {
        for o in omissions {
            if rng.gen_bool(params.interfere_prob) {
                interfere(&mut points, o, params.interfere_count, height, &mut rng);
            }
        }
    }
    if params.jitter_sigma > 0.0 {
        jitter(&mut points, omissions, params.jitter_sigma, &mut rng);
    }
    if params.spurious_rate > 0.0 {
        let expected = params.spurious_rate * modified.width() as f64 / 100_000.0;
        let count = Poisson::new(expected)
            .expect("positive rate")
            .sample(&mut rng) as usize;
        add_spurious(
            &mut points,
            omissions,
            count,
            modified.width(),
            height,
            &mut rng,
        );
    }
    Ok(BitextMap::new(points, modified.width(), height)?)
}

/// Split the flat run of `o` with steep pairs of points, raising its right
/// anchor by the total rise so the map stays monotone.
fn interfere(
    points: &mut Vec<MapPoint>,
    o: &Omission,
    count: usize,
    height: u64,
    rng: &mut ChaCha8Rng,
) {
    let left = points.partition_point(|p| p.x < o.x_start);
    let right = points.partition_point(|p| p.x < o.x_end);
    if right >= points.len() || points[right].x != o.x_end || points[left].x != o.x_start {
        return;
    }
    let base_y = points[left].y;
    let ceiling = points.get(right + 1).map_or(height, |p| p.y);

    // each cluster needs 5 characters: the step, a margin, and room on both sides
    let slots = (o.x_end - o.x_start).saturating_sub(2) / 5;
    let clusters = count.div_ceil(2).min(slots as usize);
    if clusters == 0 {
        return;
    }
    let mut picks: Vec<u64> = sample(rng, slots as usize, clusters)
        .into_iter()
        .map(|s| s as u64)
        .collect();
    picks.sort_unstable();

    let mut inserted = Vec::with_capacity(count);
    let mut rise = 0;
    let mut remaining = count;
    for slot in picks {
        let x = o.x_start + 1 + slot * 5;
        inserted.push(MapPoint::new(x, base_y + rise));
        remaining -= 1;
        if remaining > 0 {
            let width = rng.gen_range(STEP_WIDTH);
            let step = rng.gen_range(STEP_RISE).min(ceiling - base_y - rise);
            rise += step;
            inserted.push(MapPoint::new(x + width, base_y + rise));
            remaining -= 1;
        }
    }
    points[right].y = base_y + rise;
    points.splice(right..right, inserted);
}

/// Gaussian ordinate jitter on every point except the map's ends and the
/// points that delimit or sit inside an omitted run.
fn jitter(points: &mut [MapPoint], omissions: &[Omission], sigma: f64, rng: &mut ChaCha8Rng) {
    let normal = Normal::new(0.0, sigma).expect("finite sigma");
    let n = points.len();
    if n < 3 {
        return;
    }
    // omissions are sorted and disjoint
    let pinned = |p: &MapPoint| {
        let i = omissions.partition_point(|o| o.x_end < p.x);
        omissions.get(i).is_some_and(|o| o.x_start <= p.x)
    };
    for i in 1..n - 1 {
        let noise: f64 = normal.sample(rng);
        if pinned(&points[i]) {
            continue;
        }
        let lo = points[i - 1].y as f64;
        let hi = points[i + 1].y as f64;
        points[i].y = (points[i].y as f64 + noise).round().clamp(lo, hi) as u64;
    }
}

/// Flatten `count` random stretches of the map away from any omission.
fn add_spurious(
    points: &mut Vec<MapPoint>,
    omissions: &[Omission],
    count: usize,
    width: u64,
    height: u64,
    rng: &mut ChaCha8Rng,
) {
    let margin = ANCHOR_CLEARANCE;
    let mut taken: Vec<(u64, u64)> = omissions
        .iter()
        .map(|o| (o.x_start.saturating_sub(margin), o.x_end + margin))
        .collect();
    // x -> y; edits stay local instead of shifting the whole vector
    let mut map: BTreeMap<u64, u64> = points.iter().map(|p| (p.x, p.y)).collect();
    let mut placed = 0;
    let mut attempts = 0;
    while placed < count && attempts < MAX_SPURIOUS_ATTEMPTS {
        attempts += 1;
        let len = rng.gen_range(SPURIOUS_LENGTH);
        if width < len + 2 * margin + 2 {
            break;
        }
        let start = rng.gen_range(margin + 1..=width - len - margin - 1);
        let end = start + len;
        let zone = (start - margin, end + margin);
        if taken.iter().any(|&(lo, hi)| zone.0 <= hi && lo <= zone.1) {
            continue;
        }
        let y_start = interpolate(&map, start);
        let ceiling = map.range(zone.1 + 1..).next().map_or(height, |(_, &y)| y);
        let drift = rng.gen_range(0..=2).min(ceiling.saturating_sub(y_start));

        let doomed: Vec<u64> = map.range(zone.0..=zone.1).map(|(&x, _)| x).collect();
        for x in doomed {
            map.remove(&x);
        }
        map.insert(start, y_start);
        map.insert(end, y_start + drift);
        taken.push(zone);
        placed += 1;
    }
    *points = map.into_iter().map(|(x, y)| MapPoint::new(x, y)).collect();
}

/// Rounded piecewise-linear ordinate at `x`, or the nearest point's ordinate
/// outside the map's extent.
fn interpolate(map: &BTreeMap<u64, u64>, x: u64) -> u64 {
    let left = map.range(..=x).next_back();
    let right = map.range(x + 1..).next();
    match (left, right) {
        (Some((&ax, &ay)), Some((&bx, &by))) => {
            let t = (x - ax) as f64 / (bx - ax) as f64;
            (ay as f64 + t * (by as f64 - ay as f64)).round() as u64
        }
        (Some((_, &y)), None) | (None, Some((_, &y))) => y,
        (None, None) => 0,
    }
}
