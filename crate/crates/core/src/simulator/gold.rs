use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::SimError;
use crate::bitext_map::BitextMap;
use crate::geometry::MapPoint;

/// A clean bitext map along `y = slope_ratio * x`.
///
/// Point spacing along x is uniform in `[mean_spacing / 2, 3 * mean_spacing / 2]`.
/// Ordinates get uniform jitter in `[-jitter, jitter]` and are then clamped so
/// they never decrease. The map starts at the origin and ends at the far
/// corner of a `width x round(slope_ratio * width)` space.
pub fn generate_gold_map(
    width: u64,
    slope_ratio: f64,
    mean_spacing: f64,
    jitter: f64,
    seed: u64,
) -> Result<BitextMap, SimError> {
    if width == 0 {
        return Err(SimError::InvalidParameter(
            "gold map width must be positive".into(),
        ));
    }
    if !mean_spacing.is_finite() || mean_spacing <= 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "mean spacing must be positive, got {mean_spacing}"
        )));
    }
    if !(slope_ratio > 0.0 && slope_ratio.is_finite()) {
        return Err(SimError::InvalidParameter(format!(
            "slope ratio must be positive, got {slope_ratio}"
        )));
    }
    if jitter.is_nan() || jitter < 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "jitter must be non-negative, got {jitter}"
        )));
    }
    let height = (slope_ratio * width as f64).round() as u64;
    if height == 0 {
        return Err(SimError::InvalidParameter(
            "gold map height rounds to zero".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = vec![MapPoint::new(0, 0)];
    let mut x = 0u64;
    let mut last_y = 0u64;
    loop {
        let step = rng
            .gen_range(0.5 * mean_spacing..=1.5 * mean_spacing)
            .round()
            .max(1.0) as u64;
        x += step;
        if x >= width {
            break;
        }
        let noise = if jitter > 0.0 {
            rng.gen_range(-jitter..=jitter)
        } else {
            0.0
        };
        let y = (slope_ratio * x as f64 + noise)
            .round()
            .clamp(0.0, height as f64) as u64;
        last_y = y.max(last_y);
        points.push(MapPoint::new(x, last_y));
    }
    points.push(MapPoint::new(width, height));
    Ok(BitextMap::new(points, width, height)?)
}
