//! Density of the vertical and globally tilted families on growing balls.

use serde::Serialize;

use super::estimate::{covered_volume, DensityEstimate};
use super::oracle::perpendicular_density_oracle;
use crate::error::{Error, Result};
use crate::line_families::{global_family, perpendicular_family, FamilyKind};
use crate::point_lattice::{build_set, point_density, FIRST_RING};

/// Smallest ball radius accepted by the series.
pub const MIN_SERIES_R: u32 = 2 * FIRST_RING;

/// Seed for one family within a run, so the two families draw independent
/// samples while the whole run still depends on a single seed.
pub fn family_seed(seed: u64, kind: FamilyKind) -> u64 {
    let tag = match kind {
        FamilyKind::Perpendicular => 0x9e37_79b9_7f4a_7c15u64,
        FamilyKind::Local => 0xbf58_476d_1ce4_e5b9,
        FamilyKind::Global => 0x94d0_49bb_1331_11eb,
    };
    let mut z = seed ^ tag;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Serialize)]
pub struct SeriesRow {
    #[serde(rename = "R")]
    pub big_r: u32,
    pub lines: usize,
    pub perpendicular: DensityEstimate,
    pub global: DensityEstimate,
    /// `point_density(R) * pi r^2` with `r = 1/2`.
    pub product_law: f64,
    /// Quadrature value for the vertical family.
    pub oracle: f64,
    /// `(global - perpendicular) / combined std error`.
    pub z: f64,
    pub gap_to_half: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensitySeries {
    pub samples: u64,
    pub seed: u64,
    #[serde(rename = "L")]
    pub l: f64,
    pub rows: Vec<SeriesRow>,
}

impl DensitySeries {
    /// Vertical-family estimates are nondecreasing along the series.
    pub fn perpendicular_nondecreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].perpendicular.density >= w[0].perpendicular.density)
    }

    pub fn estimates(&self) -> Vec<DensityEstimate> {
        self.rows.iter().flat_map(|r| [r.perpendicular.clone(), r.global.clone()]).collect()
    }
}

pub fn global_density_series(r_list: &[u32], samples: u64, seed: u64, l: f64) -> Result<DensitySeries> {
    if r_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("radii must be strictly increasing".into()));
    }
    if let Some(&r) = r_list.iter().find(|&&r| r < MIN_SERIES_R) {
        return Err(Error::InvalidArgument(format!("radius {r} is below {MIN_SERIES_R}")));
    }
    let mut rows = Vec::with_capacity(r_list.len());
    for &big_r in r_list {
        let pts = build_set(big_r)?;
        let perp = perpendicular_family(&pts, 0.5)?;
        let glob = global_family(&pts, l, false)?;
        let rf = big_r as f64;
        let p = covered_volume(&perp, rf, samples, family_seed(seed, FamilyKind::Perpendicular))?;
        let g = covered_volume(&glob, rf, samples, family_seed(seed, FamilyKind::Global))?;
        let sigma = p.std_error.hypot(g.std_error);
        let z = if sigma > 0.0 { (g.density - p.density) / sigma } else { 0.0 };
        rows.push(SeriesRow {
            big_r,
            lines: pts.len(),
            product_law: point_density(big_r)? * std::f64::consts::FRAC_PI_4,
            oracle: perpendicular_density_oracle(&perp, rf)?,
            z,
            gap_to_half: (p.density - 0.5).abs(),
            perpendicular: p,
            global: g,
        });
    }
    Ok(DensitySeries { samples, seed, l, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_lists() {
        assert!(global_density_series(&[128, 64], 10_000, 1, 7.0).is_err());
        assert!(global_density_series(&[32], 10_000, 1, 7.0).is_err());
    }

    #[test]
    fn family_seeds_differ() {
        assert_ne!(family_seed(1, FamilyKind::Perpendicular), family_seed(1, FamilyKind::Global));
        assert_eq!(family_seed(9, FamilyKind::Global), family_seed(9, FamilyKind::Global));
    }

    #[test]
    fn small_series() {
        let s = global_density_series(&[64, 96], 200_000, 5, 7.0).unwrap();
        for row in &s.rows {
            assert!(row.z.abs() < 5.0, "{row:?}");
            let tol = 5.0 * row.perpendicular.std_error;
            assert!((row.perpendicular.density - row.oracle).abs() <= tol, "{row:?}");
        }
    }
}
