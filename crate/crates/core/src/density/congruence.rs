//! Per-cylinder comparison of `Vol(C ∩ B(R))` for a tilted axis and the
//! vertical axis through the same base point. The two solids are related by
//! a rotation about `OA`, so the volumes agree; each side is estimated on its
//! own random stream and compared statistically.

use rayon::prelude::*;
use serde::Serialize;

use super::index::UnitAxis;
use crate::error::{Error, Result};
use crate::line_families::{global_family, local_family, perpendicular_family, CylinderFamily, FamilyKind};
use crate::point_lattice::PlanarPoint;
use crate::rng;
use crate::vec_geometry::{cross, Line, Vec3};

pub const PER_CYLINDER_SIGMAS: f64 = 4.0;
pub const AGGREGATE_SIGMAS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub volume: f64,
    pub std_error: f64,
}

/// Estimates `Vol(C ∩ B(R))` for one cylinder by sampling the slab
/// `{F + t u + s : |t| <= R, |s| <= r, s ⟂ u}` around the foot `F` of the
/// perpendicular from the origin, which contains the intersection.
pub fn cylinder_ball_volume(line: &Line, radius: f64, big_r: f64, samples: u64, seed: u64, stream: u64) -> VolumeEstimate {
    let axis = UnitAxis { base: line.base, unit: line.dir * (1.0 / line.dir.norm()) };
    let u = axis.unit;
    let foot = axis.base - u * axis.base.dot(u);
    if foot.norm() - radius >= big_r || samples == 0 {
        return VolumeEstimate { volume: 0.0, std_error: 0.0 };
    }
    let helper = if u.x.abs() < 0.9 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
    let e1 = {
        let c = cross(u, helper);
        c * (1.0 / c.norm())
    };
    let e2 = cross(u, e1);
    let mut g = rng::stream(seed, stream);
    let r_sq = big_r * big_r;
    let mut hits = 0u64;
    for _ in 0..samples {
        let t = rng::uniform(&mut g, -big_r, big_r);
        let (a, b) = loop {
            let a = rng::uniform(&mut g, -radius, radius);
            let b = rng::uniform(&mut g, -radius, radius);
            if a * a + b * b <= radius * radius {
                break (a, b);
            }
        };
        let p = foot + u * t + e1 * a + e2 * b;
        hits += (p.norm_sq() <= r_sq) as u64;
    }
    let box_volume = std::f64::consts::PI * radius * radius * 2.0 * big_r;
    let p = hits as f64 / samples as f64;
    VolumeEstimate {
        volume: box_volume * p,
        std_error: box_volume * (p * (1.0 - p) / samples as f64).sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylinderComparison {
    pub index: usize,
    pub tilted: VolumeEstimate,
    pub perpendicular: VolumeEstimate,
    /// Difference in units of the combined standard error.
    pub z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CongruenceReport {
    pub kind: FamilyKind,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub radius: f64,
    pub samples_per_cylinder: u64,
    pub seed: u64,
    pub cylinders: Vec<CylinderComparison>,
    /// Indices whose difference exceeds the per-cylinder bound.
    pub failures: Vec<usize>,
    pub total_tilted: f64,
    pub total_perpendicular: f64,
    pub total_std_error: f64,
    pub aggregate_ok: bool,
}

impl CongruenceReport {
    pub fn per_cylinder_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.per_cylinder_ok() && self.aggregate_ok
    }
}

/// Parameter of the tilted construction being compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TiltParam {
    /// Local construction with `eps`; `None` picks the largest admissible.
    Eps(Option<f64>),
    /// Global construction with slope constant `L`.
    L(f64),
}

fn within(diff: f64, sigma: f64, k: f64) -> bool {
    if sigma == 0.0 {
        diff == 0.0
    } else {
        diff.abs() <= k * sigma
    }
}

/// Compares tilted and vertical cylinder volumes inside `B(R)` point by point.
pub fn congruence_check(
    points: &[PlanarPoint],
    r: f64,
    param: TiltParam,
    big_r: f64,
    samples: u64,
    seed: u64,
) -> Result<CongruenceReport> {
    if !(big_r > 0.0) {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {big_r}")));
    }
    let tilted: CylinderFamily = match param {
        TiltParam::Eps(eps) => local_family(points, r, eps)?,
        TiltParam::L(l) => global_family(points, l, false)?,
    };
    let vertical = perpendicular_family(points, tilted.radius)?;
    let radius = tilted.radius;
    let cylinders: Vec<CylinderComparison> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let t = cylinder_ball_volume(&tilted.lines[i], radius, big_r, samples, seed, 2 * i as u64 + 1);
            let p = cylinder_ball_volume(&vertical.lines[i], radius, big_r, samples, seed, 2 * i as u64);
            let sigma = t.std_error.hypot(p.std_error);
            let diff = t.volume - p.volume;
            let z = if sigma > 0.0 { diff / sigma } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
            CylinderComparison { index: i, tilted: t, perpendicular: p, z }
        })
        .collect();
    let failures = cylinders
        .iter()
        .filter(|c| !within(c.tilted.volume - c.perpendicular.volume, c.tilted.std_error.hypot(c.perpendicular.std_error), PER_CYLINDER_SIGMAS))
        .map(|c| c.index)
        .collect();
    let total_tilted: f64 = cylinders.iter().map(|c| c.tilted.volume).sum();
    let total_perpendicular: f64 = cylinders.iter().map(|c| c.perpendicular.volume).sum();
    let total_std_error = cylinders
        .iter()
        .map(|c| c.tilted.std_error.powi(2) + c.perpendicular.std_error.powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(CongruenceReport {
        kind: tilted.kind,
        big_r,
        radius,
        samples_per_cylinder: samples,
        seed,
        cylinders,
        failures,
        total_tilted,
        total_perpendicular,
        total_std_error,
        aggregate_ok: within(total_tilted - total_perpendicular, total_std_error, AGGREGATE_SIGMAS),
    })
}
