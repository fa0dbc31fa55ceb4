use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::index::CylinderIndex;
use crate::error::{Error, Result};
use crate::line_families::{CylinderFamily, FamilyKind};
use crate::rng;
use crate::vec_geometry::Vec3;

pub const MIN_SAMPLES: u64 = 10_000;

/// Samples per counter stream; chunk `c` always uses stream `c`.
pub(crate) const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityEstimate {
    #[serde(rename = "R")]
    pub r_ball: f64,
    pub family: FamilyKind,
    pub covered_volume: f64,
    pub density: f64,
    pub std_error: f64,
    pub samples: u64,
    pub hits: u64,
    pub seed: u64,
}

impl DensityEstimate {
    fn from_hits(family: FamilyKind, r_ball: f64, samples: u64, hits: u64, seed: u64) -> Self {
        let p = hits as f64 / samples as f64;
        Self {
            r_ball,
            family,
            covered_volume: p * ball_volume(r_ball),
            density: p,
            std_error: (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
            hits,
            seed,
        }
    }
}

pub fn ball_volume(r: f64) -> f64 {
    4.0 * PI * r * r * r / 3.0
}

/// Uniform point in `B(r)` by rejection from the enclosing cube.
#[inline]
pub(crate) fn ball_point(g: &mut rand_chacha::ChaCha8Rng, r: f64) -> Vec3 {
    loop {
        let p = Vec3::new(rng::uniform(g, -r, r), rng::uniform(g, -r, r), rng::uniform(g, -r, r));
        if p.norm_sq() <= r * r {
            return p;
        }
    }
}

fn check_args(r_ball: f64, samples: u64) -> Result<()> {
    if !(r_ball > 0.0) {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {r_ball}")));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_SAMPLES} samples, got {samples}")));
    }
    Ok(())
}

fn count<F>(r_ball: f64, samples: u64, seed: u64, per_point: F) -> u64
where
    F: Fn(Vec3) -> u64 + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut g = rng::stream(seed, c);
            let n = CHUNK.min(samples - c * CHUNK);
            (0..n).map(|_| per_point(ball_point(&mut g, r_ball))).sum::<u64>()
        })
        .sum()
}

/// Monte Carlo estimate of the fraction of `B(r_ball)` covered by the family.
/// Deterministic in `(family, r_ball, samples, seed)` and independent of the
/// number of worker threads.
pub fn covered_volume(family: &CylinderFamily, r_ball: f64, samples: u64, seed: u64) -> Result<DensityEstimate> {
    check_args(r_ball, samples)?;
    let index = CylinderIndex::new(family, r_ball);
    let hits = count(r_ball, samples, seed, |p| index.covers(p) as u64);
    Ok(DensityEstimate::from_hits(family.kind, r_ball, samples, hits, seed))
}

/// Like [`covered_volume`], additionally returning the estimate of the summed
/// per-cylinder volumes (points counted with multiplicity) and its standard
/// error.
pub fn covered_volume_with_multiplicity(
    family: &CylinderFamily,
    r_ball: f64,
    samples: u64,
    seed: u64,
) -> Result<(DensityEstimate, f64, f64)> {
    check_args(r_ball, samples)?;
    let index = CylinderIndex::new(family, r_ball);
    let chunks = samples.div_ceil(CHUNK);
    let (hits, total, total_sq) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut g = rng::stream(seed, c);
            let n = CHUNK.min(samples - c * CHUNK);
            let mut acc = (0u64, 0u64, 0u64);
            for _ in 0..n {
                let m = index.multiplicity(ball_point(&mut g, r_ball)) as u64;
                acc.0 += (m > 0) as u64;
                acc.1 += m;
                acc.2 += m * m;
            }
            acc
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let n = samples as f64;
    let mean = total as f64 / n;
    let var = (total_sq as f64 / n - mean * mean).max(0.0);
    Ok((DensityEstimate::from_hits(family.kind, r_ball, samples, hits, seed), mean, (var / n).sqrt()))
}

pub fn local_density(family: &CylinderFamily, r_ball: f64, samples: u64, seed: u64) -> Result<f64> {
    Ok(covered_volume(family, r_ball, samples, seed)?.density)
}

/// CSV with header `R,family,density,std_error,samples,seed`.
pub fn write_estimates_csv<W: Write>(rows: &[DensityEstimate], mut out: W) -> Result<()> {
    writeln!(out, "R,family,density,std_error,samples,seed")?;
    for e in rows {
        writeln!(out, "{},{},{},{},{},{}", e.r_ball, e.family, e.density, e.std_error, e.samples, e.seed)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line_families::{global_family, perpendicular_family};
    use crate::point_lattice::{build_set, PlanarPoint};

    #[test]
    fn empty_family_has_zero_density() {
        let f = perpendicular_family(&[], 0.5).unwrap();
        assert_eq!(local_density(&f, 10.0, MIN_SAMPLES, 1).unwrap(), 0.0);
    }

    #[test]
    fn ball_inside_one_fat_cylinder() {
        let f = perpendicular_family(&[PlanarPoint::free(0.0, 0.0)], 5.0).unwrap();
        let e = covered_volume(&f, 5.0, 20_000, 3).unwrap();
        assert_eq!(e.density, 1.0);
        assert_eq!(e.std_error, 0.0);
    }

    #[test]
    fn hole_region_is_empty() {
        let f = global_family(&build_set(64).unwrap(), 7.0, false).unwrap();
        assert_eq!(local_density(&f, 20.0, 50_000, 5).unwrap(), 0.0);
    }

    #[test]
    fn rejects_too_few_samples() {
        let f = perpendicular_family(&[], 0.5).unwrap();
        assert!(covered_volume(&f, 10.0, 10, 1).is_err());
        assert!(covered_volume(&f, 0.0, MIN_SAMPLES, 1).is_err());
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let f = global_family(&build_set(64).unwrap(), 7.0, false).unwrap();
        let a = covered_volume(&f, 64.0, 200_000, 11).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| covered_volume(&f, 64.0, 200_000, 11).unwrap());
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn larger_radius_covers_more() {
        let pts = build_set(64).unwrap();
        let thin = perpendicular_family(&pts, 0.3).unwrap();
        let thick = perpendicular_family(&pts, 0.5).unwrap();
        let a = covered_volume(&thin, 64.0, 100_000, 8).unwrap();
        let b = covered_volume(&thick, 64.0, 100_000, 8).unwrap();
        assert!(b.hits >= a.hits);
    }

    #[test]
    fn union_equals_sum_for_packings() {
        let f = global_family(&build_set(64).unwrap(), 7.0, false).unwrap();
        let (e, sum, sum_err) = covered_volume_with_multiplicity(&f, 64.0, 200_000, 4).unwrap();
        let sigma = e.std_error.max(sum_err);
        assert!((e.density - sum).abs() <= 3.0 * sigma + 1e-15);
    }

    #[test]
    fn csv_header() {
        let f = perpendicular_family(&[], 0.5).unwrap();
        let e = covered_volume(&f, 10.0, MIN_SAMPLES, 1).unwrap();
        let mut buf = Vec::new();
        write_estimates_csv(&[e], &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().next(), Some("R,family,density,std_error,samples,seed"));
        assert_eq!(s.lines().nth(1), Some("10,perpendicular,0,0,10000,1"));
    }
}
