//! Closed forms for a pair of global axes in terms of `d1`, `d2` and the
//! cosine `c` of the angle between the base rays, plus the exact quartic
//! coefficient certificate for `L = 7`.

use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::sqrt3::{Sign, SqrtThreeInt};
use crate::error::{Error, Result};
use crate::line_families::slope_k;
use crate::point_lattice::{angular_steps, PlanarPoint};

/// Pair data for two global axes. `one_minus_c` is carried separately from
/// `c` so that it stays accurate when the base rays nearly coincide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairGeometry {
    pub d1: u32,
    pub d2: u32,
    pub c: f64,
    pub one_minus_c: f64,
    pub l: f64,
    pub k: f64,
}

impl PairGeometry {
    pub fn new(d1: u32, d2: u32, c: f64, l: f64) -> Self {
        Self {
            d1,
            d2,
            c,
            one_minus_c: 1.0 - c,
            l,
            k: slope_k(l),
        }
    }

    /// Pair of ring points; the angle comes from the integer indices so that
    /// `1 - c = 2 sin^2(angle / 2)` is computed without cancellation.
    pub fn from_points(a: &PlanarPoint, b: &PlanarPoint, l: f64) -> Self {
        let (steps, m) = angular_steps(a, b);
        let half = std::f64::consts::PI * steps as f64 / (6u64 << m) as f64;
        let s = half.sin();
        Self {
            d1: a.d,
            d2: b.d,
            c: (2.0 * half).cos(),
            one_minus_c: 2.0 * s * s,
            l,
            k: slope_k(l),
        }
    }

    fn dd(&self) -> (f64, f64) {
        (self.d1 as f64, self.d2 as f64)
    }
}

/// `A1A2 . (v1 x v2) = (1-c) d1 d2 (K d1 + K d2 + 2L) + L (d2 - d1)^2`.
pub fn triple_product(p: &PairGeometry) -> f64 {
    let (d1, d2) = p.dd();
    let n = d2 - d1;
    p.one_minus_c * d1 * d2 * (p.k * d1 + p.k * d2 + 2.0 * p.l) + p.l * n * n
}

/// `|v1 x v2|^2 = -(1-c)^2 d1^2 d2^2 + 2 (1-c) d1 d2 [L^2 (1 + d1 d2) + K L (d1 + d2)] + L^2 (d2 - d1)^2`.
pub fn cross_norm_sq(p: &PairGeometry) -> f64 {
    let (d1, d2) = p.dd();
    let (l, k, w) = (p.l, p.k, p.one_minus_c);
    let n = d2 - d1;
    let p12 = d1 * d2;
    -w * w * p12 * p12 + 2.0 * w * p12 * (l * l * (1.0 + p12) + k * l * (d1 + d2)) + l * l * n * n
}

/// `triple_product^2 - cross_norm_sq`, expanded in powers of `1 - c`.
pub fn delta(p: &PairGeometry) -> f64 {
    let (d1, d2) = p.dd();
    let (l, k, w) = (p.l, p.k, p.one_minus_c);
    let n = d2 - d1;
    let p12 = d1 * d2;
    let s = k * d1 + k * d2 + 2.0 * l;
    w * w * p12 * p12 * (1.0 + s * s)
        + l * l * n * n * (n * n - 1.0)
        + 2.0 * w * p12 * (k * l * (d1 + d2) * (n * n - 1.0) + l * l * (2.0 * d2 * d2 - 5.0 * p12 + 2.0 * d1 * d1 - 1.0))
}

/// The linear-in-`(1-c)` lower bound for `delta` divided by `2 (1-c) d1 d2`.
pub fn delta_prime(p: &PairGeometry) -> Result<f64> {
    if p.one_minus_c <= 0.0 {
        return Err(Error::InvalidArgument("delta_prime requires c < 1".into()));
    }
    let (d1, d2) = p.dd();
    let (l, k, w) = (p.l, p.k, p.one_minus_c);
    let n = d2 - d1;
    let sum = d1 + d2;
    Ok(k * k / 2.0 * w * d1 * d2 * sum * sum
        + k * l * sum * (n * n - 1.0)
        + l * l * (2.0 * d2 * d2 - 5.0 * d1 * d2 + 2.0 * d1 * d1 - 1.0))
}

/// Coefficients of `d1^4, d1^3, ..., d1^0` of the quartic lower bound for
/// `delta_prime` at `L = 7`, `K = 4 sqrt 3`, with `d2 = d1 + n`.
pub fn quartic_coefficients(n: u64) -> [SqrtThreeInt; 5] {
    let n = BigInt::from(n);
    let p = |e: u32| n.pow(e);
    let i = |v: i64| BigInt::from(v);
    [
        SqrtThreeInt::new(i(32) * p(2) - 32, i(-28) * p(1) + 56),
        SqrtThreeInt::new(i(112) * p(3) - i(112) * p(1), i(-21) * p(2) + i(112) * p(1)),
        SqrtThreeInt::new(
            i(144) * p(4) - i(144) * p(2),
            i(98) * p(3) + i(70) * p(2) - i(56) * p(1),
        ),
        SqrtThreeInt::new(
            i(80) * p(5) - i(80) * p(3),
            i(147) * p(4) + i(14) * p(3) - i(77) * p(2),
        ),
        SqrtThreeInt::new(i(16) * p(6) - i(16) * p(4), i(56) * p(5) - i(28) * p(3)),
    ]
}

#[derive(Debug, Clone, Serialize)]
pub struct QuarticFailure {
    pub n: u64,
    /// Power of `d1` the coefficient multiplies.
    pub degree: u32,
    pub a: String,
    pub b: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuarticCertificate {
    pub n_max: u64,
    pub coefficients_checked: u64,
    pub failures: Vec<QuarticFailure>,
    pub runtime_ms: u128,
}

impl QuarticCertificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exact sign check of all five coefficients for `n = 0..=n_max`.
pub fn certify_quartic(n_max: u64) -> QuarticCertificate {
    let start = Instant::now();
    let mut failures: Vec<QuarticFailure> = (0..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            quartic_coefficients(n)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| c.sign() == Sign::Negative)
                .map(move |(i, c)| QuarticFailure {
                    n,
                    degree: 4 - i as u32,
                    a: c.a.to_string(),
                    b: c.b.to_string(),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    failures.sort_by_key(|f| (f.n, std::cmp::Reverse(f.degree)));
    QuarticCertificate {
        n_max,
        coefficients_checked: 5 * (n_max + 1),
        failures,
        runtime_ms: start.elapsed().as_millis(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point_lattice::ring;

    #[test]
    fn degenerate_and_radial_values() {
        let same = PairGeometry::new(40, 40, 1.0, 7.0);
        assert_eq!(triple_product(&same), 0.0);
        assert_eq!(cross_norm_sq(&same), 0.0);
        assert_eq!(delta(&same), 0.0);
        let radial = PairGeometry::new(32, 33, 1.0, 7.0);
        assert_eq!(triple_product(&radial), 7.0);
        assert_eq!(cross_norm_sq(&radial), 49.0);
        // L^2 n^2 (n^2 - 1) with n = 3.
        let gap3 = PairGeometry::new(50, 53, 1.0, 7.0);
        assert_eq!(delta(&gap3), 49.0 * 9.0 * 8.0);
        assert!(delta_prime(&radial).is_err());
    }

    #[test]
    fn delta_prime_symmetric_and_positive_on_first_ring() {
        let a = PairGeometry::new(32, 32, (std::f64::consts::PI / 96.0).cos(), 7.0);
        let v = delta_prime(&a).unwrap();
        assert!(v > 0.0);
        let b = PairGeometry::new(40, 75, 0.3, 7.0);
        let c = PairGeometry::new(75, 40, 0.3, 7.0);
        assert_eq!(delta_prime(&b).unwrap(), delta_prime(&c).unwrap());
    }

    #[test]
    fn exact_and_rounded_one_minus_c_agree() {
        let (_, r) = ring(100).unwrap();
        let p = PairGeometry::from_points(&r[3], &r[4], 7.0);
        let theta = std::f64::consts::PI / 192.0;
        assert!((p.one_minus_c - (1.0 - theta.cos())).abs() < 1e-15);
        assert!((p.c - theta.cos()).abs() < 1e-15);
    }

    #[test]
    fn quartic_small_n() {
        let q0 = quartic_coefficients(0);
        assert_eq!(q0[0], SqrtThreeInt::new(-32, 56));
        assert!((q0[0].to_f64() - (56.0 - 32.0 * 3f64.sqrt())).abs() < 1e-12);
        for c in &q0[1..] {
            assert_eq!(*c, SqrtThreeInt::zero());
        }
        assert_eq!(quartic_coefficients(1)[0], SqrtThreeInt::new(0, 28));
    }

    /// Independent route: evaluate `4 d2^3 * (lower bound)/L` with `d2 = d1 + n`
    /// directly from its unexpanded form at L = 7, K = 4 sqrt 3, and compare
    /// with the quartic assembled from the coefficients.
    #[test]
    fn quartic_matches_unexpanded_bound() {
        let (l, k) = (7.0f64, 4.0 * 3f64.sqrt());
        for n in 0..6u64 {
            for d1 in [32u64, 33, 50, 101, 500] {
                let (d1f, nf) = (d1 as f64, n as f64);
                let d2 = d1f + nf;
                let direct = (l * l * (d2 + 1.0).powi(2) * d1f * (d1f + d2).powi(2)
                    + 4.0 * d2.powi(3) * (k * l * (d1f + d2) * (nf * nf - 1.0) + l * l * (2.0 * d1f * d1f - 5.0 * d1f * d2 + 2.0 * d2 * d2 - 1.0)))
                    / l;
                let coeffs = quartic_coefficients(n);
                let poly: f64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.to_f64() * d1f.powi(4 - i as i32))
                    .sum();
                assert!((direct - poly).abs() <= 1e-9 * direct.abs().max(1.0), "n={n} d1={d1}: {direct} vs {poly}");
            }
        }
    }

    #[test]
    fn quartic_certificate_small_range() {
        let cert = certify_quartic(2000);
        assert!(cert.passed());
        assert_eq!(cert.coefficients_checked, 5 * 2001);
    }
}
