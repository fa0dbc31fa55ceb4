//! Closed forms for pairs of global axes checked against the vectors they
//! describe. The reference side runs in double-double arithmetic: radially
//! adjacent pairs on large rings cancel about eight digits in the cross
//! product, which plain `f64` on rounded coordinates cannot absorb.

use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use twofloat::TwoFloat;

use super::algebra::{cross_norm_sq, delta, triple_product, PairGeometry};
use crate::error::{Error, Result};
use crate::line_families::slope_k;
use crate::point_lattice::{ring_exponent, ring_point_at, ring_size, PlanarPoint, FIRST_RING};
use crate::rng;

/// Triple product and squared cross norm computed from the vectors in
/// double-double arithmetic. The pair is rotated so that `A1` lies on the x
/// axis (rotations about the z axis map the family to itself) and the signed
/// angle to `A2` comes from the integer indices.
pub fn direct_pair_values(a: &PlanarPoint, b: &PlanarPoint, l: f64) -> (f64, f64) {
    let big_m = a.m.max(b.m);
    let full = 6i64 << big_m;
    let mut steps = ((b.k as i64) << (big_m - b.m)) - ((a.k as i64) << (big_m - a.m));
    steps = steps.rem_euclid(full);
    if steps > full / 2 {
        steps -= full;
    }
    let half = PI * steps as f64 / (6i64 << big_m) as f64;
    let two = TwoFloat::from(2.0);
    let sh = TwoFloat::from(half.sin());
    let c = TwoFloat::from(1.0) - two * sh * sh;
    let s = two * sh * TwoFloat::from(half.cos());
    let k = TwoFloat::from(slope_k(l));
    let l = TwoFloat::from(l);
    let (d1, d2) = (TwoFloat::from(a.d as f64), TwoFloat::from(b.d as f64));
    let (h1, h2) = (k * d1 + l, k * d2 + l);
    // A1 = (d1, 0, 0), v1 = (0, -d1, h1); A2 = d2 (c, s, 0), v2 = (d2 s, -d2 c, h2).
    let (v2x, v2y) = (d2 * s, -(d2 * c));
    let w = [-d1 * h2 - h1 * v2y, h1 * v2x, d1 * v2x];
    let tp = (d2 * c - d1) * w[0] + d2 * s * w[1];
    let cn = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    (f64::from(tp), f64::from(cn))
}

fn random_ring_point(g: &mut ChaCha8Rng, d: u32) -> PlanarPoint {
    let count = ring_size(ring_exponent(d)) as u64;
    ring_point_at(d, 1 + rng::index(g, count) as u32).expect("index within ring")
}

/// `count` distinct pairs of ring points with radii in `32..=d_max`.
/// Every other pair is a close neighbour (adjacent ring, nearby angle).
pub fn random_ring_pairs(count: usize, d_max: u32, seed: u64) -> Result<Vec<(PlanarPoint, PlanarPoint)>> {
    if d_max < FIRST_RING + 1 {
        return Err(Error::RingTooSmall(d_max as u64));
    }
    let span = (d_max - FIRST_RING + 1) as u64;
    let mut g = rng::stream(seed, 0);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d1 = FIRST_RING + rng::index(&mut g, span) as u32;
        let a = random_ring_point(&mut g, d1);
        let b = if out.len() % 2 == 0 {
            let d2 = FIRST_RING + rng::index(&mut g, span) as u32;
            random_ring_point(&mut g, d2)
        } else {
            let d2 = (d1 + rng::index(&mut g, 3) as u32).saturating_sub(1).clamp(FIRST_RING, d_max);
            let n = ring_size(ring_exponent(d2));
            let near = (a.k as u64 * n as u64 / ring_size(a.m) as u64) as u32;
            let k = (near + n - 2 + rng::index(&mut g, 5) as u32) % n + 1;
            ring_point_at(d2, k)?
        };
        if a != b {
            out.push((a, b));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub pairs: usize,
    pub d_max: u32,
    pub seed: u64,
    #[serde(rename = "L")]
    pub l: f64,
    pub max_rel_triple: f64,
    pub max_rel_cross: f64,
    /// `|(tp^2 - cn) - delta| / max(tp^2, cn, 1)`.
    pub max_scaled_delta: f64,
    pub rel_tol: f64,
    pub delta_tol: f64,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.max_rel_triple <= self.rel_tol && self.max_rel_cross <= self.rel_tol && self.max_scaled_delta <= self.delta_tol
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn check_identities(pairs: &[(PlanarPoint, PlanarPoint)], l: f64, rel_tol: f64, delta_tol: f64) -> IdentityReport {
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for (a, b) in pairs {
        let geo = PairGeometry::from_points(a, b, l);
        let (tp, cn) = (triple_product(&geo), cross_norm_sq(&geo));
        let (dtp, dcn) = direct_pair_values(a, b, l);
        worst.0 = worst.0.max(rel(tp, dtp));
        worst.1 = worst.1.max(rel(cn, dcn));
        worst.2 = worst.2.max(((tp * tp - cn) - delta(&geo)).abs() / (tp * tp).max(cn).max(1.0));
    }
    IdentityReport {
        pairs: pairs.len(),
        d_max: pairs.iter().map(|(a, b)| a.d.max(b.d)).max().unwrap_or(0),
        seed: 0,
        l,
        max_rel_triple: worst.0,
        max_rel_cross: worst.1,
        max_scaled_delta: worst.2,
        rel_tol,
        delta_tol,
    }
}

/// Random-pair identity suite: `count` pairs with radii up to `d_max`.
pub fn identity_suite(count: usize, d_max: u32, seed: u64, l: f64, rel_tol: f64, delta_tol: f64) -> Result<IdentityReport> {
    let pairs = random_ring_pairs(count, d_max, seed)?;
    let mut rep = check_identities(&pairs, l, rel_tol, delta_tol);
    rep.d_max = d_max;
    rep.seed = seed;
    Ok(rep)
}
