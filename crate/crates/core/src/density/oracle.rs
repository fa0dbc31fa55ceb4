//! Deterministic volume of a vertical cylinder inside a ball, by nested
//! adaptive Simpson quadrature of the ball's chord length over the cylinder's
//! cross-section disk.

use std::collections::HashMap;

use crate::line_families::{CylinderFamily, FamilyKind};
use crate::error::{Error, Result};
use super::estimate::ball_volume;

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + refine(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// `Vol(C ∩ B(R))` for the vertical cylinder of radius `r` whose axis meets
/// the plane at distance `d` from the origin:
/// the integral of `2 sqrt(max(0, R^2 - x^2 - y^2))` over the disk.
pub fn vertical_cylinder_volume(d: f64, r: f64, big_r: f64) -> f64 {
    if d - r >= big_r {
        return 0.0;
    }
    let tol = 1e-10 * r * r * big_r;
    let inner = |x: f64| {
        let half = (r * r - (x - d) * (x - d)).max(0.0).sqrt();
        if half == 0.0 {
            return 0.0;
        }
        // y = half * sin(u) removes the square-root endpoints of the disk.
        let g = |u: f64| {
            let y = half * u.sin();
            2.0 * (big_r * big_r - x * x - y * y).max(0.0).sqrt() * half * u.cos()
        };
        simpson(&g, -std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, tol / r)
    };
    // x = d + r sin(v), same reason.
    let outer = |v: f64| inner(d + r * v.sin()) * r * v.cos();
    simpson(&outer, -std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, tol)
}

/// Exact-up-to-quadrature local density of a perpendicular family.
pub fn perpendicular_density_oracle(family: &CylinderFamily, big_r: f64) -> Result<f64> {
    if family.kind != FamilyKind::Perpendicular {
        return Err(Error::InvalidArgument("the quadrature oracle only covers perpendicular families".into()));
    }
    let mut cache: HashMap<u64, f64> = HashMap::new();
    let mut total = 0.0;
    for p in &family.base_points {
        let d = if p.is_ring_point() { p.d as f64 } else { p.radius() };
        total += *cache
            .entry(d.to_bits())
            .or_insert_with(|| vertical_cylinder_volume(d, family.radius, big_r));
    }
    Ok(total / ball_volume(big_r))
}
