//! Vectors and lines in 3-space, with the skew-line distance formula.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Relative tolerance under which two directions count as parallel.
pub const PARALLEL_TOL: f64 = 1e-12;

/// Absolute slack used when comparing a computed distance against a bound.
pub const DISTANCE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Vec3) -> Vec3 {
        cross(self, o)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Length of the projection onto the xy plane.
    #[inline]
    pub fn horizontal_norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Right-handed cross product.
#[inline]
pub fn cross(u: Vec3, v: Vec3) -> Vec3 {
    Vec3::new(
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        u.x * v.y - u.y * v.x,
    )
}

/// A line through `base` with direction `dir`. The direction is kept exactly
/// as constructed, never normalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub base: Vec3,
    pub dir: Vec3,
}

impl Line {
    pub fn new(base: Vec3, dir: Vec3) -> Self {
        debug_assert!(dir.norm_sq() > 0.0, "line direction must be nonzero");
        Self { base, dir }
    }

    /// Euclidean distance from `p` to the line.
    pub fn distance_to_point(&self, p: Vec3) -> f64 {
        let w = p - self.base;
        cross(w, self.dir).norm() / self.dir.norm()
    }
}

/// Shortest distance between two lines.
///
/// Skew pairs use `|A1A2 . (v1 x v2)| / |v1 x v2|`. Pairs that are parallel
/// under [`PARALLEL_TOL`] fall back to `|A1A2 x v1| / |v1|`, so identical
/// lines yield 0.
pub fn line_distance(l1: &Line, l2: &Line) -> f64 {
    line_distance_with_norms(l1, l1.dir.norm(), l2, l2.dir.norm()).0
}

/// [`line_distance`] with the direction norms supplied by the caller. The
/// flag reports whether the parallel branch was taken.
#[inline]
pub fn line_distance_with_norms(l1: &Line, norm1: f64, l2: &Line, norm2: f64) -> (f64, bool) {
    let n = cross(l1.dir, l2.dir);
    let n_norm = n.norm();
    let w = l2.base - l1.base;
    if n_norm > PARALLEL_TOL * norm1 * norm2 {
        (w.dot(n).abs() / n_norm, false)
    } else {
        (cross(w, l1.dir).norm() / norm1, true)
    }
}

/// Angle between the line and the xy plane, in `[0, pi/2]`.
pub fn elevation_angle(l: &Line) -> f64 {
    let h = l.dir.horizontal_norm();
    if h == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    (l.dir.z.abs() / h).atan()
}

/// Parallel test `|v1 x v2| <= tol |v1| |v2|`.
pub fn are_parallel_with(l1: &Line, l2: &Line, tol: f64) -> bool {
    cross(l1.dir, l2.dir).norm() <= tol * l1.dir.norm() * l2.dir.norm()
}

pub fn are_parallel(l1: &Line, l2: &Line) -> bool {
    are_parallel_with(l1, l2, PARALLEL_TOL)
}
