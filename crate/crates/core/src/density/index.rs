//! Candidate lookup for point-in-union-of-cylinders queries inside a ball.
//!
//! Axes of the form `<y, -x, h>` through `A = d (cos a, sin a, 0)` cross the
//! plane at height `z` at polar radius `sqrt(d^2 + (z s)^2)` and angle
//! `a - atan2(z s, d)`, where `s` is the signed horizontal drift per unit
//! height. When the base points are complete rings and `|s|` grows with `d`,
//! the crossing radius is monotone in `d`, so a query only binary-searches the
//! rings and then inspects a small angular window. Anything else falls back to
//! a uniform grid over the `z = 0` crossings.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::line_families::CylinderFamily;
use crate::point_lattice::ring_size;
use crate::vec_geometry::Vec3;

/// Axis with a unit direction, ready for exact membership tests.
#[derive(Debug, Clone, Copy)]
pub(crate) struct UnitAxis {
    pub base: Vec3,
    pub unit: Vec3,
}

impl UnitAxis {
    fn new(base: Vec3, dir: Vec3) -> Self {
        let n = dir.norm();
        Self { base, unit: dir * (1.0 / n) }
    }

    #[inline]
    pub fn dist_sq(&self, p: Vec3) -> f64 {
        let w = p - self.base;
        let t = w.dot(self.unit);
        (w.norm_sq() - t * t).max(0.0)
    }
}

#[derive(Debug, Clone)]
struct RingBucket {
    d: f64,
    /// Signed drift; identical across the ring.
    s: f64,
    s_sq: f64,
    theta: f64,
    count: u32,
    /// Index of the line with `k = 1`; lines of the ring are contiguous.
    start: usize,
    reach: f64,
}

#[derive(Debug, Clone)]
enum Lookup {
    Empty,
    Rings { buckets: Vec<RingBucket>, max_reach: f64 },
    Grid { cell: f64, cells: HashMap<(i64, i64), Vec<u32>>, crossings: Vec<(f64, f64, f64)>, max_drift: f64, max_reach: f64 },
}

#[derive(Debug, Clone)]
pub(crate) struct CylinderIndex {
    pub axes: Vec<UnitAxis>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub radius: f64,
    r_sq: f64,
    lookup: Lookup,
}

impl CylinderIndex {
    /// `ball_radius` bounds the heights that will be queried.
    pub fn new(family: &CylinderFamily, ball_radius: f64) -> Self {
        let axes: Vec<UnitAxis> = family.lines.iter().map(|l| UnitAxis::new(l.base, l.dir)).collect();
        let radius = family.radius;
        let lookup = if axes.is_empty() {
            Lookup::Empty
        } else {
            ring_lookup(family).unwrap_or_else(|| grid_lookup(family, ball_radius))
        };
        Self { axes, radius, r_sq: radius * radius, lookup }
    }

    #[cfg(test)]
    pub fn uses_rings(&self) -> bool {
        matches!(self.lookup, Lookup::Rings { .. })
    }

    /// Whether `p` lies in at least one cylinder.
    pub fn covers(&self, p: Vec3) -> bool {
        let mut hit = false;
        self.for_each_candidate(p, |i| {
            if self.axes[i].dist_sq(p) <= self.r_sq {
                hit = true;
                false
            } else {
                true
            }
        });
        hit
    }

    /// Number of cylinders containing `p`.
    pub fn multiplicity(&self, p: Vec3) -> u32 {
        let mut n = 0;
        self.for_each_candidate(p, |i| {
            if self.axes[i].dist_sq(p) <= self.r_sq {
                n += 1;
            }
            true
        });
        n
    }

    /// Calls `f` on every candidate line index until it returns `false`.
    /// Every cylinder containing `p` is visited exactly once.
    fn for_each_candidate(&self, p: Vec3, mut f: impl FnMut(usize) -> bool) {
        match &self.lookup {
            Lookup::Empty => {}
            Lookup::Rings { buckets, max_reach } => {
                let rho = p.x.hypot(p.y);
                let z = p.z;
                let z_sq = z * z;
                let cross_r = |b: &RingBucket| (b.d * b.d + z_sq * b.s_sq).sqrt();
                let lo = rho - max_reach;
                let first = buckets.partition_point(|b| cross_r(b) < lo);
                let phi = p.y.atan2(p.x);
                for b in &buckets[first..] {
                    let cr = cross_r(b);
                    if cr > rho + max_reach {
                        break;
                    }
                    if (cr - rho).abs() > b.reach {
                        continue;
                    }
                    // |P - Q|^2 >= 4 rho cr sin^2(angle / 2)
                    let denom = 2.0 * (rho * cr).sqrt();
                    let window = if denom <= b.reach { PI } else { 2.0 * (b.reach / denom).asin() };
                    let center = phi + (z * b.s).atan2(b.d);
                    let kmin = ((center - window) / b.theta).floor() as i64 - 1;
                    let kmax = ((center + window) / b.theta).ceil() as i64 + 1;
                    let count = b.count as i64;
                    let span = (kmax - kmin + 1).min(count);
                    for k in kmin..kmin + span {
                        let pos = (k - 1).rem_euclid(count) as usize;
                        if !f(b.start + pos) {
                            return;
                        }
                    }
                }
            }
            Lookup::Grid { cell, cells, crossings, max_drift, max_reach } => {
                let reach = p.z.abs() * max_drift + max_reach;
                let (x0, x1) = (((p.x - reach) / cell).floor() as i64, ((p.x + reach) / cell).floor() as i64);
                let (y0, y1) = (((p.y - reach) / cell).floor() as i64, ((p.y + reach) / cell).floor() as i64);
                for cx in x0..=x1 {
                    for cy in y0..=y1 {
                        let Some(bucket) = cells.get(&(cx, cy)) else { continue };
                        for &i in bucket {
                            let (qx, qy, _) = crossings[i as usize];
                            if (qx - p.x).hypot(qy - p.y) > reach {
                                continue;
                            }
                            if !f(i as usize) {
                                return;
                            }
                        }
                    }
                }
            }
        }
    }
}

fn ring_lookup(family: &CylinderFamily) -> Option<Lookup> {
    let pts = &family.base_points;
    let mut buckets = Vec::new();
    let mut i = 0;
    while i < pts.len() {
        let p = &pts[i];
        if !p.is_ring_point() || p.k != 1 {
            return None;
        }
        let count = ring_size(p.m);
        let end = i + count as usize;
        if end > pts.len() {
            return None;
        }
        let d = p.d as f64;
        let mut s_ring = None;
        for (j, q) in pts[i..end].iter().enumerate() {
            if q.d != p.d || q.k != j as u32 + 1 {
                return None;
            }
            let line = &family.lines[i + j];
            if line.base != Vec3::new(q.x, q.y, 0.0) || line.dir.z == 0.0 {
                return None;
            }
            // Horizontal part must be tangential: <y, -x> scaled.
            let h = line.dir;
            let radial = (h.x * q.x + h.y * q.y) / d;
            let tangential = (h.x * q.y - h.y * q.x) / d;
            if radial.abs() > 1e-12 * h.norm() {
                return None;
            }
            let s = tangential / h.z;
            match s_ring {
                None => s_ring = Some(s),
                Some(s0) if (s - s0).abs() <= 1e-12 * s0.abs().max(1e-300) => {}
                Some(_) => return None,
            }
        }
        let s = s_ring.unwrap_or(0.0);
        buckets.push(RingBucket {
            d,
            s,
            s_sq: s * s,
            theta: PI / (3u64 << p.m) as f64,
            count,
            start: i,
            reach: family.radius * (1.0 + s * s).sqrt() * (1.0 + 1e-12) + 1e-12,
        });
        i = end;
    }
    if buckets.windows(2).any(|w| w[1].d <= w[0].d || w[1].s.abs() < w[0].s.abs()) {
        return None;
    }
    let max_reach = buckets.iter().map(|b| b.reach).fold(0.0, f64::max);
    Some(Lookup::Rings { buckets, max_reach })
}

fn grid_lookup(family: &CylinderFamily, ball_radius: f64) -> Lookup {
    let mut crossings = Vec::with_capacity(family.len());
    let mut max_drift: f64 = 0.0;
    for l in &family.lines {
        // Horizontal axes are not produced by any construction; treat them as
        // reaching everywhere.
        let (qx, qy, drift) = if l.dir.z == 0.0 {
            (0.0, 0.0, f64::INFINITY)
        } else {
            let t = -l.base.z / l.dir.z;
            (l.base.x + t * l.dir.x, l.base.y + t * l.dir.y, l.dir.horizontal_norm() / l.dir.z.abs())
        };
        max_drift = max_drift.max(drift);
        crossings.push((qx, qy, drift));
    }
    let max_reach = family.radius * (1.0 + max_drift * max_drift).sqrt() * (1.0 + 1e-12) + 1e-12;
    let cell = if max_drift.is_finite() {
        (ball_radius * max_drift + max_reach).max(1.0)
    } else {
        f64::INFINITY
    };
    let mut cells: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
    for (i, &(qx, qy, _)) in crossings.iter().enumerate() {
        let key = if cell.is_finite() { ((qx / cell).floor() as i64, (qy / cell).floor() as i64) } else { (0, 0) };
        cells.entry(key).or_default().push(i as u32);
    }
    Lookup::Grid { cell, cells, crossings, max_drift, max_reach }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line_families::{global_family, local_family, perpendicular_family};
    use crate::point_lattice::{build_set, PlanarPoint};
    use crate::rng;

    fn brute_multiplicity(idx: &CylinderIndex, p: Vec3) -> u32 {
        idx.axes.iter().filter(|a| a.dist_sq(p) <= idx.radius * idx.radius).count() as u32
    }

    fn agree(family: &CylinderFamily, ball: f64, expect_rings: bool, seed: u64) {
        let idx = CylinderIndex::new(family, ball);
        assert_eq!(idx.uses_rings(), expect_rings);
        let mut g = rng::stream(seed, 0);
        let mut hits = 0;
        let mut tried = 0;
        while tried < 4000 {
            let p = Vec3::new(
                rng::uniform(&mut g, -ball, ball),
                rng::uniform(&mut g, -ball, ball),
                rng::uniform(&mut g, -ball, ball),
            );
            if p.norm() > ball {
                continue;
            }
            tried += 1;
            let brute = brute_multiplicity(&idx, p);
            assert_eq!(idx.multiplicity(p), brute, "at {p:?}");
            assert_eq!(idx.covers(p), brute > 0);
            hits += (brute > 0) as u32;
        }
        assert!(hits > 100, "too few hits ({hits}) to exercise the index");
    }

    #[test]
    fn ring_index_matches_brute_force() {
        let pts = build_set(80).unwrap();
        agree(&global_family(&pts, 7.0, false).unwrap(), 80.0, true, 1);
        agree(&perpendicular_family(&pts, 0.5).unwrap(), 80.0, true, 2);
        agree(&local_family(&pts, 0.5, None).unwrap(), 80.0, true, 3);
    }

    #[test]
    fn ring_index_near_surface_points() {
        // Points right on cylinder surfaces around the first ring.
        let pts = build_set(40).unwrap();
        let f = global_family(&pts, 7.0, false).unwrap();
        let idx = CylinderIndex::new(&f, 40.0);
        for (i, l) in f.lines.iter().enumerate().step_by(7) {
            let u = l.dir * (1.0 / l.dir.norm());
            let e = Vec3::new(pts[i].x, pts[i].y, 0.0) * (1.0 / pts[i].d as f64);
            for t in [-20.0, 0.0, 13.5] {
                let p = l.base + u * t + e * 0.4999;
                assert!(idx.covers(p));
            }
        }
    }

    #[test]
    fn grid_fallback_for_partial_rings_and_free_points() {
        let pts = build_set(60).unwrap();
        let partial: Vec<PlanarPoint> = pts.iter().copied().step_by(3).collect();
        agree(&global_family(&partial, 7.0, false).unwrap(), 60.0, false, 4);
        agree(&perpendicular_family(&partial, 0.5).unwrap(), 60.0, false, 5);
    }

    #[test]
    fn empty_index_covers_nothing() {
        let f = perpendicular_family(&[], 0.5).unwrap();
        let idx = CylinderIndex::new(&f, 10.0);
        assert!(!idx.covers(Vec3::ZERO));
    }
}
