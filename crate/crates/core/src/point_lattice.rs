//! The planar ring set: concentric circles of integer radius `d >= 32`,
//! each carrying `6 * 2^m` equally spaced points where `2^m <= d < 2^(m+1)`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radius of the innermost ring.
pub const FIRST_RING: u32 = 32;

/// A point of the ring set together with its integer provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarPoint {
    pub x: f64,
    pub y: f64,
    /// Radial distance from the origin (exact).
    pub d: u32,
    /// Ring exponent, `2^m <= d < 2^(m+1)`.
    pub m: u32,
    /// Angular index in `1..=6 * 2^m`; the angle is `k * theta`.
    pub k: u32,
}

impl PlanarPoint {
    /// A point without ring provenance (`d = m = k = 0`). Used for arbitrary
    /// planar configurations such as the local construction.
    pub fn free(x: f64, y: f64) -> Self {
        Self { x, y, d: 0, m: 0, k: 0 }
    }

    pub fn is_ring_point(&self) -> bool {
        self.d >= FIRST_RING && self.m == ring_exponent(self.d) && self.k >= 1 && self.k <= ring_size(self.m)
    }

    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, o: &PlanarPoint) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingParams {
    pub d: u32,
    pub m: u32,
    /// Angular step `pi / (3 * 2^m)`.
    pub theta: f64,
    pub count: u32,
}

/// Position of the highest set bit of `d`.
#[inline]
pub fn ring_exponent(d: u32) -> u32 {
    debug_assert!(d > 0);
    31 - d.leading_zeros()
}

#[inline]
pub fn ring_size(m: u32) -> u32 {
    6 << m
}

pub fn ring_params(d: u32) -> Result<RingParams> {
    if d < FIRST_RING {
        return Err(Error::RingTooSmall(d as u64));
    }
    let m = ring_exponent(d);
    Ok(RingParams {
        d,
        m,
        theta: PI / (3u64 << m) as f64,
        count: ring_size(m),
    })
}

/// Point `k` of ring `d`, angle reduced to `[0, 2 pi)` before evaluation.
fn ring_point(p: &RingParams, k: u32) -> PlanarPoint {
    let reduced = k % p.count;
    let angle = PI * reduced as f64 / (3u64 << p.m) as f64;
    let d = p.d as f64;
    PlanarPoint {
        x: d * angle.cos(),
        y: d * angle.sin(),
        d: p.d,
        m: p.m,
        k,
    }
}

/// Point `k` of ring `d`, `1 <= k <= 6 * 2^m`.
pub fn ring_point_at(d: u32, k: u32) -> Result<PlanarPoint> {
    let params = ring_params(d)?;
    if k == 0 || k > params.count {
        return Err(Error::InvalidArgument(format!("ring {d} has no point {k}")));
    }
    Ok(ring_point(&params, k))
}

/// `count` free points, uniform in the disk `D(disk_radius)` and pairwise at
/// least `min_sep` apart, by seeded dart throwing.
pub fn random_separated_points(count: usize, disk_radius: f64, min_sep: f64, seed: u64) -> Result<Vec<PlanarPoint>> {
    let mut g = crate::rng::stream(seed, 0);
    let mut out: Vec<PlanarPoint> = Vec::with_capacity(count);
    let max_tries = 1000 * (count as u64 + 1);
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        if tries > max_tries {
            return Err(Error::InvalidArgument(format!(
                "could not place {count} points {min_sep} apart in D({disk_radius})"
            )));
        }
        let x = crate::rng::uniform(&mut g, -disk_radius, disk_radius);
        let y = crate::rng::uniform(&mut g, -disk_radius, disk_radius);
        let p = PlanarPoint::free(x, y);
        if p.radius() > disk_radius || out.iter().any(|q| q.distance(&p) < min_sep) {
            continue;
        }
        out.push(p);
    }
    Ok(out)
}

/// All points of ring `d`, ordered by `k = 1..=6 * 2^m`.
pub fn ring(d: u32) -> Result<(RingParams, Vec<PlanarPoint>)> {
    let params = ring_params(d)?;
    let points = (1..=params.count).map(|k| ring_point(&params, k)).collect();
    Ok((params, points))
}

/// Union of rings `32..=rmax`, sorted by `(d, k)`.
pub fn build_set(rmax: u32) -> Result<Vec<PlanarPoint>> {
    if rmax < FIRST_RING {
        return Err(Error::RingTooSmall(rmax as u64));
    }
    let mut out = Vec::with_capacity(set_size(rmax) as usize);
    for d in FIRST_RING..=rmax {
        let params = ring_params(d)?;
        out.extend((1..=params.count).map(|k| ring_point(&params, k)));
    }
    Ok(out)
}

/// `|A ∩ D(rmax)|` from ring sizes alone.
pub fn set_size(rmax: u32) -> u64 {
    (FIRST_RING..=rmax).map(|d| ring_size(ring_exponent(d)) as u64).sum()
}

/// Closed-form cardinality `2^(2m+1) + 6 * 2^m - 2^11` of the set within `D(2^m)`.
pub fn closed_form_count(m: u32) -> Result<u64> {
    if m < 5 {
        return Err(Error::ExponentTooSmall(m));
    }
    Ok((1u64 << (2 * m + 1)) + 6 * (1u64 << m) - (1u64 << 11))
}

/// `|A ∩ D(rmax)| / (pi rmax^2)`.
pub fn point_density(rmax: u32) -> Result<f64> {
    if rmax < FIRST_RING {
        return Err(Error::RingTooSmall(rmax as u64));
    }
    let r = rmax as f64;
    Ok(set_size(rmax) as f64 / (PI * r * r))
}

/// Angle between two ring points as an exact multiple of `pi / (3 * 2^M)`,
/// reduced to `[0, pi]`. Returns `(steps, M)`.
pub fn angular_steps(a: &PlanarPoint, b: &PlanarPoint) -> (u64, u32) {
    let mm = a.m.max(b.m);
    let na = (a.k as u64 % ring_size(a.m) as u64) << (mm - a.m);
    let nb = (b.k as u64 % ring_size(b.m) as u64) << (mm - b.m);
    let full = 6u64 << mm;
    let diff = na.abs_diff(nb) % full;
    (diff.min(full - diff), mm)
}

/// Minimum distance over all pairs, using a uniform grid hash.
///
/// The grid starts at cell size 1. Comparing each point against its own and the
/// eight neighboring cells finds every pair closer than the cell size, so if
/// such a pair exists the result is exact; otherwise the cell size doubles.
pub fn min_pair_distance_points(points: &[PlanarPoint]) -> Option<(f64, usize, usize)> {
    if points.len() < 2 {
        return None;
    }
    let mut cell = 1.0f64;
    loop {
        if let Some(best) = grid_min(points, cell) {
            if best.0 <= cell {
                return Some(best);
            }
        }
        cell *= 2.0;
    }
}

fn grid_min(points: &[PlanarPoint], cell: f64) -> Option<(f64, usize, usize)> {
    let key = |p: &PlanarPoint| ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        grid.entry(key(p)).or_default().push(i);
    }
    let mut best: Option<(f64, usize, usize)> = None;
    for (i, p) in points.iter().enumerate() {
        let (cx, cy) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(bucket) = grid.get(&(cx + dx, cy + dy)) else {
                    continue;
                };
                for &j in bucket {
                    if j <= i {
                        continue;
                    }
                    let dist = p.distance(&points[j]);
                    let better = match best {
                        None => true,
                        Some((b, bi, bj)) => dist < b || (dist == b && (i, j) < (bi, bj)),
                    };
                    if better {
                        best = Some((dist, i, j));
                    }
                }
            }
        }
    }
    best
}

/// CSV dump with columns `d,m,k,x,y`.
pub fn write_points_csv<W: Write>(points: &[PlanarPoint], mut out: W) -> Result<()> {
    writeln!(out, "d,m,k,x,y")?;
    for p in points {
        writeln!(out, "{},{},{},{},{}", p.d, p.m, p.k, p.x, p.y)?;
    }
    Ok(())
}
