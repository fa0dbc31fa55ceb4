//! Numeric checks of the supporting inequalities: the cosine bound, the
//! lower bound on `1 - c` at minimal angular gaps, and the tilted-line
//! distance bound for the local construction.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::line_families::slope_k;
use crate::point_lattice::{min_pair_distance_points, ring_params, PlanarPoint};
use crate::vec_geometry::{cross, line_distance, Line, Vec3, DISTANCE_SLACK};

/// Threshold the cosine function must clear on `[32, inf)`.
pub const COS_LEMMA_BOUND: f64 = 1.03;

/// `phi(x) = 2 x^4 / (x + 1)^2 * (1 - cos(pi / 3x))`, with `1 - cos` evaluated
/// as `2 sin^2` to survive large `x`.
pub fn phi(x: f64) -> f64 {
    let s = (PI / (6.0 * x)).sin();
    2.0 * x.powi(4) / (x + 1.0).powi(2) * 2.0 * s * s
}

/// `count` points spaced geometrically from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && lo > 0.0 && hi > lo);
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    let mut g: Vec<f64> = (0..count).map(|i| lo * (ratio * i as f64).exp()).collect();
    g[count - 1] = hi;
    g
}

#[derive(Debug, Clone, Serialize)]
pub struct CosLemmaReport {
    pub grid_points: usize,
    pub phi_first: f64,
    pub phi_last: f64,
    pub min_phi: f64,
    pub limit: f64,
    pub above_bound: bool,
    pub nondecreasing: bool,
    /// First grid point where either property fails.
    pub first_failure: Option<f64>,
}

impl CosLemmaReport {
    pub fn passed(&self) -> bool {
        self.above_bound && self.nondecreasing
    }
}

pub fn check_cos_lemma(grid: &[f64]) -> Result<CosLemmaReport> {
    if grid.is_empty() || grid.iter().any(|&x| !(x >= 32.0)) {
        return Err(Error::InvalidArgument("cosine lemma grid must be nonempty and within [32, inf)".into()));
    }
    let values: Vec<f64> = grid.iter().map(|&x| phi(x)).collect();
    let mut above = true;
    let mut mono = true;
    let mut first_failure = None;
    for i in 0..grid.len() {
        let ok_bound = values[i] > COS_LEMMA_BOUND;
        let ok_mono = i == 0 || values[i] >= values[i - 1];
        above &= ok_bound;
        mono &= ok_mono;
        if (!ok_bound || !ok_mono) && first_failure.is_none() {
            first_failure = Some(grid[i]);
        }
    }
    Ok(CosLemmaReport {
        grid_points: grid.len(),
        phi_first: values[0],
        phi_last: *values.last().unwrap(),
        min_phi: values.iter().copied().fold(f64::INFINITY, f64::min),
        limit: PI * PI / 9.0,
        above_bound: above,
        nondecreasing: mono,
        first_failure,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapRow {
    pub d2: u32,
    pub one_minus_c: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapBoundReport {
    pub l: f64,
    pub rings_checked: usize,
    /// Smallest ratio `(1 - c) / bound` seen.
    pub min_ratio: f64,
    pub violations: Vec<GapRow>,
}

impl GapBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Right-hand side `(L^2 / K^2) (d2 + 1)^2 / (2 d2^4)`.
pub fn gap_bound(d2: f64, l: f64) -> f64 {
    let k = slope_k(l);
    l * l / (k * k) * (d2 + 1.0).powi(2) / (2.0 * d2.powi(4))
}

/// For each ring `d2`, checks `1 - cos(pi / (3 * 2^m)) >= gap_bound(d2)`.
/// Any pair with `d1 <= d2` and distinct directions is at least this far
/// apart in angle, since ring `d1` uses a coarser subdivision.
pub fn check_one_minus_c_bound(rings: impl IntoIterator<Item = u32>, l: f64) -> Result<GapBoundReport> {
    let mut rows = 0;
    let mut min_ratio = f64::INFINITY;
    let mut violations = Vec::new();
    for d2 in rings {
        let p = ring_params(d2)?;
        let s = (p.theta / 2.0).sin();
        let lhs = 2.0 * s * s;
        let rhs = gap_bound(d2 as f64, l);
        rows += 1;
        min_ratio = min_ratio.min(lhs / rhs);
        if lhs < rhs {
            violations.push(GapRow { d2, one_minus_c: lhs, bound: rhs });
        }
    }
    Ok(GapBoundReport { l, rings_checked: rows, min_ratio, violations })
}

/// The same inequality on explicit pairs (`one_minus_c`, `d1`, `d2`).
pub fn check_one_minus_c_pairs(pairs: &[super::PairGeometry]) -> Vec<usize> {
    pairs
        .iter()
        .enumerate()
        .filter(|(_, p)| p.one_minus_c > 0.0)
        .filter(|(_, p)| {
            let d2 = p.d1.max(p.d2) as f64;
            p.one_minus_c < gap_bound(d2, p.l)
        })
        .map(|(i, _)| i)
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Report {
    pub points: usize,
    pub r: f64,
    pub t: f64,
    pub big_r: f64,
    pub pairs: usize,
    /// `2 r (1 - 1/T)`.
    pub bound: f64,
    pub min_distance: Option<f64>,
    pub max_triple_rel_err: f64,
    pub max_cross_rel_err: f64,
    pub identity_tol: f64,
    pub violations: Vec<(usize, usize, f64)>,
}

impl Lemma1Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
            && self.max_triple_rel_err <= self.identity_tol
            && self.max_cross_rel_err <= self.identity_tol
    }
}

fn rel_err(closed: f64, direct: f64) -> f64 {
    (closed - direct).abs() / closed.abs().max(direct.abs()).max(f64::MIN_POSITIVE)
}

/// Checks the closed forms `T |A1A2|^2` and `T^2 |A1A2|^2 + (1 - c^2) d1^2 d2^2`
/// against direct vector computation, and the distance bound `2 r (1 - 1/T)`,
/// for every pair of axes `<y, -x, T>`.
pub fn lemma1_certificate(points: &[PlanarPoint], r: f64, t: f64) -> Result<Lemma1Report> {
    if !(r > 0.0) || !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("need r > 0 and T > 0 (r = {r}, T = {t})")));
    }
    if let Some(i) = points.iter().position(|p| p.x == 0.0 && p.y == 0.0) {
        return Err(Error::PointAtOrigin(i));
    }
    let big_r = points.iter().map(PlanarPoint::radius).fold(0.0, f64::max);
    if 8.0 * r * r * t < big_r.powi(4) * (1.0 - 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "8 r^2 T = {} is below R^4 = {}",
            8.0 * r * r * t,
            big_r.powi(4)
        )));
    }
    if let Some((dist, i, j)) = min_pair_distance_points(points) {
        if dist < 2.0 * r - DISTANCE_SLACK {
            return Err(Error::PointsTooClose { i, j, distance: dist, required: 2.0 * r });
        }
    }
    let lines: Vec<Line> = points
        .iter()
        .map(|p| Line::new(Vec3::new(p.x, p.y, 0.0), Vec3::new(p.y, -p.x, t)))
        .collect();
    let bound = 2.0 * r * (1.0 - 1.0 / t);
    let mut report = Lemma1Report {
        points: points.len(),
        r,
        t,
        big_r,
        pairs: 0,
        bound,
        min_distance: None,
        max_triple_rel_err: 0.0,
        max_cross_rel_err: 0.0,
        identity_tol: 1e-9,
        violations: Vec::new(),
    };
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let (a, b) = (&points[i], &points[j]);
            let (d1, d2) = (a.radius(), b.radius());
            let c = (a.x * b.x + a.y * b.y) / (d1 * d2);
            let sep2 = d1 * d1 + d2 * d2 - 2.0 * c * d1 * d2;
            let triple_closed = t * sep2;
            let cross_closed = t * t * sep2 + (1.0 - c * c) * d1 * d1 * d2 * d2;

            let n = cross(lines[i].dir, lines[j].dir);
            let w = lines[j].base - lines[i].base;
            report.max_triple_rel_err = report.max_triple_rel_err.max(rel_err(triple_closed, w.dot(n)));
            report.max_cross_rel_err = report.max_cross_rel_err.max(rel_err(cross_closed, n.norm_sq()));

            let dist = line_distance(&lines[i], &lines[j]);
            report.pairs += 1;
            report.min_distance = Some(report.min_distance.map_or(dist, |m: f64| m.min(dist)));
            if dist < bound - DISTANCE_SLACK {
                report.violations.push((i, j, dist));
            }
        }
    }
    Ok(report)
}
