//! Pairwise certification of a finite family: every pair of axes at least
//! `2 * radius` apart, and no two axes parallel.
//!
//! The pair triangle is split by rows across workers. Each row yields a
//! partial record and partials merge with an order-independent rule (min by
//! `(distance, i, j)`, listed pairs kept as the lexicographically smallest),
//! so the report does not depend on scheduling or worker count.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::line_families::{CylinderFamily, FamilyKind};
use crate::rng;
use crate::vec_geometry::{are_parallel, line_distance_with_norms, Line, DISTANCE_SLACK};

/// Default cap on pairs in exhaustive mode.
pub const DEFAULT_PAIR_BUDGET: u64 = 500_000_000;

/// Default cap on listed violations / parallel pairs; counts stay exact.
pub const DEFAULT_MAX_LISTED: usize = 100_000;

const SAMPLE_CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum Mode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Defaults to `2 * family.radius`.
    pub threshold: Option<f64>,
    pub slack: f64,
    pub mode: Mode,
    pub pair_budget: u64,
    pub force: bool,
    pub max_listed: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            threshold: None,
            slack: DISTANCE_SLACK,
            mode: Mode::Exhaustive,
            pair_budget: DEFAULT_PAIR_BUDGET,
            force: false,
            max_listed: DEFAULT_MAX_LISTED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArgMin {
    pub i: usize,
    pub j: usize,
    pub d1: u32,
    pub d2: u32,
    pub k1: u32,
    pub k2: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportConfig {
    pub threshold: f64,
    pub slack: f64,
    pub mode: &'static str,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub kind: FamilyKind,
    /// Largest ring radius among the base points, when they are ring points.
    #[serde(rename = "R")]
    pub truncation_r: Option<u32>,
    pub lines: usize,
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub min_distance: Option<f64>,
    pub argmin: Option<ArgMin>,
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    pub parallel_pairs: Vec<(usize, usize)>,
    pub parallel_count: u64,
    pub runtime_ms: u128,
    pub config: ReportConfig,
    /// Whether the exact algebraic certificate extends the result to the
    /// untruncated family (global kind with L = 7 only).
    pub exact_certificate: bool,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.violation_count == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report is always serializable")
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Scan {
    Distances,
    ParallelOnly,
}

#[derive(Debug, Default)]
struct Partial {
    pairs: u64,
    best: Option<(f64, usize, usize)>,
    violations: Vec<Violation>,
    violation_count: u64,
    parallel: Vec<(usize, usize)>,
    parallel_count: u64,
}

fn better(a: (f64, usize, usize), b: (f64, usize, usize)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && (a.1, a.2) < (b.1, b.2))
}

impl Partial {
    fn merge(mut self, o: Partial, cap: usize) -> Partial {
        self.pairs += o.pairs;
        self.best = match (self.best, o.best) {
            (Some(a), Some(b)) => Some(if better(b, a) { b } else { a }),
            (a, b) => a.or(b),
        };
        self.violation_count += o.violation_count;
        self.parallel_count += o.parallel_count;
        self.violations.extend(o.violations);
        self.violations.sort_by_key(|v| (v.i, v.j));
        self.violations.truncate(cap);
        self.parallel.extend(o.parallel);
        self.parallel.sort_unstable();
        self.parallel.truncate(cap);
        self
    }

    #[inline]
    fn record(&mut self, i: usize, j: usize, dist: f64, parallel: bool, limit: f64, scan: Scan, cap: usize) {
        self.pairs += 1;
        if parallel {
            self.parallel_count += 1;
            if self.parallel.len() < cap {
                self.parallel.push((i, j));
            }
        }
        if scan == Scan::Distances {
            if self.best.map_or(true, |b| better((dist, i, j), b)) {
                self.best = Some((dist, i, j));
            }
            if dist < limit {
                self.violation_count += 1;
                if self.violations.len() < cap {
                    self.violations.push(Violation { i, j, distance: dist });
                }
            }
        }
    }
}

struct Prepared<'a> {
    lines: &'a [Line],
    norms: Vec<f64>,
}

impl<'a> Prepared<'a> {
    fn new(lines: &'a [Line]) -> Self {
        Self {
            lines,
            norms: lines.iter().map(|l| l.dir.norm()).collect(),
        }
    }

    #[inline]
    fn pair(&self, i: usize, j: usize, scan: Scan) -> (f64, bool) {
        match scan {
            Scan::Distances => line_distance_with_norms(&self.lines[i], self.norms[i], &self.lines[j], self.norms[j]),
            Scan::ParallelOnly => (f64::NAN, are_parallel(&self.lines[i], &self.lines[j])),
        }
    }
}

fn exhaustive(prep: &Prepared, limit: f64, scan: Scan, cap: usize) -> Partial {
    let n = prep.lines.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut part = Partial::default();
            for j in i + 1..n {
                let (dist, par) = prep.pair(i, j, scan);
                part.record(i, j, dist, par, limit, scan, cap);
            }
            part
        })
        .reduce(Partial::default, |a, b| a.merge(b, cap))
}

fn sampled(prep: &Prepared, count: u64, seed: u64, limit: f64, scan: Scan, cap: usize) -> Partial {
    let n = prep.lines.len() as u64;
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut g = rng::stream(seed, c);
            let todo = SAMPLE_CHUNK.min(count - c * SAMPLE_CHUNK);
            let mut part = Partial::default();
            for _ in 0..todo {
                let a = rng::index(&mut g, n);
                let mut b = rng::index(&mut g, n - 1);
                if b >= a {
                    b += 1;
                }
                let (i, j) = (a.min(b) as usize, a.max(b) as usize);
                let (dist, par) = prep.pair(i, j, scan);
                part.record(i, j, dist, par, limit, scan, cap);
            }
            part
        })
        .reduce(Partial::default, |a, b| a.merge(b, cap))
}

fn truncation_r(family: &CylinderFamily) -> Option<u32> {
    if !family.base_points.is_empty() && family.base_points.iter().all(|p| p.is_ring_point()) {
        family.base_points.iter().map(|p| p.d).max()
    } else {
        None
    }
}

fn run(family: &CylinderFamily, opts: &VerifyOptions, scan: Scan) -> Result<VerificationReport> {
    if family.is_empty() {
        return Err(Error::InvalidArgument("family is empty".into()));
    }
    let start = Instant::now();
    let n = family.len() as u64;
    let total = n * (n - 1) / 2;
    let threshold = opts.threshold.unwrap_or(2.0 * family.radius);
    let limit = threshold - opts.slack;
    let prep = Prepared::new(&family.lines);
    let cap = opts.max_listed;

    let part = match opts.mode {
        Mode::Exhaustive => {
            if total > opts.pair_budget && !opts.force {
                return Err(Error::PairBudgetExceeded { pairs: total, budget: opts.pair_budget });
            }
            exhaustive(&prep, limit, scan, cap)
        }
        Mode::Sampled { count, seed } => {
            if n < 2 {
                Partial::default()
            } else {
                sampled(&prep, count, seed, limit, scan, cap)
            }
        }
    };

    let argmin = part.best.map(|(_, i, j)| {
        let (a, b) = (&family.base_points[i], &family.base_points[j]);
        ArgMin { i, j, d1: a.d, d2: b.d, k1: a.k, k2: b.k }
    });
    let (mode, seed) = match opts.mode {
        Mode::Exhaustive => ("exhaustive", None),
        Mode::Sampled { seed, .. } => ("sampled", Some(seed)),
    };
    Ok(VerificationReport {
        kind: family.kind,
        truncation_r: truncation_r(family),
        lines: family.len(),
        pairs_checked: part.pairs,
        exhaustive: opts.mode == Mode::Exhaustive,
        min_distance: part.best.map(|b| b.0),
        argmin,
        violations: part.violations,
        violation_count: part.violation_count,
        parallel_pairs: part.parallel,
        parallel_count: part.parallel_count,
        runtime_ms: start.elapsed().as_millis(),
        config: ReportConfig { threshold, slack: opts.slack, mode, seed },
        exact_certificate: family.exact_certificate_applies(),
    })
}

/// Checks pairwise axis distances against `threshold - slack`.
pub fn verify_packing(family: &CylinderFamily, opts: &VerifyOptions) -> Result<VerificationReport> {
    run(family, opts, Scan::Distances)
}

/// Lists every pair of parallel axes. Distances are not computed.
pub fn verify_nonparallel(family: &CylinderFamily, opts: &VerifyOptions) -> Result<VerificationReport> {
    run(family, opts, Scan::ParallelOnly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line_families::{global_family, local_family, perpendicular_family};
    use crate::point_lattice::{build_set, PlanarPoint};

    #[test]
    fn single_line_is_vacuous() {
        let f = global_family(&build_set(32).unwrap()[..1], 7.0, false).unwrap();
        let rep = verify_packing(&f, &VerifyOptions::default()).unwrap();
        assert_eq!(rep.pairs_checked, 0);
        assert!(rep.min_distance.is_none() && rep.is_valid());
    }

    #[test]
    fn perpendicular_matches_planar_minimum() {
        let f = perpendicular_family(&build_set(64).unwrap(), 0.5).unwrap();
        let rep = verify_packing(&f, &VerifyOptions::default()).unwrap();
        assert_eq!(rep.pairs_checked, 6528 * 6527 / 2);
        assert!(rep.is_valid());
        assert!((rep.min_distance.unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(rep.parallel_count, rep.pairs_checked);
        assert_eq!(rep.parallel_pairs.len(), DEFAULT_MAX_LISTED);
    }

    #[test]
    fn global_small_truncation() {
        let f = global_family(&build_set(40).unwrap(), 7.0, false).unwrap();
        let rep = verify_packing(&f, &VerifyOptions::default()).unwrap();
        assert!(rep.is_valid(), "{:?}", rep.violations.first());
        assert!((rep.min_distance.unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(rep.truncation_r, Some(40));
        assert_eq!(rep.parallel_count, 0);
        let a = rep.argmin.unwrap();
        assert_eq!(a.d2.abs_diff(a.d1), 1);
    }

    #[test]
    fn overlaps_are_reported() {
        let pts = [PlanarPoint::free(0.0, 0.0), PlanarPoint::free(1.0, 0.0), PlanarPoint::free(5.0, 0.0)];
        let f = perpendicular_family(&pts, 0.5).unwrap();
        let opts = VerifyOptions { threshold: Some(1.5), ..Default::default() };
        let rep = verify_packing(&f, &opts).unwrap();
        assert_eq!(rep.violation_count, 1);
        assert_eq!(rep.violations[0], Violation { i: 0, j: 1, distance: 1.0 });
        assert!(!rep.is_valid());
    }

    #[test]
    fn budget_is_enforced() {
        let f = global_family(&build_set(40).unwrap(), 7.0, false).unwrap();
        let opts = VerifyOptions { pair_budget: 10, ..Default::default() };
        assert!(matches!(verify_packing(&f, &opts), Err(Error::PairBudgetExceeded { .. })));
        let forced = VerifyOptions { force: true, ..opts };
        assert!(verify_packing(&f, &forced).is_ok());
    }

    #[test]
    fn sampled_mode_is_seeded() {
        let f = global_family(&build_set(50).unwrap(), 7.0, false).unwrap();
        let opts = VerifyOptions { mode: Mode::Sampled { count: 100_000, seed: 9 }, ..Default::default() };
        let a = verify_packing(&f, &opts).unwrap();
        let b = verify_packing(&f, &opts).unwrap();
        assert_eq!(a.pairs_checked, 100_000);
        assert_eq!((a.min_distance, a.argmin), (b.min_distance, b.argmin));
        assert!(a.is_valid());
    }

    #[test]
    fn nonparallel_checks() {
        let pts = build_set(40).unwrap();
        let g = global_family(&pts, 7.0, false).unwrap();
        assert_eq!(verify_nonparallel(&g, &VerifyOptions::default()).unwrap().parallel_count, 0);
        let three = [PlanarPoint::free(1.0, 0.0), PlanarPoint::free(0.0, 2.0), PlanarPoint::free(-2.0, -2.0)];
        let l = local_family(&three, 0.5, None).unwrap();
        assert_eq!(verify_nonparallel(&l, &VerifyOptions::default()).unwrap().parallel_count, 0);
        let p = perpendicular_family(&three, 0.5).unwrap();
        let rep = verify_nonparallel(&p, &VerifyOptions::default()).unwrap();
        assert_eq!(rep.parallel_pairs, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn json_schema_fields() {
        let f = global_family(&build_set(33).unwrap(), 7.0, false).unwrap();
        let v = verify_packing(&f, &VerifyOptions::default()).unwrap().to_json();
        for key in ["kind", "R", "pairs_checked", "min_distance", "argmin", "violations", "parallel_pairs", "runtime_ms", "config"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        for key in ["i", "j", "d1", "d2", "k1", "k2"] {
            assert!(v["argmin"].get(key).is_some());
        }
        assert_eq!(v["config"]["mode"], "exhaustive");
        assert_eq!(v["config"]["threshold"], 1.0);
    }
}
