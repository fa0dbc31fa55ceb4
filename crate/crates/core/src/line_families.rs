//! Axis families: vertical (parallel packing), locally tilted and globally
//! tilted. Every tilted axis through `A = (x, y, 0)` has a direction of the
//! form `<y, -x, h>`, i.e. it is the vertical line through `A` rotated about
//! the ray `OA`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point_lattice::{min_pair_distance_points, PlanarPoint};
use crate::vec_geometry::{Line, Vec3, DISTANCE_SLACK};

/// Slope constant used throughout the global construction.
pub const DEFAULT_L: f64 = 7.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Perpendicular,
    Local,
    Global,
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FamilyKind::Perpendicular => "perpendicular",
            FamilyKind::Local => "local",
            FamilyKind::Global => "global",
        })
    }
}

/// Construction constants; fields that do not apply to a kind are `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(rename = "L")]
    pub l: Option<f64>,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub r: Option<f64>,
    pub eps: Option<f64>,
    #[serde(rename = "T")]
    pub t: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CylinderFamily {
    pub lines: Vec<Line>,
    pub radius: f64,
    pub kind: FamilyKind,
    pub params: FamilyParams,
    pub base_points: Vec<PlanarPoint>,
    /// Set when the global construction was built from points outside the
    /// ring set. Distance guarantees do not apply.
    pub unsafe_override: bool,
}

impl CylinderFamily {
    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Largest radial distance of a base point.
    pub fn max_base_radius(&self) -> f64 {
        self.base_points.iter().map(PlanarPoint::radius).fold(0.0, f64::max)
    }

    /// True when the exact coefficient certificate (L = 7, K = 4 sqrt 3)
    /// covers this family's infinite extension.
    pub fn exact_certificate_applies(&self) -> bool {
        self.kind == FamilyKind::Global && self.params.l == Some(DEFAULT_L) && !self.unsafe_override
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FamilyExport::from(self)).expect("family export is always serializable")
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, &FamilyExport::from(self)).map_err(|e| Error::Io(e.to_string()))
    }
}

#[derive(Serialize)]
struct FamilyExport {
    kind: FamilyKind,
    radius: f64,
    params: FamilyParams,
    lines: Vec<LineExport>,
}

#[derive(Serialize)]
struct LineExport {
    base: [f64; 3],
    dir: [f64; 3],
    d: u32,
    m: u32,
    k: u32,
}

impl From<&CylinderFamily> for FamilyExport {
    fn from(f: &CylinderFamily) -> Self {
        let lines = f
            .lines
            .iter()
            .zip(&f.base_points)
            .map(|(l, p)| LineExport {
                base: l.base.to_array(),
                dir: l.dir.to_array(),
                d: p.d,
                m: p.m,
                k: p.k,
            })
            .collect();
        FamilyExport {
            kind: f.kind,
            radius: f.radius,
            params: f.params,
            lines,
        }
    }
}

/// `K = sqrt(L^2 - 1)`.
pub fn slope_k(l: f64) -> f64 {
    (l * l - 1.0).sqrt()
}

/// Tangent of the elevation of a global axis at base distance `d`: `K + L / d`.
pub fn beta(d: f64, l: f64) -> f64 {
    slope_k(l) + l / d
}

fn check_separation(points: &[PlanarPoint], min_sep: f64) -> Result<()> {
    if let Some((dist, i, j)) = min_pair_distance_points(points) {
        if dist < min_sep - DISTANCE_SLACK {
            return Err(Error::PointsTooClose {
                i,
                j,
                distance: dist,
                required: min_sep,
            });
        }
    }
    Ok(())
}

fn base(p: &PlanarPoint) -> Vec3 {
    Vec3::new(p.x, p.y, 0.0)
}

/// Vertical axes through every point.
pub fn perpendicular_family(points: &[PlanarPoint], radius: f64) -> Result<CylinderFamily> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    check_separation(points, 2.0 * radius)?;
    Ok(CylinderFamily {
        lines: points.iter().map(|p| Line::new(base(p), Vec3::Z)).collect(),
        radius,
        kind: FamilyKind::Perpendicular,
        params: FamilyParams {
            r: Some(radius),
            ..Default::default()
        },
        base_points: points.to_vec(),
        unsafe_override: false,
    })
}

/// Largest admissible tilt parameter `8 r^2 / R^4` for points within `D(R)`.
pub fn max_local_eps(r: f64, big_r: f64) -> f64 {
    8.0 * r * r / big_r.powi(4)
}

/// Axes `<y, -x, 1/eps>` with common radius `r (1 - eps)`. `R` is the largest
/// base-point distance; `eps = None` picks `8 r^2 / R^4`.
pub fn local_family(points: &[PlanarPoint], r: f64, eps: Option<f64>) -> Result<CylinderFamily> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("r must be positive, got {r}")));
    }
    if let Some(i) = points.iter().position(|p| p.x == 0.0 && p.y == 0.0) {
        return Err(Error::PointAtOrigin(i));
    }
    check_separation(points, 2.0 * r)?;
    let big_r = points.iter().map(PlanarPoint::radius).fold(0.0, f64::max);
    let max = max_local_eps(r, big_r);
    let eps = eps.unwrap_or(max);
    // eps < 1 keeps the shrunken radius positive.
    if !(eps > 0.0) || eps > max * (1.0 + 1e-12) || eps >= 1.0 {
        return Err(Error::EpsOutOfRange { eps, max: max.min(1.0) });
    }
    let t = 1.0 / eps;
    Ok(CylinderFamily {
        lines: points
            .iter()
            .map(|p| Line::new(base(p), Vec3::new(p.y, -p.x, t)))
            .collect(),
        radius: r * (1.0 - eps),
        kind: FamilyKind::Local,
        params: FamilyParams {
            r: Some(r),
            eps: Some(eps),
            t: Some(t),
            ..Default::default()
        },
        base_points: points.to_vec(),
        unsafe_override: false,
    })
}

/// Axes `<y, -x, K d + L>` with radius 1/2. Points must come from the ring
/// set unless `allow_unsafe` is set, in which case `d` is the Euclidean norm
/// and no distance guarantee holds.
pub fn global_family(points: &[PlanarPoint], l: f64, allow_unsafe: bool) -> Result<CylinderFamily> {
    if !(l >= 6.0) {
        return Err(Error::SlopeConstantTooSmall(l));
    }
    let k = slope_k(l);
    let mut lines = Vec::with_capacity(points.len());
    let mut off_set = false;
    for (i, p) in points.iter().enumerate() {
        let d = if p.is_ring_point() {
            p.d as f64
        } else if allow_unsafe {
            off_set = true;
            p.radius()
        } else {
            return Err(Error::NotRingPoint(i));
        };
        lines.push(Line::new(base(p), Vec3::new(p.y, -p.x, k * d + l)));
    }
    Ok(CylinderFamily {
        lines,
        radius: 0.5,
        kind: FamilyKind::Global,
        params: FamilyParams {
            l: Some(l),
            k: Some(k),
            ..Default::default()
        },
        base_points: points.to_vec(),
        unsafe_override: off_set,
    })
}
