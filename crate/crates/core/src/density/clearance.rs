//! Free space along the vertical axis.

use std::io::Write;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::line_families::CylinderFamily;
use crate::vec_geometry::Vec3;

/// Distance from a point to the nearest cylinder surface, or no cylinder at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Clearance {
    Finite(f64),
    Unbounded,
}

impl Serialize for Clearance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Clearance::Finite(v) => s.serialize_f64(*v),
            Clearance::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl std::fmt::Display for Clearance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Clearance::Finite(v) => write!(f, "{v}"),
            Clearance::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClearanceProfile {
    pub z_values: Vec<f64>,
    pub clearance: Vec<Clearance>,
    /// Radius of the largest sphere centered on the axis that avoids every
    /// cylinder, over the sampled heights.
    pub max_clearance: Clearance,
}

impl ClearanceProfile {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "z,clearance")?;
        for (z, c) in self.z_values.iter().zip(&self.clearance) {
            writeln!(out, "{z},{c}")?;
        }
        Ok(())
    }
}

/// `clearance(z) = max(0, min_i dist((0, 0, z), axis_i) - radius)` on
/// `steps` evenly spaced heights in `[0, z_max]`.
pub fn axis_clearance(family: &CylinderFamily, z_max: f64, steps: usize) -> Result<ClearanceProfile> {
    if !(z_max > 0.0) || steps == 0 {
        return Err(Error::InvalidArgument("need z_max > 0 and at least one step".into()));
    }
    let z_values: Vec<f64> = if steps == 1 {
        vec![0.0]
    } else {
        (0..steps).map(|i| z_max * i as f64 / (steps - 1) as f64).collect()
    };
    let clearance: Vec<Clearance> = z_values
        .iter()
        .map(|&z| {
            let p = Vec3::new(0.0, 0.0, z);
            family
                .lines
                .iter()
                .map(|l| l.distance_to_point(p))
                .reduce(f64::min)
                .map_or(Clearance::Unbounded, |d| Clearance::Finite((d - family.radius).max(0.0)))
        })
        .collect();
    let max_clearance = clearance.iter().copied().fold(Clearance::Finite(0.0), |acc, c| match (acc, c) {
        (Clearance::Unbounded, _) | (_, Clearance::Unbounded) => Clearance::Unbounded,
        (Clearance::Finite(a), Clearance::Finite(b)) => Clearance::Finite(a.max(b)),
    });
    Ok(ClearanceProfile { z_values, clearance, max_clearance })
}
