use std::path::Path;

use serde::Deserialize;

use cylpack::point_lattice::{ring_point_at, PlanarPoint};
use cylpack::{Error, Result};

#[derive(Deserialize)]
struct Row {
    x: f64,
    y: f64,
    d: Option<u32>,
    m: Option<u32>,
    k: Option<u32>,
}

/// Reads planar points from CSV. `d,m,k` columns, when present and
/// consistent with the coordinates, restore ring provenance; otherwise points are free.
pub fn read_points(path: &Path) -> Result<Vec<PlanarPoint>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (line, row) in reader.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| Error::InvalidArgument(format!("{} row {}: {e}", path.display(), line + 1)))?;
        if !row.x.is_finite() || !row.y.is_finite() {
            return Err(Error::InvalidArgument(format!("{} row {}: non-finite coordinate", path.display(), line + 1)));
        }
        let mut p = PlanarPoint::free(row.x, row.y);
        if let (Some(d), Some(m), Some(k)) = (row.d, row.m, row.k) {
            // Provenance is kept only if it reproduces the coordinates.
            if let Ok(q) = ring_point_at(d, k) {
                if q.m == m && q.distance(&p) <= 1e-9 * d as f64 {
                    p = q;
                }
            }
        }
        out.push(p);
    }
    Ok(out)
}
