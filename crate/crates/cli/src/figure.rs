use std::fmt::Write as _;
use std::path::Path;

use cylpack::point_lattice::PlanarPoint;
use cylpack::{Error, Result};

const CANVAS: f64 = 800.0;
const DOT_PX: f64 = 1.2;

/// Standalone SVG: one filled circle per point, origin at the center, the
/// view box spanning `D(rmax)` plus a small margin.
pub fn render_svg(points: &[PlanarPoint], comment: &str) -> Result<String> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("figure needs at least one point".into()));
    }
    let rmax = points.iter().map(PlanarPoint::radius).fold(0.0, f64::max).max(1.0);
    let half = rmax * 1.02;
    let dot = DOT_PX * 2.0 * half / CANVAS;
    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(s, "<!-- {} -->", comment.replace("--", "- -")).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="{} {} {} {}">"#,
        -half,
        -half,
        2.0 * half,
        2.0 * half
    )
    .unwrap();
    writeln!(s, r#"<g fill="black" transform="scale(1,-1)">"#).unwrap();
    for p in points {
        writeln!(s, r#"<circle cx="{:.6}" cy="{:.6}" r="{dot:.6}"/>"#, p.x, p.y).unwrap();
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

pub fn emit_figure(points: &[PlanarPoint], out_path: &Path, comment: &str) -> Result<()> {
    let svg = render_svg(points, comment)?;
    std::fs::write(out_path, svg).map_err(|e| Error::Io(format!("{}: {e}", out_path.display())))
}
