//! Image-mesh figures: a polar grid of `z` drawn in the `w` plane.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::table::{GridTable, TableError};

#[derive(Debug, Error)]
pub enum PlotError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("ragged grid: {0}")]
    Ragged(String),
    #[error("grid has no rows")]
    Empty,
}

const CLUSTER_TOLERANCE: f64 = 1e-9;
const SIZE: f64 = 600.0;

/// Groups nearly equal values, returning the sorted representatives and the
/// group index of each input.
fn cluster(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut reps: Vec<f64> = Vec::new();
    let mut index = vec![0; values.len()];
    for i in order {
        let v = values[i];
        match reps.last() {
            Some(&r) if (v - r).abs() <= CLUSTER_TOLERANCE * (1.0 + r.abs()) => {}
            _ => reps.push(v),
        }
        index[i] = reps.len() - 1;
    }
    (reps, index)
}

/// Radial and circular image curves of a complete polar grid.
///
/// Rows need `re_z, im_z, re_w, im_w`. When a `t` column is present only the
/// rows at `t = time` (default: the smallest `t`) are drawn.
pub fn render_svg(table: &GridTable, time: Option<f64>) -> Result<String, PlotError> {
    let (rz, iz, rw, iw) = (table.column("re_z")?, table.column("im_z")?, table.column("re_w")?, table.column("im_w")?);
    let mut rows: Vec<&Vec<f64>> = table.rows.iter().collect();
    if let Ok(tc) = table.column("t") {
        let t0 = time.or_else(|| rows.iter().map(|r| r[tc]).min_by(|a, b| a.total_cmp(b)));
        rows.retain(|r| Some(r[tc]) == t0);
    }
    if rows.is_empty() {
        return Err(PlotError::Empty);
    }
    let radii: Vec<f64> = rows.iter().map(|r| r[rz].hypot(r[iz])).collect();
    if radii.contains(&0.0) {
        return Err(PlotError::Ragged("the origin is not part of a polar grid".into()));
    }
    let angles: Vec<f64> = rows.iter().map(|r| r[iz].atan2(r[rz]).rem_euclid(std::f64::consts::TAU)).collect();
    let (rs, ri) = cluster(&radii);
    let (ts, ti) = cluster(&angles);
    let mut cells: BTreeMap<(usize, usize), (f64, f64)> = BTreeMap::new();
    for (k, r) in rows.iter().enumerate() {
        if cells.insert((ri[k], ti[k]), (r[rw], r[iw])).is_some() {
            return Err(PlotError::Ragged(format!("point {}{:+}i appears twice", r[rz], r[iz])));
        }
    }
    if cells.len() != rs.len() * ts.len() {
        return Err(PlotError::Ragged(format!(
            "{} points do not fill {} radii x {} angles",
            cells.len(),
            rs.len(),
            ts.len()
        )));
    }
    if cells.values().any(|(x, y)| !(x.is_finite() && y.is_finite())) {
        return Err(PlotError::Ragged("non-finite image value".into()));
    }

    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in cells.values() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let pad = 0.05 * span;
    let scale = SIZE / (span + 2.0 * pad);
    let map = |(x, y): (f64, f64)| ((x - x0 + pad) * scale, (y1 - y + pad) * scale);
    let polyline = |out: &mut String, pts: &[(f64, f64)], class: &str| {
        let mut coords = String::new();
        for (k, &p) in pts.iter().enumerate() {
            let (sx, sy) = map(p);
            if k > 0 {
                coords.push(' ');
            }
            let _ = write!(coords, "{sx:.3},{sy:.3}");
        }
        let _ = writeln!(out, r#"  <polyline class="{class}" points="{coords}"/>"#);
    };

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        svg,
        "  <style>polyline {{ fill: none; stroke-width: 0.8; }} .circle {{ stroke: #1f4e79; }} .ray {{ stroke: #b03a2e; }}</style>"
    );
    let _ = writeln!(svg, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    for i in 0..rs.len() {
        let mut pts: Vec<(f64, f64)> = (0..ts.len()).map(|j| cells[&(i, j)]).collect();
        pts.push(pts[0]);
        polyline(&mut svg, &pts, "circle");
    }
    for j in 0..ts.len() {
        let pts: Vec<(f64, f64)> = (0..rs.len()).map(|i| cells[&(i, j)]).collect();
        polyline(&mut svg, &pts, "ray");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
