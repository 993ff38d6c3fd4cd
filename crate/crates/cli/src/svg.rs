//! Minimal deterministic SVG 1.1 writer: point layers, polylines, arc paths.
//! The viewBox is the data bounding box plus a 5% margin; model coordinates
//! are used directly with a y-flip on the root group.

use anyhow::Result;
use filament_core::geom::{Point2, Rect};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone)]
pub enum Layer {
    Points {
        points: Vec<Point2>,
        radius: f64,
        fill: String,
    },
    Polyline {
        points: Vec<Point2>,
        closed: bool,
        stroke: String,
        width: f64,
    },
    /// Raw SVG path data (arc arrangements export their own `d` strings).
    Path {
        d: String,
        stroke: String,
        width: f64,
        /// Points spanned by the path, for the bounding box.
        extent: Vec<Point2>,
    },
}

fn fmt(v: f64) -> String {
    // Fixed short decimal keeps files diffable; 6 digits is beyond visual
    // resolution at model scale.
    let s = format!("{v:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Render layers to an SVG file. Layers without geometry are skipped
/// silently; at least one layer must be supplied.
pub fn render_svg(layers: &[Layer], out: &Path) -> Result<()> {
    anyhow::ensure!(!layers.is_empty(), "render needs at least one layer");
    let mut all = Vec::new();
    for layer in layers {
        match layer {
            Layer::Points { points, .. } => all.extend_from_slice(points),
            Layer::Polyline { points, .. } => all.extend_from_slice(points),
            Layer::Path { extent, .. } => all.extend_from_slice(extent),
        }
    }
    let bbox = Rect::bounding(&all).unwrap_or(Rect::new(
        Point2::new(-1.0, -1.0),
        Point2::new(1.0, 1.0),
    ));
    let margin = 0.05 * bbox.diameter().max(1e-9);
    let bbox = bbox.inflate(margin);

    let mut svg = String::new();
    writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="640" height="640" preserveAspectRatio="xMidYMid meet">"#,
        fmt(bbox.min.x),
        fmt(-bbox.max.y),
        fmt(bbox.width()),
        fmt(bbox.height())
    )?;
    writeln!(svg, r#"<g transform="scale(1,-1)">"#)?;
    for layer in layers {
        match layer {
            Layer::Points {
                points,
                radius,
                fill,
            } => {
                if points.is_empty() {
                    continue;
                }
                writeln!(svg, r#"<g fill="{fill}">"#)?;
                for p in points {
                    writeln!(
                        svg,
                        r#"<circle cx="{}" cy="{}" r="{}"/>"#,
                        fmt(p.x),
                        fmt(p.y),
                        fmt(*radius)
                    )?;
                }
                writeln!(svg, "</g>")?;
            }
            Layer::Polyline {
                points,
                closed,
                stroke,
                width,
            } => {
                if points.len() < 2 {
                    continue;
                }
                let mut d = String::new();
                for (i, p) in points.iter().enumerate() {
                    let cmd = if i == 0 { 'M' } else { 'L' };
                    write!(d, "{cmd} {} {} ", fmt(p.x), fmt(p.y))?;
                }
                if *closed {
                    d.push('Z');
                }
                writeln!(
                    svg,
                    r#"<path d="{}" fill="none" stroke="{stroke}" stroke-width="{}"/>"#,
                    d.trim_end(),
                    fmt(*width)
                )?;
            }
            Layer::Path {
                d, stroke, width, ..
            } => {
                if d.is_empty() {
                    continue;
                }
                writeln!(
                    svg,
                    r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{}"/>"#,
                    fmt(*width)
                )?;
            }
        }
    }
    writeln!(svg, "</g>")?;
    writeln!(svg, "</svg>")?;
    std::fs::write(out, svg)?;
    Ok(())
}
