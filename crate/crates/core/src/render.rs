//! Deterministic SVG rendering of 2-D instances.
//!
//! The picture shows the policy-space outline, one marker per voter ideal,
//! and optional annotations: the candidate core point, a witness policy,
//! and a swept line segment. Identical inputs produce identical bytes:
//! coordinates are formatted to a fixed precision and elements are emitted
//! in a fixed order. World y points up, SVG y points down, so y is negated
//! at emission time.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::ClippedLine;
use crate::model::{Point, SpaceShape, VotingSituation};

/// Optional picture annotations.
#[derive(Debug, Clone, Default)]
pub struct RenderAnnotations {
    pub core: Option<Point>,
    pub witness: Option<Point>,
    pub line: Option<ClippedLine>,
}

fn fmt(value: f64) -> String {
    // Fixed precision keeps the output byte-stable; normalize negative zero.
    let v = if value == 0.0 { 0.0 } else { value };
    format!("{v:.4}")
}

/// Render a 2-D instance to SVG text.
pub fn render_svg(situation: &VotingSituation, annotations: &RenderAnnotations) -> Result<String> {
    if situation.dimension() != 2 {
        return Err(Error::RenderDimension(situation.dimension()));
    }
    let space = situation.space();
    let (lower, upper) = space.bounding_box();
    let width = upper[0] - lower[0];
    let height = upper[1] - lower[1];
    let margin = 0.08 * width.max(height);
    let marker = 0.018 * space.diameter();
    let stroke = 0.008 * space.diameter();

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"480\" height=\"480\">",
        fmt(lower[0] - margin),
        fmt(-(upper[1] + margin)),
        fmt(width + 2.0 * margin),
        fmt(height + 2.0 * margin),
    );

    match space.shape() {
        SpaceShape::Box { lower, upper } => {
            let _ = writeln!(
                svg,
                "  <rect class=\"space\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"{}\"/>",
                fmt(lower[0]),
                fmt(-upper[1]),
                fmt(upper[0] - lower[0]),
                fmt(upper[1] - lower[1]),
                fmt(stroke),
            );
        }
        SpaceShape::Ball { center, radius } => {
            let _ = writeln!(
                svg,
                "  <circle class=\"space\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"{}\"/>",
                fmt(center[0]),
                fmt(-center[1]),
                fmt(*radius),
                fmt(stroke),
            );
        }
    }

    if let Some(line) = &annotations.line {
        let a = line.point_at(line.t_min());
        let b = line.point_at(line.t_max());
        let _ = writeln!(
            svg,
            "  <line class=\"sweep\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#7f7fbf\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\"/>",
            fmt(a[0]),
            fmt(-a[1]),
            fmt(b[0]),
            fmt(-b[1]),
            fmt(stroke),
            fmt(3.0 * stroke),
            fmt(2.0 * stroke),
        );
    }

    for voter in situation.voters() {
        let p = voter.ideal();
        let _ = writeln!(
            svg,
            "  <circle class=\"ideal\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#1f77b4\"/>",
            fmt(p[0]),
            fmt(-p[1]),
            fmt(marker),
        );
    }

    if let Some(core) = &annotations.core {
        let half = 1.2 * marker;
        let _ = writeln!(
            svg,
            "  <rect class=\"core\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#2ca02c\"/>",
            fmt(core[0] - half),
            fmt(-core[1] - half),
            fmt(2.0 * half),
            fmt(2.0 * half),
        );
    }

    if let Some(witness) = &annotations.witness {
        let _ = writeln!(
            svg,
            "  <circle class=\"witness\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#d62728\"/>",
            fmt(witness[0]),
            fmt(-witness[1]),
            fmt(1.1 * marker),
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}
