//! Hand-emitted log-log SVG capability diagrams.
//!
//! Width runs along x and depth along y, both as `log10` mapped affinely onto
//! the plot box. A frontier point `(w, d)` fills the cell `[w, w') x (0, d]`,
//! where `w'` is the next evaluated width (`w + 1` for the last one), so dense
//! frontiers give right-continuous unit steps and sparse benchmark grids give
//! steps that hold until the next measured width.

use std::fmt::Write;

use crate::region::CapabilityRegion;
use crate::{Error, Result};

const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const AXIS_BAND: f64 = 60.0;
const LEGEND_LINE: f64 = 18.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Marker {
    pub label: String,
    pub width: f64,
    pub depth: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    pub plot_width: f64,
    pub plot_height: f64,
    /// Inclusive axis range in widths.
    pub width_range: (f64, f64),
    /// Inclusive axis range in depths.
    pub depth_range: (f64, f64),
    pub title: Option<String>,
    /// Fill colors, assigned to regions in input order.
    pub palette: Vec<String>,
    /// Dashed line along `width * depth = 10^12`.
    pub teraquop_guide: bool,
    pub markers: Vec<Marker>,
    /// Text placed in the document's `<metadata>` element.
    pub metadata: Option<String>,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self {
            plot_width: 640.0,
            plot_height: 420.0,
            width_range: (1.0, 1e4),
            depth_range: (1.0, 1e12),
            title: None,
            palette: [
                "#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3",
                "#8c8c8c", "#ccb974", "#64b5cd",
            ]
            .map(String::from)
            .to_vec(),
            teraquop_guide: false,
            markers: Vec::new(),
            metadata: None,
        }
    }
}

pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

struct Axes {
    lx: (f64, f64),
    ly: (f64, f64),
    left: f64,
    top: f64,
    w: f64,
    h: f64,
}

impl Axes {
    fn x_log(&self, lw: f64) -> f64 {
        self.left + (lw - self.lx.0) / (self.lx.1 - self.lx.0) * self.w
    }

    fn y_log(&self, ld: f64) -> f64 {
        self.top + self.h - (ld - self.ly.0) / (self.ly.1 - self.ly.0) * self.h
    }

    fn bottom(&self) -> f64 {
        self.top + self.h
    }
}

struct Shape {
    index: usize,
    points: Vec<(f64, f64)>,
    area: f64,
    clipped: bool,
}

fn region_polygon(region: &CapabilityRegion, axes: &Axes) -> (Vec<(f64, f64)>, bool) {
    let mut clipped = false;
    let mut points: Vec<(f64, f64)> = Vec::new();
    // drops repeats and merges collinear axis-parallel runs
    let push = |p: (f64, f64), points: &mut Vec<(f64, f64)>| {
        if points.last() == Some(&p) {
            return;
        }
        if let [.., a, b] = points.as_slice() {
            if (a.0 == b.0 && b.0 == p.0) || (a.1 == b.1 && b.1 == p.1) {
                points.pop();
            }
        }
        points.push(p);
    };
    let widths: Vec<(u64, u64)> = region
        .frontier
        .iter()
        .map(|(&w, p)| (w, p.max_depth))
        .collect();
    let x_for = |w: f64| axes.x_log(w.log10().clamp(axes.lx.0, axes.lx.1));
    for (i, &(w, d)) in widths.iter().enumerate() {
        let next = widths.get(i + 1).map_or(w + 1, |&(nw, _)| nw);
        // a cell starting at the right edge still counts as on the axes
        if (w as f64).log10() > axes.lx.1 {
            clipped = true;
            break;
        }
        let x0 = x_for(w as f64);
        let x1 = x_for(next as f64);
        let y = if d == 0 || (d as f64).log10() <= axes.ly.0 {
            axes.bottom()
        } else {
            let ld = (d as f64).log10();
            if ld > axes.ly.1 {
                clipped = true;
            }
            axes.y_log(ld.min(axes.ly.1))
        };
        if points.is_empty() {
            push((x0, axes.bottom()), &mut points);
        }
        push((x0, y), &mut points);
        push((x1, y), &mut points);
    }
    if let Some(&(x, _)) = points.last() {
        push((x, axes.bottom()), &mut points);
    }
    (points, clipped)
}

fn shoelace(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|i| {
            let (x0, y0) = points[i];
            let (x1, y1) = points[(i + 1) % n];
            x0 * y1 - x1 * y0
        })
        .sum::<f64>()
        .abs()
        / 2.0
}

fn decade_label(out: &mut String, x: f64, y: f64, anchor: &str, exponent: i32) {
    let _ = writeln!(
        out,
        r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-size="12">10<tspan dy="-6" font-size="9">{exponent}</tspan></text>"#
    );
}

/// Renders one or more regions into a standalone SVG document. Larger
/// regions are drawn first so nested ones stay visible; out-of-range extents
/// are clipped to the axes and noted in the plot.
pub fn render_svg(regions: &[CapabilityRegion], style: &SvgStyle) -> Result<String> {
    if regions.is_empty() {
        return Err(Error::Config("render_svg needs at least one region".into()));
    }
    let (wmin, wmax) = style.width_range;
    let (dmin, dmax) = style.depth_range;
    if !(wmin >= 1.0 && wmax > wmin && dmin >= 1.0 && dmax > dmin) {
        return Err(Error::Config(
            "axis ranges must satisfy 1 <= min < max".into(),
        ));
    }
    let axes = Axes {
        lx: (wmin.log10(), wmax.log10()),
        ly: (dmin.log10(), dmax.log10()),
        left: MARGIN_LEFT,
        top: MARGIN_TOP,
        w: style.plot_width,
        h: style.plot_height,
    };
    let total_w = MARGIN_LEFT + style.plot_width + MARGIN_RIGHT;
    let legend_top = MARGIN_TOP + style.plot_height + AXIS_BAND;
    let total_h = legend_top + LEGEND_LINE * regions.len() as f64 + 10.0;

    let mut shapes: Vec<Shape> = regions
        .iter()
        .enumerate()
        .map(|(index, region)| {
            let (points, clipped) = region_polygon(region, &axes);
            let area = shoelace(&points);
            Shape {
                index,
                points,
                area,
                clipped,
            }
        })
        .collect();
    shapes.sort_by(|a, b| {
        b.area
            .total_cmp(&a.area)
            .then_with(|| regions[a.index].label.cmp(&regions[b.index].label))
    });
    let color = |i: usize| {
        style
            .palette
            .get(i % style.palette.len().max(1))
            .map_or("#4c72b0", String::as_str)
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total_w:.0}" height="{total_h:.0}" viewBox="0 0 {total_w:.0} {total_h:.0}" font-family="sans-serif">"#
    );
    if let Some(meta) = &style.metadata {
        let _ = writeln!(out, "<metadata>{}</metadata>", escape(meta));
    }
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{total_w:.0}" height="{total_h:.0}" fill="white"/>"#
    );
    if let Some(title) = &style.title {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
            MARGIN_LEFT + style.plot_width / 2.0,
            escape(title)
        );
    }

    // grid and ticks
    let _ = writeln!(out, r##"<g stroke="#dddddd" stroke-width="1">"##);
    let decades_x = (axes.lx.0.ceil() as i32)..=(axes.lx.1.floor() as i32);
    let decades_y = (axes.ly.0.ceil() as i32)..=(axes.ly.1.floor() as i32);
    for k in decades_x.clone() {
        let x = axes.x_log(k as f64);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#,
            axes.top,
            axes.bottom()
        );
    }
    for k in decades_y.clone() {
        let y = axes.y_log(k as f64);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#,
            axes.left,
            axes.left + axes.w
        );
    }
    let _ = writeln!(out, "</g>");

    for shape in &shapes {
        let region = &regions[shape.index];
        if shape.points.len() < 3 {
            continue;
        }
        let pts: Vec<String> = shape
            .points
            .iter()
            .map(|(x, y)| format!("{x:.2},{y:.2}"))
            .collect();
        let _ = writeln!(
            out,
            r##"<polygon data-label="{}" points="{}" fill="{}" fill-opacity="0.85" stroke="#333333" stroke-width="0.8"/>"##,
            escape(&region.label),
            pts.join(" "),
            color(shape.index)
        );
    }

    if style.teraquop_guide {
        let x1 = axes.lx.0.max(12.0 - axes.ly.1);
        let x2 = axes.lx.1.min(12.0 - axes.ly.0);
        if x1 < x2 {
            let _ = writeln!(
                out,
                r##"<line class="teraquop" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000000" stroke-dasharray="6,4" stroke-width="1.2"/>"##,
                axes.x_log(x1),
                axes.y_log(12.0 - x1),
                axes.x_log(x2),
                axes.y_log(12.0 - x2)
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-size="11">teraquop (10^12 quops)</text>"#,
                axes.x_log(x1) + 6.0,
                axes.y_log(12.0 - x1) + 14.0
            );
        }
    }

    for marker in &style.markers {
        let (lw, ld) = (marker.width.log10(), marker.depth.log10());
        if !(axes.lx.0..=axes.lx.1).contains(&lw) || !(axes.ly.0..=axes.ly.1).contains(&ld) {
            continue;
        }
        let (x, y) = (axes.x_log(lw), axes.y_log(ld));
        let _ = writeln!(
            out,
            r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#000000"/><text x="{:.2}" y="{:.2}" font-size="11">{}</text>"##,
            x + 6.0,
            y - 6.0,
            escape(&marker.label)
        );
    }

    // frame and axes labels
    let _ = writeln!(
        out,
        r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#000000" stroke-width="1"/>"##,
        axes.left, axes.top, axes.w, axes.h
    );
    for k in decades_x {
        decade_label(
            &mut out,
            axes.x_log(k as f64),
            axes.bottom() + 18.0,
            "middle",
            k,
        );
    }
    for k in decades_y {
        decade_label(
            &mut out,
            axes.left - 8.0,
            axes.y_log(k as f64) + 4.0,
            "end",
            k,
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">width (qubits)</text>"#,
        axes.left + axes.w / 2.0,
        axes.bottom() + 42.0
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{:.2}" text-anchor="middle" font-size="13" transform="rotate(-90 20 {:.2})">depth (layers)</text>"#,
        axes.top + axes.h / 2.0,
        axes.top + axes.h / 2.0
    );

    let clipped: Vec<&str> = shapes
        .iter()
        .filter(|s| s.clipped)
        .map(|s| regions[s.index].label.as_str())
        .collect();
    if !clipped.is_empty() {
        let _ = writeln!(
            out,
            r##"<text class="clipped" x="{:.2}" y="{:.2}" font-size="10" fill="#aa0000">clipped at axis range: {}</text>"##,
            axes.left + 6.0,
            axes.top + 14.0,
            escape(&clipped.join("; "))
        );
    }

    for (i, region) in regions.iter().enumerate() {
        let y = legend_top + LEGEND_LINE * i as f64;
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="12" height="12" fill="{}" stroke="#333333" stroke-width="0.5"/><text x="{:.2}" y="{:.2}" font-size="11">{}</text>"##,
            axes.left,
            y,
            color(i),
            axes.left + 18.0,
            y + 10.0,
            escape(&region.label)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
