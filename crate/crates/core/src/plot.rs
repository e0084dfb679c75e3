//! CSV and SVG renderings of a mapping over a bounded window.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::conditions::search_window;
use crate::error::{Error, Result};
use crate::exactnum::{ClassTag, QuadExt};
use crate::mapping::{Interval, MappingSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotFormat {
    Svg,
    Csv,
}

impl FromStr for PlotFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<PlotFormat> {
        match s {
            "svg" => Ok(PlotFormat::Svg),
            "csv" => Ok(PlotFormat::Csv),
            _ => Err(Error::InvalidArgument(format!("unknown plot format `{s}` (expected svg or csv)"))),
        }
    }
}

const DIGITS: u32 = 6;

/// `samples` evenly spaced points of the plotting window.
pub fn sample_points(spec: &MappingSpec, samples: usize) -> Result<Vec<QuadExt>> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let (lo, hi) = search_window(spec);
    if samples == 1 {
        return Ok(vec![lo]);
    }
    let width = &hi - &lo;
    let steps = (samples - 1) as i64;
    Ok((0..samples as i64)
        .map(|k| &lo + &width.scale(&crate::exactnum::rat(k, steps)))
        .collect())
}

/// Value of the `class` branch at `x`, ignoring point overrides; for the
/// class of `x` itself the override applies.
fn branch_value(spec: &MappingSpec, x: &QuadExt, class: ClassTag) -> Option<QuadExt> {
    if x.class() == class {
        return spec.evaluate(x).ok();
    }
    if !spec.domain.contains(x) {
        return None;
    }
    spec.pieces
        .iter()
        .filter(|p| p.over.contains(x))
        .find_map(|p| p.branch(class))
        .map(|e| e.eval(x))
}

fn csv_field(v: Option<&QuadExt>, exact: bool) -> String {
    let Some(v) = v else {
        return String::new();
    };
    let s = if exact { v.to_string() } else { v.to_decimal_string(DIGITS) };
    if s.contains([',', '"', ' ']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

fn emit_csv(spec: &MappingSpec, samples: usize) -> Result<String> {
    let mut out = String::from(
        "x,f_rational,f_irrational,residual,x_exact,f_rational_exact,f_irrational_exact,residual_exact\r\n",
    );
    for x in sample_points(spec, samples)? {
        let fr = branch_value(spec, &x, ClassTag::RationalPoint);
        let fi = branch_value(spec, &x, ClassTag::IrrationalPoint);
        let res = spec.residual(&x).ok();
        let cols = [Some(&x), fr.as_ref(), fi.as_ref(), res.as_ref()];
        let row: Vec<String> = cols
            .iter()
            .map(|v| csv_field(*v, false))
            .chain(cols.iter().map(|v| csv_field(*v, true)))
            .collect();
        out.push_str(&row.join(","));
        out.push_str("\r\n");
    }
    Ok(out)
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 40.0;

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

/// Piece index, class name and sampled `(x, f(x))` pairs.
type Segment = (usize, &'static str, Vec<(f64, f64)>);

fn emit_svg(spec: &MappingSpec, samples: usize) -> Result<String> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let (lo, hi) = search_window(spec);
    let window = Interval::closed(lo.clone(), hi.clone());
    let mut segments: Vec<Segment> = Vec::new();
    for (k, piece) in spec.pieces.iter().enumerate() {
        let Some(span) = piece.over.intersect(&window) else {
            continue;
        };
        let a = span.lower().cloned().unwrap_or_else(|| lo.clone());
        let b = span.upper().cloned().unwrap_or_else(|| hi.clone());
        let blind = piece.is_class_blind();
        for (class, expr) in piece.branches() {
            let name = if blind { "all" } else { class.name() };
            if blind && class == ClassTag::IrrationalPoint {
                continue;
            }
            let pts = (0..=samples.max(1))
                .map(|i| {
                    let t = crate::exactnum::rat(i as i64, samples.max(1) as i64);
                    let x = &a + &(&b - &a).scale(&t);
                    (x.to_f64(), expr.eval(&x).to_f64())
                })
                .collect();
            segments.push((k, name, pts));
        }
    }
    let (x0, x1) = (lo.to_f64(), hi.to_f64());
    let ys = segments.iter().flat_map(|s| s.2.iter().map(|p| p.1));
    let (y0, y1) = ys.fold((x0, x1), |(a, b), y| (a.min(y), b.max(y)));
    let frame = Frame {
        x0,
        x1: if x1 > x0 { x1 } else { x0 + 1.0 },
        y0,
        y1: if y1 > y0 { y1 } else { y0 + 1.0 },
    };

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(&spec.label));
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="#999"/>"##,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let (d0, d1) = (frame.x0.max(frame.y0), frame.x1.min(frame.y1));
    if d1 > d0 {
        let _ = writeln!(
            out,
            r##"<line class="identity" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#bbb" stroke-dasharray="4 4"/>"##,
            frame.px(d0),
            frame.py(d0),
            frame.px(d1),
            frame.py(d1)
        );
    }
    for (k, name, pts) in &segments {
        let color = match *name {
            "rational" => "#1f77b4",
            "irrational" => "#d62728",
            _ => "#222",
        };
        let coords: Vec<String> = pts
            .iter()
            .map(|(x, y)| format!("{:.3},{:.3}", frame.px(*x), frame.py(*y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="{name}" data-piece="{k}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            coords.join(" ")
        );
    }
    for o in &spec.overrides {
        if window.contains(&o.at) {
            let _ = writeln!(
                out,
                r##"<circle class="override" cx="{:.3}" cy="{:.3}" r="3" fill="none" stroke="#222"/>"##,
                frame.px(o.at.to_f64()),
                frame.py(o.value.to_f64())
            );
        }
    }
    let fixed = spec.fixed_points();
    if let Some(points) = fixed.finite_points() {
        for p in points.iter().filter(|p| window.contains(p)) {
            let v = p.to_f64();
            let _ = writeln!(
                out,
                r##"<circle class="fixed" cx="{:.3}" cy="{:.3}" r="4" fill="#2ca02c"/>"##,
                frame.px(v),
                frame.py(v)
            );
        }
    } else {
        for (i, _) in fixed.components() {
            let Some(i) = i.intersect(&window) else { continue };
            let a = i.lower().map_or(frame.x0, QuadExt::to_f64);
            let b = i.upper().map_or(frame.x1, QuadExt::to_f64);
            let _ = writeln!(
                out,
                r##"<line class="fixed" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#2ca02c" stroke-width="4"/>"##,
                frame.px(a),
                frame.py(a),
                frame.px(b),
                frame.py(b)
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// The plot as text. `samples` is the number of rows for CSV and the
/// number of segments per branch for SVG.
pub fn emit_plot(spec: &MappingSpec, format: PlotFormat, samples: usize) -> Result<String> {
    match format {
        PlotFormat::Csv => emit_csv(spec, samples),
        PlotFormat::Svg => emit_svg(spec, samples),
    }
}

pub fn write_plot(spec: &MappingSpec, format: PlotFormat, samples: usize, path: &Path) -> Result<()> {
    let text = emit_plot(spec, format, samples)?;
    std::fs::write(path, text).map_err(|e| Error::UnwritableOutput(format!("{}: {e}", path.display())))
}
