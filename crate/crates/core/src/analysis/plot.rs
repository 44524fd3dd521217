//! Deterministic SVG 1.1 plots: scatter, histogram and heatmap.
//!
//! Glyphs carry stable classes so output can be inspected mechanically:
//! `point` (scatter circles), `bar` (histogram bars), `cell` (heatmap
//! cells) and `legend` (the heatmap colour scale group). Numbers are
//! formatted with fixed rules, so identical input yields byte-identical
//! documents.

use super::eda::Histogram;
use super::AnalysisError;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Plot {
    Scatter {
        x: Vec<f64>,
        y: Vec<f64>,
    },
    Histogram {
        edges: Vec<f64>,
        counts: Vec<usize>,
    },
    /// `z[row][col]` drawn with row 0 at the bottom; `x` and `y` are the
    /// column and row centres.
    Heatmap {
        x: Vec<f64>,
        y: Vec<f64>,
        z: Vec<Vec<f64>>,
    },
}

impl From<Histogram> for Plot {
    fn from(h: Histogram) -> Self {
        Plot::Histogram {
            edges: h.edges,
            counts: h.counts,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotOptions {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub width: u32,
    pub height: u32,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            title: String::new(),
            x_label: String::new(),
            y_label: String::new(),
            width: 640,
            height: 480,
        }
    }
}

const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;
const LEGEND_WIDTH: f64 = 70.0;
const TICKS: usize = 5;

/// Writes the SVG for `plot` to `path`.
pub fn emit_plot(plot: &Plot, options: &PlotOptions, path: impl AsRef<Path>) -> Result<(), AnalysisError> {
    let svg = render_svg(plot, options)?;
    std::fs::write(path, svg)?;
    Ok(())
}

/// Renders `plot` as an SVG document.
pub fn render_svg(plot: &Plot, options: &PlotOptions) -> Result<String, AnalysisError> {
    validate(plot)?;
    let legend = matches!(plot, Plot::Heatmap { .. });
    let frame = Frame::new(options, legend);
    let (xr, yr) = ranges(plot);
    let mut body = String::new();
    match plot {
        Plot::Scatter { x, y } => {
            for (a, b) in x.iter().zip(y) {
                let _ = writeln!(
                    body,
                    r#"<circle class="point" cx="{}" cy="{}" r="3" fill="steelblue" fill-opacity="0.7"/>"#,
                    num(frame.px(*a, xr)),
                    num(frame.py(*b, yr))
                );
            }
        }
        Plot::Histogram { edges, counts } => {
            for (i, c) in counts.iter().enumerate() {
                let x0 = frame.px(edges[i], xr);
                let x1 = frame.px(edges[i + 1], xr);
                let y0 = frame.py(*c as f64, yr);
                let y1 = frame.py(0.0, yr);
                let _ = writeln!(
                    body,
                    r#"<rect class="bar" x="{}" y="{}" width="{}" height="{}" fill="steelblue" stroke="white"/>"#,
                    num(x0),
                    num(y0),
                    num((x1 - x0).max(0.0)),
                    num((y1 - y0).max(0.0))
                );
            }
        }
        Plot::Heatmap { x, y, z } => {
            let (zlo, zhi) = finite_range(z.iter().flatten().copied());
            let xe = cell_edges(x);
            let ye = cell_edges(y);
            for (r, row) in z.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    let x0 = frame.px(xe[c], xr);
                    let x1 = frame.px(xe[c + 1], xr);
                    let y0 = frame.py(ye[r + 1], yr);
                    let y1 = frame.py(ye[r], yr);
                    let fill = if v.is_finite() {
                        colour((v - zlo) / (zhi - zlo).max(f64::MIN_POSITIVE))
                    } else {
                        "#cccccc".to_string()
                    };
                    let _ = writeln!(
                        body,
                        r#"<rect class="cell" x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#,
                        num(x0),
                        num(y0),
                        num(x1 - x0),
                        num(y1 - y0)
                    );
                }
            }
            body.push_str(&frame.legend(zlo, zhi));
        }
    }

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = options.width,
        h = options.height
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text class="title" x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        num(options.width as f64 / 2.0),
        escape(&options.title)
    );
    svg.push_str(&body);
    svg.push_str(&frame.axes(xr, yr, options));
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn validate(plot: &Plot) -> Result<(), AnalysisError> {
    let bad = |m: &str| Err(AnalysisError::InvalidArgument(m.to_string()));
    match plot {
        Plot::Scatter { x, y } => {
            if x.is_empty() {
                return bad("scatter plot has no points");
            }
            if x.len() != y.len() {
                return bad("scatter x and y differ in length");
            }
            if x.iter().chain(y).any(|v| !v.is_finite()) {
                return bad("scatter data must be finite");
            }
        }
        Plot::Histogram { edges, counts } => {
            if counts.is_empty() {
                return bad("histogram has no bins");
            }
            if edges.len() != counts.len() + 1 {
                return bad("histogram needs one more edge than counts");
            }
            if edges.iter().any(|v| !v.is_finite()) || edges.windows(2).any(|w| w[1] < w[0]) {
                return bad("histogram edges must be finite and non-decreasing");
            }
        }
        Plot::Heatmap { x, y, z } => {
            if x.is_empty() || y.is_empty() {
                return bad("heatmap has no cells");
            }
            if z.len() != y.len() || z.iter().any(|r| r.len() != x.len()) {
                return bad("heatmap grid does not match its axes");
            }
            if x.iter().chain(y).any(|v| !v.is_finite()) {
                return bad("heatmap axes must be finite");
            }
            if !z.iter().flatten().any(|v| v.is_finite()) {
                return bad("heatmap has no finite values");
            }
        }
    }
    Ok(())
}

type Range = (f64, f64);

fn finite_range(values: impl Iterator<Item = f64>) -> Range {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    pad((lo, hi))
}

fn pad((lo, hi): Range) -> Range {
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn cell_edges(c: &[f64]) -> Vec<f64> {
    if c.len() == 1 {
        return vec![c[0] - 0.5, c[0] + 0.5];
    }
    let mut e = Vec::with_capacity(c.len() + 1);
    e.push(c[0] - (c[1] - c[0]) / 2.0);
    for w in c.windows(2) {
        e.push((w[0] + w[1]) / 2.0);
    }
    let n = c.len();
    e.push(c[n - 1] + (c[n - 1] - c[n - 2]) / 2.0);
    e
}

fn ranges(plot: &Plot) -> (Range, Range) {
    match plot {
        Plot::Scatter { x, y } => (finite_range(x.iter().copied()), finite_range(y.iter().copied())),
        Plot::Histogram { edges, counts } => (
            pad((edges[0], edges[edges.len() - 1])),
            (0.0, (*counts.iter().max().unwrap_or(&1)).max(1) as f64),
        ),
        Plot::Heatmap { x, y, .. } => {
            let xe = cell_edges(x);
            let ye = cell_edges(y);
            (finite_range(xe.iter().copied()), finite_range(ye.iter().copied()))
        }
    }
}

struct Frame {
    left: f64,
    right: f64,
    top: f64,
    bottom: f64,
}

impl Frame {
    fn new(o: &PlotOptions, legend: bool) -> Self {
        let extra = if legend { LEGEND_WIDTH } else { 0.0 };
        Frame {
            left: MARGIN_LEFT,
            right: o.width as f64 - MARGIN_RIGHT - extra,
            top: MARGIN_TOP,
            bottom: o.height as f64 - MARGIN_BOTTOM,
        }
    }

    fn px(&self, v: f64, (lo, hi): Range) -> f64 {
        self.left + (v - lo) / (hi - lo) * (self.right - self.left)
    }

    fn py(&self, v: f64, (lo, hi): Range) -> f64 {
        self.bottom - (v - lo) / (hi - lo) * (self.bottom - self.top)
    }

    fn axes(&self, xr: Range, yr: Range, o: &PlotOptions) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<g class="axes" stroke="black" fill="none"><line x1="{l}" y1="{b}" x2="{r}" y2="{b}"/><line x1="{l}" y1="{b}" x2="{l}" y2="{t}"/></g>"#,
            l = num(self.left),
            r = num(self.right),
            b = num(self.bottom),
            t = num(self.top)
        );
        s.push_str("<g class=\"ticks\">\n");
        for i in 0..=TICKS {
            let f = i as f64 / TICKS as f64;
            let xv = xr.0 + f * (xr.1 - xr.0);
            let x = self.px(xv, xr);
            let _ = writeln!(
                s,
                r#"<line x1="{x}" y1="{b}" x2="{x}" y2="{b5}" stroke="black"/><text x="{x}" y="{ty}" text-anchor="middle">{label}</text>"#,
                x = num(x),
                b = num(self.bottom),
                b5 = num(self.bottom + 5.0),
                ty = num(self.bottom + 18.0),
                label = tick(xv)
            );
            let yv = yr.0 + f * (yr.1 - yr.0);
            let y = self.py(yv, yr);
            let _ = writeln!(
                s,
                r#"<line x1="{l5}" y1="{y}" x2="{l}" y2="{y}" stroke="black"/><text x="{tx}" y="{ty}" text-anchor="end">{label}</text>"#,
                l5 = num(self.left - 5.0),
                l = num(self.left),
                y = num(y),
                tx = num(self.left - 8.0),
                ty = num(y + 4.0),
                label = tick(yv)
            );
        }
        s.push_str("</g>\n");
        let _ = writeln!(
            s,
            r#"<text class="x-label" x="{}" y="{}" text-anchor="middle">{}</text>"#,
            num((self.left + self.right) / 2.0),
            num(self.bottom + 40.0),
            escape(&o.x_label)
        );
        let cy = (self.top + self.bottom) / 2.0;
        let _ = writeln!(
            s,
            r#"<text class="y-label" x="18" y="{cy}" text-anchor="middle" transform="rotate(-90 18 {cy})">{}</text>"#,
            escape(&o.y_label),
            cy = num(cy)
        );
        s
    }

    fn legend(&self, lo: f64, hi: f64) -> String {
        const STEPS: usize = 20;
        let x = self.right + 15.0;
        let h = (self.bottom - self.top) / STEPS as f64;
        let mut s = String::from("<g class=\"legend\">\n");
        for i in 0..STEPS {
            let f = (i as f64 + 0.5) / STEPS as f64;
            let y = self.bottom - (i + 1) as f64 * h;
            let _ = writeln!(
                s,
                r#"<rect class="legend-swatch" x="{}" y="{}" width="15" height="{}" fill="{}"/>"#,
                num(x),
                num(y),
                num(h),
                colour(f)
            );
        }
        for (v, y) in [(lo, self.bottom), (hi, self.top)] {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}">{}</text>"#,
                num(x + 19.0),
                num(y + 4.0),
                tick(v)
            );
        }
        s.push_str("</g>\n");
        s
    }
}

/// Linear blend through a perceptually ordered palette (dark blue → yellow).
fn colour(f: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let f = f.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (f.floor() as usize).min(STOPS.len() - 2);
    let t = f - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let c = |p: f64, q: f64| (p + (q - p) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", c(a.0, b.0), c(a.1, b.1), c(a.2, b.2))
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e5).contains(&a) {
        format!("{v:.2e}")
    } else {
        num_precise(v)
    }
}

fn num_precise(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
