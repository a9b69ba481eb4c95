// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! Minimal self-contained SVG: line/marker plots with error bars and heat maps.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 460.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Line,
    Dashed,
    Markers,
}

#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Symmetric y error per point.
    pub errors: Option<Vec<f64>>,
    pub style: Style,
}

impl Series {
    pub fn line(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
            errors: None,
            style: Style::Line,
        }
    }

    pub fn styled(mut self, style: Style) -> Self {
        self.style = style;
        self
    }

    pub fn with_errors(mut self, errors: Vec<f64>) -> Self {
        self.errors = Some(errors);
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub log_x: bool,
    pub log_y: bool,
}

/// Maps data to pixels on one axis.
#[derive(Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    p0: f64,
    p1: f64,
    log: bool,
}

impl Axis {
    fn new(lo: f64, hi: f64, p0: f64, p1: f64, log: bool) -> Self {
        let (lo, hi) = if log { (lo.log10(), hi.log10()) } else { (lo, hi) };
        let (lo, hi) = if hi > lo {
            (lo, hi)
        } else {
            let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
            (lo - pad, hi + pad)
        };
        Self { lo, hi, p0, p1, log }
    }

    fn map(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        self.p0 + (v - self.lo) / (self.hi - self.lo) * (self.p1 - self.p0)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.floor() as i32, self.hi.ceil() as i32);
            let step = ((b - a) / 6).max(1);
            (a..=b)
                .step_by(step as usize)
                .map(|e| 10f64.powi(e))
                .filter(|t| t.log10() >= self.lo - 1e-9 && t.log10() <= self.hi + 1e-9)
                .collect()
        } else {
            nice_ticks(self.lo, self.hi, 6)
        }
    }
}

pub fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    if !span.is_finite() || span <= 0.0 {
        return vec![lo];
    }
    let raw = span / target.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

pub fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        format!("{v:.1e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open(title: &str) -> String {
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        escape(title)
    )
    .unwrap();
    s
}

fn frame(s: &mut String, x: &Axis, y: &Axis, x_label: &str, y_label: &str) {
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    writeln!(
        s,
        r#"<rect x="{x0}" y="{y1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    )
    .unwrap();
    for t in x.ticks() {
        let px = x.map(t);
        writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{:.1}" stroke="black"/>"#,
            y0 + 5.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.1}" text-anchor="middle">{}</text>"#,
            y0 + 18.0,
            tick_label(t)
        )
        .unwrap();
    }
    for t in y.ticks() {
        let py = y.map(t);
        writeln!(
            s,
            r#"<line x1="{:.1}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/>"#,
            x0 - 5.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 8.0,
            py + 4.0,
            tick_label(t)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 18.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    )
    .unwrap();
}

fn range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

impl LinePlot {
    fn usable(&self, x: f64, y: f64) -> bool {
        x.is_finite() && y.is_finite() && (!self.log_x || x > 0.0) && (!self.log_y || y > 0.0)
    }

    pub fn render(&self) -> String {
        let mut s = open(&self.title);
        let pts = || {
            self.series.iter().flat_map(|se| {
                se.points.iter().enumerate().flat_map(move |(i, &(x, y))| {
                    let e = se.errors.as_ref().map_or(0.0, |e| e[i].abs());
                    [(x, y - e), (x, y + e)]
                })
            })
        };
        let xr = range(pts().filter(|&(x, y)| self.usable(x, y.abs().max(1e-300))).map(|p| p.0));
        let yr = range(pts().filter(|&(x, y)| self.usable(x, y)).map(|p| p.1));
        let (Some((xlo, xhi)), Some((ylo, yhi))) = (xr, yr) else {
            s.push_str("<text x=\"50%\" y=\"50%\" text-anchor=\"middle\">no data</text>\n</svg>\n");
            return s;
        };
        let (ylo, yhi) = if self.log_y { (ylo, yhi) } else { (ylo.min(0.0), yhi) };
        let x = Axis::new(xlo, xhi, LEFT, WIDTH - RIGHT, self.log_x);
        let y = Axis::new(ylo, yhi, HEIGHT - BOTTOM, TOP, self.log_y);
        frame(&mut s, &x, &y, &self.x_label, &self.y_label);

        for (k, se) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let visible: Vec<(usize, f64, f64)> = se
                .points
                .iter()
                .enumerate()
                .filter(|(_, &(px, py))| self.usable(px, py))
                .map(|(i, &(px, py))| (i, x.map(px), y.map(py)))
                .collect();
            match se.style {
                Style::Line | Style::Dashed => {
                    let dash = if se.style == Style::Dashed {
                        r#" stroke-dasharray="6 4""#
                    } else {
                        ""
                    };
                    let path: Vec<String> = visible.iter().map(|(_, px, py)| format!("{px:.2},{py:.2}")).collect();
                    writeln!(
                        s,
                        r#"<polyline fill="none" stroke="{color}" stroke-width="1.8"{dash} points="{}"/>"#,
                        path.join(" ")
                    )
                    .unwrap();
                }
                Style::Markers => {
                    for (_, px, py) in &visible {
                        writeln!(s, r#"<circle cx="{px:.2}" cy="{py:.2}" r="3.5" fill="{color}"/>"#).unwrap();
                    }
                }
            }
            if let Some(errs) = &se.errors {
                for &(i, px, _) in &visible {
                    let (yv, e) = (se.points[i].1, errs[i].abs());
                    if !e.is_finite() || (self.log_y && yv - e <= 0.0) {
                        continue;
                    }
                    let (a, b) = (y.map(yv - e), y.map(yv + e));
                    writeln!(
                        s,
                        r#"<line x1="{px:.2}" y1="{a:.2}" x2="{px:.2}" y2="{b:.2}" stroke="{color}"/>"#
                    )
                    .unwrap();
                    for yy in [a, b] {
                        writeln!(
                            s,
                            r#"<line x1="{:.2}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="{color}"/>"#,
                            px - 3.0,
                            px + 3.0
                        )
                        .unwrap();
                    }
                }
            }
            let ly = TOP + 14.0 + 18.0 * k as f64;
            let lx = WIDTH - RIGHT + 12.0;
            writeln!(
                s,
                r#"<line x1="{lx}" y1="{ly}" x2="{:.1}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
                lx + 20.0
            )
            .unwrap();
            writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
                lx + 26.0,
                ly + 4.0,
                escape(&se.label)
            )
            .unwrap();
        }
        s.push_str("</svg>\n");
        s
    }
}

#[derive(Clone, Debug, Default)]
pub struct HeatMap {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Increasing column centres.
    pub xs: Vec<f64>,
    /// Increasing row centres.
    pub ys: Vec<f64>,
    /// `z[iy * xs.len() + ix]`.
    pub z: Vec<f64>,
    /// Points drawn on top (the ridge of maximisers).
    pub overlay: Vec<(f64, f64)>,
}

fn edges(c: &[f64]) -> Vec<f64> {
    match c.len() {
        0 => vec![],
        1 => vec![c[0] - 0.5, c[0] + 0.5],
        n => {
            let mut e = Vec::with_capacity(n + 1);
            e.push(c[0] - 0.5 * (c[1] - c[0]));
            e.extend(c.windows(2).map(|w| 0.5 * (w[0] + w[1])));
            e.push(c[n - 1] + 0.5 * (c[n - 1] - c[n - 2]));
            e
        }
    }
}

/// Dark-blue → teal → yellow ramp.
fn color(t: f64) -> String {
    const STOPS: [(f64, [f64; 3]); 4] = [
        (0.0, [68.0, 1.0, 84.0]),
        (0.35, [49.0, 104.0, 142.0]),
        (0.7, [53.0, 183.0, 121.0]),
        (1.0, [253.0, 231.0, 37.0]),
    ];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let k = STOPS.windows(2).position(|w| t <= w[1].0).unwrap_or(2);
    let ((a, ca), (b, cb)) = (STOPS[k], STOPS[k + 1]);
    let f = (t - a) / (b - a);
    let c: Vec<u8> = (0..3).map(|i| (ca[i] + f * (cb[i] - ca[i])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

impl HeatMap {
    pub fn render(&self) -> String {
        let mut s = open(&self.title);
        let (ex, ey) = (edges(&self.xs), edges(&self.ys));
        if ex.is_empty() || ey.is_empty() {
            s.push_str("</svg>\n");
            return s;
        }
        let x = Axis::new(ex[0], ex[ex.len() - 1], LEFT, WIDTH - RIGHT, false);
        let y = Axis::new(ey[0], ey[ey.len() - 1], HEIGHT - BOTTOM, TOP, false);
        let (zlo, zhi) = range(self.z.iter().copied().filter(|v| v.is_finite())).unwrap_or((0.0, 1.0));
        let scale = if zhi > zlo { zhi - zlo } else { 1.0 };
        for iy in 0..self.ys.len() {
            let (ya, yb) = (y.map(ey[iy + 1]), y.map(ey[iy]));
            for ix in 0..self.xs.len() {
                let (xa, xb) = (x.map(ex[ix]), x.map(ex[ix + 1]));
                let v = self.z[iy * self.xs.len() + ix];
                writeln!(
                    s,
                    r#"<rect x="{xa:.2}" y="{ya:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                    (xb - xa).abs() + 0.3,
                    (yb - ya).abs() + 0.3,
                    color((v - zlo) / scale)
                )
                .unwrap();
            }
        }
        for &(px, py) in &self.overlay {
            writeln!(
                s,
                r##"<circle cx="{:.2}" cy="{:.2}" r="1.6" fill="none" stroke="#4fc3f7" stroke-width="1"/>"##,
                x.map(px),
                y.map(py)
            )
            .unwrap();
        }
        frame(&mut s, &x, &y, &self.x_label, &self.y_label);
        // Colour bar.
        let (bx, bw) = (WIDTH - RIGHT + 20.0, 16.0);
        let (b0, b1) = (HEIGHT - BOTTOM, TOP);
        for i in 0..64 {
            let t = i as f64 / 63.0;
            let yy = b0 + (b1 - b0) * (i as f64 + 1.0) / 64.0;
            writeln!(
                s,
                r#"<rect x="{bx}" y="{yy:.2}" width="{bw}" height="{:.2}" fill="{}"/>"#,
                (b0 - b1) / 64.0 + 0.3,
                color(t)
            )
            .unwrap();
        }
        for (v, yy) in [(zlo, b0), (zhi, b1)] {
            writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}">{}</text>"#,
                bx + bw + 4.0,
                yy + 4.0,
                tick_label(v)
            )
            .unwrap();
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Embeds run metadata as an XML comment after the opening tag.
pub fn with_metadata(doc: &str, lines: &[String]) -> String {
    let Some(end) = doc.find('>') else {
        return doc.to_owned();
    };
    let body = lines.join("\n").replace("--", "- -");
    format!("{}\n<!--\n{body}\n-->{}", &doc[..=end], &doc[end + 1..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_are_round_and_inside() {
        let t = nice_ticks(0.0, 1.0, 5);
        assert_eq!(t, vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        let t = nice_ticks(-3.0, 3.0, 6);
        assert!(t.contains(&0.0) && t[0] >= -3.0);
    }

    #[test]
    fn line_plot_is_well_formed() {
        let p = LinePlot {
            title: "a < b".into(),
            series: vec![
                Series::line("q", vec![(1.0, 1.0), (2.0, 4.0)]),
                Series::line("m", vec![(1.0, 2.0)])
                    .styled(Style::Markers)
                    .with_errors(vec![0.5]),
            ],
            ..LinePlot::default()
        };
        let svg = p.render();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a &lt; b"));
        assert!(svg.contains("<polyline") && svg.contains("<circle"));
    }

    #[test]
    fn log_axes_skip_nonpositive() {
        let p = LinePlot {
            series: vec![Series::line("q", vec![(0.0, 1.0), (1.0, 0.0), (2.0, 4.0), (4.0, 16.0)])],
            log_x: true,
            log_y: true,
            ..LinePlot::default()
        };
        assert!(!p.render().contains("NaN"));
    }

    #[test]
    fn heat_map_cells_and_overlay() {
        let h = HeatMap {
            xs: vec![0.0, 1.0],
            ys: vec![0.0, 1.0, 2.0],
            z: vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            overlay: vec![(0.5, 1.0)],
            ..HeatMap::default()
        };
        let svg = h.render();
        assert_eq!(svg.matches("<rect").count(), 1 + 1 + 6 + 64);
        assert!(svg.contains("stroke=\"#4fc3f7\""));
    }

    #[test]
    fn metadata_comment_is_safe() {
        let out = with_metadata("<svg a=\"1\">\n</svg>\n", &["x -- y".into()]);
        assert!(out.contains("<!--\nx - - y\n-->"));
    }
}
