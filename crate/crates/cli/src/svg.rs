//! Minimal hand-written SVG charts. Output depends only on the data, apart
//! from the version comment on the second line.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 450.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YScale {
    Linear,
    /// log10(1 + max(y, 0))
    Log,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Round step for about `target` ticks over `span`.
fn nice_step(span: f64, target: f64) -> f64 {
    let raw = (span / target).max(f64::MIN_POSITIVE);
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let m = if f < 1.5 {
        1.0
    } else if f < 3.0 {
        2.0
    } else if f < 7.0 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 1e4 || (v != 0.0 && v.abs() < 1e-2) {
        format!("{v:.1e}")
    } else if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

pub struct Chart {
    title: String,
    x_label: String,
    y_label: String,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    y_scale: YScale,
    x_ticks: Vec<(f64, String)>,
    body: String,
    legend: Vec<(String, String)>,
}

impl Chart {
    /// `x` and `y` are data ranges; a degenerate range is widened.
    pub fn new(
        title: &str,
        x_label: &str,
        y_label: &str,
        x: (f64, f64),
        y: (f64, f64),
        y_scale: YScale,
    ) -> Self {
        let widen = |(lo, hi): (f64, f64)| {
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, lo + 0.5)
            }
        };
        let (x_min, x_max) = widen(x);
        let (mut y_min, mut y_max) = (y.0, y.1);
        if y_scale == YScale::Log {
            y_min = 0.0;
            y_max = (1.0 + y_max.max(0.0)).log10();
        }
        let (y_min, y_max) = widen((y_min, y_max));
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x_min,
            x_max,
            y_min,
            y_max,
            y_scale,
            x_ticks: Vec::new(),
            body: String::new(),
            legend: Vec::new(),
        }
    }

    /// Replaces the numeric x ticks with labelled positions.
    pub fn with_x_ticks(mut self, ticks: Vec<(f64, String)>) -> Self {
        self.x_ticks = ticks;
        self
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - LEFT - RIGHT)
    }

    fn ty(&self, y: f64) -> f64 {
        match self.y_scale {
            YScale::Linear => y,
            YScale::Log => (1.0 + y.max(0.0)).log10(),
        }
    }

    fn py(&self, y: f64) -> f64 {
        let t = self.ty(y).clamp(self.y_min, self.y_max);
        HEIGHT - BOTTOM - (t - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - TOP - BOTTOM)
    }

    fn add_legend(&mut self, label: &str, color: &str) {
        if !label.is_empty() {
            self.legend.push((label.into(), color.into()));
        }
    }

    pub fn bars(&mut self, points: &[(f64, f64)], bar_width: f64, color: &str, label: &str) {
        let half = (self.px(bar_width) - self.px(0.0)) * 0.4;
        let base = self.py(self.y_min.max(0.0).min(self.y_max));
        for &(x, y) in points {
            let (cx, top) = (self.px(x), self.py(y));
            let (y0, h) = if top < base {
                (top, base - top)
            } else {
                (base, top - base)
            };
            let _ = writeln!(
                self.body,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{color}"/>"#,
                cx - half,
                y0,
                2.0 * half,
                h
            );
        }
        self.add_legend(label, color);
    }

    pub fn line(&mut self, points: &[(f64, f64)], color: &str, dashed: bool, label: &str) {
        if points.is_empty() {
            return;
        }
        let path: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        let dash = if dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"{dash}/>"#,
            path.join(" ")
        );
        self.add_legend(label, color);
    }

    /// Shaded region between `lo` and `hi` at each x.
    pub fn band(&mut self, points: &[(f64, f64, f64)], color: &str, label: &str) {
        if points.is_empty() {
            return;
        }
        let upper = points
            .iter()
            .map(|&(x, _, hi)| format!("{:.2},{:.2}", self.px(x), self.py(hi)));
        let lower = points
            .iter()
            .rev()
            .map(|&(x, lo, _)| format!("{:.2},{:.2}", self.px(x), self.py(lo)));
        let pts: Vec<String> = upper.chain(lower).collect();
        let _ = writeln!(
            self.body,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.3" stroke="none"/>"#,
            pts.join(" ")
        );
        self.add_legend(label, color);
    }

    pub fn render(&self) -> String {
        let mut s = svg_open(&self.title);
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (HEIGHT - BOTTOM, TOP);
        let _ = writeln!(
            s,
            r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
        );

        let x_ticks = if self.x_ticks.is_empty() {
            ticks(self.x_min, self.x_max)
                .into_iter()
                .map(|v| (v, fmt_tick(v)))
                .collect()
        } else {
            self.x_ticks.clone()
        };
        for (v, label) in x_ticks {
            let x = self.px(v);
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
                y0 + 5.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
                y0 + 18.0,
                escape(&label)
            );
        }
        for v in ticks(self.y_min, self.y_max) {
            let y = HEIGHT
                - BOTTOM
                - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - TOP - BOTTOM);
            let label = match self.y_scale {
                YScale::Linear => fmt_tick(v),
                YScale::Log => fmt_tick(10f64.powf(v) - 1.0),
            };
            let _ = writeln!(
                s,
                r##"<line x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="#dddddd"/>"##
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{label}</text>"#,
                x0 - 6.0,
                y + 4.0
            );
        }
        s.push_str(&self.body);
        for (i, (label, color)) in self.legend.iter().enumerate() {
            let y = TOP + 14.0 * i as f64;
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{color}"/>"#,
                x0 + 10.0,
                y
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
                x0 + 24.0,
                y + 9.0,
                escape(label)
            );
        }
        axis_labels(&mut s, &self.x_label, &self.y_label);
        s.push_str("</svg>\n");
        s
    }
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo, 5.0);
    let mut v = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while v <= hi + step * 1e-9 && out.len() < 20 {
        out.push(if v.abs() < step * 1e-9 { 0.0 } else { v });
        v += step;
    }
    out
}

fn svg_open(title: &str) -> String {
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    );
    let _ = writeln!(s, "<!-- epitrack {} -->", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" font-size="16" text-anchor="middle" font-family="sans-serif">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    s
}

fn axis_labels(s: &mut String, x_label: &str, y_label: &str) {
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    );
    let cy = (TOP + HEIGHT - BOTTOM) / 2.0;
    let _ = writeln!(
        s,
        r#"<text x="18" y="{cy:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 18 {cy:.2})">{}</text>"#,
        escape(y_label)
    );
}

/// Horizontal bar chart, one bar per label, drawn top to bottom in order.
pub fn horizontal_bars(title: &str, x_label: &str, rows: &[(String, f64)], x_max: f64) -> String {
    let left = 200.0;
    let row_h = 18.0;
    let height = TOP + BOTTOM + row_h * rows.len().max(1) as f64;
    let span = if x_max > 0.0 { x_max } else { 1.0 };
    let scale = (WIDTH - left - RIGHT) / span;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{height:.0}\" viewBox=\"0 0 {WIDTH} {height:.0}\">\n"
    );
    let _ = writeln!(s, "<!-- epitrack {} -->", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{height:.0}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" font-size="16" text-anchor="middle" font-family="sans-serif">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    for (i, (label, v)) in rows.iter().enumerate() {
        let y = TOP + row_h * i as f64;
        let _ = writeln!(
            s,
            r##"<rect x="{left}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#e07b39"/>"##,
            y + 2.0,
            (v.max(0.0) * scale),
            row_h - 4.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
            left - 6.0,
            y + row_h - 5.0,
            escape(label)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="10">{v:.2}</text>"#,
            left + v.max(0.0) * scale + 4.0,
            y + row_h - 5.0
        );
    }
    let base = TOP + row_h * rows.len() as f64;
    let _ = writeln!(
        s,
        r#"<line x1="{left}" y1="{base:.2}" x2="{:.2}" y2="{base:.2}" stroke="black"/>"#,
        WIDTH - RIGHT
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
        (left + WIDTH - RIGHT) / 2.0,
        base + 30.0,
        escape(x_label)
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_are_round() {
        assert_eq!(nice_step(100.0, 5.0), 20.0);
        assert_eq!(nice_step(1.0, 5.0), 0.2);
        assert_eq!(ticks(0.0, 1.0).len(), 6);
    }

    #[test]
    fn chart_is_well_formed() {
        let mut c = Chart::new("t <1>", "x", "y", (0.0, 10.0), (0.0, 5.0), YScale::Linear);
        c.bars(&[(1.0, 2.0)], 1.0, "orange", "bars");
        c.line(&[(0.0, 0.0), (10.0, 5.0)], "black", true, "");
        c.band(&[(0.0, 1.0, 2.0), (1.0, 1.0, 3.0)], "orange", "band");
        let svg = c.render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.lines().nth(1).unwrap().starts_with("<!-- epitrack"));
        assert!(svg.contains("t &lt;1&gt;"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn log_scale_maps_zero_to_baseline() {
        let c = Chart::new("", "", "", (0.0, 1.0), (0.0, 999.0), YScale::Log);
        assert_eq!(c.py(0.0), HEIGHT - BOTTOM);
        assert_eq!(c.py(999.0), TOP);
    }
}
