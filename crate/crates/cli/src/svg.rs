//! Minimal static SVG charts with fixed axes.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;

pub const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"];

#[derive(Debug, Clone, Copy)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub log: bool,
}

impl Axis {
    pub fn linear(lo: f64, hi: f64) -> Self {
        let hi = if hi > lo { hi } else { lo + 1.0 };
        Self { lo, hi, log: false }
    }

    /// Log axis over whole decades enclosing `[lo, hi]` (both must be > 0).
    pub fn log10(lo: f64, hi: f64) -> Self {
        let lo = lo.max(f64::MIN_POSITIVE).log10().floor();
        let hi = hi.max(f64::MIN_POSITIVE).log10().ceil();
        let hi = if hi > lo { hi } else { lo + 1.0 };
        Self {
            lo: 10f64.powf(lo),
            hi: 10f64.powf(hi),
            log: true,
        }
    }

    fn frac(&self, v: f64) -> f64 {
        if self.log {
            let v = v.max(self.lo);
            (v.log10() - self.lo.log10()) / (self.hi.log10() - self.lo.log10())
        } else {
            (v - self.lo) / (self.hi - self.lo)
        }
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (
                self.lo.log10().round() as i32,
                self.hi.log10().round() as i32,
            );
            (a..=b).map(|e| 10f64.powi(e)).collect()
        } else {
            (0..=5)
                .map(|i| self.lo + (self.hi - self.lo) * i as f64 / 5.0)
                .collect()
        }
    }
}

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-3 || v.abs() >= 1e4) {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s.is_empty() || s == "-" {
            "0".into()
        } else {
            s.into()
        }
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub struct Chart {
    x: Axis,
    y: Axis,
    body: String,
    legend: Vec<(String, &'static str)>,
    title: String,
    xlabel: String,
    ylabel: String,
}

impl Chart {
    pub fn new(title: &str, xlabel: &str, ylabel: &str, x: Axis, y: Axis) -> Self {
        Self {
            x,
            y,
            body: String::new(),
            legend: Vec::new(),
            title: title.into(),
            xlabel: xlabel.into(),
            ylabel: ylabel.into(),
        }
    }

    fn px(&self, v: f64) -> f64 {
        LEFT + self.x.frac(v).clamp(0.0, 1.0) * (W - LEFT - RIGHT)
    }

    fn py(&self, v: f64) -> f64 {
        H - BOTTOM - self.y.frac(v).clamp(0.0, 1.0) * (H - TOP - BOTTOM)
    }

    pub fn bars(&mut self, edges: &[f64], counts: &[usize], color: &'static str) {
        for (i, &c) in counts.iter().enumerate() {
            let (x0, x1) = (self.px(edges[i]), self.px(edges[i + 1]));
            let (y0, y1) = (self.py(0.0), self.py(c as f64));
            let _ = writeln!(
                self.body,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{color}" stroke="white"/>"#,
                x0,
                y1,
                (x1 - x0).max(1.0),
                y0 - y1
            );
        }
    }

    pub fn line(&mut self, xs: &[f64], ys: &[Option<f64>], color: &'static str, label: &str) {
        let mut d = String::new();
        let mut pen_up = true;
        for (&x, y) in xs.iter().zip(ys) {
            match y {
                Some(y) => {
                    let _ = write!(
                        d,
                        "{}{:.2},{:.2} ",
                        if pen_up { "M" } else { "L" },
                        self.px(x),
                        self.py(*y)
                    );
                    pen_up = false;
                }
                None => pen_up = true,
            }
        }
        let _ = writeln!(
            self.body,
            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#,
            d.trim_end()
        );
        self.legend.push((label.into(), color));
    }

    pub fn points(
        &mut self,
        pts: &[(f64, f64)],
        color: &'static str,
        radius: f64,
        label: Option<&str>,
    ) {
        for &(x, y) in pts {
            let _ = writeln!(
                self.body,
                r#"<circle cx="{:.2}" cy="{:.2}" r="{radius}" fill="{color}" fill-opacity="0.7"/>"#,
                self.px(x),
                self.py(y)
            );
        }
        if let Some(l) = label {
            self.legend.push((l.into(), color));
        }
    }

    pub fn text(&mut self, x: f64, y: f64, s: &str) {
        let _ = writeln!(
            self.body,
            r##"<text x="{:.2}" y="{:.2}" font-size="9" fill="#333">{}</text>"##,
            self.px(x) + 4.0,
            self.py(y) - 4.0,
            esc(s)
        );
    }

    pub fn hline(&mut self, y: f64, color: &'static str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{LEFT}" x2="{:.2}" y1="{:.2}" y2="{:.2}" stroke="{color}" stroke-dasharray="4 3"/>"#,
            W - RIGHT,
            self.py(y),
            self.py(y)
        );
    }

    pub fn render(&self, comment: Option<&str>) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif">"#
        );
        if let Some(c) = comment {
            let _ = writeln!(s, "<!-- {} -->", c.replace("--", "- -"));
        }
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="22" font-size="14" text-anchor="middle">{}</text>"#,
            W / 2.0,
            esc(&self.title)
        );
        let (x0, x1, y0, y1) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
        let _ = writeln!(
            s,
            r##"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="#444"/>"##,
            x1 - x0,
            y1 - y0
        );
        for t in self.x.ticks() {
            let x = self.px(t);
            let _ = writeln!(
                s,
                r##"<line x1="{x:.2}" x2="{x:.2}" y1="{y1}" y2="{}" stroke="#444"/><text x="{x:.2}" y="{}" font-size="10" text-anchor="middle">{}</text>"##,
                y1 + 4.0,
                y1 + 16.0,
                fmt_tick(t)
            );
        }
        for t in self.y.ticks() {
            let y = self.py(t);
            let _ = writeln!(
                s,
                r##"<line x1="{}" x2="{x0}" y1="{y:.2}" y2="{y:.2}" stroke="#444"/><text x="{}" y="{:.2}" font-size="10" text-anchor="end">{}</text>"##,
                x0 - 4.0,
                x0 - 6.0,
                y + 3.0,
                fmt_tick(t)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            H - 15.0,
            esc(&self.xlabel)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            esc(&self.ylabel)
        );
        s.push_str(&self.body);
        for (i, (label, color)) in self.legend.iter().enumerate() {
            let y = TOP + 14.0 + 14.0 * i as f64;
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="10" height="10" fill="{color}"/><text x="{}" y="{}" font-size="10">{}</text>"#,
                x1 - 150.0,
                y - 9.0,
                x1 - 135.0,
                y,
                esc(label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_well_formed_document() {
        let mut c = Chart::new(
            "t <1>",
            "x",
            "y",
            Axis::linear(0.0, 1.0),
            Axis::log10(1e-5, 0.3),
        );
        c.line(
            &[0.0, 0.5, 1.0],
            &[Some(1e-4), None, Some(0.1)],
            PALETTE[0],
            "a",
        );
        c.points(&[(0.2, 0.01)], PALETTE[1], 2.0, Some("b"));
        let s = c.render(Some("generated 1"));
        assert!(s.starts_with("<svg"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert!(s.contains("t &lt;1&gt;"));
        assert!(s.contains("M") && s.contains("<!-- generated 1 -->"));
    }

    #[test]
    fn log_axis_spans_decades() {
        let a = Axis::log10(2e-5, 0.3);
        assert!((a.lo - 1e-5).abs() < 1e-20);
        assert!((a.hi - 1.0).abs() < 1e-12);
        assert_eq!(a.ticks().len(), 6);
    }
}
