//! Minimal SVG emission: line plots, quiver plots and arm snapshots.
//!
//! Every plot uses a fixed 800×500 viewport. Output is plain text and fully
//! determined by the input data.

use std::fmt::Write as _;

use mmc_core::Vec2;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 55.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone)]
pub struct Series<'a> {
    pub label: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

#[derive(Debug, Clone, Copy)]
struct Bounds {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Bounds {
    fn from_points(points: impl Iterator<Item = (f64, f64)>) -> Bounds {
        let mut b = Bounds {
            x0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y0: f64::INFINITY,
            y1: f64::NEG_INFINITY,
        };
        for (x, y) in points.filter(|(x, y)| x.is_finite() && y.is_finite()) {
            b.x0 = b.x0.min(x);
            b.x1 = b.x1.max(x);
            b.y0 = b.y0.min(y);
            b.y1 = b.y1.max(y);
        }
        if !b.x0.is_finite() {
            return Bounds {
                x0: 0.0,
                x1: 1.0,
                y0: 0.0,
                y1: 1.0,
            };
        }
        if b.x1 - b.x0 < 1e-12 {
            b.x0 -= 0.5;
            b.x1 += 0.5;
        }
        if b.y1 - b.y0 < 1e-12 {
            b.y0 -= 0.5;
            b.y1 += 0.5;
        }
        b
    }

    /// Same scale on both axes, centered on the data.
    fn equal_aspect(self) -> Bounds {
        let sx = (self.x1 - self.x0) / (WIDTH - MARGIN_LEFT - MARGIN_RIGHT);
        let sy = (self.y1 - self.y0) / (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM);
        let s = sx.max(sy);
        let cx = 0.5 * (self.x0 + self.x1);
        let cy = 0.5 * (self.y0 + self.y1);
        let hw = 0.5 * s * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT);
        let hh = 0.5 * s * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM);
        Bounds {
            x0: cx - hw,
            x1: cx + hw,
            y0: cy - hh,
            y1: cy + hh,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT
            - MARGIN_BOTTOM
            - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, b: &Bounds, x_label: &str, y_label: &str) {
    let (l, r) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (t, bot) = (MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
    let _ = writeln!(
        out,
        r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        r - l,
        bot - t
    );
    for k in 0..=5 {
        let f = k as f64 / 5.0;
        let xv = b.x0 + f * (b.x1 - b.x0);
        let yv = b.y0 + f * (b.y1 - b.y0);
        let (x, y) = (b.px(xv), b.py(yv));
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{bot}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#,
            bot + 5.0,
            bot + 18.0,
            tick(xv)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{y:.2}" x2="{l}" y2="{y:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            l - 5.0,
            l - 8.0,
            y + 4.0,
            tick(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
        0.5 * (l + r),
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        0.5 * (t + bot),
        0.5 * (t + bot),
        escape(y_label)
    );
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Line plot of one or more series sharing the axes.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let b = Bounds::from_points(
        series
            .iter()
            .flat_map(|s| s.x.iter().copied().zip(s.y.iter().copied())),
    );
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &b, x_label, y_label);
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut d = String::new();
        for (x, y) in s.x.iter().zip(s.y) {
            if x.is_finite() && y.is_finite() {
                let _ = write!(d, "{:.2},{:.2} ", b.px(*x), b.py(*y));
            }
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            d.trim_end()
        );
        if series.len() > 1 {
            let y = MARGIN_TOP + 14.0 + 16.0 * k as f64;
            let x = WIDTH - MARGIN_RIGHT - 150.0;
            let _ = writeln!(
                out,
                r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
                x + 20.0,
                x + 26.0,
                y + 4.0,
                escape(s.label)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Arrows from each point to `point + displacement`.
pub fn quiver_plot(title: &str, points: &[Vec2], displacements: &[Vec2]) -> String {
    let b = Bounds::from_points(
        points
            .iter()
            .zip(displacements)
            .flat_map(|(p, d)| [(p.x, p.y), (p.x + d.x, p.y + d.y)]),
    )
    .equal_aspect();
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &b, "x (segment lengths)", "y (segment lengths)");
    let r = (b.px(1.0) - b.px(0.0)).abs();
    let _ = writeln!(
        out,
        r##"<circle cx="{:.2}" cy="{:.2}" r="{r:.2}" fill="none" stroke="#999" stroke-dasharray="4 3"/>"##,
        b.px(0.0),
        b.py(0.0)
    );
    for (p, d) in points.iter().zip(displacements) {
        let (x1, y1) = (b.px(p.x), b.py(p.y));
        let (x2, y2) = (b.px(p.x + d.x), b.py(p.y + d.y));
        let _ = writeln!(
            out,
            r##"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#1f77b4"/><circle cx="{x2:.2}" cy="{y2:.2}" r="1.5" fill="#d62728"/>"##
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Arm postures as polylines from the base; the last snapshot is drawn solid,
/// earlier ones dashed. `target` is marked with a cross.
pub fn arm_snapshots(title: &str, snapshots: &[[Vec2; 3]], target: Vec2) -> String {
    let joints = |s: &[Vec2; 3]| {
        let mut p = [Vec2::ZERO; 4];
        for i in 0..3 {
            p[i + 1] = p[i] + s[i];
        }
        p
    };
    let b = Bounds::from_points(
        snapshots
            .iter()
            .flat_map(|s| joints(s).map(|p| (p.x, p.y)))
            .chain([(target.x, target.y), (0.0, 0.0)]),
    )
    .equal_aspect();
    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, &b, "x (segment lengths)", "y (segment lengths)");
    for (k, s) in snapshots.iter().enumerate() {
        let last = k + 1 == snapshots.len();
        let pts: Vec<String> = joints(s)
            .iter()
            .map(|p| format!("{:.2},{:.2}", b.px(p.x), b.py(p.y)))
            .collect();
        let style = if last {
            r##"stroke="#1f77b4" stroke-width="3""##
        } else {
            r##"stroke="#888" stroke-width="1.2" stroke-dasharray="5 4""##
        };
        let _ = writeln!(
            out,
            r#"<polyline fill="none" {style} points="{}"/>"#,
            pts.join(" ")
        );
    }
    let (tx, ty) = (b.px(target.x), b.py(target.y));
    let _ = writeln!(
        out,
        r##"<path d="M{:.2},{:.2}L{:.2},{:.2}M{:.2},{:.2}L{:.2},{:.2}" stroke="#d62728" stroke-width="2"/>"##,
        tx - 6.0,
        ty - 6.0,
        tx + 6.0,
        ty + 6.0,
        tx - 6.0,
        ty + 6.0,
        tx + 6.0,
        ty - 6.0
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_plot_has_fixed_viewport_and_labels() {
        let x = [0.0, 1.0, 2.0];
        let y = [1.0, 0.5, 0.25];
        let svg = line_plot(
            "t",
            "iteration",
            "normalized distance",
            &[Series {
                label: "a",
                x: &x,
                y: &y,
            }],
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(r#"viewBox="0 0 800 500""#));
        assert!(svg.contains("iteration"));
        assert!(svg.contains("normalized distance"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn degenerate_data_stays_finite() {
        let x = [1.0];
        let y = [f64::NAN];
        let svg = line_plot(
            "t",
            "x",
            "y",
            &[Series {
                label: "a",
                x: &x,
                y: &y,
            }],
        );
        assert!(!svg.contains("NaN"));
        let svg = quiver_plot("q", &[], &[]);
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }

    #[test]
    fn tick_format() {
        assert_eq!(tick(0.5), "0.5");
        assert_eq!(tick(-0.0001), "0");
        assert_eq!(tick(100.0), "100");
    }
}
