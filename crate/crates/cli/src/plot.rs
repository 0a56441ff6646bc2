//! Minimal SVG line charts: stacked panels sharing one x axis.

use std::fmt::Write as _;

pub struct Line<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub points: Vec<(f64, f64)>,
}

pub struct Panel<'a> {
    pub title: String,
    pub y_label: &'a str,
    pub lines: Vec<Line<'a>>,
}

const WIDTH: f64 = 900.0;
const PANEL_HEIGHT: f64 = 220.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 140.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 40.0;

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the panels top to bottom as an SVG 1.1 document.
pub fn render(panels: &[Panel], x_label: &str) -> String {
    let height = panels.len() as f64 * (PANEL_HEIGHT + MARGIN_TOP + MARGIN_BOTTOM);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>"#
    );
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    for (i, panel) in panels.iter().enumerate() {
        let top = i as f64 * (PANEL_HEIGHT + MARGIN_TOP + MARGIN_BOTTOM) + MARGIN_TOP;
        let all = || panel.lines.iter().flat_map(|l| l.points.iter());
        let (x0, x1) = bounds(all().map(|p| p.0));
        let (y0, y1) = bounds(all().map(|p| p.1));
        let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| top + PANEL_HEIGHT - (y - y0) / (y1 - y0) * PANEL_HEIGHT;
        let _ = writeln!(
            s,
            r#"<text x="{MARGIN_LEFT}" y="{:.1}" font-weight="bold">{}</text>"#,
            top - 10.0,
            escape(&panel.title)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{MARGIN_LEFT}" y="{top:.1}" width="{plot_w:.1}" height="{PANEL_HEIGHT}" fill="none" stroke="black"/>"#
        );
        for (v, y) in [(y0, sy(y0)), (y1, sy(y1))] {
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.1}</text>"#,
                MARGIN_LEFT - 6.0,
                y + 4.0
            );
        }
        for (v, x) in [(x0, sx(x0)), (x1, sx(x1))] {
            let _ = writeln!(
                s,
                r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{v:.0}</text>"#,
                top + PANEL_HEIGHT + 16.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            top + PANEL_HEIGHT + 32.0,
            escape(x_label)
        );
        let _ = writeln!(
            s,
            r#"<text transform="translate(16 {:.1}) rotate(-90)" text-anchor="middle">{}</text>"#,
            top + PANEL_HEIGHT / 2.0,
            escape(panel.y_label)
        );
        for (j, line) in panel.lines.iter().enumerate() {
            let pts: Vec<String> = line
                .points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{}" stroke-width="1" points="{}"/>"#,
                line.color,
                pts.join(" ")
            );
            let ly = top + 14.0 + j as f64 * 16.0;
            let lx = WIDTH - MARGIN_RIGHT + 10.0;
            let _ = writeln!(
                s,
                r#"<line x1="{lx:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{}" stroke-width="2"/><text x="{:.1}" y="{ly:.1}">{}</text>"#,
                ly - 4.0,
                lx + 18.0,
                ly - 4.0,
                line.color,
                lx + 24.0,
                escape(line.label)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_one_polyline_per_line() {
        let svg = render(
            &[Panel {
                title: "a < b".into(),
                y_label: "deg",
                lines: vec![
                    Line {
                        label: "true",
                        color: "black",
                        points: vec![(0.0, 1.0), (1.0, 2.0)],
                    },
                    Line {
                        label: "decoded",
                        color: "red",
                        points: vec![(0.0, 1.5), (1.0, f64::NAN)],
                    },
                ],
            }],
            "bin",
        );
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("a &lt; b"));
        assert!(!svg.contains("NaN"));
    }
}
