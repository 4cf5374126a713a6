//! Static SVG charts: 1200×800, no scripts, fixed number formatting so
//! identical data give identical bytes.

use std::fmt::Write;

pub const WIDTH: f64 = 1200.0;
pub const HEIGHT: f64 = 800.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Evenly spaced hues at saturation 0.7; lightness alternates so
/// neighbours differ.  Hex output, since not every renderer reads `hsl()`.
pub fn color(i: usize, k: usize) -> String {
    let h = 6.0 * i as f64 / k.max(1) as f64;
    let l = if i % 2 == 0 { 0.42 } else { 0.58 };
    let c = (1.0 - (2.0 * l - 1.0_f64).abs()) * 0.7;
    let x = c * (1.0 - (h % 2.0 - 1.0).abs());
    let (r, g, b) = match h as usize {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let byte = |v: f64| ((v + m) * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", byte(r), byte(g), byte(b))
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    left: f64,
    right: f64,
    top: f64,
    bottom: f64,
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x.0) / (self.x.1 - self.x.0) * (self.right - self.left)
    }

    fn py(&self, y: f64) -> f64 {
        self.bottom - (y - self.y.0) / (self.y.1 - self.y.0) * (self.bottom - self.top)
    }
}

/// Data range padded by 5%; a flat range is widened to ±1.
fn padded(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="36" font-size="22" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        esc(title)
    );
}

fn axes(out: &mut String, f: &Frame, x_label: Option<&str>, y_label: &str) {
    let _ = writeln!(
        out,
        r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        f.left,
        f.top,
        f.right - f.left,
        f.bottom - f.top
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        if x_label.is_some() {
            let xv = f.x.0 + t * (f.x.1 - f.x.0);
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">{xv:.2}</text>"#,
                f.px(xv),
                f.bottom + 20.0
            );
        }
        let yv = f.y.0 + t * (f.y.1 - f.y.0);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="end">{yv:.2}</text>"#,
            f.left - 8.0,
            f.py(yv) + 4.0
        );
    }
    if let Some(xl) = x_label {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="15" text-anchor="middle">{}</text>"#,
            (f.left + f.right) / 2.0,
            f.bottom + 46.0,
            esc(xl)
        );
    }
    let _ = writeln!(
        out,
        r#"<text transform="translate({:.1},{:.1}) rotate(-90)" font-size="15" text-anchor="middle">{}</text>"#,
        f.left - 62.0,
        (f.top + f.bottom) / 2.0,
        esc(y_label)
    );
}

fn legend(out: &mut String, labels: &[String], x: f64) {
    for (i, label) in labels.iter().enumerate() {
        let y = 80.0 + 20.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{x:.1}" y="{:.1}" width="12" height="12" fill="{}"/><text x="{:.1}" y="{:.1}" font-size="12">{}</text>"#,
            y - 10.0,
            color(i, labels.len()),
            x + 18.0,
            y,
            esc(label)
        );
    }
}

/// Points `(x, y, group)` colored by group, with a legend of group names.
pub fn scatter(title: &str, points: &[(f64, f64, usize)], groups: &[String]) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let f = Frame {
        left: 90.0,
        right: 760.0,
        top: 60.0,
        bottom: 730.0,
        x: padded(points.iter().map(|p| p.0)),
        y: padded(points.iter().map(|p| p.1)),
    };
    axes(&mut out, &f, Some("dimension 1"), "dimension 2");
    for &(x, y, g) in points {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{}" fill-opacity="0.8"/>"#,
            f.px(x),
            f.py(y),
            color(g, groups.len())
        );
    }
    legend(&mut out, groups, 780.0);
    out.push_str("</svg>\n");
    out
}

/// Five-number summary with whiskers at the most extreme observations
/// within 1.5·IQR of the quartiles.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxStats {
    pub label: String,
    pub n: usize,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub lower_whisker: f64,
    pub upper_whisker: f64,
    pub outliers: Vec<f64>,
}

/// Linear interpolation between order statistics at (n − 1)·p.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl BoxStats {
    pub fn new(label: &str, values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let (q1, median, q3) = (quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 0.75));
        let iqr = q3 - q1;
        let (lo_fence, hi_fence) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
        let inside: Vec<f64> = v.iter().copied().filter(|x| (lo_fence..=hi_fence).contains(x)).collect();
        Some(BoxStats {
            label: label.to_string(),
            n: v.len(),
            q1,
            median,
            q3,
            lower_whisker: inside.first().copied().unwrap_or(q1),
            upper_whisker: inside.last().copied().unwrap_or(q3),
            outliers: v.iter().copied().filter(|x| !(lo_fence..=hi_fence).contains(x)).collect(),
        })
    }
}

/// Horizontal boxplots, one row per group.
pub fn boxplot(title: &str, value_label: &str, boxes: &[BoxStats]) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let all = boxes
        .iter()
        .flat_map(|b| [b.lower_whisker, b.upper_whisker].into_iter().chain(b.outliers.iter().copied()));
    let f = Frame { left: 420.0, right: 1160.0, top: 60.0, bottom: 730.0, x: padded(all), y: (0.0, 1.0) };
    let _ = writeln!(
        out,
        r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        f.left,
        f.top,
        f.right - f.left,
        f.bottom - f.top
    );
    for i in 0..=4 {
        let xv = f.x.0 + i as f64 / 4.0 * (f.x.1 - f.x.0);
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">{xv:.2}</text>"#,
            f.px(xv),
            f.bottom + 20.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="15" text-anchor="middle">{}</text>"#,
        (f.left + f.right) / 2.0,
        f.bottom + 46.0,
        esc(value_label)
    );
    let row = (f.bottom - f.top) / boxes.len().max(1) as f64;
    let half = (row * 0.3).min(12.0);
    for (i, b) in boxes.iter().enumerate() {
        let cy = f.top + row * (i as f64 + 0.5);
        let c = color(i, boxes.len());
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="end">{} (n={})</text>"#,
            f.left - 8.0,
            cy + 4.0,
            esc(&b.label),
            b.n
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{cy:.2}" x2="{:.2}" y2="{cy:.2}" stroke="black"/>"#,
            f.px(b.lower_whisker),
            f.px(b.upper_whisker)
        );
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{c}" stroke="black"/>"#,
            f.px(b.q1),
            cy - half,
            f.px(b.q3) - f.px(b.q1),
            2.0 * half
        );
        let _ = writeln!(
            out,
            r#"<line x1="{m:.2}" y1="{:.2}" x2="{m:.2}" y2="{:.2}" stroke="black" stroke-width="2"/>"#,
            cy - half,
            cy + half,
            m = f.px(b.median)
        );
        for &o in &b.outliers {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{cy:.2}" r="3" fill="none" stroke="black"/>"#, f.px(o));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Line chart of named series.
pub fn lines(title: &str, x_label: &str, y_label: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let pts = || series.iter().flat_map(|(_, s)| s.iter().copied());
    let f = Frame {
        left: 90.0,
        right: 860.0,
        top: 60.0,
        bottom: 730.0,
        x: padded(pts().map(|p| p.0)),
        y: padded(pts().map(|p| p.1)),
    };
    axes(&mut out, &f, Some(x_label), y_label);
    for (i, (_, s)) in series.iter().enumerate() {
        let path: Vec<String> = s.iter().map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y))).collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2.5"/>"#,
            path.join(" "),
            color(i, series.len())
        );
    }
    let labels: Vec<String> = series.iter().map(|(l, _)| l.clone()).collect();
    legend(&mut out, &labels, 880.0);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.25), 1.75);
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert_eq!(quantile(&[7.0], 0.75), 7.0);
    }

    #[test]
    fn colors_are_hex() {
        assert_eq!(color(0, 4), "#b62020");
        for i in 0..23 {
            let c = color(i, 23);
            assert!(c.len() == 7 && c.starts_with('#'), "{c}");
        }
    }

    #[test]
    fn whiskers_stop_at_fences() {
        let b = BoxStats::new("g", &[1.0, 2.0, 3.0, 4.0, 100.0]).unwrap();
        assert_eq!((b.q1, b.median, b.q3), (2.0, 3.0, 4.0));
        assert_eq!((b.lower_whisker, b.upper_whisker), (1.0, 4.0));
        assert_eq!(b.outliers, vec![100.0]);
        assert!(BoxStats::new("empty", &[]).is_none());
    }

    #[test]
    fn documents_are_static_and_sized() {
        let docs = [
            scatter("s <&>", &[(0.0, 0.0, 0), (1.0, 2.0, 1)], &["a".into(), "b".into()]),
            boxplot("b", "z", &[BoxStats::new("g", &[1.0, 2.0]).unwrap()]),
            lines("l", "x", "y", &[("fit".into(), vec![(0.0, 1.0), (100.0, 2.0)])]),
        ];
        for d in &docs {
            assert!(d.starts_with("<svg") && d.contains(r#"width="1200" height="800""#));
            assert!(!d.contains("<script") && !d.contains("NaN"));
        }
        assert!(docs[0].contains("s &lt;&amp;&gt;"));
    }
}
