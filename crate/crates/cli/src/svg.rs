//! Minimal, deterministic SVG 1.1 rendering of ROC curves.

use std::fmt::Write;

use pcroc::roc::RocCurve;

const SIZE: f64 = 480.0;
const LEFT: f64 = 60.0;
const TOP: f64 = 20.0;
const SIDE: f64 = 400.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

fn x(fpr: f64) -> f64 {
    LEFT + fpr * SIDE
}

fn y(tpr: f64) -> f64 {
    TOP + (1.0 - tpr) * SIDE
}

/// Unit-square plot with a diagonal reference, one polyline per curve and a
/// legend giving each curve's AUC to three decimals.
pub fn render_svg(curves: &[(&str, &RocCurve)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{SIDE}" height="{SIDE}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    for k in 0..=4 {
        let v = k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{v:.2}</text>"#,
            x(v),
            TOP + SIDE + 16.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{v:.2}</text>"#,
            LEFT - 6.0,
            y(v) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">False positive rate</text>"#,
        LEFT + SIDE / 2.0,
        SIZE - 14.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.2})">True positive rate</text>"#,
        TOP + SIDE / 2.0,
        TOP + SIDE / 2.0
    );
    let _ = writeln!(
        s,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999999" stroke-dasharray="4 4"/>"##,
        x(0.0),
        y(0.0),
        x(1.0),
        y(1.0)
    );
    for (k, (_, curve)) in curves.iter().enumerate() {
        let points: Vec<String> = curve.knots.iter().map(|&(f, t)| format!("{:.2},{:.2}", x(f), y(t))).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
            points.join(" "),
            COLORS[k % COLORS.len()]
        );
    }
    for (k, (label, curve)) in curves.iter().enumerate() {
        let row = TOP + SIDE - 12.0 - 18.0 * (curves.len() - 1 - k) as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{row:.2}" x2="{:.2}" y2="{row:.2}" stroke="{}" stroke-width="2"/>"#,
            LEFT + SIDE * 0.45,
            LEFT + SIDE * 0.45 + 20.0,
            COLORS[k % COLORS.len()]
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{} (AUC {:.3})</text>"#,
            LEFT + SIDE * 0.45 + 26.0,
            row + 4.0,
            escape(label),
            curve.auc()
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
