//! Minimal static SVG charts. No timestamps, so output is reproducible.

use std::fmt::Write;

use circlift::experiments::{Metadata, SparsityRow};

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 60.0;

fn header(out: &mut String, title: &str, version: &str) {
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#).unwrap();
    writeln!(out, "<!-- circlift {version} -->").unwrap();
    writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(out, r#"<text x="{}" y="30" font-family="sans-serif" font-size="16" text-anchor="middle">{title}</text>"#, W / 2.0).unwrap();
}

fn bounds(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let lo = values.clone().fold(f64::INFINITY, f64::min);
    let hi = values.fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

/// Points coloured by angle: hue `360·θ`.
pub fn coords_scatter(points: &[[f64; 2]], theta: &[f64]) -> String {
    let mut out = String::new();
    header(&mut out, "circular coordinates (PCA projection)", env!("CARGO_PKG_VERSION"));
    let (x0, x1) = bounds(points.iter().map(|p| p[0]));
    let (y0, y1) = bounds(points.iter().map(|p| p[1]));
    let span = (x1 - x0).max(y1 - y0);
    let size = (W.min(H)) - 2.0 * MARGIN;
    for (p, t) in points.iter().zip(theta) {
        let cx = W / 2.0 + (p[0] - (x0 + x1) / 2.0) / span * size;
        let cy = H / 2.0 - (p[1] - (y0 + y1) / 2.0) / span * size;
        writeln!(out, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="4" fill="hsl({:.1},80%,45%)"/>"#, 360.0 * t).unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// Proportion of non-liftable lines against `p`.
pub fn sparsity_chart(rows: &[SparsityRow], meta: &Metadata) -> String {
    let mut out = String::new();
    header(&mut out, "non-liftable lines", &meta.version);
    writeln!(out, "<!-- seed {} generator {} -->", meta.seed, meta.generator).unwrap();
    let (p0, p1) = bounds(rows.iter().map(|r| r.p as f64));
    let (_, y1) = bounds(rows.iter().map(|r| r.proportion).chain([0.0]));
    let x = |p: f64| MARGIN + (p - p0) / (p1 - p0) * (W - 2.0 * MARGIN);
    let y = |v: f64| H - MARGIN - v / y1 * (H - 2.0 * MARGIN);
    writeln!(
        out,
        r#"<path d="M{m} {b} H{r} M{m} {b} V{m}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    )
    .unwrap();
    writeln!(out, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">p</text>"#, W / 2.0, H - 20.0).unwrap();
    writeln!(out, r#"<text x="15" y="{}" font-family="sans-serif" font-size="12" transform="rotate(-90 15 {})" text-anchor="middle">proportion</text>"#, H / 2.0, H / 2.0).unwrap();
    for (label, v) in [(format!("{p0}"), p0), (format!("{p1}"), p1)] {
        writeln!(out, r#"<text x="{:.1}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle">{label}</text>"#, x(v), H - MARGIN + 15.0).unwrap();
    }
    writeln!(out, r#"<text x="{}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="end">{y1:.3}</text>"#, MARGIN - 5.0, y(y1) + 4.0).unwrap();
    let path: Vec<String> = rows.iter().map(|r| format!("{:.2},{:.2}", x(r.p as f64), y(r.proportion))).collect();
    if !path.is_empty() {
        writeln!(out, r#"<polyline points="{}" stroke="steelblue" stroke-width="1.5" fill="none"/>"#, path.join(" ")).unwrap();
    }
    out.push_str("</svg>\n");
    out
}
