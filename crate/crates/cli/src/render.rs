//! Byte-stable SVG rendering of drawings.

use std::fmt::Write;

use td13_core::embedder::Drawing;
use td13_core::encoding::EdgeClass;

use crate::fmt_sig;

// one distinguishable color per possible length class
const PALETTE: [&str; 13] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a",
];

fn sig(v: f64) -> String {
    fmt_sig(v, 12)
}

/// Renders edges as colored segments, vertices as dots, and a legend of the
/// class lengths sorted by length. The y axis points up and the viewBox is
/// fitted with a five percent margin.
pub fn drawing_svg(d: &Drawing) -> String {
    let pts: Vec<(f64, f64)> = d.coords.values().map(|z| (z.re, -z.im)).collect();
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (0.0f64, 0.0f64, 1.0f64, 1.0f64);
    if let Some(&(x0, y0)) = pts.first() {
        (min_x, min_y, max_x, max_y) = (x0, y0, x0, y0);
        for &(x, y) in &pts {
            min_x = min_x.min(x);
            min_y = min_y.min(y);
            max_x = max_x.max(x);
            max_y = max_y.max(y);
        }
    }
    let span = (max_x - min_x).max(max_y - min_y).max(d.scale);
    let margin = 0.05 * span;
    let width = max_x - min_x + 2.0 * margin;
    let legend_row = span / 24.0;
    let legend_height = legend_row * (d.classes.len() as f64 + 1.0);
    let height = max_y - min_y + 2.0 * margin + legend_height;
    let stroke = span / 400.0;
    let radius = span / 250.0;

    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        sig(min_x - margin),
        sig(min_y - margin),
        sig(width),
        sig(height)
    );
    out.push_str("<title>straight-line drawing with at most thirteen edge lengths</title>\n");

    let _ = write!(out, "<g stroke-width=\"{}\" fill=\"none\">\n", sig(stroke));
    for e in &d.edges {
        let a = d.coords[&e.u];
        let b = d.coords[&e.v];
        let color = PALETTE[e.class % PALETTE.len()];
        let _ = write!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\"/>\n",
            sig(a.re),
            sig(-a.im),
            sig(b.re),
            sig(-b.im)
        );
    }
    out.push_str("</g>\n<g fill=\"#000000\">\n");
    for z in d.coords.values() {
        let _ = write!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n",
            sig(z.re),
            sig(-z.im),
            sig(radius)
        );
    }
    out.push_str("</g>\n");

    // legend sorted by length
    let mut order: Vec<usize> = (0..d.classes.len()).collect();
    order.sort_by(|&i, &j| d.classes[i].length.total_cmp(&d.classes[j].length));
    let font = legend_row * 0.6;
    let x0 = min_x - margin + legend_row;
    let mut y = max_y + margin + legend_row;
    let _ = write!(
        out,
        "<g font-family=\"monospace\" font-size=\"{}\" fill=\"#000000\">\n",
        sig(font)
    );
    for id in order {
        let c = &d.classes[id];
        let color = PALETTE[id % PALETTE.len()];
        let _ = write!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"{}\"/>\n",
            sig(x0),
            sig(y - font * 0.35),
            sig(x0 + legend_row * 1.5),
            sig(y - font * 0.35),
            sig(stroke * 2.0)
        );
        let kind = match c.kind {
            EdgeClass::Unit => "unit".to_string(),
            EdgeClass::Diagonal(t) => format!("diagonal {t}"),
        };
        let _ = write!(
            out,
            "<text x=\"{}\" y=\"{}\">class {id}: {} ({kind})</text>\n",
            sig(x0 + legend_row * 2.0),
            sig(y),
            sig(c.length)
        );
        y += legend_row;
    }
    out.push_str("</g>\n</svg>\n");
    out
}
