//! Static SVG rendering of before/after boundaries.
//!
//! One panel holds stacked layers (before rings gray, after rings black,
//! vanished originals hatched); comparison output places several panels side
//! by side. Map y grows upward, so coordinates are flipped into screen
//! convention inside the shared bounding box.

use crate::geom::Point;

use super::IoError;

/// A set of rings drawn with one stroke style.
#[derive(Debug, Clone, Default)]
pub struct SvgLayer {
    pub label: String,
    pub stroke: String,
    pub rings: Vec<Vec<Point>>,
    /// Rings drawn with a hatched fill (vanished originals).
    pub hatched: Vec<Vec<Point>>,
}

/// One drawing area with its own label, sharing the document's scale.
#[derive(Debug, Clone, Default)]
pub struct Panel {
    pub label: String,
    pub layers: Vec<SvgLayer>,
}

/// Renders a single panel.
pub fn render_svg(layers: Vec<SvgLayer>) -> Result<String, IoError> {
    render_panels(&[Panel {
        label: String::new(),
        layers,
    }])
}

/// Renders panels left to right at a common scale with a 5% margin.
pub fn render_panels(panels: &[Panel]) -> Result<String, IoError> {
    let mut min = Point::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut any = false;
    for panel in panels {
        for layer in &panel.layers {
            for ring in layer.rings.iter().chain(&layer.hatched) {
                for p in ring {
                    min.x = min.x.min(p.x);
                    min.y = min.y.min(p.y);
                    max.x = max.x.max(p.x);
                    max.y = max.y.max(p.y);
                    any = true;
                }
            }
        }
    }
    if !any {
        return Err(IoError::NothingToRender);
    }

    let width = max.x - min.x;
    let height = max.y - min.y;
    let margin = 0.05 * width.max(height).max(f64::MIN_POSITIVE);
    let panel_w = width + 2.0 * margin;
    let panel_h = height + 2.0 * margin;
    let total_w = panel_w * panels.len() as f64;
    let stroke_width = 0.004 * width.max(height).max(f64::MIN_POSITIVE);
    // Screen-convention flip inside the data bounding box.
    let flip = |p: &Point| Point::new(p.x, min.y + max.y - p.y);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">\n",
        fmt(min.x - margin),
        fmt(min.y - margin),
        fmt(total_w),
        fmt(panel_h),
    ));
    let hatch_step = 0.02 * width.max(height);
    svg.push_str(&format!(
        "<defs><pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"{s}\" height=\"{s}\">\
<path d=\"M0 {s} L{s} 0\" stroke=\"#b05050\" stroke-width=\"{w}\"/></pattern></defs>\n",
        s = fmt(hatch_step),
        w = fmt(stroke_width),
    ));

    let mut notes: Vec<String> = Vec::new();
    for (i, panel) in panels.iter().enumerate() {
        let dx = panel_w * i as f64;
        svg.push_str(&format!("<g transform=\"translate({} 0)\">\n", fmt(dx)));
        if !panel.label.is_empty() {
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"{}\">{}</text>\n",
                fmt(min.x),
                fmt(min.y - margin * 0.2),
                fmt(margin * 0.7),
                escape(&panel.label),
            ));
        }
        for layer in &panel.layers {
            if layer.rings.is_empty() && layer.hatched.is_empty() && !layer.label.is_empty() {
                notes.push(format!("{}: nothing to draw", layer.label));
            }
            for ring in &layer.hatched {
                svg.push_str(&format!(
                    "<path d=\"{}\" fill=\"url(#hatch)\" stroke=\"#b05050\" stroke-width=\"{}\"/>\n",
                    path_data(ring, flip),
                    fmt(stroke_width),
                ));
            }
            for ring in &layer.rings {
                svg.push_str(&format!(
                    "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
                    path_data(ring, flip),
                    escape(&layer.stroke),
                    fmt(stroke_width),
                ));
            }
        }
        svg.push_str("</g>\n");
    }

    svg.push_str("<g class=\"notes\">");
    for (i, note) in notes.iter().enumerate() {
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"{}\">{}</text>",
            fmt(min.x),
            fmt(min.y + margin * (0.8 * (i + 1) as f64)),
            fmt(margin * 0.6),
            escape(note),
        ));
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}

fn path_data(ring: &[Point], flip: impl Fn(&Point) -> Point) -> String {
    let mut d = String::new();
    for (i, p) in ring.iter().enumerate() {
        let p = flip(p);
        let op = if i == 0 { 'M' } else { 'L' };
        d.push_str(&format!("{op}{} {} ", fmt(p.x), fmt(p.y)));
    }
    d.push('Z');
    d
}

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
