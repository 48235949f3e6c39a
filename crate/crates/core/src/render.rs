//! Deterministic SVG drawings of chord layers on `n` convex points.

use std::fmt::Write as _;

use crate::convex::Chord;
use crate::io::Document;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub width: u32,
    pub height: u32,
    pub radius: f64,
    pub palette: Vec<&'static str>,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            width: 600,
            height: 600,
            radius: 250.0,
            palette: vec![
                "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
                "#bcbd22", "#7f7f7f",
            ],
        }
    }
}

/// Fixed three-decimal formatting without negative zero.
fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

impl RenderSpec {
    /// Point `i` sits at angle `90° - 360° i / n`, so indices run clockwise
    /// from the top.
    pub fn position(&self, i: usize, n: usize, radius: f64) -> (f64, f64) {
        let theta = (90.0 - 360.0 * i as f64 / n as f64).to_radians();
        let cx = self.width as f64 / 2.0;
        let cy = self.height as f64 / 2.0;
        (cx + radius * theta.cos(), cy - radius * theta.sin())
    }

    /// Draws each layer in its palette colour, then the points, with
    /// `highlight` points filled red.
    pub fn render(&self, n: usize, layers: &[Vec<Chord>], highlight: &[usize]) -> String {
        let mut s = String::new();
        let (w, h) = (self.width, self.height);
        writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
        writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
        writeln!(
            s,
            r##"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="#dddddd" stroke-width="1"/>"##,
            num(w as f64 / 2.0),
            num(h as f64 / 2.0),
            num(self.radius)
        )
        .unwrap();
        for (li, layer) in layers.iter().enumerate() {
            let color = self.palette[li % self.palette.len()];
            writeln!(s, r#"<g stroke="{color}" stroke-width="2" stroke-opacity="0.75">"#).unwrap();
            for c in layer {
                let (x1, y1) = self.position(c.a(), n, self.radius);
                let (x2, y2) = self.position(c.b(), n, self.radius);
                writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, num(x1), num(y1), num(x2), num(y2)).unwrap();
            }
            writeln!(s, "</g>").unwrap();
        }
        writeln!(s, r#"<g font-family="sans-serif" font-size="14" text-anchor="middle">"#).unwrap();
        for i in 0..n {
            let (x, y) = self.position(i, n, self.radius);
            let fill = if highlight.contains(&i) { "#d62728" } else { "black" };
            writeln!(s, r#"<circle cx="{}" cy="{}" r="5" fill="{fill}"/>"#, num(x), num(y)).unwrap();
            let (tx, ty) = self.position(i, n, self.radius + 20.0);
            writeln!(s, r#"<text x="{}" y="{}" dy="5">{i}</text>"#, num(tx), num(ty)).unwrap();
        }
        writeln!(s, "</g>").unwrap();
        writeln!(s, "</svg>").unwrap();
        s
    }

    /// Layers for each file kind: one per thrackle, family member, or colour
    /// class; structures highlight their cycle.
    pub fn render_document(&self, doc: &Document) -> String {
        match doc {
            Document::Graph(g) => self.render(g.n, std::slice::from_ref(&g.vertices), &[]),
            Document::Thrackle(t) => self.render(t.n, std::slice::from_ref(&t.edges), &[]),
            Document::Structure(st) => self.render(st.n, std::slice::from_ref(&st.edges), &st.cycle),
            Document::Family(f) => {
                let layers: Vec<Vec<Chord>> = f.thrackles.iter().map(|t| t.edges.clone()).collect();
                self.render(f.n, &layers, &[])
            }
            Document::Certificate(c) => self.render(c.n, &c.classes, &[]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{to_json, StructureFile};
    use crate::thrackle::structure_from_cycle_support;

    #[test]
    fn point_zero_on_top() {
        let spec = RenderSpec::default();
        let (x, y) = spec.position(0, 7, 250.0);
        assert!((x - 300.0).abs() < 1e-9 && (y - 50.0).abs() < 1e-9);
        // Clockwise: point 1 of 4 is on the right.
        let (x, y) = spec.position(1, 4, 250.0);
        assert!((x - 550.0).abs() < 1e-9 && (y - 300.0).abs() < 1e-9);
    }

    #[test]
    fn stable_output() {
        let s = structure_from_cycle_support(7, &[0, 2, 4]).unwrap();
        let doc = crate::io::parse_document(&to_json(&StructureFile::from(&s))).unwrap();
        let spec = RenderSpec::default();
        let a = spec.render_document(&doc);
        assert_eq!(a, spec.render_document(&doc));
        assert!(a.starts_with("<svg "));
        assert!(a.ends_with("</svg>\n"));
        assert_eq!(a.matches("<line ").count(), 7);
        assert_eq!(a.matches("fill=\"#d62728\"").count(), 3);
        assert!(!a.contains("-0.000"));
    }
}
