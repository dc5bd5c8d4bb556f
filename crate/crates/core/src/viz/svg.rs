//! Minimal deterministic SVG document builder.
//!
//! Coordinates are written with exactly three decimals and elements in call
//! order, so identical inputs produce byte-identical documents.

use std::fmt::Write;

pub(crate) fn fmt_coord(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn escape_text(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub(crate) struct SvgBuilder {
    width: f64,
    height: f64,
    body: String,
}

impl SvgBuilder {
    pub fn new(width: f64, height: f64) -> Self {
        SvgBuilder {
            width,
            height,
            body: String::new(),
        }
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, style: &str) {
        writeln!(
            self.body,
            r#"  <rect x="{}" y="{}" width="{}" height="{}" style="{style}"/>"#,
            fmt_coord(x),
            fmt_coord(y),
            fmt_coord(w.max(0.0)),
            fmt_coord(h.max(0.0)),
        )
        .unwrap();
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, style: &str) {
        writeln!(
            self.body,
            r#"  <line x1="{}" y1="{}" x2="{}" y2="{}" style="{style}"/>"#,
            fmt_coord(x1),
            fmt_coord(y1),
            fmt_coord(x2),
            fmt_coord(y2),
        )
        .unwrap();
    }

    fn points_attr(points: &[(f64, f64)]) -> String {
        points
            .iter()
            .map(|&(x, y)| format!("{},{}", fmt_coord(x), fmt_coord(y)))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], style: &str) {
        writeln!(
            self.body,
            r#"  <polyline points="{}" style="{style}"/>"#,
            Self::points_attr(points),
        )
        .unwrap();
    }

    pub fn polygon(&mut self, points: &[(f64, f64)], style: &str) {
        writeln!(
            self.body,
            r#"  <polygon points="{}" style="{style}"/>"#,
            Self::points_attr(points),
        )
        .unwrap();
    }

    pub fn text(&mut self, x: f64, y: f64, content: &str, style: &str) {
        writeln!(
            self.body,
            r#"  <text x="{}" y="{}" style="{style}">{}</text>"#,
            fmt_coord(x),
            fmt_coord(y),
            escape_text(content),
        )
        .unwrap();
    }

    pub fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {w} {h}\" width=\"{w}\" height=\"{h}\">\n{body}</svg>\n",
            w = fmt_coord(self.width),
            h = fmt_coord(self.height),
            body = self.body,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_use_three_decimals() {
        assert_eq!(fmt_coord(1.0 / 3.0), "0.333");
        assert_eq!(fmt_coord(2.0), "2.000");
        assert_eq!(fmt_coord(-0.0001), "0.000");
    }

    #[test]
    fn text_is_escaped() {
        let mut b = SvgBuilder::new(10.0, 10.0);
        b.text(0.0, 0.0, "a < b & c > d", "");
        let doc = b.finish();
        assert!(doc.contains("a &lt; b &amp; c &gt; d"));
    }

    #[test]
    fn document_declares_a_viewbox() {
        let doc = SvgBuilder::new(640.0, 480.0).finish();
        assert!(doc.starts_with("<?xml"));
        assert!(doc.contains(r#"viewBox="0 0 640.000 480.000""#));
        assert!(doc.trim_end().ends_with("</svg>"));
    }
}
