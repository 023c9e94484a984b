//! Deterministic text formats: floats with 17 significant digits, JSON and SVG.

use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

use crate::jets::Domain;

/// 17 significant digits in scientific notation; `nan`, `inf`, `-inf` otherwise.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        // Avoid a negative zero in data files.
        let v = if v == 0.0 { 0.0 } else { v };
        format!("{v:.16e}")
    }
}

/// Pretty JSON with every float printed by [`format_float`]; non-finite values become `null`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report types serialize");
    let mut out = String::new();
    write_value(&v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let f = n.as_f64().unwrap();
                if f.is_finite() {
                    out.push_str(&format_float(f));
                } else {
                    out.push_str("null");
                }
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap()),
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&serde_json::to_string(k).unwrap());
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// A 1000×1000 SVG canvas over a parameter region, y pointing up.
pub struct Svg {
    region: Domain,
    body: String,
    paths: usize,
}

pub const SVG_SIZE: f64 = 1000.0;

impl Svg {
    pub fn new(region: Domain) -> Svg {
        Svg {
            region,
            body: String::new(),
            paths: 0,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let r = &self.region;
        (
            (x - r.x.0) / r.width() * SVG_SIZE,
            SVG_SIZE - (y - r.y.0) / r.height() * SVG_SIZE,
        )
    }

    /// One `<path>` element for the polyline.
    pub fn polyline(&mut self, points: &[(f64, f64)], class: &str) {
        if points.len() < 2 {
            return;
        }
        let mut d = String::new();
        for (i, (x, y)) in points.iter().enumerate() {
            let (u, v) = self.map(*x, *y);
            let _ = write!(d, "{}{u:.3} {v:.3}", if i == 0 { "M" } else { " L" });
        }
        let _ = writeln!(self.body, r#"<path class="{class}" d="{d}"/>"#);
        self.paths += 1;
    }

    pub fn marker(&mut self, x: f64, y: f64, class: &str) {
        let (u, v) = self.map(x, y);
        let _ = writeln!(self.body, r#"<circle class="{class}" cx="{u:.3}" cy="{v:.3}" r="6"/>"#);
    }

    pub fn path_count(&self) -> usize {
        self.paths
    }

    /// The document, carrying the scene hash and any notes as metadata.
    pub fn finish(&self, scene_hash: &str, notes: &[String]) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}" width="{SVG_SIZE}" height="{SVG_SIZE}">"#
        );
        let _ = writeln!(s, "<metadata>");
        let _ = writeln!(s, "scene-sha256: {scene_hash}");
        for n in notes {
            let _ = writeln!(s, "note: {}", escape(n));
        }
        let _ = writeln!(s, "</metadata>");
        s.push_str(STYLE);
        let _ = writeln!(s, r#"<rect width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>"#);
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s
    }
}

const STYLE: &str = "<style>
path { fill: none; stroke-width: 1.5; }
path.discriminant { stroke: #c0392b; stroke-width: 3; }
path.branch-0 { stroke: #1f4e99; }
path.branch-1 { stroke: #2e8b57; }
circle.inflection { fill: black; }
circle.curve-singularity { fill: none; stroke: #c0392b; stroke-width: 2; }
</style>
";

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
