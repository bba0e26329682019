//! Report emission: a small JSON builder that serializes every float with 17
//! significant digits, plus the CSV writer for iteration traces.
//!
//! serde_json prints shortest-roundtrip digits, which round-trips but is not
//! byte-stable across representations of the same value; fixed-width
//! scientific notation keeps reports diffable and exact.

use crate::bam::{BamCertificate, IterationTrace, Violation};
use crate::numkit::Vector;
use crate::sets::ConvexSet;

/// Ordered JSON document: object keys keep insertion order so identical runs
/// emit identical bytes.
#[derive(Debug, Clone)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn str(s: impl Into<String>) -> Self {
        Self::Str(s.into())
    }

    pub fn obj(fields: Vec<(&str, Json)>) -> Self {
        Self::Obj(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn vector(v: &Vector) -> Self {
        Self::Arr(v.entries().iter().map(|&e| Self::Num(e)).collect())
    }

    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Self::Null => out.push_str("null"),
            Self::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Self::Int(i) => out.push_str(&i.to_string()),
            Self::Num(v) => out.push_str(&fmt_float(*v)),
            Self::Str(s) => write_escaped(out, s),
            Self::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    item.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push(']');
            }
            Self::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    write_escaped(out, key);
                    out.push_str(": ");
                    value.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push('}');
            }
        }
    }
}

fn push_indent(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// 17 significant digits in scientific notation; non-finite values have no
/// JSON number form and degrade to null.
pub fn fmt_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

fn write_escaped(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

// ── domain object views ─────────────────────────────────────────────────────

pub fn set_json(set: &ConvexSet) -> Json {
    match set {
        ConvexSet::Affine(a) => Json::obj(vec![
            ("kind", Json::str("affine")),
            ("anchor", Json::vector(a.anchor())),
            ("dim", Json::Int(a.dim() as i64)),
            (
                "basis",
                Json::Arr(a.par().basis().columns().iter().map(Json::vector).collect()),
            ),
        ]),
        ConvexSet::Ball(b) => Json::obj(vec![
            ("kind", Json::str("ball")),
            ("center", Json::vector(b.center())),
            ("radius", Json::Num(b.radius())),
        ]),
        ConvexSet::Orthant { dim } => Json::obj(vec![
            ("kind", Json::str("orthant")),
            ("dim", Json::Int(*dim as i64)),
        ]),
        ConvexSet::Singleton(p) => Json::obj(vec![
            ("kind", Json::str("singleton")),
            ("point", Json::vector(p)),
        ]),
        ConvexSet::TwoBallIntersection(t) => Json::obj(vec![
            ("kind", Json::str("two_ball_intersection")),
            (
                "first",
                Json::obj(vec![
                    ("center", Json::vector(t.first().center())),
                    ("radius", Json::Num(t.first().radius())),
                ]),
            ),
            (
                "second",
                Json::obj(vec![
                    ("center", Json::vector(t.second().center())),
                    ("radius", Json::Num(t.second().radius())),
                ]),
            ),
        ]),
        ConvexSet::Segment(s) => Json::obj(vec![
            ("kind", Json::str("segment")),
            ("start", Json::vector(s.start())),
            ("end", Json::vector(s.end())),
        ]),
        ConvexSet::OrthantBall(ob) => Json::obj(vec![
            ("kind", Json::str("orthant_ball")),
            ("dim", Json::Int(ob.dim() as i64)),
            ("radius", Json::Num(ob.radius())),
        ]),
    }
}

pub fn certificate_json(cert: &BamCertificate) -> Json {
    Json::obj(vec![
        ("gamma", Json::Num(cert.gamma)),
        ("kappa", Json::Num(cert.kappa)),
        ("provenance", Json::str(cert.provenance.to_string())),
        ("fixed_set", set_json(&cert.fixed_set)),
    ])
}

pub fn violation_json(v: &Violation) -> Json {
    Json::obj(vec![
        ("kind", Json::str(v.kind.to_string())),
        ("magnitude", Json::Num(v.magnitude)),
        ("witness", Json::vector(&v.witness)),
    ])
}

/// Plot-ready trace: one row per iterate.
pub fn trace_csv(trace: &IterationTrace) -> String {
    let mut out = String::from("k,error,bound_ratio\n");
    for (k, (err, ratio)) in trace.errors.iter().zip(&trace.bound_ratios).enumerate() {
        out.push_str(&format!("{k},{},{}\n", fmt_float(*err), fmt_float(*ratio)));
    }
    out
}
