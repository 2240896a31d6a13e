//! Machine-readable reports (JSON, `schema: 1`) and their plain-text rendering.
//!
//! Keys are sorted and no wall-clock data is included unless asked for, so a
//! report is a pure function of its inputs.

use serde_json::{json, Map, Value};

use crate::classify::{Certificate, Classification};
use crate::corpus::Summary;
use crate::model::{RowKind, Tensegrity};
use crate::rigidity::{build_operator, Mode};
use crate::stress::{MotionVector, Positivity, StressVector};

pub const SCHEMA: u64 = 1;

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Full => "full",
        Mode::CurveIsometry => "isometry",
    }
}

pub fn positivity_name(p: Positivity) -> &'static str {
    match p {
        Positivity::Zero => "zero",
        Positivity::Semipositive => "semipositive",
        Positivity::StrictlyPositive => "strictly-positive",
    }
}

fn kind_name(k: RowKind) -> &'static str {
    match k {
        RowKind::Strut => "strut",
        RowKind::Cable => "cable",
    }
}

pub fn stress_json(t: &Tensegrity, s: &StressVector) -> Value {
    let rows = build_operator(t).rows;
    let weights: Vec<Value> = rows
        .iter()
        .zip(s.weights.iter())
        .enumerate()
        .map(|(r, (row, &w))| {
            json!({
                "row": r,
                "kind": kind_name(row.kind),
                "bar": row.origin == crate::model::Origin::BarExpansion,
                "ends": [t.id(row.endpoints.0), t.id(row.endpoints.1)],
                "weight": w,
            })
        })
        .collect();
    json!({ "type": "stress", "positivity": positivity_name(s.positivity), "weights": weights })
}

pub fn motion_json(t: &Tensegrity, m: &MotionVector) -> Value {
    let n = t.dim();
    let field: Vec<Value> = (0..t.vertex_count())
        .map(|v| json!({ "vertex": t.id(v), "vector": m.field.rows(v * n, n).iter().copied().collect::<Vec<f64>>() }))
        .collect();
    json!({
        "type": "motion",
        "positivity": positivity_name(m.positivity),
        "field": field,
        "loads": m.load.iter().copied().collect::<Vec<f64>>(),
    })
}

pub fn classification_json(t: &Tensegrity, mode: Mode, c: &Classification) -> Value {
    let certificate = match &c.certificate {
        Certificate::Stress(s) => stress_json(t, s),
        Certificate::Motion(m) => motion_json(t, m),
    };
    json!({
        "schema": SCHEMA,
        "command": "analyze",
        "mode": mode_name(mode),
        "verdict": c.verdict(),
        "bar_equivalent": c.bar_equivalent,
        "partially_bar_equivalent": c.partially_bar_equivalent,
        "infinitesimally_rigid": c.infinitesimally_rigid,
        "dim_stress_space": c.dim_stress_space,
        "dim_t": c.dim_t,
        "dim_motions_modulo_t": c.dim_motions_modulo_t,
        "vertices": t.vertex_count(),
        "rows": build_operator(t).row_count(),
        "certificate": certificate,
    })
}

pub fn corpus_json(count: usize, seed: u64, s: &Summary) -> Value {
    let violations: Vec<Value> = s
        .violations
        .iter()
        .map(|v| json!({ "index": v.index, "mode": mode_name(v.mode), "detail": v.detail }))
        .collect();
    json!({
        "schema": SCHEMA,
        "command": "corpus",
        "count": count,
        "seed": seed,
        "instances": s.instances,
        "checks": s.checks,
        "violations": violations,
    })
}

/// Indented `key: value` lines; numbers print exactly as in the JSON.
pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    write_text(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            items.iter().map(scalar).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}

fn is_inline(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(items) => items.iter().all(|i| !i.is_object() && !i.is_array()),
        _ => true,
    }
}

fn write_text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => write_map(map, depth, out),
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(map) => {
                        let line: Vec<String> = map.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect();
                        out.push_str(&format!("{pad}- {}\n", line.join(" ")));
                    }
                    other => out.push_str(&format!("{pad}- {}\n", scalar(other))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn write_map(map: &Map<String, Value>, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    for (k, v) in map {
        if is_inline(v) {
            out.push_str(&format!("{pad}{k}: {}\n", scalar(v)));
        } else {
            out.push_str(&format!("{pad}{k}:\n"));
            write_text(v, depth + 1, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify;
    use crate::families::crossed_square;
    use crate::Tol;

    #[test]
    fn crossed_square_report() {
        let t = crossed_square();
        let c = classify(&t, Mode::Full, &Tol::default()).unwrap();
        let v = classification_json(&t, Mode::Full, &c);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["verdict"], "bar-equivalent");
        assert_eq!(v["certificate"]["weights"].as_array().unwrap().len(), 6);
        let text = to_text(&v);
        assert!(text.contains("verdict: bar-equivalent"));
        assert!(text.contains("infinitesimally_rigid: true"));
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn text_and_json_share_numbers() {
        let v = json!({ "x": 0.1 + 0.2, "list": [1.5, 2.0] });
        let text = to_text(&v);
        assert!(text.contains(&(0.1f64 + 0.2).to_string()));
        assert!(text.contains("list: 1.5 2.0"));
    }
}
