//! Browser bindings for the demo page in `www/`.
//!
//! Each export is a thin wrapper over a plain function that returns
//! `Result<_, String>`, so the logic is testable off the browser.

use wasm_bindgen::prelude::*;

use tenseg::classify::{classify, Certificate};
use tenseg::families::{self, FamilySpec};
use tenseg::svg::{render, Annotation};
use tenseg::{model, report, Mode, Tol};

fn mode_of(name: &str) -> Result<Mode, String> {
    match name {
        "" | "full" => Ok(Mode::Full),
        "isometry" => Ok(Mode::CurveIsometry),
        other => Err(format!("unknown mode `{other}`")),
    }
}

/// Parses `n=12 skip-frac=0.25`; commas also separate pairs.
pub fn family_spec(family: &str, params: &str) -> Result<FamilySpec, String> {
    let mut spec = FamilySpec::new(family.trim());
    for pair in params.split(|c: char| c.is_whitespace() || c == ',').filter(|p| !p.is_empty()) {
        let (k, v) = pair.split_once('=').ok_or_else(|| format!("expected key=value, got `{pair}`"))?;
        let v: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
        spec = spec.with(k, v);
    }
    Ok(spec)
}

/// SVG of a generated family. `annotate` is empty, `stress` or `motion`;
/// the annotation is the classification certificate when it has that kind.
pub fn svg_for(family: &str, params: &str, annotate: &str) -> Result<String, String> {
    let t = families::generate(&family_spec(family, params)?).map_err(|e| e.to_string())?;
    if annotate.is_empty() {
        return Ok(render(&t, &Annotation::None));
    }
    let c = classify(&t, Mode::Full, &Tol::default()).map_err(|e| e.to_string())?;
    let annotation = match (annotate, &c.certificate) {
        ("stress", Certificate::Stress(s)) => Annotation::Stress(&s.weights),
        ("motion", Certificate::Motion(m)) => Annotation::Motion(&m.field),
        ("stress", _) | ("motion", _) => Annotation::None,
        (other, _) => return Err(format!("unknown annotation `{other}`")),
    };
    Ok(render(&t, &annotation))
}

/// Classification report of a model in the text format, as JSON.
pub fn report_for(text: &str, mode: &str) -> Result<String, String> {
    let t = model::parse(text).map_err(|e| e.to_string())?;
    let mode = mode_of(mode)?;
    let c = classify(&t, mode, &Tol::default()).map_err(|e| e.to_string())?;
    Ok(report::classification_json(&t, mode, &c).to_string())
}

#[wasm_bindgen]
pub fn generate_svg(family: &str, params: &str, annotate: &str) -> Result<String, JsError> {
    svg_for(family, params, annotate).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn analyze_text(text: &str, mode: &str) -> Result<String, JsError> {
    report_for(text, mode).map_err(|e| JsError::new(&e))
}

/// Cable-to-strut weight ratio balancing the on-a-circle family with skip angle `h`.
#[wasm_bindgen]
pub fn on_circle_alpha(h: f64) -> Result<f64, JsError> {
    families::on_circle_alpha(h).map_err(|e| JsError::new(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_parse() {
        let s = family_spec("on-a-circle", "n=12, skip-frac=0.25").unwrap();
        assert_eq!(s.params["n"], 12.0);
        assert_eq!(s.params["skip-frac"], 0.25);
        assert!(family_spec("x", "n:3").is_err());
    }

    #[test]
    fn crossed_square_report() {
        let text = model::render(&families::crossed_square());
        let v: serde_json::Value = serde_json::from_str(&report_for(&text, "full").unwrap()).unwrap();
        assert_eq!(v["verdict"], "bar-equivalent");
        assert!(report_for("dim 2\nstrut a b\n", "full").is_err());
        assert!(report_for(&text, "sideways").is_err());
    }

    #[test]
    fn annotated_drawings() {
        let plain = svg_for("crossed-square", "", "").unwrap();
        let stressed = svg_for("crossed-square", "", "stress").unwrap();
        assert!(stressed.contains("class=\"weight\"") && !plain.contains("class=\"weight\""));
        assert!(svg_for("no-pos-stress", "", "motion").unwrap().contains("class=\"arrow\""));
        assert!(svg_for("crossed-square", "", "glow").is_err());
        assert!(svg_for("circle-of-struts", "n=7", "").is_err());
    }

    #[test]
    fn page_offers_every_family() {
        let page = include_str!("../www/index.html");
        for (name, _) in families::FAMILIES {
            assert!(page.contains(&format!("<option>{name}</option>")), "{name}");
        }
    }
}
