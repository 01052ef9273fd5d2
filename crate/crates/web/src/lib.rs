//! Browser bindings. Each export takes plain strings and returns a JSON
//! document; the page in `www/` renders it.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use igkit::notation::write_document;
use igkit::transform::{decompose_combinations, flatten_vertical, project};
use igkit::validate::Validator;
use igkit::{parse_document, serialize, IgLevel, Profile, TaxonomyRegistry};

/// Parse, classify and validate every record of a shorthand document.
/// `profile` may be empty.
#[wasm_bindgen]
pub fn analyze(text: &str, profile: &str) -> Result<String, JsError> {
    analyze_json(text, profile).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = expandProfile)]
pub fn expand_profile(expression: &str) -> Result<String, JsError> {
    expand_profile_json(expression).map_err(|e| JsError::new(&e))
}

/// `op` is `decompose`, `project` (with `level`) or `flatten`.
#[wasm_bindgen]
pub fn transform(text: &str, op: &str, level: &str) -> Result<String, JsError> {
    transform_json(text, op, level).map_err(|e| JsError::new(&e))
}

fn parse_profile(text: &str) -> Result<Option<Profile>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(None);
    }
    Profile::parse(text).map(Some).map_err(|e| e.to_string())
}

pub fn analyze_json(text: &str, profile: &str) -> Result<String, String> {
    let validator = Validator::new(TaxonomyRegistry::builtin(), parse_profile(profile)?);
    let records: Vec<Value> = parse_document(text)
        .into_iter()
        .map(|r| {
            let mut diagnostics = r.diagnostics.clone();
            let mut out = json!({ "id": r.id });
            if let Some(s) = &r.parsed {
                let report = validator.validate(&r.id, s);
                diagnostics.extend(report.diagnostics);
                out["canonical"] = json!(serialize(s));
                out["kind"] = json!(report.kind);
                out["featureUsage"] = json!(report.feature_usage);
                out["tree"] = json!(s);
            }
            out["diagnostics"] = json!(diagnostics);
            out
        })
        .collect();
    Ok(json!({ "records": records }).to_string())
}

pub fn expand_profile_json(expression: &str) -> Result<String, String> {
    let p = Profile::parse(expression).map_err(|e| e.to_string())?;
    Ok(json!({
        "canonical": p.expression.format(),
        "features": p.features,
        "symbols": p.display_symbols(),
    })
    .to_string())
}

pub fn transform_json(text: &str, op: &str, level: &str) -> Result<String, String> {
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for r in parse_document(text) {
        match r.parsed {
            Some(s) => records.push((r.id, s)),
            None => errors.extend(r.diagnostics.into_iter().map(|d| d.with_id(&r.id).to_string())),
        }
    }
    let result = match op {
        "decompose" => {
            let mut out = Vec::new();
            for (id, s) in records {
                match decompose_combinations(&s) {
                    Ok(d) => out.push((id, d)),
                    Err(e) => {
                        errors.push(format!("{id}: {e}"));
                        out.push((id, s));
                    }
                }
            }
            json!(write_document(&out))
        }
        "project" => {
            let level: IgLevel = level.parse().map_err(|e: igkit::profile::ProfileError| e.to_string())?;
            let out: Vec<_> = records.into_iter().map(|(id, s)| (id, project(&s, level))).collect();
            json!(write_document(&out))
        }
        "flatten" => {
            let pairs: Vec<Value> = records
                .iter()
                .flat_map(|(id, s)| {
                    flatten_vertical(s).into_iter().map(move |p| {
                        json!({
                            "id": id,
                            "depth": p.depth,
                            "monitored": serialize(&p.monitored),
                            "consequential": serialize(&p.consequential),
                        })
                    })
                })
                .collect();
            json!(pairs)
        }
        other => return Err(format!("unknown operation `{other}`")),
    };
    Ok(json!({ "result": result, "errors": errors }).to_string())
}
