//! Reading bilinear Pfister forms from JSON files.
//!
//! Accepted layouts: a bare array of forms, or `{"n": N, "forms": [...]}`.
//! A form is `{"type": "bilinear_pfister", "slots": [...]}`, `{"slots": [...]}`
//! or a bare array of slots; a slot is a field element object
//! `{"num": ..., "den": ...}` or a string in the text grammar.

use crate::parse::{self, Expr};
use pflab_core::bilinear::BilinearPfister;
use pflab_core::{Field, FieldElement};
use serde_json::Value;

enum Slot {
    Json(FieldElement),
    Text(String, Expr),
}

/// Parses `text`, using the file's `n`, then `n`, then the indeterminates
/// mentioned, in that order of precedence.
pub fn read_forms(text: &str, n: Option<usize>) -> Result<(Field, Vec<BilinearPfister>), String> {
    let root: Value = serde_json::from_str(text).map_err(|e| format!("malformed JSON: {e}"))?;
    let (file_n, forms) = match &root {
        Value::Array(forms) => (None, forms),
        Value::Object(obj) => {
            let file_n = match obj.get("n") {
                None => None,
                Some(v) => Some(v.as_u64().ok_or("\"n\" must be a nonnegative integer")? as usize),
            };
            let forms = obj.get("forms").and_then(Value::as_array).ok_or("expected a \"forms\" array")?;
            (file_n, forms)
        }
        _ => return Err("expected an array of forms or an object with a \"forms\" array".into()),
    };
    if forms.is_empty() {
        return Err("no forms given".into());
    }

    let mut parsed: Vec<Vec<Slot>> = Vec::with_capacity(forms.len());
    for (i, form) in forms.iter().enumerate() {
        let slots = match form {
            Value::Array(slots) => slots,
            Value::Object(obj) => {
                if let Some(kind) = obj.get("type").and_then(Value::as_str) {
                    if kind != "bilinear_pfister" {
                        return Err(format!("form #{i}: expected type bilinear_pfister, got {kind}"));
                    }
                }
                obj.get("slots").and_then(Value::as_array).ok_or(format!("form #{i}: expected a \"slots\" array"))?
            }
            _ => return Err(format!("form #{i}: expected an object or an array of slots")),
        };
        if slots.is_empty() {
            return Err(format!("form #{i}: no slots"));
        }
        let slots = slots
            .iter()
            .enumerate()
            .map(|(j, s)| match s {
                Value::String(t) => parse::parse_expr(t)
                    .map(|e| Slot::Text(t.clone(), e))
                    .map_err(|e| format!("form #{i}, slot #{j}: {e}")),
                other => serde_json::from_value::<FieldElement>(other.clone())
                    .map(Slot::Json)
                    .map_err(|e| format!("form #{i}, slot #{j}: {e}")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        parsed.push(slots);
    }

    let json_n = parsed.iter().flatten().find_map(|s| match s {
        Slot::Json(e) => Some(e.nvars()),
        Slot::Text(..) => None,
    });
    let text_n = parsed
        .iter()
        .flatten()
        .filter_map(|s| match s {
            Slot::Text(_, e) => Some(e.nvars()),
            Slot::Json(_) => None,
        })
        .max()
        .unwrap_or(0);
    let nvars = file_n.or(n).or(json_n).unwrap_or(text_n.max(2));
    if let (Some(a), Some(b)) = (n, file_n) {
        if a != b {
            return Err(format!("--n {a} disagrees with \"n\": {b} in the file"));
        }
    }
    let field = Field::new(nvars);

    let mut out = Vec::with_capacity(parsed.len());
    for (i, slots) in parsed.into_iter().enumerate() {
        let slots = slots
            .into_iter()
            .enumerate()
            .map(|(j, s)| match s {
                Slot::Json(e) if e.nvars() != nvars => {
                    Err(format!("form #{i}, slot #{j}: element has {} indeterminates, expected {nvars}", e.nvars()))
                }
                Slot::Json(e) => Ok(e),
                Slot::Text(t, e) => e.eval(field, &t).map_err(|e| format!("form #{i}, slot #{j}: {e}")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(BilinearPfister::new(field, slots).map_err(|e| format!("form #{i}: {e}"))?);
    }
    Ok((field, out))
}
