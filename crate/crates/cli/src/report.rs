//! Certificate reports and their JSON and text renderings.

use pflab_core::bilinear::BilinearPfister;
use pflab_core::quadratic::QuadraticPfister;
use pflab_core::sqlinalg::SqSubspace;
use pflab_core::FieldElement;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write;

/// Library version embedded in every report.
pub const LIBRARY_VERSION: &str = pflab_core::VERSION;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "VALID")]
    Valid,
    #[serde(rename = "NOT_VALID")]
    NotValid,
    #[serde(rename = "ERROR")]
    Error,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Valid => "VALID",
            Verdict::NotValid => "NOT_VALID",
            Verdict::Error => "ERROR",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    /// Number of indeterminates, when known.
    pub n: Option<usize>,
    pub inputs: Value,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub evidence: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn new(command: &str, n: Option<usize>, inputs: Value) -> Self {
        Report {
            command: command.to_string(),
            version: LIBRARY_VERSION.to_string(),
            n,
            inputs,
            verdict: Verdict::Valid,
            checks: Vec::new(),
            evidence: json!({}),
            timing: None,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) -> bool {
        self.checks.push(Check { name: name.into(), passed });
        passed
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.evidence.as_object_mut().expect("evidence is an object").insert(key.to_string(), value);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "version: {}", self.version);
        if let Some(n) = self.n {
            let _ = writeln!(out, "n: {n}");
        }
        let _ = writeln!(out, "inputs:");
        render(&mut out, &self.inputs, 1);
        let _ = writeln!(out, "verdict: {}", self.verdict.as_str());
        if !self.checks.is_empty() {
            let _ = writeln!(out, "checks:");
            for c in &self.checks {
                let _ = writeln!(out, "  [{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name);
            }
        }
        if self.evidence.as_object().is_some_and(|m| !m.is_empty()) {
            let _ = writeln!(out, "evidence:");
            render(&mut out, &self.evidence, 1);
        }
        if let Some(t) = &self.timing {
            let _ = writeln!(out, "elapsed: {:.3} ms", t.elapsed_ms);
        }
        out
    }
}

pub fn space_json(space: &SqSubspace) -> Value {
    json!({ "dim": space.dim(), "basis": space.basis() })
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

/// Renders a JSON value recognizing field elements and forms.
fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    let obj = v.as_object()?;
    match obj.get("type").and_then(Value::as_str) {
        Some("bilinear_pfister") => {
            let b: BilinearPfister = serde_json::from_value(v.clone()).ok()?;
            Some(format!("<<{}>>", join(b.slots())))
        }
        Some("quadratic_pfister") => {
            let q: QuadraticPfister = serde_json::from_value(v.clone()).ok()?;
            let mut parts: Vec<String> = q.bilinear_slots().iter().map(ToString::to_string).collect();
            parts.push(format!("{}]]", q.quad_slot()));
            Some(format!("<<{}", parts.join(", ")))
        }
        Some("quaternion") => {
            let alpha: FieldElement = serde_json::from_value(obj.get("alpha")?.clone()).ok()?;
            let beta: FieldElement = serde_json::from_value(obj.get("beta")?.clone()).ok()?;
            Some(format!("({beta}, {alpha}]"))
        }
        _ => None,
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(x) => Some(x.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(obj) if obj.len() == 2 && obj.contains_key("num") && obj.contains_key("den") => {
            serde_json::from_value::<FieldElement>(v.clone()).ok().map(|e| e.to_string())
        }
        _ => None,
    }
}

fn join(xs: &[FieldElement]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn render(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(obj) => {
            for (k, x) in obj {
                match inline_list(x).or_else(|| inline(x)) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                match inline_list(x).or_else(|| inline(x)) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render(out, x, depth + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", inline(other).unwrap_or_default());
        }
    }
}

/// Short lists of inline values print on one line.
fn inline_list(v: &Value) -> Option<String> {
    let xs = v.as_array()?;
    let parts: Vec<String> = xs.iter().map(|x| inline_list(x).or_else(|| inline(x))).collect::<Option<_>>()?;
    Some(format!("[{}]", parts.join(", ")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use pflab_core::Field;

    #[test]
    fn text_rendering_recognizes_library_types() {
        let f = Field::new(2);
        let b = BilinearPfister::new(f, vec![f.var(0), &f.one() + &f.var(1)]).unwrap();
        let mut r = Report::new("demo", Some(2), json!({ "x": f.var(0) }));
        r.check("first", true);
        r.set("form", to_value(&b));
        r.set("classes", json!([[0, 1], [1, 1]]));
        let text = r.to_text();
        assert!(text.contains("  x: a1\n"));
        assert!(text.contains("form: <<a1, a2+1>>"));
        assert!(text.contains("classes: [[0, 1], [1, 1]]"));
        assert!(text.contains("[ok] first"));
        assert!(text.contains("verdict: VALID"));
    }

    #[test]
    fn json_field_order_is_fixed() {
        let r = Report::new("demo", None, json!({}));
        let s = r.to_json();
        let keys = ["\"command\"", "\"version\"", "\"n\"", "\"inputs\"", "\"verdict\"", "\"checks\"", "\"evidence\""];
        let at: Vec<usize> = keys.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(at.windows(2).all(|w| w[0] < w[1]));
        assert!(!s.contains("timing"));
    }
}
