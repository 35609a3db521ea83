//! Subcommand bodies. Each returns a report and an exit code.

use crate::input;
use crate::parse::{self, ParseError};
use crate::report::{space_json, to_value, Report, Verdict};
use pflab_core::bilinear::{
    claimed_pairwise_intersection, claimed_pure_basis, common_factor, common_slot_space, no_common_slot_family,
    BilinearPfister,
};
use pflab_core::quadratic::{insep_obstruction, main_family};
use pflab_core::quaternion::{build_quat_triple, QuaternionAlgebra};
use pflab_core::sqlinalg::SqSubspace;
use pflab_core::valuation::{ParityClass, ParitySet};
use pflab_core::{Error, Field};
use serde_json::{json, Value};

pub const EXIT_VALID: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit: i32,
    /// Human-readable message for stderr on exit code 2.
    pub diagnostic: Option<String>,
}

impl Outcome {
    fn finish(mut report: Report, positive: bool) -> Self {
        report.verdict = if positive { Verdict::Valid } else { Verdict::NotValid };
        Outcome { report, exit: if positive { EXIT_VALID } else { EXIT_NEGATIVE }, diagnostic: None }
    }

    fn error(mut report: Report, message: String) -> Self {
        report.verdict = Verdict::Error;
        report.set("error", Value::String(message.clone()));
        Outcome { report, exit: EXIT_INVALID, diagnostic: Some(message) }
    }
}

/// `B` followed by `d_1 ... d_n`.
pub fn label(prefix: &str, n: usize, d: usize) -> String {
    let bits: String = (0..n).map(|i| if d >> i & 1 == 1 { '1' } else { '0' }).collect();
    format!("{prefix}{bits}")
}

fn parse_member(token: &str, n: usize) -> Result<usize, String> {
    let t = token.trim();
    let size = 1usize << n;
    let d = if let Some(bits) = t.strip_prefix('B') {
        if bits == "0" {
            0
        } else if bits.len() == n && bits.chars().all(|c| c == '0' || c == '1') {
            bits.chars().enumerate().filter(|&(_, c)| c == '1').fold(0, |m, (i, _)| m | 1 << i)
        } else {
            return Err(format!("member \"{t}\": expected B followed by {n} binary digits"));
        }
    } else {
        t.parse::<usize>()
            .map_err(|_| format!("member \"{t}\": expected an index or a label such as B{}", "0".repeat(n)))?
    };
    if d >= size {
        return Err(format!("member \"{t}\": index outside 0..{size}"));
    }
    Ok(d)
}

fn forms_json(prefix: &str, n: usize, forms: &[impl serde::Serialize]) -> Value {
    Value::Array(
        forms.iter().enumerate().map(|(d, f)| json!({ "label": label(prefix, n, d), "form": to_value(f) })).collect(),
    )
}

pub fn bilinear_family(n: usize, verify: bool, subset: Option<&str>) -> Outcome {
    let inputs = json!({ "n": n, "verify": verify, "subset": subset });
    let mut report = Report::new("bilinear-family", Some(n), inputs);
    if !(2..=4).contains(&n) {
        return Outcome::error(report, format!("n must be 2, 3 or 4, got {n}"));
    }
    let family = match no_common_slot_family(n) {
        Ok(f) => f,
        Err(e) => return Outcome::error(report, e.to_string()),
    };
    report.set("forms", forms_json("B", n, &family));
    let mut positive = true;

    if verify {
        let size = family.len();
        let pure: Vec<SqSubspace> = family.iter().map(BilinearPfister::pure_value_space).collect();
        for (d, b) in family.iter().enumerate() {
            let l = label("B", n, d);
            report.check(format!("{l} is anisotropic"), b.full_value_space().dim() == size);
            let claimed = SqSubspace::span(b.field(), &claimed_pure_basis(n, d)).expect("same field");
            report.check(format!("pure value space of {l} has the stated basis"), claimed == pure[d]);
        }
        let zero = label("", n, 0);
        for d in 1..size {
            let meet = pure[0].intersect(&pure[d]);
            let bits = label("", n, d);
            report.check(
                format!("pure spaces of B{zero} and B{bits} meet in span{{a^e : e not in {{{zero}, {bits}}}}}"),
                meet == claimed_pairwise_intersection(n, d),
            );
        }
        let common = SqSubspace::intersect_all(&pure).expect("nonempty family");
        report.check("common slot space is zero", common.is_zero());
        report.set("common_slot_space", space_json(&common));

        let mut sharp = Vec::with_capacity(size);
        for skip in 0..size {
            let rest = SqSubspace::intersect_all(pure.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, p)| p))
                .expect("at least one other member");
            let l = label("B", n, skip);
            let shared = !rest.is_zero()
                && family
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .all(|(_, b)| rest.basis().iter().all(|beta| b.is_slot(beta).unwrap_or(false)));
            report.check(format!("members other than {l} share a slot"), shared);
            sharp.push(json!({ "omitted": l, "common_slot_space": space_json(&rest) }));
        }
        report.set("sharpness", Value::Array(sharp));
        positive = report.all_passed();
    }

    if let Some(list) = subset {
        let members = match list.split(',').map(|t| parse_member(t, n)).collect::<Result<Vec<usize>, _>>() {
            Ok(m) => m,
            Err(e) => return Outcome::error(report, e),
        };
        let chosen: Vec<BilinearPfister> = members.iter().map(|&d| family[d].clone()).collect();
        let shared = common_slot_space(&chosen).expect("family members are anisotropic");
        let labels: Vec<String> = members.iter().map(|&d| label("B", n, d)).collect();
        report.set("subset", json!({ "members": labels, "common_slot_space": space_json(&shared) }));
        positive &= report.check("subset shares a slot", !shared.is_zero());
    }
    Outcome::finish(report, positive)
}

pub fn common_factor_cmd(m: usize, path: &str, n: Option<usize>) -> Outcome {
    let inputs = json!({ "m": m, "forms": path, "n": n });
    let mut report = Report::new("common-factor", n, inputs);
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::error(report, format!("cannot read {path}: {e}")),
    };
    let (field, forms) = match input::read_forms(&text, n) {
        Ok(x) => x,
        Err(e) => return Outcome::error(report, e),
    };
    report.n = Some(field.nvars);
    report.set("forms", Value::Array(forms.iter().map(to_value).collect()));
    match common_factor(m, &forms) {
        Ok(Some(w)) => {
            report.check("every member re-verified against its pure value space", w.verify(&forms));
            report.set("witness", to_value(&w));
            let ok = report.all_passed();
            Outcome::finish(report, ok)
        }
        Ok(None) => {
            report.set("result", json!("none"));
            Outcome::finish(report, false)
        }
        Err(e) => Outcome::error(report, e.to_string()),
    }
}

pub fn quadratic_family(n: usize, verify: bool) -> Outcome {
    let inputs = json!({ "n": n, "verify": verify });
    let mut report = Report::new("quadratic-family", Some(n), inputs);
    if !(2..=3).contains(&n) {
        return Outcome::error(report, format!("n must be 2 or 3, got {n}"));
    }
    let family = match main_family(n) {
        Ok(f) => f,
        Err(e) => return Outcome::error(report, e.to_string()),
    };
    let forms: Vec<Value> = family
        .iter()
        .enumerate()
        .map(|(i, q)| json!({ "label": label("phi_", n, i + 1), "form": to_value(q) }))
        .collect();
    report.set("forms", Value::Array(forms));
    let cert = match insep_obstruction(&family) {
        Ok(c) => c,
        Err(e) => return Outcome::error(report, e.to_string()),
    };
    report.check("pure parity images meet only in 0", cert.valid);
    if verify {
        for (i, q) in family.iter().enumerate() {
            let d = i + 1;
            let l = label("phi_", n, d);
            report.check(format!("{l} satisfies the dominant-term hypotheses"), cert.hypothesis_checks[i]);
            let expected = ParitySet::full(n).without(&ParityClass::from_mask(n, d));
            report.check(
                format!("pure parity image of {l} misses exactly its slot parity"),
                cert.per_form_images[i] == expected,
            );
            let gamma = q.field().basis_monomial(d);
            let blocked = matches!(q.necessary_insep_split(&gamma), Ok(false));
            report.check(format!("{l} is not split by the square root of its quadratic slot"), blocked);
        }
    }
    report.set("certificate", to_value(&cert));
    let ok = report.all_passed();
    Outcome::finish(report, ok)
}

fn parse_pair(alpha: &str, beta: &str, n: Option<usize>) -> Result<(Field, [pflab_core::FieldElement; 2]), ParseError> {
    let ea = parse::parse_expr(alpha)?;
    let eb = parse::parse_expr(beta)?;
    let field = parse::infer_field(&[&ea, &eb], n);
    Ok((field, [ea.eval(field, alpha)?, eb.eval(field, beta)?]))
}

/// Checks `x^2 + x = alpha`, `y^2 = beta` and `y x = (x + 1) y`, and that
/// the norm agrees with `q conj(q)` on the basis.
fn relation_checks(report: &mut Report, label: &str, q: &QuaternionAlgebra) {
    let (one, x, y) = (q.one(), q.basis(1), q.basis(2));
    let alpha = one.scale(q.alpha());
    let beta = one.scale(q.beta());
    let ok = |r: Result<bool, Error>| r.unwrap_or(false);
    report.check(format!("{label}: x^2 + x = alpha"), ok(x.mul(&x).and_then(|xx| xx.add(&x)).map(|s| s == alpha)));
    report.check(format!("{label}: y^2 = beta"), ok(y.mul(&y).map(|s| s == beta)));
    report.check(format!("{label}: y x = (x + 1) y"), ok(y.mul(&x).and_then(|l| Ok(l == x.add(&one)?.mul(&y)?))));
    report.check(
        format!("{label}: norm form agrees with q conj(q) on the basis"),
        (0..4).all(|i| q.basis(i).norm().is_ok()),
    );
}

pub fn quat_triple(alpha: &str, beta: &str, n: Option<usize>) -> Outcome {
    let inputs = json!({ "alpha": alpha, "beta": beta, "n": n });
    let mut report = Report::new("quat-triple", n, inputs);
    let (field, [a, b]) = match parse_pair(alpha, beta, n) {
        Ok(x) => x,
        Err(e) => return Outcome::error(report, e.to_string()),
    };
    report.n = Some(field.nvars);
    let triple = match build_quat_triple(&a, &b) {
        Ok(t) => t,
        Err(e) => return Outcome::error(report, e.to_string()),
    };
    let mut algebras = Vec::with_capacity(3);
    for (i, q) in triple.iter().enumerate() {
        let l = format!("Q{}", i + 1);
        relation_checks(&mut report, &l, q);
        algebras.push(json!({ "label": l, "algebra": to_value(q), "norm_form": to_value(&q.norm_form()) }));
    }
    report.set("algebras", Value::Array(algebras));
    let forms: Vec<_> = triple.iter().map(QuaternionAlgebra::norm_form).collect();
    let cert = match insep_obstruction(&forms) {
        Ok(c) => c,
        Err(e) => return Outcome::error(report, e.to_string()),
    };
    report.check("pure parity images of the norm forms meet only in 0", cert.valid);
    report.set("certificate", to_value(&cert));
    let ok = report.all_passed();
    Outcome::finish(report, ok)
}
