//! Acceptance suite: one PASS/FAIL line per criterion.

use pflab_core::bilinear::{common_factor, common_slot_space, no_common_slot_family, BilinearPfister};
use pflab_core::quadratic::{main_family, QPVector, QuadraticPfister};
use pflab_core::quaternion::{build_quat_triple, QuaternionAlgebra, QuaternionElement};
use pflab_core::sample::{self, PolyShape};
use pflab_core::sqlinalg::{combination, SqSubspace};
use pflab_core::valuation::{parity, val, ParityClass, ParitySet};
use pflab_core::{Field, FieldElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::process::Command;
use std::time::Instant;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs the binary and parses its JSON report.
fn pflab(args: &[&str]) -> Result<(i32, Value, f64), String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_pflab")).args(args).output().map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let code = out.status.code().ok_or("killed by a signal")?;
    let report = serde_json::from_slice(&out.stdout).map_err(|e| format!("{args:?}: unreadable report: {e}"))?;
    Ok((code, report, secs))
}

fn all_checks_pass(report: &Value) -> Result<usize, String> {
    let checks = report["checks"].as_array().ok_or("report has no checks")?;
    if let Some(bad) = checks.iter().find(|c| c["passed"] != Value::Bool(true)) {
        return Err(format!("check failed: {}", bad["name"]));
    }
    Ok(checks.len())
}

fn slot_pool(field: Field) -> Vec<FieldElement> {
    let (a1, a2, a3) = (field.var(0), field.var(1), field.var(2));
    vec![
        a1.clone(),
        a2.clone(),
        a3.clone(),
        &a1 * &a2,
        &a1 * &a3,
        &a2 * &a3,
        &field.one() + &a1,
        &field.one() + &(&a2 * &a3),
    ]
}

fn bilinear_family_certificates() -> Outcome {
    let mut times = Vec::new();
    for n in [2usize, 3, 4] {
        let (code, report, secs) = pflab(&["bilinear-family", "--n", &n.to_string(), "--verify"])?;
        let size = 1usize << n;
        ensure(code == 0 && report["verdict"] == "VALID", || {
            format!("n={n}: exit {code}, verdict {}", report["verdict"])
        })?;
        let checks = all_checks_pass(&report)?;
        ensure(checks == 2 * size + (size - 1) + 1 + size, || format!("n={n}: {checks} checks"))?;
        ensure(report["evidence"]["common_slot_space"]["dim"] == 0, || format!("n={n}: common slot space nonzero"))?;
        // recompute from the emitted forms
        let forms: Vec<BilinearPfister> = report["evidence"]["forms"]
            .as_array()
            .ok_or("no forms")?
            .iter()
            .map(|f| serde_json::from_value(f["form"].clone()).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        ensure(forms == no_common_slot_family(n).unwrap(), || format!("n={n}: emitted forms differ"))?;
        ensure(common_slot_space(&forms).unwrap().is_zero(), || {
            format!("n={n}: recomputed common slot space nonzero")
        })?;
        let limit = if n == 4 { 600.0 } else { 10.0 };
        ensure(secs < limit, || format!("n={n}: {secs:.1}s exceeds {limit}s"))?;
        times.push(format!("n={n} {secs:.2}s"));
    }
    Ok(format!("all checks pass ({})", times.join(", ")))
}

fn sharing() -> Outcome {
    let field = Field::new(3);
    let pool = slot_pool(field);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = Vec::new();
    for trial in 0..100 {
        let seven: Vec<BilinearPfister> =
            (0..7).map(|_| sample::pfister_from_pool(&mut rng, field, &pool, 3)).collect();
        match common_factor(1, &seven) {
            Ok(Some(w)) if w.verify(&seven) && w.check_log.iter().all(|c| c.equal) => {}
            other => {
                failures.push(format!("trial {trial}, m=1: {other:?} on {}", serde_json::to_string(&seven).unwrap()))
            }
        }
        let three = &seven[..3];
        match common_factor(2, three) {
            Ok(Some(w)) if w.rho.fold() == 2 && w.verify(three) && w.check_log.iter().all(|c| c.equal) => {}
            other => {
                failures.push(format!("trial {trial}, m=2: {other:?} on {}", serde_json::to_string(three).unwrap()))
            }
        }
    }
    ensure(failures.is_empty(), || format!("{} failures; first: {}", failures.len(), failures[0]))?;
    Ok("100 trials: common slot for every 7 forms, verified 2-fold factor for every 3".into())
}

fn recompose(field: Field, coords: &[FieldElement]) -> FieldElement {
    coords.iter().enumerate().fold(field.zero(), |acc, (d, c)| &acc + &(&c.square() * &field.basis_monomial(d)))
}

fn small_polys(field: Field) -> Vec<FieldElement> {
    (0..16usize)
        .map(|subset| {
            (0..4).filter(|b| subset >> b & 1 == 1).fold(field.zero(), |acc, m| &acc + &field.basis_monomial(m))
        })
        .collect()
}

fn linear_algebra_kernel() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shape = PolyShape::from_env();
    for i in 0..1000 {
        let field = Field::new(2 + i % 2);
        let f = sample::element(&mut rng, field, shape);
        ensure(recompose(field, f.frobenius_decompose().as_slice()) == f, || format!("round trip failed for {f}"))?;
    }

    let shape = PolyShape { max_degree: 2, max_terms: 3 }.capped();
    for i in 0..200 {
        let field = Field::new(2 + i % 2);
        let gens = |k: usize, rng: &mut ChaCha8Rng| -> Vec<FieldElement> {
            (0..k).map(|_| sample::element(rng, field, shape)).collect()
        };
        let k1 = rng.gen_range(0..=field.degree_over_squares());
        let s1 = SqSubspace::span(field, &gens(k1, &mut rng)).unwrap();
        // half the pairs share generators so intersections are nontrivial
        let s2 = if i % 2 == 0 {
            let k2 = rng.gen_range(0..=field.degree_over_squares());
            SqSubspace::span(field, &gens(k2, &mut rng)).unwrap()
        } else {
            let mut g: Vec<FieldElement> = s1.basis().into_iter().filter(|_| rng.gen_bool(0.5)).collect();
            g.extend(gens(rng.gen_range(0..=2), &mut rng));
            SqSubspace::span(field, &g).unwrap()
        };
        let (meet, join) = (s1.intersect(&s2), s1.sum(&s2));
        ensure(meet.dim() + join.dim() == s1.dim() + s2.dim(), || format!("pair {i}: dimension formula fails"))?;
    }

    let field = Field::new(2);
    let values = small_polys(field);
    let mut vectors = 0usize;
    for b in no_common_slot_family(2).unwrap() {
        let (full, pure) = (b.full_value_space(), b.pure_value_space());
        for idx in 0..values.len().pow(4) {
            let v: Vec<FieldElement> = (0..4).map(|k| values[idx / 16usize.pow(k) % 16].clone()).collect();
            let q = b.value_at(&v).unwrap();
            ensure(q.is_zero() || full.contains(&q), || format!("{q} not in the full value space"))?;
            ensure(!v[0].is_zero() || q.is_zero() || pure.contains(&q), || format!("{q} not in the pure value space"))?;
            vectors += 1;
        }
        for (space, diag) in [(&full, b.diagonal()), (&pure, b.diagonal()[1..].to_vec())] {
            for g in space.basis() {
                let mut v = combination(&g, &diag).unwrap().ok_or_else(|| format!("{g} has no representation"))?;
                if v.len() < 4 {
                    v.insert(0, field.zero());
                }
                ensure(b.value_at(&v).unwrap() == g, || format!("representation of {g} is wrong"))?;
            }
        }
    }
    Ok(format!("1000 round trips, 200 subspace pairs, {vectors} oracle vectors at n=2"))
}

fn random_vector(rng: &mut ChaCha8Rng, q: &QuadraticPfister, shape: PolyShape) -> QPVector {
    QPVector::from_coords(sample::nonzero_vector(rng, q.field(), shape, q.dim()))
}

fn dominant_term_suite() -> Outcome {
    let shape = PolyShape { max_degree: 3, max_terms: 3 }.capped();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut count = 0;
    for n in [2usize, 3] {
        for (i, q) in main_family(n).unwrap().iter().enumerate() {
            let image = q.parity_image().unwrap();
            for _ in 0..1000 {
                let v = random_vector(&mut rng, q, shape);
                let value = q.eval(&v).unwrap();
                ensure(!value.is_zero(), || format!("n={n}, form {i}: isotropic vector"))?;
                ensure(val(&value).unwrap() == q.dominant_value(&v).unwrap(), || {
                    format!("n={n}, form {i}: value mismatch")
                })?;
                ensure(image.contains(&parity(&value).unwrap()), || format!("n={n}, form {i}: parity outside image"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} vectors over 10 forms"))
}

fn independent(v1: &QPVector, v2: &QPVector) -> bool {
    let (a, b) = (v1.coords(), v2.coords());
    (0..a.len()).any(|i| (i + 1..a.len()).any(|j| &a[i] * &b[j] != &a[j] * &b[i]))
}

fn parity_nonzero(q: &QuadraticPfister, v: &QPVector) -> bool {
    q.eval(v).ok().filter(|x| !x.is_zero()).is_some_and(|x| !parity(&x).unwrap().is_zero())
}

fn quadratic_family_certificates() -> Outcome {
    for n in [2usize, 3] {
        let (code, report, _) = pflab(&["quadratic-family", "--n", &n.to_string(), "--verify"])?;
        ensure(code == 0 && report["verdict"] == "VALID", || {
            format!("n={n}: exit {code}, verdict {}", report["verdict"])
        })?;
        all_checks_pass(&report)?;
        ensure(report["evidence"]["certificate"]["valid"] == true, || format!("n={n}: certificate not valid"))?;
    }
    let shape = PolyShape { max_degree: 3, max_terms: 3 }.capped();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut planes, mut beyond_obvious) = (0, 0);
    for n in [2usize, 3] {
        for (k, q) in main_family(n).unwrap().iter().enumerate() {
            let expected = ParitySet::full(n).without(&ParityClass::from_mask(n, k + 1));
            ensure(q.pure_parity_image().unwrap() == expected, || format!("n={n}, form {k}: pure image"))?;
            let mut sampled = 0;
            while sampled < 200 {
                let (v1, v2) = (random_vector(&mut rng, q, shape), random_vector(&mut rng, q, shape));
                if !independent(&v1, &v2) {
                    continue;
                }
                sampled += 1;
                let w = q.nonzero_parity_witness(&v1, &v2).map_err(|e| format!("n={n}, form {k}: {e}"))?;
                ensure(parity_nonzero(q, &w), || format!("n={n}, form {k}: counterexample plane"))?;
                if ![&v1, &v2, &v1.add(&v2)].iter().any(|v| parity_nonzero(q, v)) {
                    beyond_obvious += 1;
                }
            }
            planes += sampled;
        }
    }
    Ok(format!(
        "certificates valid for n=2,3; {planes} planes, 0 counterexamples ({beyond_obvious} needed a vector other than u1, u2, u1+u2)"
    ))
}

fn random_quaternion(rng: &mut ChaCha8Rng, alg: &QuaternionAlgebra, shape: PolyShape) -> QuaternionElement {
    let f = alg.field();
    let mut c = || sample::element(rng, f, shape);
    alg.element(c(), c(), c(), c())
}

fn quaternion_triple() -> Outcome {
    let (code, report, _) = pflab(&["quat-triple", "--alpha", "a1", "--beta", "a2"])?;
    ensure(code == 0 && report["verdict"] == "VALID", || format!("exit {code}, verdict {}", report["verdict"]))?;
    all_checks_pass(&report)?;
    let mut got: Vec<String> = report["evidence"]["algebras"]
        .as_array()
        .ok_or("no algebras")?
        .iter()
        .map(|a| a["norm_form"].to_string())
        .collect();
    let mut want: Vec<String> =
        main_family(2).unwrap().iter().map(|q| serde_json::to_value(q).unwrap().to_string()).collect();
    got.sort();
    want.sort();
    ensure(got == want, || "norm forms differ from the main family".into())?;

    let field = Field::new(2);
    let triple = build_quat_triple(&field.var(0), &field.var(1)).unwrap();
    let shape = PolyShape { max_degree: 2, max_terms: 3 }.capped();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..200 {
        let alg = &triple[i % 3];
        let (p, q, r) = (
            random_quaternion(&mut rng, alg, shape),
            random_quaternion(&mut rng, alg, shape),
            random_quaternion(&mut rng, alg, shape),
        );
        let left = p.mul(&q).and_then(|pq| pq.mul(&r)).map_err(|e| e.to_string())?;
        let right = q.mul(&r).and_then(|qr| p.mul(&qr)).map_err(|e| e.to_string())?;
        ensure(left == right, || format!("associativity fails in algebra {i}"))?;
    }
    for i in 0..500 {
        let alg = &triple[i % 3];
        let (p, q) = (random_quaternion(&mut rng, alg, shape), random_quaternion(&mut rng, alg, shape));
        let lhs = p.mul(&q).and_then(|pq| pq.norm()).map_err(|e| e.to_string())?;
        let rhs = &p.norm().map_err(|e| e.to_string())? * &q.norm().map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("norm multiplicativity fails on pair {i}"))?;
    }
    Ok("VALID; norm forms match the main family; 200 associativity triples, 500 norm pairs".into())
}

fn right_slot_identity() -> Outcome {
    let shape = PolyShape::from_env();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let families = [main_family(2).unwrap(), main_family(3).unwrap()];
    for i in 0..500 {
        let family = &families[i % 2];
        let q = &family[i % family.len()];
        let field = q.field();
        let w = sample::nonzero_element(&mut rng, field, shape);
        let x = sample::element(&mut rng, field, shape);
        let u: Vec<FieldElement> = (0..q.dim() - 2).map(|_| sample::element(&mut rng, field, shape)).collect();
        let slot = q.right_slot_from_value(&w, &x, &u).map_err(|e| format!("case {i}: {e}"))?;
        let mut coords = vec![x.clone(), w.clone()];
        coords.extend(u.iter().cloned());
        let d = q.eval(&QPVector::from_coords(coords)).unwrap();
        ensure(&slot * &w.square() == d, || format!("case {i}: slot times w^2 differs from the value"))?;
        let mut scaled = vec![x.checked_div(&w).unwrap(), field.one()];
        scaled.extend(u.iter().map(|c| c.checked_div(&w).unwrap()));
        ensure(q.eval(&QPVector::from_coords(scaled)).unwrap() == slot, || format!("case {i}: scaled form differs"))?;
    }
    Ok("500 cases, both expressions agree".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("no-common-slot family certificates", bilinear_family_certificates),
        ("common factors from slot sharing", sharing),
        ("decomposition, subspace and brute-force oracle checks", linear_algebra_kernel),
        ("dominant-term valuation suite", dominant_term_suite),
        ("no common inseparable splitting field", quadratic_family_certificates),
        ("quaternion triple", quaternion_triple),
        ("right slot identity", right_slot_identity),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {title}: {detail} [{secs:.1}s]", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {} {title}: {reason} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
