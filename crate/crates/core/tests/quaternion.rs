use pflab_core::field::{Field, FieldElement};
use pflab_core::quadratic::main_family;
use pflab_core::quaternion::{build_quat_triple, quat_triple_obstruction, QuaternionAlgebra, QuaternionElement};
use pflab_core::sample::{self, PolyShape};
use pflab_core::Error;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn algebras(field: Field) -> Vec<QuaternionAlgebra> {
    let (a1, a2) = (field.var(0), field.var(1));
    let mut out: Vec<QuaternionAlgebra> = build_quat_triple(&a1, &a2).unwrap().into();
    out.push(QuaternionAlgebra::new(&field.one() + &a1, &(&a1 * &a2) + &a2.square()).unwrap());
    out
}

fn random(rng: &mut ChaCha8Rng, alg: &QuaternionAlgebra, shape: PolyShape) -> QuaternionElement {
    let f = alg.field();
    alg.element(
        sample::element(rng, f, shape),
        sample::element(rng, f, shape),
        sample::element(rng, f, shape),
        sample::element(rng, f, shape),
    )
}

#[test]
fn multiplication_is_associative() {
    let shape = PolyShape { max_degree: 2, max_terms: 3 }.capped();
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let field = Field::new(2);
    for alg in algebras(field) {
        for _ in 0..50 {
            let (p, q, r) =
                (random(&mut rng, &alg, shape), random(&mut rng, &alg, shape), random(&mut rng, &alg, shape));
            let left = p.mul(&q).unwrap().mul(&r).unwrap();
            let right = p.mul(&q.mul(&r).unwrap()).unwrap();
            assert_eq!(left, right);
            // distributivity
            let sum = p.mul(&q.add(&r).unwrap()).unwrap();
            assert_eq!(sum, p.mul(&q).unwrap().add(&p.mul(&r).unwrap()).unwrap());
        }
    }
}

#[test]
fn norm_is_multiplicative() {
    let shape = PolyShape { max_degree: 2, max_terms: 3 }.capped();
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let field = Field::new(2);
    let algs = algebras(field);
    for i in 0..500 {
        let alg = &algs[i % algs.len()];
        let (p, q) = (random(&mut rng, alg, shape), random(&mut rng, alg, shape));
        assert_eq!(p.mul(&q).unwrap().norm().unwrap(), &p.norm().unwrap() * &q.norm().unwrap());
    }
}

#[test]
fn involution_is_consistent() {
    let shape = PolyShape::from_env();
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    let field = Field::new(2);
    let algs = algebras(field);
    for i in 0..500 {
        let alg = &algs[i % algs.len()];
        let (p, q) = (random(&mut rng, alg, shape), random(&mut rng, alg, shape));
        let n = p.mul(&p.conj()).unwrap();
        assert!(n.is_central_scalar());
        assert_eq!(n.coords()[0], alg.norm_form().eval(&p.norm_vector()).unwrap());
        assert_eq!(p.conj().conj(), p);
        if i % 5 == 0 {
            assert_eq!(p.mul(&q).unwrap().conj(), q.conj().mul(&p.conj()).unwrap());
        }
    }
}

#[test]
fn vanishing_norms_give_zero_divisors() {
    let field = Field::new(2);
    let (a1, a2) = (field.var(0), field.var(1));
    let values: Vec<FieldElement> = vec![field.zero(), field.one(), a1.clone(), a2.clone(), &field.one() + &a2];
    // (a2, 0] is split: x (x + 1) = 0
    let split = QuaternionAlgebra::new(field.zero(), a2.clone()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(64);
    let mut vanished = 0;
    for alg in algebras(field).iter().chain([&split]) {
        for _ in 0..300 {
            let c: Vec<FieldElement> = (0..4).map(|_| values.choose(&mut rng).unwrap().clone()).collect();
            let q = alg.element(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone());
            if q.is_zero() || !q.norm().unwrap().is_zero() {
                continue;
            }
            vanished += 1;
            let partner = q.conj();
            assert!(!partner.is_zero());
            assert!(q.mul(&partner).unwrap().is_zero());
            assert!(partner.mul(&q).unwrap().is_zero());
        }
    }
    assert!(vanished > 0);
    let x = split.basis(1);
    assert!(x.norm().unwrap().is_zero());
    assert!(x.mul(&x.add(&split.one()).unwrap()).unwrap().is_zero());
}

#[test]
fn triple_norm_forms_are_the_main_family() {
    let field = Field::new(2);
    let triple = build_quat_triple(&field.var(0), &field.var(1)).unwrap();
    let mut got: Vec<String> = triple.iter().map(|q| serde_json::to_string(&q.norm_form()).unwrap()).collect();
    let mut want: Vec<String> = main_family(2).unwrap().iter().map(|q| serde_json::to_string(q).unwrap()).collect();
    got.sort();
    want.sort();
    assert_eq!(got, want);
    assert!(quat_triple_obstruction(&field.var(0), &field.var(1)).unwrap().valid);
}

#[test]
fn dependent_parities_are_rejected() {
    let field = Field::new(2);
    let a1 = field.var(0);
    assert!(matches!(build_quat_triple(&a1, &a1.pow(3)), Err(Error::HypothesisFailed(_))));
    assert!(matches!(quat_triple_obstruction(&a1, &field.one()), Err(Error::HypothesisFailed(_))));
}

#[test]
fn mixing_algebras_is_an_error() {
    let field = Field::new(2);
    let algs = algebras(field);
    assert_eq!(algs[0].one().mul(&algs[1].one()), Err(Error::AlgebraMismatch));
}
