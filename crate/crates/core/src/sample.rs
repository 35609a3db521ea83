//! Random elements for randomized checks.

use crate::bilinear::BilinearPfister;
use crate::field::{Field, FieldElement, Monomial, Poly};
use rand::seq::SliceRandom;
use rand::Rng;

/// Environment variable capping the degree of random polynomials.
pub const MAX_DEGREE_VAR: &str = "PFLAB_MAX_DEGREE";

/// Bounds for random polynomials.
#[derive(Clone, Copy, Debug)]
pub struct PolyShape {
    /// Maximum exponent of each variable.
    pub max_degree: u32,
    /// Maximum number of sampled terms (before cancellation).
    pub max_terms: usize,
}

impl Default for PolyShape {
    fn default() -> Self {
        PolyShape { max_degree: 4, max_terms: 4 }
    }
}

impl PolyShape {
    /// The default shape with `max_degree` capped by `PFLAB_MAX_DEGREE`.
    pub fn from_env() -> Self {
        Self::default().capped()
    }

    /// This shape with `max_degree` capped by `PFLAB_MAX_DEGREE`.
    pub fn capped(self) -> Self {
        let cap = std::env::var(MAX_DEGREE_VAR).ok().and_then(|v| v.trim().parse::<u32>().ok());
        PolyShape { max_degree: cap.map_or(self.max_degree, |c| self.max_degree.min(c)), ..self }
    }
}

pub fn poly<R: Rng + ?Sized>(rng: &mut R, field: Field, shape: PolyShape) -> Poly {
    let count = rng.gen_range(0..=shape.max_terms);
    let terms = (0..count).map(|_| {
        let exps: Vec<u32> = (0..field.nvars).map(|_| rng.gen_range(0..=shape.max_degree)).collect();
        Monomial::from_exponents(&exps)
    });
    Poly::from_monomials(field.nvars, terms)
}

pub fn nonzero_poly<R: Rng + ?Sized>(rng: &mut R, field: Field, shape: PolyShape) -> Poly {
    loop {
        let p = poly(rng, field, shape);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn element<R: Rng + ?Sized>(rng: &mut R, field: Field, shape: PolyShape) -> FieldElement {
    FieldElement::new(poly(rng, field, shape), nonzero_poly(rng, field, shape)).expect("nonzero denominator")
}

pub fn nonzero_element<R: Rng + ?Sized>(rng: &mut R, field: Field, shape: PolyShape) -> FieldElement {
    FieldElement::new(nonzero_poly(rng, field, shape), nonzero_poly(rng, field, shape)).expect("nonzero denominator")
}

/// A vector of `len` random elements, not all zero.
pub fn nonzero_vector<R: Rng + ?Sized>(rng: &mut R, field: Field, shape: PolyShape, len: usize) -> Vec<FieldElement> {
    loop {
        let v: Vec<FieldElement> =
            (0..len).map(|_| if rng.gen_bool(0.3) { field.zero() } else { element(rng, field, shape) }).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// A random anisotropic `fold`-fold form with slots drawn from `pool`.
/// Panics if the pool admits none after many attempts.
pub fn pfister_from_pool<R: Rng + ?Sized>(
    rng: &mut R,
    field: Field,
    pool: &[FieldElement],
    fold: usize,
) -> BilinearPfister {
    for _ in 0..10_000 {
        let slots: Vec<FieldElement> = pool.choose_multiple(rng, fold).cloned().collect();
        let form = BilinearPfister::new(field, slots).expect("pool elements are nonzero");
        if form.is_anisotropic() {
            return form;
        }
    }
    panic!("no anisotropic {fold}-fold form found in the pool");
}
