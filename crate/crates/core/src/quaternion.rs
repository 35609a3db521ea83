//! Quaternion algebras `(b, a]` in characteristic 2, presented by
//! `x^2 + x = a`, `y^2 = b`, `y x y^-1 = x + 1`, with basis `1, x, y, xy`.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::quadratic::{self, InsepObstructionCertificate, QPVector, QuadraticPfister};
use crate::valuation;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AlgebraRepr", into = "AlgebraRepr")]
pub struct QuaternionAlgebra {
    alpha: FieldElement,
    beta: FieldElement,
}

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    #[serde(rename = "type")]
    kind: String,
    alpha: FieldElement,
    beta: FieldElement,
}

impl TryFrom<AlgebraRepr> for QuaternionAlgebra {
    type Error = Error;

    fn try_from(repr: AlgebraRepr) -> Result<Self> {
        if repr.kind != "quaternion" {
            return Err(Error::Malformed(format!("expected type quaternion, got {}", repr.kind)));
        }
        QuaternionAlgebra::new(repr.alpha, repr.beta)
    }
}

impl From<QuaternionAlgebra> for AlgebraRepr {
    fn from(q: QuaternionAlgebra) -> Self {
        AlgebraRepr { kind: "quaternion".into(), alpha: q.alpha, beta: q.beta }
    }
}

/// Basis index: 0 = 1, 1 = x, 2 = y, 3 = xy.
type Basis = usize;

/// A term `alpha^p beta^q e_k` as `((p, q), k)`.
type Term = ((u8, u8), Basis);

/// `TABLE[i][j]` lists the terms of `e_i e_j` as (coefficient, basis), with
/// coefficient a monomial `alpha^p beta^q` written `(p, q)`.
const TABLE: [[&[Term]; 4]; 4] = [
    [&[((0, 0), 0)], &[((0, 0), 1)], &[((0, 0), 2)], &[((0, 0), 3)]],
    [&[((0, 0), 1)], &[((0, 0), 1), ((1, 0), 0)], &[((0, 0), 3)], &[((0, 0), 3), ((1, 0), 2)]],
    [&[((0, 0), 2)], &[((0, 0), 3), ((0, 0), 2)], &[((0, 1), 0)], &[((0, 1), 0), ((0, 1), 1)]],
    [&[((0, 0), 3)], &[((1, 0), 2)], &[((0, 1), 1)], &[((1, 1), 0)]],
];

impl QuaternionAlgebra {
    pub fn new(alpha: FieldElement, beta: FieldElement) -> Result<Self> {
        if alpha.nvars() != beta.nvars() {
            return Err(Error::ContextMismatch { left: alpha.nvars(), right: beta.nvars() });
        }
        if beta.is_zero() {
            return Err(Error::ZeroSlot);
        }
        Ok(QuaternionAlgebra { alpha, beta })
    }

    pub fn alpha(&self) -> &FieldElement {
        &self.alpha
    }

    pub fn beta(&self) -> &FieldElement {
        &self.beta
    }

    pub fn field(&self) -> Field {
        self.alpha.field()
    }

    pub fn element(&self, a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> QuaternionElement {
        QuaternionElement { algebra: self.clone(), coords: [a, b, c, d] }
    }

    pub fn from_coords(&self, coords: [FieldElement; 4]) -> QuaternionElement {
        QuaternionElement { algebra: self.clone(), coords }
    }

    pub fn one(&self) -> QuaternionElement {
        self.basis(0)
    }

    /// `1`, `x`, `y` or `xy` for `i = 0..4`.
    pub fn basis(&self, i: Basis) -> QuaternionElement {
        let f = self.field();
        let mut coords = [f.zero(), f.zero(), f.zero(), f.zero()];
        coords[i] = f.one();
        self.from_coords(coords)
    }

    /// The norm form `<<b, a]]`.
    pub fn norm_form(&self) -> QuadraticPfister {
        QuadraticPfister::new(self.field(), vec![self.beta.clone()], self.alpha.clone()).expect("beta is nonzero")
    }

    fn coefficient(&self, (p, q): (u8, u8)) -> FieldElement {
        &self.alpha.pow(p as u32) * &self.beta.pow(q as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternionElement {
    algebra: QuaternionAlgebra,
    coords: [FieldElement; 4],
}

impl Serialize for QuaternionElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

/// Multiplication in `K = F[x]`: `(a + b x)(c + d x)`.
fn kmul(
    alpha: &FieldElement,
    (a, b): (&FieldElement, &FieldElement),
    (c, d): (&FieldElement, &FieldElement),
) -> (FieldElement, FieldElement) {
    let bd = b * d;
    (&(a * c) + &(&bd * alpha), &(&(a * d) + &(b * c)) + &bd)
}

impl QuaternionElement {
    pub fn algebra(&self) -> &QuaternionAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> &[FieldElement; 4] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElement::is_zero)
    }

    /// Whether the element lies in `F`.
    pub fn is_central_scalar(&self) -> bool {
        self.coords[1..].iter().all(FieldElement::is_zero)
    }

    fn same_algebra(&self, other: &QuaternionElement) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &QuaternionElement) -> Result<QuaternionElement> {
        self.same_algebra(other)?;
        let c = std::array::from_fn(|i| &self.coords[i] + &other.coords[i]);
        Ok(self.algebra.from_coords(c))
    }

    pub fn scale(&self, k: &FieldElement) -> QuaternionElement {
        self.algebra.from_coords(std::array::from_fn(|i| &self.coords[i] * k))
    }

    fn mul_table(&self, other: &QuaternionElement) -> [FieldElement; 4] {
        let f = self.algebra.field();
        let mut out = [f.zero(), f.zero(), f.zero(), f.zero()];
        for (i, p) in self.coords.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
            for (j, q) in other.coords.iter().enumerate().filter(|(_, q)| !q.is_zero()) {
                let pq = p * q;
                for &(mono, k) in TABLE[i][j] {
                    out[k] = &out[k] + &(&pq * &self.algebra.coefficient(mono));
                }
            }
        }
        out
    }

    /// Product through `Q = K ⊕ K y`, `K = F[x]`, using `y k = σ(k) y` with
    /// `σ(x) = x + 1` and `y^2 = b`.
    fn mul_cyclic(&self, other: &QuaternionElement) -> [FieldElement; 4] {
        let alg = &self.algebra;
        let [a0, a1, b0, b1] = &self.coords;
        let [c0, c1, d0, d1] = &other.coords;
        let sigma = |x0: &FieldElement, x1: &FieldElement| (x0 + x1, x1.clone());
        let (sd0, sd1) = sigma(d0, d1);
        let (sc0, sc1) = sigma(c0, c1);
        let (ac0, ac1) = kmul(&alg.alpha, (a0, a1), (c0, c1));
        let (bd0, bd1) = kmul(&alg.alpha, (b0, b1), (&sd0, &sd1));
        let (ad0, ad1) = kmul(&alg.alpha, (a0, a1), (d0, d1));
        let (bc0, bc1) = kmul(&alg.alpha, (b0, b1), (&sc0, &sc1));
        [&ac0 + &(&alg.beta * &bd0), &ac1 + &(&alg.beta * &bd1), &ad0 + &bc0, &ad1 + &bc1]
    }

    /// Product from the frozen multiplication table, cross-checked against
    /// the cyclic-algebra formula.
    pub fn mul(&self, other: &QuaternionElement) -> Result<QuaternionElement> {
        self.same_algebra(other)?;
        let table = self.mul_table(other);
        if table != self.mul_cyclic(other) {
            return Err(Error::IdentityMismatch("multiplication table disagrees with cyclic formula".into()));
        }
        Ok(self.algebra.from_coords(table))
    }

    /// Canonical involution: `conj(x) = x + 1`, `conj(y) = y`, anti-multiplicative.
    pub fn conj(&self) -> QuaternionElement {
        let [a, b, c, d] = &self.coords;
        self.algebra.from_coords([a + b, b.clone(), c.clone(), d.clone()])
    }

    /// `q conj(q)` as an element of `F`.
    pub fn norm_via_involution(&self) -> Result<FieldElement> {
        let n = self.mul(&self.conj())?;
        if !n.is_central_scalar() {
            return Err(Error::IdentityMismatch(format!("q conj(q) is not central for {:?}", self.coords)));
        }
        Ok(n.coords[0].clone())
    }

    pub fn norm_vector(&self) -> QPVector {
        QPVector::from_coords(self.coords.to_vec())
    }

    /// Reduced norm. Computed from the norm form and checked against
    /// `q conj(q)`.
    pub fn norm(&self) -> Result<FieldElement> {
        let via_form = self.algebra.norm_form().eval(&self.norm_vector())?;
        let via_conj = self.norm_via_involution()?;
        if via_form != via_conj {
            return Err(Error::IdentityMismatch(format!("{via_form} != {via_conj}")));
        }
        Ok(via_form)
    }
}

/// `((b, a], (a, b], (b, ab])` for `a, b` of negative value with independent
/// parities.
pub fn build_quat_triple(alpha: &FieldElement, beta: &FieldElement) -> Result<[QuaternionAlgebra; 3]> {
    valuation::cgv_hypothesis_report(&[alpha.clone(), beta.clone()]).map_err(Error::HypothesisFailed)?;
    Ok([
        QuaternionAlgebra::new(alpha.clone(), beta.clone())?,
        QuaternionAlgebra::new(beta.clone(), alpha.clone())?,
        QuaternionAlgebra::new(alpha * beta, beta.clone())?,
    ])
}

/// The obstruction certificate for the norm forms of the triple.
pub fn quat_triple_obstruction(alpha: &FieldElement, beta: &FieldElement) -> Result<InsepObstructionCertificate> {
    let triple = build_quat_triple(alpha, beta)?;
    let forms: Vec<QuadraticPfister> = triple.iter().map(QuaternionAlgebra::norm_form).collect();
    quadratic::insep_obstruction(&forms)
}
