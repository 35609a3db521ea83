//! Quadratic Pfister forms `<<b1, ..., b_{n-1}, a]] = <<b1, ..., b_{n-1}>>_b ⊗ [1, a]`.
//!
//! The underlying space has basis `{u_e, w_e : e ∈ {0,1}^{n-1}}`, stored at
//! indices `2e` and `2e + 1`, and the form is
//! `sum_e b^e (u_e^2 + u_e w_e + a w_e^2)`. The pure part drops `w_0`.

use crate::bilinear::slot_products;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::valuation::{self, ParityClass, ParitySet, ValueVector};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QuadraticRepr", into = "QuadraticRepr")]
pub struct QuadraticPfister {
    field: Field,
    bilinear_slots: Vec<FieldElement>,
    quad_slot: FieldElement,
}

#[derive(Serialize, Deserialize)]
struct QuadraticRepr {
    #[serde(rename = "type")]
    kind: String,
    bilinear_slots: Vec<FieldElement>,
    quad_slot: FieldElement,
}

impl TryFrom<QuadraticRepr> for QuadraticPfister {
    type Error = Error;

    fn try_from(repr: QuadraticRepr) -> Result<Self> {
        if repr.kind != "quadratic_pfister" {
            return Err(Error::Malformed(format!("expected type quadratic_pfister, got {}", repr.kind)));
        }
        QuadraticPfister::new(repr.quad_slot.field(), repr.bilinear_slots, repr.quad_slot)
    }
}

impl From<QuadraticPfister> for QuadraticRepr {
    fn from(q: QuadraticPfister) -> Self {
        QuadraticRepr { kind: "quadratic_pfister".into(), bilinear_slots: q.bilinear_slots, quad_slot: q.quad_slot }
    }
}

/// Which half of a `[1, a]` block a coordinate belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Half {
    U,
    W,
}

/// A vector in the `2^n`-dimensional space of a quadratic `n`-fold Pfister
/// form, in `(e, u/w)` order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct QPVector(Vec<FieldElement>);

impl QPVector {
    pub fn zeros(field: Field, dim: usize) -> Self {
        QPVector(vec![field.zero(); dim])
    }

    pub fn from_coords(coords: Vec<FieldElement>) -> Self {
        QPVector(coords)
    }

    pub fn unit(field: Field, dim: usize, e: usize, half: Half) -> Self {
        let mut v = Self::zeros(field, dim);
        v.set(e, half, field.one());
        v
    }

    pub fn index(e: usize, half: Half) -> usize {
        2 * e + matches!(half, Half::W) as usize
    }

    pub fn get(&self, e: usize, half: Half) -> &FieldElement {
        &self.0[Self::index(e, half)]
    }

    pub fn set(&mut self, e: usize, half: Half, x: FieldElement) {
        self.0[Self::index(e, half)] = x;
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(FieldElement::is_zero)
    }

    pub fn scaled(&self, c: &FieldElement) -> QPVector {
        QPVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, other: &QPVector) -> QPVector {
        QPVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl QuadraticPfister {
    pub fn new(field: Field, bilinear_slots: Vec<FieldElement>, quad_slot: FieldElement) -> Result<Self> {
        for s in bilinear_slots.iter().chain([&quad_slot]) {
            if s.nvars() != field.nvars {
                return Err(Error::ContextMismatch { left: field.nvars, right: s.nvars() });
            }
        }
        if bilinear_slots.iter().any(FieldElement::is_zero) {
            return Err(Error::ZeroSlot);
        }
        Ok(QuadraticPfister { field, bilinear_slots, quad_slot })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn bilinear_slots(&self) -> &[FieldElement] {
        &self.bilinear_slots
    }

    pub fn quad_slot(&self) -> &FieldElement {
        &self.quad_slot
    }

    pub fn fold(&self) -> usize {
        self.bilinear_slots.len() + 1
    }

    pub fn dim(&self) -> usize {
        1 << self.fold()
    }

    /// Bilinear slots followed by the quadratic slot.
    pub fn all_slots(&self) -> Vec<FieldElement> {
        self.bilinear_slots.iter().chain([&self.quad_slot]).cloned().collect()
    }

    /// Diagonal coefficient at each basis index: `b^e` at `u_e`, `b^e a` at
    /// `w_e`.
    pub fn diagonal(&self) -> Vec<FieldElement> {
        slot_products(self.field, &self.bilinear_slots)
            .into_iter()
            .flat_map(|b| {
                let bw = &b * &self.quad_slot;
                [b, bw]
            })
            .collect()
    }

    fn check_len(&self, v: &QPVector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(())
    }

    fn block_sum(&self, v: &QPVector, skip_w0: bool) -> FieldElement {
        let blocks = slot_products(self.field, &self.bilinear_slots);
        let mut acc = self.field.zero();
        for (e, b) in blocks.iter().enumerate() {
            let u = v.get(e, Half::U);
            let w = if skip_w0 && e == 0 { self.field.zero() } else { v.get(e, Half::W).clone() };
            if u.is_zero() && w.is_zero() {
                continue;
            }
            let block = &(&u.square() + &(u * &w)) + &(&self.quad_slot * &w.square());
            acc = &acc + &(b * &block);
        }
        acc
    }

    /// `φ(v)`.
    pub fn eval(&self, v: &QPVector) -> Result<FieldElement> {
        self.check_len(v)?;
        Ok(self.block_sum(v, false))
    }

    /// `φ'(v) = u_0^2 + sum_{e≠0} b^e (u_e^2 + u_e w_e + a w_e^2)`. The
    /// `w_0` coordinate is outside the pure part and must be zero.
    pub fn eval_pure(&self, v: &QPVector) -> Result<FieldElement> {
        self.check_len(v)?;
        if !v.get(0, Half::W).is_zero() {
            return Err(Error::PreconditionFailed("w_0 is not a coordinate of the pure part".into()));
        }
        Ok(self.block_sum(v, true))
    }

    fn require_hypotheses(&self) -> Result<()> {
        valuation::cgv_hypothesis_report(&self.all_slots()).map_err(Error::HypothesisFailed)
    }

    /// `min_i (2 v(c_i) + v(diag_i))` over the nonzero coordinates. Under
    /// the hypotheses the `2^n` diagonal coefficients have distinct parities,
    /// so the minimum is attained once and equals `v(φ(v))`.
    pub fn dominant_value(&self, v: &QPVector) -> Result<ValueVector> {
        self.require_hypotheses()?;
        self.check_len(v)?;
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        let diag = self.diagonal();
        let mut best: Option<ValueVector> = None;
        for (c, d) in v.coords().iter().zip(&diag) {
            if c.is_zero() {
                continue;
            }
            let term = &valuation::val(c)?.scaled(2) + &valuation::val(d)?;
            if best.as_ref().is_none_or(|b| term < *b) {
                best = Some(term);
            }
        }
        Ok(best.expect("v is nonzero"))
    }

    /// `v̄(D(φ))`: the `F_2`-span of the slot parities.
    pub fn parity_image(&self) -> Result<ParitySet> {
        self.require_hypotheses()?;
        let parities = self.all_slots().iter().map(valuation::parity).collect::<Result<Vec<_>>>()?;
        Ok(ParitySet::span(self.field.nvars, &parities))
    }

    /// `v̄(D(φ'))`: parities of the diagonal coefficients of the pure part.
    pub fn pure_parity_image(&self) -> Result<ParitySet> {
        self.require_hypotheses()?;
        let diag = self.diagonal();
        let classes = diag
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != QPVector::index(0, Half::W))
            .map(|(_, d)| valuation::parity(d))
            .collect::<Result<Vec<ParityClass>>>()?;
        Ok(ParitySet::from_classes(self.field.nvars, classes))
    }

    /// Necessary condition for `F[sqrt(gamma)]` to split the form. `false`
    /// certifies that it does not split; `true` is inconclusive.
    pub fn necessary_insep_split(&self, gamma: &FieldElement) -> Result<bool> {
        if gamma.is_zero() {
            return Err(Error::ZeroSlot);
        }
        Ok(self.pure_parity_image()?.contains(&valuation::parity(gamma)?))
    }

    /// A vector of the plane spanned by `v1, v2` whose value has nonzero
    /// parity. Only `u_0` carries a diagonal coefficient of parity zero, so
    /// if neither generator works, eliminating `u_0` gives one that does.
    pub fn nonzero_parity_witness(&self, v1: &QPVector, v2: &QPVector) -> Result<QPVector> {
        self.require_hypotheses()?;
        self.check_len(v1)?;
        self.check_len(v2)?;
        let nonzero_parity = |v: &QPVector| -> Result<bool> {
            let q = self.eval(v)?;
            Ok(!q.is_zero() && !valuation::parity(&q)?.is_zero())
        };
        for v in [v1, v2] {
            if nonzero_parity(v)? {
                return Ok(v.clone());
            }
        }
        let (c1, c2) = (v1.get(0, Half::U), v2.get(0, Half::U));
        let candidate = if c2.is_zero() { v2.clone() } else { v1.add(&v2.scaled(&c1.checked_div(c2)?)) };
        if candidate.is_zero() {
            return Err(Error::PreconditionFailed("vectors are linearly dependent".into()));
        }
        if !nonzero_parity(&candidate)? {
            return Err(Error::IdentityMismatch("eliminating u_0 left a value of parity zero".into()));
        }
        Ok(candidate)
    }

    /// For `d = φ(w, x, u) = a w^2 + w x + x^2 + φ''(u)` with `w ≠ 0`, returns
    /// `d / w^2`, the quadratic slot of a presentation
    /// `<<b1, ..., b_{n-1}, d/w^2]]`. Checks it against
    /// `a + x/w + x^2/w^2 + φ''(u/w)`.
    ///
    /// `u` holds the coordinates `(u_e, w_e)` of the blocks `e ≠ 0`.
    pub fn right_slot_from_value(
        &self,
        w: &FieldElement,
        x: &FieldElement,
        u: &[FieldElement],
    ) -> Result<FieldElement> {
        if w.is_zero() {
            return Err(Error::ZeroW);
        }
        if u.len() != self.dim() - 2 {
            return Err(Error::DimensionMismatch { expected: self.dim() - 2, got: u.len() });
        }
        let tail = |scale: &FieldElement| {
            let mut coords = vec![self.field.zero(), self.field.zero()];
            coords.extend(u.iter().map(|c| c * scale));
            self.block_sum(&QPVector(coords), false)
        };
        let a = &self.quad_slot;
        let d = &(&(&(a * &w.square()) + &(w * x)) + &x.square()) + &tail(&self.field.one());
        let slot = d.checked_div(&w.square())?;
        let winv = w.inv()?;
        let xw = x * &winv;
        let other = &(&(a + &xw) + &xw.square()) + &tail(&winv);
        if slot != other {
            return Err(Error::IdentityMismatch(format!("{slot} != {other}")));
        }
        Ok(slot)
    }
}

/// The `2^n - 1` forms `φ_d = <<a1, ..., â_l, ..., an>> ⊗ <<a^d]]`, `d ≠ 0`,
/// with `l` the first index where `d_l ≠ 0`. Bit `i` of `d` is `d_{i+1}`.
pub fn main_family(n: usize) -> Result<Vec<QuadraticPfister>> {
    if n < 2 {
        return Err(Error::BadRank(n));
    }
    let field = Field::new(n);
    (1..1usize << n)
        .map(|d| {
            let lowest = d.trailing_zeros() as usize;
            let bilinear = (0..n).filter(|&i| i != lowest).map(|i| field.var(i)).collect();
            QuadraticPfister::new(field, bilinear, field.basis_monomial(d))
        })
        .collect()
}

/// Parity data certifying that a family has no common inseparable quadratic
/// splitting field. Valid exactly when every form passes the hypothesis
/// check and the pure parity images meet only in `{0}`: a common splitting
/// field `F[sqrt(g)]` would put a common binary subform `<1, g>` inside every
/// pure part, all of whose values would then have parity 0, and a
/// two-dimensional subspace always contains a value of nonzero parity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InsepObstructionCertificate {
    pub per_form_images: Vec<ParitySet>,
    pub intersection: ParitySet,
    pub hypothesis_checks: Vec<bool>,
    pub valid: bool,
}

pub fn insep_obstruction(forms: &[QuadraticPfister]) -> Result<InsepObstructionCertificate> {
    let first = forms.first().ok_or(Error::EmptyInput)?;
    let n = first.field.nvars;
    if let Some(q) = forms.iter().find(|q| q.field != first.field) {
        return Err(Error::ContextMismatch { left: n, right: q.field.nvars });
    }
    for (i, q) in forms.iter().enumerate() {
        valuation::cgv_hypothesis_report(&q.all_slots())
            .map_err(|reason| Error::HypothesisFailed(format!("form #{i}: {reason}")))?;
    }
    let per_form_images = forms.iter().map(QuadraticPfister::pure_parity_image).collect::<Result<Vec<_>>>()?;
    let intersection = per_form_images.iter().skip(1).fold(per_form_images[0].clone(), |acc, s| acc.intersect(s));
    let valid = intersection.is_trivial();
    Ok(InsepObstructionCertificate { hypothesis_checks: vec![true; forms.len()], per_form_images, intersection, valid })
}
