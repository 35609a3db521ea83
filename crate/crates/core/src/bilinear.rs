//! Bilinear Pfister forms `<<b1, ..., bk>>_b`.
//!
//! For a diagonal bilinear form `B(v, v) = sum_i d_i v_i^2` in characteristic
//! 2, so the represented values together with 0 form the `F^2`-span of the
//! diagonal. Forms are stored by their slots and compared up to isometry
//! through their pure value spaces: an anisotropic form has `<<c>>_b` as a
//! factor exactly when `c` lies in its pure value space, and two anisotropic
//! forms with the same pure value space are isometric.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::sqlinalg::SqSubspace;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BilinearRepr", into = "BilinearRepr")]
pub struct BilinearPfister {
    field: Field,
    slots: Vec<FieldElement>,
}

#[derive(Serialize, Deserialize)]
struct BilinearRepr {
    #[serde(rename = "type")]
    kind: String,
    slots: Vec<FieldElement>,
}

impl TryFrom<BilinearRepr> for BilinearPfister {
    type Error = Error;

    fn try_from(repr: BilinearRepr) -> Result<Self> {
        if repr.kind != "bilinear_pfister" {
            return Err(Error::Malformed(format!("expected type bilinear_pfister, got {}", repr.kind)));
        }
        let field = repr
            .slots
            .first()
            .map(FieldElement::field)
            .ok_or_else(|| Error::Malformed("a bilinear Pfister form needs at least one slot".into()))?;
        BilinearPfister::new(field, repr.slots)
    }
}

impl From<BilinearPfister> for BilinearRepr {
    fn from(b: BilinearPfister) -> Self {
        BilinearRepr { kind: "bilinear_pfister".into(), slots: b.slots }
    }
}

/// All `2^k` products `s^e`, `e` in `{0,1}^k`, with bit `j` of the index
/// selecting slot `j`.
pub fn slot_products(field: Field, slots: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![field.one()];
    for s in slots {
        let shifted: Vec<FieldElement> = out.iter().map(|p| p * s).collect();
        out.extend(shifted);
    }
    out
}

fn check_slots(field: Field, slots: &[FieldElement]) -> Result<()> {
    for s in slots {
        if s.nvars() != field.nvars {
            return Err(Error::ContextMismatch { left: field.nvars, right: s.nvars() });
        }
        if s.is_zero() {
            return Err(Error::ZeroSlot);
        }
    }
    Ok(())
}

impl BilinearPfister {
    pub fn new(field: Field, slots: Vec<FieldElement>) -> Result<Self> {
        check_slots(field, &slots)?;
        Ok(BilinearPfister { field, slots })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn fold(&self) -> usize {
        self.slots.len()
    }

    pub fn slots(&self) -> &[FieldElement] {
        &self.slots
    }

    /// `B ⊗ C`.
    pub fn tensor(&self, other: &BilinearPfister) -> Result<BilinearPfister> {
        let slots = self.slots.iter().chain(&other.slots).cloned().collect();
        BilinearPfister::new(self.field, slots)
    }

    /// The `2^k` diagonal entries.
    pub fn diagonal(&self) -> Vec<FieldElement> {
        slot_products(self.field, &self.slots)
    }

    /// `B(v, v) = sum_e s^e v_e^2`.
    pub fn value_at(&self, v: &[FieldElement]) -> Result<FieldElement> {
        let diag = self.diagonal();
        if v.len() != diag.len() {
            return Err(Error::DimensionMismatch { expected: diag.len(), got: v.len() });
        }
        Ok(diag
            .iter()
            .zip(v)
            .filter(|(_, x)| !x.is_zero())
            .fold(self.field.zero(), |acc, (d, x)| &acc + &(d * &x.square())))
    }

    /// `D(B) ∪ {0}`.
    pub fn full_value_space(&self) -> SqSubspace {
        SqSubspace::span(self.field, &self.diagonal()).expect("slots share the context")
    }

    /// `D(B') ∪ {0}`: span of the nontrivial diagonal products.
    pub fn pure_value_space(&self) -> SqSubspace {
        SqSubspace::span(self.field, &self.diagonal()[1..]).expect("slots share the context")
    }

    /// Anisotropic iff the slots are 2-independent, i.e. the full value
    /// space has dimension `2^k`.
    pub fn is_anisotropic(&self) -> bool {
        self.fold() <= self.field.nvars && self.full_value_space().dim() == 1 << self.fold()
    }

    pub fn is_slot(&self, beta: &FieldElement) -> Result<bool> {
        if beta.is_zero() {
            return Err(Error::ZeroSlot);
        }
        Ok(self.pure_value_space().member(beta)?.is_some())
    }

    pub fn is_isometric(&self, other: &BilinearPfister) -> Result<bool> {
        if self.fold() != other.fold() {
            return Err(Error::FoldMismatch { left: self.fold(), right: other.fold() });
        }
        for (index, b) in [self, other].into_iter().enumerate() {
            if !b.is_anisotropic() {
                return Err(Error::IsotropicInput { index });
            }
        }
        Ok(self.pure_value_space() == other.pure_value_space())
    }
}

fn require_anisotropic(forms: &[BilinearPfister]) -> Result<()> {
    if forms.is_empty() {
        return Err(Error::EmptyInput);
    }
    match forms.iter().position(|b| !b.is_anisotropic()) {
        Some(index) => Err(Error::IsotropicInput { index }),
        None => Ok(()),
    }
}

/// Intersection of the pure value spaces. Every nonzero member is a common
/// slot; the zero space means there is none.
pub fn common_slot_space(forms: &[BilinearPfister]) -> Result<SqSubspace> {
    require_anisotropic(forms)?;
    let field = forms[0].field;
    if let Some(b) = forms.iter().find(|b| b.field != field) {
        return Err(Error::ContextMismatch { left: field.nvars, right: b.field.nvars });
    }
    let spaces: Vec<SqSubspace> = forms.iter().map(BilinearPfister::pure_value_space).collect();
    Ok(SqSubspace::intersect_all(&spaces).expect("nonempty"))
}

/// `D(rho ⊗ pi') ∪ {0}`: the span of all `r * p` with `r` a diagonal entry of
/// `rho` and `p` a nontrivial diagonal entry of `pi`.
pub fn partial_pure_space(field: Field, rho: &[FieldElement], complement: &[FieldElement]) -> Result<SqSubspace> {
    let rs = slot_products(field, rho);
    let ps = slot_products(field, complement);
    let gens: Vec<FieldElement> = rs.iter().flat_map(|r| ps[1..].iter().map(move |p| r * p)).collect();
    SqSubspace::span(field, &gens)
}

/// `{x : x t ∈ P for every t}`, the intersection of the `t^{-1} P`.
pub fn colon_space(pure: &SqSubspace, multipliers: &[FieldElement]) -> Result<SqSubspace> {
    let mut acc: Option<SqSubspace> = None;
    for t in multipliers {
        let scaled = pure.scaled(&t.inv()?)?;
        acc = Some(match acc {
            None => scaled,
            Some(a) => a.intersect(&scaled),
        });
        if acc.as_ref().is_some_and(SqSubspace::is_zero) {
            break;
        }
    }
    Ok(acc.unwrap_or_else(|| pure.clone()))
}

/// Given `B = rho ⊗ <<known>>` and `beta ∈ D(rho ⊗ <<known>>')`, returns
/// slots `delta` with `B ≅ rho ⊗ <<beta>> ⊗ <<delta>>`, certified by equality
/// of pure value spaces.
///
/// Completion is greedy. With `T` the slots chosen so far and `K_T` the span
/// of their products, any nonzero `x` with `x K_T ⊆ D(B')` extends `T`: it
/// cannot lie in `K_T` because `1 ∉ D(B')`, so adjoining it keeps the form
/// anisotropic and its pure part inside `D(B')`. That colon space has
/// dimension `2^n - 2^|T|`, so the first basis element always exists. A
/// bounded search over basis elements of `D(B')` and their pairwise sums is
/// kept as a fallback.
pub fn factor_out(
    beta: &FieldElement,
    rho: &[FieldElement],
    form: &BilinearPfister,
    known_complement: &[FieldElement],
) -> Result<Vec<FieldElement>> {
    let field = form.field;
    check_slots(field, std::slice::from_ref(beta))?;
    check_slots(field, rho)?;
    check_slots(field, known_complement)?;
    if !form.is_anisotropic() {
        return Err(Error::PreconditionFailed(format!("<<{}>> is isotropic", join(form.slots()))));
    }
    if known_complement.is_empty() || rho.len() + known_complement.len() != form.fold() {
        return Err(Error::PreconditionFailed(format!(
            "a {}-fold factor and a {}-slot complement do not split a {}-fold form",
            rho.len(),
            known_complement.len(),
            form.fold()
        )));
    }
    let target = form.pure_value_space();
    let assembled: Vec<FieldElement> = rho.iter().chain(known_complement).cloned().collect();
    if BilinearPfister::new(field, assembled)?.pure_value_space() != target {
        return Err(Error::PreconditionFailed("form is not rho ⊗ <<complement>>".into()));
    }
    if !partial_pure_space(field, rho, known_complement)?.contains(beta) {
        return Err(Error::PreconditionFailed(format!("{beta} is not in D(rho ⊗ complement')")));
    }

    let needed = known_complement.len() - 1;
    let mut slots: Vec<FieldElement> = rho.iter().cloned().chain([beta.clone()]).collect();
    for _ in 0..needed {
        let colon = colon_space(&target, &slot_products(field, &slots))?;
        match colon.basis().into_iter().next() {
            Some(delta) => slots.push(delta),
            None => break,
        }
    }
    if slots.len() == form.fold() && BilinearPfister::new(field, slots.clone())?.pure_value_space() == target {
        return Ok(slots[rho.len() + 1..].to_vec());
    }
    search_completion(field, rho.len() + 1, &slots[..=rho.len()], form, &target)
}

fn search_completion(
    field: Field,
    prefix_len: usize,
    prefix: &[FieldElement],
    form: &BilinearPfister,
    target: &SqSubspace,
) -> Result<Vec<FieldElement>> {
    let basis = target.basis();
    let mut candidates = basis.clone();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            candidates.push(&basis[i] + &basis[j]);
        }
    }
    let mut slots = prefix.to_vec();
    while slots.len() < form.fold() {
        let next = candidates.iter().find(|c| {
            let mut trial = slots.clone();
            trial.push((*c).clone());
            let trial = BilinearPfister::new(field, trial).expect("candidates are nonzero");
            trial.is_anisotropic() && target.contains_space(&trial.pure_value_space())
        });
        match next {
            Some(c) => slots.push(c.clone()),
            None => break,
        }
    }
    if slots.len() == form.fold() && BilinearPfister::new(field, slots.clone())?.pure_value_space() == *target {
        return Ok(slots[prefix_len..].to_vec());
    }
    Err(Error::CompletionNotFound(format!(
        "no completion of [{}] inside the pure value space of <<{}>>",
        join(prefix),
        join(form.slots())
    )))
}

fn join(xs: &[FieldElement]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// One verified pure-value-space equality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PureSpaceCheck {
    pub form: usize,
    pub step: usize,
    pub dim: usize,
    pub equal: bool,
}

/// A common `m`-fold factor `rho` of several forms, with the complementary
/// slots of each form and the log of equalities that certify
/// `B_l ≅ rho ⊗ <<complement_l>>`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorWitness {
    pub rho: BilinearPfister,
    pub complements: Vec<Vec<FieldElement>>,
    pub check_log: Vec<PureSpaceCheck>,
}

impl FactorWitness {
    /// Re-runs every equality against the given forms.
    pub fn verify(&self, forms: &[BilinearPfister]) -> bool {
        forms.len() == self.complements.len()
            && forms.iter().zip(&self.complements).all(|(b, comp)| {
                let slots = self.rho.slots().iter().chain(comp).cloned().collect();
                BilinearPfister::new(b.field, slots)
                    .map(|r| r.pure_value_space() == b.pure_value_space())
                    .unwrap_or(false)
            })
    }
}

/// Searches for a common bilinear `m`-fold Pfister factor by peeling off one
/// common slot at a time: intersect the spaces `D(rho ⊗ pi_l')`, take the
/// first reduced basis element, factor it out of every form. Returns `None`
/// as soon as an intersection is zero.
pub fn common_factor(m: usize, forms: &[BilinearPfister]) -> Result<Option<FactorWitness>> {
    require_anisotropic(forms)?;
    let field = forms[0].field;
    let n = forms[0].fold();
    if let Some(b) = forms.iter().find(|b| b.fold() != n) {
        return Err(Error::FoldMismatch { left: n, right: b.fold() });
    }
    if let Some(b) = forms.iter().find(|b| b.field != field) {
        return Err(Error::ContextMismatch { left: field.nvars, right: b.field.nvars });
    }
    if m == 0 || m >= n {
        return Err(Error::BadFactorSize { m, max: n.saturating_sub(1) });
    }

    let mut rho: Vec<FieldElement> = Vec::with_capacity(m);
    let mut complements: Vec<Vec<FieldElement>> = forms.iter().map(|b| b.slots.clone()).collect();
    let mut check_log = Vec::new();
    for step in 0..m {
        let spaces = complements.iter().map(|c| partial_pure_space(field, &rho, c)).collect::<Result<Vec<_>>>()?;
        let common = SqSubspace::intersect_all(&spaces).expect("nonempty");
        let Some(beta) = common.basis().into_iter().next() else {
            return Ok(None);
        };
        for (form_index, (b, comp)) in forms.iter().zip(complements.iter_mut()).enumerate() {
            *comp = factor_out(&beta, &rho, b, comp)?;
            let slots = rho.iter().chain([&beta]).chain(comp.iter()).cloned().collect();
            let pure = BilinearPfister::new(field, slots)?.pure_value_space();
            let equal = pure == b.pure_value_space();
            check_log.push(PureSpaceCheck { form: form_index, step, dim: pure.dim(), equal });
            if !equal {
                return Err(Error::CompletionNotFound(format!("form #{form_index} failed re-verification")));
            }
        }
        rho.push(beta);
    }
    let witness = FactorWitness { rho: BilinearPfister::new(field, rho)?, complements, check_log };
    if !witness.verify(forms) {
        return Err(Error::CompletionNotFound("final witness failed re-verification".into()));
    }
    Ok(Some(witness))
}

/// The `2^n` forms indexed by `d ∈ {0,1}^n` (bit `i` of the index is
/// `d_{i+1}`): `B_0 = <<a1, ..., an>>_b` and, for `d ≠ 0`,
/// `B_d = <<a1, ..., â_l, ..., an>>_b ⊗ <<1 + a^d>>_b` with `l` the first
/// index where `d_l ≠ 0`.
pub fn no_common_slot_family(n: usize) -> Result<Vec<BilinearPfister>> {
    if n < 2 {
        return Err(Error::BadRank(n));
    }
    let field = Field::new(n);
    (0..1usize << n)
        .map(|d| {
            let slots = if d == 0 {
                (0..n).map(|i| field.var(i)).collect()
            } else {
                let lowest = d.trailing_zeros() as usize;
                (0..n)
                    .filter(|&i| i != lowest)
                    .map(|i| field.var(i))
                    .chain([&field.one() + &field.basis_monomial(d)])
                    .collect()
            };
            BilinearPfister::new(field, slots)
        })
        .collect()
}

/// The explicit basis of `D(B_d')` named in the construction:
/// `{a^e : e ≠ 0}` for `d = 0`, and `{a^e : e ∉ {0, d}} ∪ {1 + a^d}` otherwise.
pub fn claimed_pure_basis(n: usize, d: usize) -> Vec<FieldElement> {
    let field = Field::new(n);
    let mut out: Vec<FieldElement> = (1..1usize << n).filter(|&e| e != d).map(|e| field.basis_monomial(e)).collect();
    if d != 0 {
        out.push(&field.one() + &field.basis_monomial(d));
    }
    out
}

/// `span{a^e : e ∉ {0, d}}`, the claimed value of `D(B_0') ∩ D(B_d')`.
pub fn claimed_pairwise_intersection(n: usize, d: usize) -> SqSubspace {
    let field = Field::new(n);
    let gens: Vec<FieldElement> = (1..1usize << n).filter(|&e| e != d).map(|e| field.basis_monomial(e)).collect();
    SqSubspace::span(field, &gens).expect("same context")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::new(2)
    }

    fn form(slots: &[FieldElement]) -> BilinearPfister {
        BilinearPfister::new(slots[0].field(), slots.to_vec()).unwrap()
    }

    #[test]
    fn value_spaces() {
        let f = f2();
        let (a1, a2) = (f.var(0), f.var(1));
        let b = form(&[a1.clone(), a2.clone()]);
        assert_eq!(b.full_value_space().dim(), 4);
        assert_eq!(b.pure_value_space(), SqSubspace::span(f, &[a1.clone(), a2.clone(), &a1 * &a2]).unwrap());
        assert_eq!(form(&[a1.clone(), a1.clone()]).full_value_space().dim(), 2);
        let one = form(&[f.one()]);
        assert_eq!(one.full_value_space().dim(), 1);
        assert_eq!(one.pure_value_space(), SqSubspace::span(f, &[f.one()]).unwrap());
    }

    #[test]
    fn pure_space_of_family_member() {
        let f = f2();
        let (a1, a2) = (f.var(0), f.var(1));
        let b = form(&[a2.clone(), &f.one() + &a1]);
        let expected = SqSubspace::span(f, &[a2.clone(), &a1 * &a2, &f.one() + &a1]).unwrap();
        assert_eq!(b.pure_value_space(), expected);
    }

    #[test]
    fn anisotropy() {
        let f = f2();
        let (a1, a2) = (f.var(0), f.var(1));
        assert!(form(&[a1.clone(), a2.clone()]).is_anisotropic());
        assert!(!form(&[a1.clone(), a1.clone()]).is_anisotropic());
        // 1 + a1 already lies in F^2(a1): diagonal {1, a1, 1+a1, a1+a1^2} spans dimension 2
        let b = form(&[a1.clone(), &f.one() + &a1]);
        assert_eq!(b.full_value_space().dim(), 2);
        assert!(!b.is_anisotropic());
        assert!(form(&[a1.clone(), &f.one() + &a2]).is_anisotropic());
    }

    #[test]
    fn slots() {
        let f = f2();
        let (a1, a2) = (f.var(0), f.var(1));
        let b = form(&[a1.clone(), a2.clone()]);
        assert!(b.is_slot(&a1).unwrap());
        assert!(b.is_slot(&(&a1 + &a2)).unwrap());
        let c = form(&[a1.clone(), &a1 + &a2]);
        assert!(!c.is_slot(&(&a1 * &a2)).unwrap());
        assert_eq!(b.is_slot(&f.zero()), Err(Error::ZeroSlot));
    }

    #[test]
    fn isometry() {
        let f = f2();
        let (a1, a2) = (f.var(0), f.var(1));
        let b = form(&[a1.clone(), a2.clone()]);
        assert!(b.is_isometric(&form(&[a2.clone(), a1.clone()])).unwrap());
        assert!(b.is_isometric(&form(&[a1.clone(), &a1 * &a2])).unwrap());
        assert!(!b.is_isometric(&form(&[a1.clone(), &a1 + &a2])).unwrap());
        assert_eq!(b.is_isometric(&form(&[a1.clone(), a1.clone()])), Err(Error::IsotropicInput { index: 1 }));
        assert_eq!(b.is_isometric(&form(std::slice::from_ref(&a1))), Err(Error::FoldMismatch { left: 2, right: 1 }));
    }

    #[test]
    fn factor_out_examples() {
        let f = f2();
        let (a1, a2) = (f.var(0), f.var(1));
        let b = form(&[a1.clone(), a2.clone()]);
        let known = [a1.clone(), a2.clone()];
        assert_eq!(factor_out(&(&a1 * &a2), &[], &b, &known).unwrap(), vec![a1.clone()]);
        assert_eq!(factor_out(&a1, &[], &b, &known).unwrap(), vec![a2.clone()]);

        let c = form(&[a1.clone(), &f.one() + &a1]);
        let err = factor_out(&a2, &[], &c, c.slots()).unwrap_err();
        assert!(matches!(err, Error::PreconditionFailed(_)));
    }

    #[test]
    fn factor_out_rejects_wrong_complement() {
        let f = f2();
        let (a1, a2) = (f.var(0), f.var(1));
        let b = form(&[a1.clone(), a2.clone()]);
        let err = factor_out(&a1, &[], &b, &[a1.clone(), &a1 + &a2]).unwrap_err();
        assert!(matches!(err, Error::PreconditionFailed(_)));
        let err = factor_out(&a1, std::slice::from_ref(&a1), &b, &[]).unwrap_err();
        assert!(matches!(err, Error::PreconditionFailed(_)));
    }

    #[test]
    fn family_n2() {
        let f = f2();
        let (a1, a2) = (f.var(0), f.var(1));
        let fam = no_common_slot_family(2).unwrap();
        let expected = vec![
            form(&[a1.clone(), a2.clone()]),
            form(&[a2.clone(), &f.one() + &a1]),
            form(&[a1.clone(), &f.one() + &a2]),
            form(&[a2.clone(), &f.one() + &(&a1 * &a2)]),
        ];
        assert_eq!(fam, expected);
        assert!(fam.iter().all(BilinearPfister::is_anisotropic));
        assert_eq!(no_common_slot_family(1), Err(Error::BadRank(1)));
    }

    #[test]
    fn common_slots_n2() {
        let f = f2();
        let fam = no_common_slot_family(2).unwrap();
        assert!(common_slot_space(&fam).unwrap().is_zero());
        let sub = common_slot_space(&fam[..3]).unwrap();
        assert_eq!(sub, SqSubspace::span(f, &[&f.var(0) * &f.var(1)]).unwrap());
        assert_eq!(common_slot_space(&fam[..1]).unwrap().dim(), 3);
        assert_eq!(common_slot_space(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn common_factor_n2() {
        let f = f2();
        let fam = no_common_slot_family(2).unwrap();
        let w = common_factor(1, &fam[..3]).unwrap().unwrap();
        assert_eq!(w.rho.slots(), &[&f.var(0) * &f.var(1)]);
        assert!(w.verify(&fam[..3]));
        assert_eq!(common_factor(1, &fam).unwrap(), None);
        let single = common_factor(1, &fam[..1]).unwrap().unwrap();
        assert_eq!(single.rho.slots()[0], fam[0].pure_value_space().basis()[0]);
        assert_eq!(common_factor(2, &fam), Err(Error::BadFactorSize { m: 2, max: 1 }));
    }

    #[test]
    fn json_shape() {
        let f = f2();
        let b = form(&[f.var(0)]);
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"type":"bilinear_pfister","slots":[{"num":[[1,0]],"den":[[0,0]]}]}"#);
        assert_eq!(serde_json::from_str::<BilinearPfister>(&s).unwrap(), b);
        assert!(serde_json::from_str::<BilinearPfister>(r#"{"type":"x","slots":[]}"#).is_err());
        let zero = r#"{"type":"bilinear_pfister","slots":[{"num":[],"den":[[0]]}]}"#;
        assert!(serde_json::from_str::<BilinearPfister>(zero).is_err());
    }
}
