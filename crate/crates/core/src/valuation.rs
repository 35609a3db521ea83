//! The monomial valuation on `GF(2)(a1, ..., an)` with value group `Z^n`
//! ordered lexicographically, `v(a_i) = -e_i`, and its reduction modulo
//! `2 Z^n`.
//!
//! Distinct monomials get distinct values, so the value of a polynomial is
//! the value of its lex-largest monomial and no cancellation of dominant
//! terms can occur. This models the iterated Laurent series field
//! `GF(2)((a1^-1))...((an^-1))` inside the rational function field.

use crate::error::{Error, Result};
use crate::field::{FieldElement, Poly};
use serde::Serialize;
use std::collections::BTreeSet;
use std::ops::Add;

/// An element of `Z^n`, compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ValueVector(pub Vec<i64>);

impl ValueVector {
    pub fn zero(n: usize) -> Self {
        ValueVector(vec![0; n])
    }

    pub fn is_negative(&self) -> bool {
        *self < Self::zero(self.0.len())
    }

    pub fn scaled(&self, k: i64) -> Self {
        ValueVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn parity(&self) -> ParityClass {
        ParityClass(self.0.iter().map(|x| x.rem_euclid(2) as u8).collect())
    }
}

impl Add for &ValueVector {
    type Output = ValueVector;
    fn add(self, rhs: &ValueVector) -> ValueVector {
        ValueVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

/// A class in `Γ/2Γ ≅ (Z/2)^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ParityClass(pub Vec<u8>);

impl ParityClass {
    pub fn zero(n: usize) -> Self {
        ParityClass(vec![0; n])
    }

    /// Bit `i` of `mask` is component `i`.
    pub fn from_mask(n: usize, mask: usize) -> Self {
        ParityClass((0..n).map(|i| ((mask >> i) & 1) as u8).collect())
    }

    pub fn mask(&self) -> usize {
        self.0.iter().enumerate().fold(0, |m, (i, &b)| m | ((b as usize) << i))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Add for &ParityClass {
    type Output = ParityClass;
    fn add(self, rhs: &ParityClass) -> ParityClass {
        ParityClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a ^ b).collect())
    }
}

/// A subset of `(Z/2)^n`. Serializes as the sorted list of bit arrays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParitySet {
    n: usize,
    classes: BTreeSet<ParityClass>,
}

impl Serialize for ParitySet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.classes.iter())
    }
}

impl ParitySet {
    pub fn empty(n: usize) -> Self {
        ParitySet { n, classes: BTreeSet::new() }
    }

    pub fn full(n: usize) -> Self {
        Self::from_classes(n, (0..1usize << n).map(|m| ParityClass::from_mask(n, m)))
    }

    pub fn from_classes(n: usize, classes: impl IntoIterator<Item = ParityClass>) -> Self {
        let classes: BTreeSet<ParityClass> = classes.into_iter().collect();
        debug_assert!(classes.iter().all(|c| c.len() == n));
        ParitySet { n, classes }
    }

    /// The `F_2`-span of the generators.
    pub fn span<'a>(n: usize, generators: impl IntoIterator<Item = &'a ParityClass>) -> Self {
        let mut set: BTreeSet<ParityClass> = [ParityClass::zero(n)].into();
        for g in generators {
            let shifted: Vec<ParityClass> = set.iter().map(|c| c + g).collect();
            set.extend(shifted);
        }
        ParitySet { n, classes: set }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, c: &ParityClass) -> bool {
        self.classes.contains(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ParityClass> {
        self.classes.iter()
    }

    pub fn intersect(&self, other: &ParitySet) -> ParitySet {
        ParitySet { n: self.n, classes: self.classes.intersection(&other.classes).cloned().collect() }
    }

    pub fn complement(&self) -> ParitySet {
        let full = Self::full(self.n);
        ParitySet { n: self.n, classes: full.classes.difference(&self.classes).cloned().collect() }
    }

    pub fn without(&self, c: &ParityClass) -> ParitySet {
        let mut out = self.clone();
        out.classes.remove(c);
        out
    }

    /// Whether the set is exactly `{0}`.
    pub fn is_trivial(&self) -> bool {
        self.classes.len() == 1 && self.classes.iter().all(ParityClass::is_zero)
    }

    /// Sorted list of bit arrays, for reports.
    pub fn to_lists(&self) -> Vec<Vec<u8>> {
        self.classes.iter().map(|c| c.0.clone()).collect()
    }
}

fn poly_value(p: &Poly) -> ValueVector {
    let lead = p.leading().expect("nonzero polynomial");
    ValueVector(lead.exponents().iter().map(|&e| -(e as i64)).collect())
}

/// `v(f)`: for a polynomial the lex-minimum of its monomial values, which is
/// the value of its lex-leading monomial; for a fraction the difference.
pub fn val(f: &FieldElement) -> Result<ValueVector> {
    if f.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let (vn, vd) = (poly_value(f.num()), poly_value(f.den()));
    Ok(&vn + &vd.scaled(-1))
}

/// `v̄(f)`, the class of `v(f)` in `Γ/2Γ`.
pub fn parity(f: &FieldElement) -> Result<ParityClass> {
    Ok(val(f)?.parity())
}

/// Whether classes are linearly independent over `F_2`.
pub fn parities_independent(classes: &[ParityClass]) -> bool {
    let Some(first) = classes.first() else {
        return true;
    };
    classes.len() <= first.len() && ParitySet::span(first.len(), classes).len() == 1 << classes.len()
}

/// Checks the hypotheses of the dominant-term lemma: every slot nonzero of
/// negative value, and the slot parities independent. The error names the
/// first failing check.
pub fn cgv_hypothesis_report(slots: &[FieldElement]) -> std::result::Result<(), String> {
    let mut parities = Vec::with_capacity(slots.len());
    for (i, s) in slots.iter().enumerate() {
        let v = val(s).map_err(|_| format!("slot #{i} is zero"))?;
        if !v.is_negative() {
            return Err(format!("negative value check failed for slot #{i} ({s})"));
        }
        parities.push(v.parity());
    }
    if !parities_independent(&parities) {
        return Err("parity independence failed".into());
    }
    Ok(())
}

pub fn cgv_hypothesis_check(slots: &[FieldElement]) -> bool {
    cgv_hypothesis_report(slots).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn values() {
        let f = Field::new(2);
        let (a1, a2) = (f.var(0), f.var(1));
        assert_eq!(val(&a1).unwrap(), ValueVector(vec![-1, 0]));
        assert_eq!(val(&(&a1.pow(3) + &a2)).unwrap(), ValueVector(vec![-3, 0]));
        assert_eq!(val(&a2.checked_div(&a1).unwrap()).unwrap(), ValueVector(vec![1, -1]));
        assert_eq!(val(&(&f.one() + &a1)).unwrap(), ValueVector(vec![-1, 0]));
        assert_eq!(val(&f.zero()), Err(Error::ValuationOfZero));
    }

    #[test]
    fn parities() {
        let f = Field::new(2);
        let (a1, a2) = (f.var(0), f.var(1));
        assert_eq!(parity(&(&a1 * &a2.pow(3))).unwrap(), ParityClass(vec![1, 1]));
        assert_eq!(parity(&a1).unwrap(), ParityClass(vec![1, 0]));
        let g = (&a1 + &a2).checked_div(&(&f.one() + &a2)).unwrap();
        assert!(parity(&g.square()).unwrap().is_zero());
    }

    #[test]
    fn hypothesis_check() {
        let f = Field::new(2);
        let (a1, a2) = (f.var(0), f.var(1));
        assert!(cgv_hypothesis_check(&[a1.clone(), a2.clone()]));
        assert!(!cgv_hypothesis_check(&[a1.clone(), a1.pow(3)]));
        assert!(!cgv_hypothesis_check(&[a1.square(), a2.clone()]));
        assert!(cgv_hypothesis_check(&[&f.one() + &a1, a2.clone()]));
        assert!(!cgv_hypothesis_check(&[a1.inv().unwrap(), a2.clone()]));
        assert_eq!(cgv_hypothesis_report(&[a1.clone(), a1.clone()]), Err("parity independence failed".into()));
    }

    #[test]
    fn parity_sets() {
        let gens = [ParityClass(vec![1, 0]), ParityClass(vec![0, 1])];
        let s = ParitySet::span(2, &gens);
        assert_eq!(s, ParitySet::full(2));
        let miss = s.without(&ParityClass(vec![0, 1]));
        assert_eq!(miss.len(), 3);
        assert_eq!(miss.complement().to_lists(), vec![vec![0, 1]]);
        assert!(ParitySet::from_classes(2, [ParityClass::zero(2)]).is_trivial());
        assert_eq!(serde_json::to_string(&miss).unwrap(), "[[0,0],[1,0],[1,1]]");
    }
}
