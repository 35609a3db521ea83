//! The Frobenius structure of `F` over `F^2`.
//!
//! The monomials `a^d`, `d` in `{0,1}^n`, form a basis of `F` over `F^2`, so
//! every `f` has a unique expansion `f = sum_d c_d^2 a^d`. Coordinates are
//! stored as the square roots `c_d`, which turns `F^2`-linear algebra in `F`
//! into ordinary `F`-linear algebra on coordinate rows.

use super::element::{Field, FieldElement};
use super::poly::{Monomial, Poly};
use crate::error::{Error, Result};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

/// Square-root coordinates of an element over the 2-basis. Index `mask`
/// encodes `d` with bit `i` holding `d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoBasisCoords {
    nvars: usize,
    coords: Vec<FieldElement>,
}

/// Renders `d` as a bit string `d1 d2 ... dn`.
pub fn mask_label(nvars: usize, mask: usize) -> String {
    (0..nvars).map(|i| if (mask >> i) & 1 == 1 { '1' } else { '0' }).collect()
}

impl TwoBasisCoords {
    pub fn from_coords(nvars: usize, coords: Vec<FieldElement>) -> Result<Self> {
        if coords.len() != 1 << nvars {
            return Err(Error::DimensionMismatch { expected: 1 << nvars, got: coords.len() });
        }
        if let Some(c) = coords.iter().find(|c| c.nvars() != nvars) {
            return Err(Error::ContextMismatch { left: nvars, right: c.nvars() });
        }
        Ok(TwoBasisCoords { nvars, coords })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, mask: usize) -> &FieldElement {
        &self.coords[mask]
    }

    pub fn as_slice(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn into_vec(self) -> Vec<FieldElement> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElement::is_zero)
    }

    /// `sum_d c_d^2 a^d`.
    pub fn recompose(&self) -> FieldElement {
        let field = Field::new(self.nvars);
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(field.zero(), |acc, (mask, c)| &acc + &(&c.square() * &field.basis_monomial(mask)))
    }
}

impl Serialize for TwoBasisCoords {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let nonzero: Vec<_> = self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let mut map = serializer.serialize_map(Some(nonzero.len()))?;
        for (mask, c) in nonzero {
            map.serialize_entry(&mask_label(self.nvars, mask), c)?;
        }
        map.end()
    }
}

/// Splits a polynomial by exponent parity: `p = sum_d a^d * s_d(a)^2`, and
/// returns the `s_d` indexed by mask.
fn split_by_parity(p: &Poly) -> Vec<Poly> {
    let n = p.nvars();
    let mut buckets: Vec<Vec<Monomial>> = vec![Vec::new(); 1 << n];
    for t in p.terms() {
        let e = t.exponents();
        let mask = e.iter().enumerate().fold(0usize, |m, (i, &x)| m | (((x & 1) as usize) << i));
        let half: Vec<u32> = e.iter().map(|&x| x >> 1).collect();
        buckets[mask].push(Monomial::from_exponents(&half));
    }
    buckets.into_iter().map(|b| Poly::from_monomials(n, b)).collect()
}

impl FieldElement {
    /// The unique `{c_d}` with `self = sum_d c_d^2 a^d`.
    ///
    /// Writes `num/den = (num*den)/den^2`, splits `num*den` by exponent
    /// parity into `sum_d a^d s_d^2`, and sets `c_d = s_d / den`.
    pub fn frobenius_decompose(&self) -> TwoBasisCoords {
        let n = self.nvars();
        let prod = self.num().mul(self.den());
        let coords = split_by_parity(&prod)
            .into_iter()
            .map(|s| FieldElement::new(s, self.den().clone()).expect("denominator is nonzero"))
            .collect();
        TwoBasisCoords { nvars: n, coords }
    }

    /// Whether `self` lies in `F^2`.
    pub fn is_square(&self) -> bool {
        // in lowest terms, num/den is a square iff num and den both are
        let even = |p: &Poly| p.terms().iter().all(|t| t.exponents().iter().all(|e| e % 2 == 0));
        even(self.num()) && even(self.den())
    }

    /// Inverse Frobenius.
    pub fn sqrt(&self) -> Result<FieldElement> {
        if !self.is_square() {
            return Err(Error::NotASquare);
        }
        let halve = |p: &Poly| {
            let terms = p.terms().iter().map(|t| {
                let half: Vec<u32> = t.exponents().iter().map(|e| e / 2).collect();
                Monomial::from_exponents(&half)
            });
            Poly::from_monomials(p.nvars(), terms)
        };
        FieldElement::new(halve(self.num()), halve(self.den()))
    }
}
