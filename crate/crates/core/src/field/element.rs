//! Elements of the rational function field `F = GF(2)(a1, ..., an)`.

use super::poly::{Monomial, Poly};
use crate::error::{Error, Result};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Sub};

/// Field context: the number of indeterminates `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Field {
    pub nvars: usize,
}

impl Field {
    pub fn new(nvars: usize) -> Self {
        Field { nvars }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero(self.nvars)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one(self.nvars)
    }

    /// The indeterminate `a_{index+1}` (0-based index).
    pub fn var(&self, index: usize) -> FieldElement {
        FieldElement::from_poly(Poly::var(self.nvars, index))
    }

    /// The 2-basis monomial `a^d`, with bit `i` of `mask` giving `d_{i+1}`.
    pub fn basis_monomial(&self, mask: usize) -> FieldElement {
        let exps: Vec<u32> = (0..self.nvars).map(|i| ((mask >> i) & 1) as u32).collect();
        FieldElement::from_poly(Poly::monomial(Monomial::from_exponents(&exps)))
    }

    pub fn monomial(&self, exps: &[u32]) -> FieldElement {
        assert_eq!(exps.len(), self.nvars);
        FieldElement::from_poly(Poly::monomial(Monomial::from_exponents(exps)))
    }

    /// `[F : F^2] = 2^n`.
    pub fn degree_over_squares(&self) -> usize {
        1 << self.nvars
    }
}

/// A fraction `num / den`, always kept in lowest terms with `den != 0`.
///
/// Over GF(2) the only unit is 1, so lowest terms is a canonical form and
/// the derived equality and hash are those of the field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    num: Poly,
    den: Poly,
}

impl FieldElement {
    pub fn zero(nvars: usize) -> Self {
        FieldElement { num: Poly::zero(nvars), den: Poly::one(nvars) }
    }

    pub fn one(nvars: usize) -> Self {
        FieldElement { num: Poly::one(nvars), den: Poly::one(nvars) }
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        FieldElement { num: p, den: Poly::one(n) }
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if num.nvars() != den.nvars() {
            return Err(Error::ContextMismatch { left: num.nvars(), right: den.nvars() });
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> Self {
        let n = num.nvars();
        if num.is_zero() {
            return Self::zero(n);
        }
        if den.is_one() {
            return FieldElement { num, den };
        }
        let (_, num, den) = num.gcd_cofactors(&den);
        FieldElement { num, den }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn field(&self) -> Field {
        Field::new(self.nvars())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn check_context(&self, other: &Self) -> Result<()> {
        if self.nvars() != other.nvars() {
            return Err(Error::ContextMismatch { left: self.nvars(), right: other.nvars() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.den == other.den {
            return Ok(Self::reduced(self.num.add(&other.num), self.den.clone()));
        }
        // with g = gcd(b, d): a/b + c/d = (a d' + c b') / (b' d' g), and only
        // g can share a factor with the new numerator
        let (g, b, d) = self.den.gcd_cofactors(&other.den);
        let num = self.num.mul(&d).add(&other.num.mul(&b));
        if num.is_zero() {
            return Ok(Self::zero(self.nvars()));
        }
        let den = b.mul(&d);
        if g.is_one() {
            return Ok(FieldElement { num, den });
        }
        let (_, num, g) = num.gcd_cofactors(&g);
        Ok(FieldElement { num, den: den.mul(&g) })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.nvars()));
        }
        // cross-cancel so the product is already in lowest terms
        let (_, n1, d2) = self.num.gcd_cofactors(&other.den);
        let (_, n2, d1) = other.num.gcd_cofactors(&self.den);
        Ok(FieldElement { num: n1.mul(&n2), den: d1.mul(&d2) })
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement { num: self.den.clone(), den: self.num.clone() })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_context(other)?;
        self.checked_mul(&other.inv()?)
    }

    /// Frobenius `x -> x^2`.
    pub fn square(&self) -> Self {
        FieldElement { num: self.num.square(), den: self.den.square() }
    }

    pub fn pow(&self, k: u32) -> Self {
        FieldElement { num: self.num.pow(k), den: self.den.pow(k) }
    }

    /// Equality tested as `num1 * den2 == num2 * den1`, independent of
    /// the canonical form.
    pub fn cross_eq(&self, other: &Self) -> bool {
        self.nvars() == other.nvars() && self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field context mismatch")
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$checked(&rhs).expect("field context mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
// characteristic 2: subtraction is addition
binop!(Sub, sub, checked_add);
binop!(Mul, mul, checked_mul);

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            if p.terms().len() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FractionRepr {
    num: Vec<Vec<u32>>,
    den: Vec<Vec<u32>>,
}

fn poly_repr(p: &Poly) -> Vec<Vec<u32>> {
    p.terms().iter().map(|m| m.exponents().to_vec()).collect()
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FractionRepr { num: poly_repr(&self.num), den: poly_repr(&self.den) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = FractionRepr::deserialize(deserializer)?;
        let nvars = repr.den.first().map(Vec::len).ok_or_else(|| de::Error::custom("denominator must be nonzero"))?;
        let to_poly = |terms: &[Vec<u32>]| -> std::result::Result<Poly, D::Error> {
            if let Some(bad) = terms.iter().find(|t| t.len() != nvars) {
                return Err(de::Error::custom(format!("exponent vector {bad:?} does not have length {nvars}")));
            }
            Ok(Poly::from_monomials(nvars, terms.iter().map(|t| Monomial::from_exponents(t))))
        };
        let num = to_poly(&repr.num)?;
        let den = to_poly(&repr.den)?;
        FieldElement::new(num, den).map_err(de::Error::custom)
    }
}
