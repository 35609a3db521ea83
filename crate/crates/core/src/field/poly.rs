//! Sparse polynomials over GF(2) in a fixed number of variables.
//!
//! A coefficient is either 0 or 1, so a polynomial is just the set of
//! monomials that appear in it. Terms are stored strictly descending in
//! lexicographic order, which makes the first term the leading term and
//! makes addition a merge with cancellation.

use super::modgcd;
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;

/// Exponent vector of a monomial `a1^e1 * ... * an^en`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    /// The variable `a_{index+1}`.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[index] = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    /// Componentwise minimum.
    fn meet(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    fn scale(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|e| e * k).collect())
    }

    fn with_exponent(&self, var: usize, e: u32) -> Monomial {
        let mut m = self.clone();
        m.0[var] = e;
        m
    }
}

/// Polynomial in `GF(2)[a1, ..., an]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: Vec<Monomial>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(Monomial::one(nvars))
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Self::monomial(Monomial::var(nvars, index))
    }

    pub fn monomial(m: Monomial) -> Self {
        Poly { nvars: m.nvars(), terms: vec![m] }
    }

    /// Builds a polynomial from a multiset of monomials; repeated monomials
    /// cancel in pairs.
    pub fn from_monomials(nvars: usize, monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let mut v: Vec<Monomial> = monomials.into_iter().collect();
        debug_assert!(v.iter().all(|m| m.nvars() == nvars));
        v.sort_unstable_by(|a, b| b.cmp(a));
        let mut terms: Vec<Monomial> = Vec::with_capacity(v.len());
        let mut iter = v.into_iter().peekable();
        while let Some(m) = iter.next() {
            let mut count = 1usize;
            while iter.peek() == Some(&m) {
                iter.next();
                count += 1;
            }
            if count % 2 == 1 {
                terms.push(m);
            }
        }
        Poly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in descending lexicographic order.
    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(Monomial::is_one)
    }

    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.first()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "polynomial context mismatch");
        let (a, b) = (&self.terms, &other.terms);
        let mut terms = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Greater => {
                    terms.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    terms.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&a[i..]);
        terms.extend_from_slice(&b[j..]);
        Poly { nvars: self.nvars, terms }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "polynomial context mismatch");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.nvars);
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let products = self.terms.iter().flat_map(|a| other.terms.iter().map(move |b| a.mul(b)));
        Poly::from_monomials(self.nvars, products)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        // multiplying by a monomial preserves the term order
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|t| t.mul(m)).collect() }
    }

    /// Frobenius: `(sum m)^2 = sum m^2` in characteristic 2.
    pub fn square(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|t| t.scale(2)).collect() }
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|t| t.0[var]).max().unwrap_or(0)
    }

    /// Coefficient of `a_var^k`, as a polynomial free of `a_var`.
    pub fn coeff_in(&self, var: usize, k: u32) -> Poly {
        // zeroing one exponent keeps the relative order of the surviving terms
        let terms = self.terms.iter().filter(|t| t.0[var] == k).map(|t| t.with_exponent(var, 0)).collect();
        Poly { nvars: self.nvars, terms }
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(self.nvars),
            Some(first) => it.fold(first.clone(), |acc, t| acc.meet(t)),
        }
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, divisor.nvars, "polynomial context mismatch");
        let lead = divisor.leading()?;
        if divisor.is_one() {
            return Some(self.clone());
        }
        if divisor.terms.len() == 1 {
            let mut terms = Vec::with_capacity(self.terms.len());
            for t in &self.terms {
                if !lead.divides(t) {
                    return None;
                }
                terms.push(lead.quotient_of(t));
            }
            return Some(Poly { nvars: self.nvars, terms });
        }
        // heap division: the heap holds the products q_i * tail_j not yet
        // consumed, so each step sees the leading term of the remainder
        let tail = &divisor.terms[1..];
        let mut heap: BinaryHeap<(Monomial, usize, usize)> = BinaryHeap::new();
        let mut quotient: Vec<Monomial> = Vec::new();
        let mut next = 0;
        loop {
            let from_self = self.terms.get(next);
            let m = match (from_self, heap.peek()) {
                (None, None) => break,
                (Some(a), None) => a.clone(),
                (None, Some(top)) => top.0.clone(),
                (Some(a), Some(top)) => a.max(&top.0).clone(),
            };
            let mut odd = false;
            if from_self == Some(&m) {
                odd = true;
                next += 1;
            }
            while heap.peek().is_some_and(|top| top.0 == m) {
                let (_, qi, tj) = heap.pop().expect("peeked");
                odd = !odd;
                if tj + 1 < tail.len() {
                    heap.push((quotient[qi].mul(&tail[tj + 1]), qi, tj + 1));
                }
            }
            if !odd {
                continue;
            }
            if !lead.divides(&m) {
                return None;
            }
            let q = lead.quotient_of(&m);
            if let Some(t) = tail.first() {
                heap.push((q.mul(t), quotient.len(), 0));
            }
            quotient.push(q);
        }
        Some(Poly { nvars: self.nvars, terms: quotient })
    }

    /// `(g, self / g, other / g)` with `g` the gcd.
    pub fn gcd_cofactors(&self, other: &Poly) -> (Poly, Poly, Poly) {
        assert_eq!(self.nvars, other.nvars, "polynomial context mismatch");
        let one = Poly::one(self.nvars);
        if self.is_zero() {
            return (other.clone(), Poly::zero(self.nvars), one);
        }
        if other.is_zero() {
            return (self.clone(), one, Poly::zero(self.nvars));
        }
        let ma = self.monomial_content();
        let mb = other.monomial_content();
        let shared = ma.meet(&mb);
        let a = self.exact_div(&Poly::monomial(ma.clone())).expect("monomial content divides");
        let b = other.exact_div(&Poly::monomial(mb.clone())).expect("monomial content divides");
        let (g, ca, cb) = match modgcd::candidate(&a, &b).and_then(|g| Some((a.exact_div(&g)?, b.exact_div(&g)?, g))) {
            Some((ca, cb, g)) => (g, ca, cb),
            None => {
                let g = gcd_rec(&a, &b);
                let ca = a.exact_div(&g).expect("gcd divides");
                let cb = b.exact_div(&g).expect("gcd divides");
                (g, ca, cb)
            }
        };
        (g.mul_monomial(&shared), ca.mul_monomial(&shared.quotient_of(&ma)), cb.mul_monomial(&shared.quotient_of(&mb)))
    }

    /// Greatest common divisor. Over GF(2) the only unit is 1, so the result
    /// is unique.
    pub fn gcd(&self, other: &Poly) -> Poly {
        self.gcd_cofactors(other).0
    }
}

fn first_shared_variable(a: &Poly, b: &Poly) -> Option<usize> {
    (0..a.nvars).find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
}

/// Content of `p` viewed as a polynomial in `var`.
fn content_in(p: &Poly, var: usize) -> Poly {
    let deg = p.degree_in(var);
    let mut acc = Poly::zero(p.nvars);
    for k in 0..=deg {
        let c = p.coeff_in(var, k);
        if c.is_zero() {
            continue;
        }
        acc = gcd_rec(&acc, &c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn primitive_part_in(p: &Poly, var: usize) -> Poly {
    let c = content_in(p, var);
    p.exact_div(&c).expect("content divides")
}

/// Pseudo-remainder of `a` by `b` as polynomials in `var`.
fn prem_in(a: &Poly, b: &Poly, var: usize) -> Poly {
    let db = b.degree_in(var);
    let lc_b = b.coeff_in(var, db);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(var);
        if dr < db {
            break;
        }
        let lc_r = r.coeff_in(var, dr);
        let mut shift = Monomial::one(r.nvars);
        shift.0[var] = dr - db;
        r = r.mul(&lc_b).add(&b.mul(&lc_r).mul_monomial(&shift));
    }
    r
}

/// Recursive primitive-PRS gcd, eliminating the lowest-index variable first.
fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.nvars);
    }
    if a == b {
        return a.clone();
    }
    let var = first_shared_variable(a, b).expect("non-constant input has a variable");
    let (da, db) = (a.degree_in(var), b.degree_in(var));
    if da == 0 {
        return gcd_rec(a, &content_in(b, var));
    }
    if db == 0 {
        return gcd_rec(&content_in(a, var), b);
    }
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let content = gcd_rec(&ca, &cb);
    let mut p = a.exact_div(&ca).expect("content divides");
    let mut q = b.exact_div(&cb).expect("content divides");
    if p.degree_in(var) < q.degree_in(var) {
        std::mem::swap(&mut p, &mut q);
    }
    let primitive = loop {
        let r = prem_in(&p, &q, var);
        if r.is_zero() {
            break q;
        }
        if r.degree_in(var) == 0 {
            break Poly::one(a.nvars);
        }
        p = q;
        q = primitive_part_in(&r, var);
    };
    primitive.mul(&content)
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    if m.is_one() {
        return write!(f, "1");
    }
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "a{}", i + 1)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write_monomial(f, t)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, exps: &[&[u32]]) -> Poly {
        Poly::from_monomials(n, exps.iter().map(|e| Monomial::from_exponents(e)))
    }

    #[test]
    fn modular_gcd_matches_prs() {
        use crate::field::Field;
        use crate::sample::{self, PolyShape};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let field = Field::new(3);
        let shape = PolyShape { max_degree: 2, max_terms: 3 };
        for _ in 0..60 {
            let c = sample::nonzero_poly(&mut rng, field, shape);
            let a = sample::nonzero_poly(&mut rng, field, shape).mul(&c);
            let b = sample::nonzero_poly(&mut rng, field, shape).mul(&c);
            let g = a.gcd(&b);
            assert!(g.exact_div(&c).is_some());
            assert_eq!(g, gcd_rec(&a, &b));
        }
    }

    #[test]
    fn duplicates_cancel() {
        let a = p(2, &[&[1, 0], &[1, 0], &[0, 1]]);
        assert_eq!(a, p(2, &[&[0, 1]]));
        assert!(a.add(&a).is_zero());
    }

    #[test]
    fn leading_term_is_lex_max() {
        let a = p(2, &[&[0, 1], &[3, 0]]);
        assert_eq!(a.leading().unwrap().exponents(), &[3, 0]);
        assert_eq!(a.to_string(), "a1^3+a2");
    }

    #[test]
    fn square_is_additive() {
        let a = p(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(a.mul(&a), a.square());
        assert_eq!(a.square(), p(2, &[&[2, 0], &[0, 2]]));
    }

    #[test]
    fn exact_division() {
        let a = p(2, &[&[1, 0], &[0, 1]]);
        let b = p(2, &[&[1, 0], &[0, 0]]);
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        assert_eq!(a.exact_div(&b), None);
    }

    #[test]
    fn gcd_of_products() {
        let x = p(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let y = p(3, &[&[0, 0, 1], &[0, 0, 0]]);
        let z = p(3, &[&[1, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let a = x.mul(&y).mul(&y);
        let b = x.mul(&y).mul(&z);
        assert_eq!(a.gcd(&b), x.mul(&y));
        assert!(y.gcd(&z).is_one());
        // x^2 + y^2 = (x + y)^2 in characteristic 2
        let sq = x.square();
        assert_eq!(sq.gcd(&x.mul(&z)), x);
    }

    #[test]
    fn gcd_with_monomial_content() {
        let a = p(2, &[&[3, 1], &[1, 2]]);
        let b = p(2, &[&[2, 1]]);
        assert_eq!(a.gcd(&b), p(2, &[&[1, 1]]));
    }
}
