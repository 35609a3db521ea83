//! Dense modular gcd (Brown's algorithm) for GF(2) polynomials, computed
//! through evaluations at random points of GF(2^64).
//!
//! Every image gcd has a leading monomial at least that of the true gcd, and
//! so does every interpolant. A candidate that divides both inputs is
//! therefore the gcd; the caller performs that division test over GF(2).

use super::poly::{Monomial, Poly};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

/// Elements of GF(2^64) = GF(2)[z] / (z^64 + z^4 + z^3 + z + 1).
mod gf {
    pub fn mul(a: u64, b: u64) -> u64 {
        let (lo, hi) = clmul(a, b);
        // z^64 = z^4 + z^3 + z + 1; two folds clear the high word
        let (l1, h1) = clmul_small(hi);
        let (l2, _) = clmul_small(h1);
        lo ^ l1 ^ l2
    }

    /// Carry-less 64 x 64 -> 128 bit product (low, high).
    pub(super) fn clmul(a: u64, b: u64) -> (u64, u64) {
        #[cfg(target_arch = "x86_64")]
        {
            if std::arch::is_x86_feature_detected!("pclmulqdq") {
                // SAFETY: the required CPU feature was detected at runtime.
                return unsafe { clmul_pclmul(a, b) };
            }
        }
        clmul_soft(a, b)
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "pclmulqdq")]
    unsafe fn clmul_pclmul(a: u64, b: u64) -> (u64, u64) {
        use std::arch::x86_64::*;
        let r = _mm_clmulepi64_si128(_mm_set_epi64x(0, a as i64), _mm_set_epi64x(0, b as i64), 0);
        let lo = _mm_cvtsi128_si64(r) as u64;
        let hi = _mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)) as u64;
        (lo, hi)
    }

    pub(super) fn clmul_soft(a: u64, mut b: u64) -> (u64, u64) {
        let (mut lo, mut hi) = (0u64, 0u64);
        let mut i = 0;
        while b != 0 {
            if b & 1 == 1 {
                lo ^= a << i;
                if i > 0 {
                    hi ^= a >> (64 - i);
                }
            }
            b >>= 1;
            i += 1;
        }
        (lo, hi)
    }

    /// `x * (z^4 + z^3 + z + 1)` as a 128-bit product (low, high).
    fn clmul_small(x: u64) -> (u64, u64) {
        let mut lo = 0u64;
        let mut hi = 0u64;
        for i in [0u32, 1, 3, 4] {
            lo ^= x << i;
            if i > 0 {
                hi ^= x >> (64 - i);
            }
        }
        (lo, hi)
    }

    pub fn pow(mut a: u64, mut e: u128) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(a: u64) -> u64 {
        debug_assert!(a != 0);
        pow(a, (1u128 << 64) - 2)
    }
}

/// Dense univariate polynomials over GF(2^64), lowest degree first, no
/// trailing zeros.
mod uni {
    use super::gf;

    pub type U = Vec<u64>;

    pub fn trim(mut a: U) -> U {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn deg(a: &U) -> usize {
        a.len().saturating_sub(1)
    }

    pub fn eval(a: &U, t: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| gf::mul(acc, t) ^ c)
    }

    pub fn mul(a: &U, b: &U) -> U {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= gf::mul(x, y);
            }
        }
        trim(out)
    }

    pub fn scale(a: &U, c: u64) -> U {
        if c == 0 {
            return Vec::new();
        }
        a.iter().map(|&x| gf::mul(x, c)).collect()
    }

    pub fn add(a: &U, b: &U) -> U {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = long.clone();
        for (o, &s) in out.iter_mut().zip(short) {
            *o ^= s;
        }
        trim(out)
    }

    /// Quotient and remainder.
    pub fn divrem(a: &U, b: &U) -> (U, U) {
        let mut r = a.clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let inv = gf::inv(*b.last().expect("nonzero divisor"));
        let mut q = vec![0; r.len() - b.len() + 1];
        for k in (0..q.len()).rev() {
            let c = gf::mul(r[k + b.len() - 1], inv);
            if c == 0 {
                continue;
            }
            q[k] = c;
            for (j, &y) in b.iter().enumerate() {
                r[k + j] ^= gf::mul(c, y);
            }
        }
        (trim(q), trim(r))
    }

    pub fn monic(a: &U) -> U {
        match a.last() {
            Some(&c) => scale(a, gf::inv(c)),
            None => Vec::new(),
        }
    }

    pub fn gcd(a: &U, b: &U) -> U {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let (_, r) = divrem(&a, &b);
            a = b;
            b = r;
        }
        monic(&a)
    }
}

use uni::U;

/// A polynomial in `k` variables stored recursively: prefix exponents of the
/// first `k - 1` variables mapped to a univariate coefficient in the last.
/// The map is ordered so the last entry has the lex-largest prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
struct MP {
    nv: usize,
    coeffs: BTreeMap<Vec<u32>, U>,
}

impl MP {
    fn from_terms(nv: usize, terms: impl IntoIterator<Item = (Vec<u32>, u64)>) -> MP {
        let mut coeffs: BTreeMap<Vec<u32>, U> = BTreeMap::new();
        for (mut e, c) in terms {
            if c == 0 {
                continue;
            }
            let last = e.pop().expect("at least one variable") as usize;
            let u = coeffs.entry(e).or_default();
            if u.len() <= last {
                u.resize(last + 1, 0);
            }
            u[last] ^= c;
        }
        coeffs.retain(|_, u| {
            *u = uni::trim(std::mem::take(u));
            !u.is_empty()
        });
        MP { nv, coeffs }
    }

    fn terms(&self) -> Vec<(Vec<u32>, u64)> {
        let mut out = Vec::new();
        for (p, u) in &self.coeffs {
            for (e, &c) in u.iter().enumerate() {
                if c != 0 {
                    let mut exps = p.clone();
                    exps.push(e as u32);
                    out.push((exps, c));
                }
            }
        }
        out
    }

    fn y_degree(&self) -> usize {
        self.coeffs.values().map(uni::deg).max().unwrap_or(0)
    }

    fn lead(&self) -> (&Vec<u32>, &U) {
        self.coeffs.last_key_value().expect("nonzero")
    }

    fn is_constant(&self) -> bool {
        self.is_univariate_in_y() && self.lead().1.len() == 1
    }

    /// Whether only the empty-prefix (pure `y`) coefficient is present.
    fn is_univariate_in_y(&self) -> bool {
        self.coeffs.len() == 1 && self.lead().0.iter().all(|&e| e == 0)
    }

    /// Substitutes `y = t`, dropping the last variable.
    fn eval_last(&self, t: u64) -> MP {
        let terms = self.coeffs.iter().map(|(p, u)| (p.clone(), uni::eval(u, t)));
        MP::from_terms(self.nv - 1, terms)
    }

    fn content(&self) -> U {
        let mut g: U = Vec::new();
        for u in self.coeffs.values() {
            g = uni::gcd(&g, u);
            if g.len() == 1 {
                break;
            }
        }
        g
    }

    fn map_coeffs(&self, f: impl Fn(&U) -> U) -> MP {
        let coeffs = self.coeffs.iter().map(|(p, u)| (p.clone(), f(u))).filter(|(_, u)| !u.is_empty()).collect();
        MP { nv: self.nv, coeffs }
    }

    fn div_univariate(&self, c: &U) -> MP {
        self.map_coeffs(|u| uni::divrem(u, c).0)
    }

    /// Primitive in `y` and with lex-leading coefficient 1.
    fn normalized(&self) -> MP {
        let pp = self.div_univariate(&self.content());
        let lc = *pp.lead().1.last().expect("nonzero");
        let inv = gf::inv(lc);
        pp.map_coeffs(|u| uni::scale(u, inv))
    }

    fn constant(nv: usize, u: U) -> MP {
        let mut coeffs = BTreeMap::new();
        if !u.is_empty() {
            coeffs.insert(vec![0; nv - 1], u);
        }
        MP { nv, coeffs }
    }
}

/// Monic gcd of two nonzero polynomials over GF(2^64).
fn brown(a: &MP, b: &MP, rng: &mut StdRng) -> MP {
    let nv = a.nv;
    if nv == 1 {
        let ua = a.coeffs.values().next().cloned().unwrap_or_default();
        let ub = b.coeffs.values().next().cloned().unwrap_or_default();
        return MP::constant(1, uni::gcd(&ua, &ub));
    }
    let (ca, cb) = (a.content(), b.content());
    let c = uni::gcd(&ca, &cb);
    let a = a.div_univariate(&ca);
    let b = b.div_univariate(&cb);
    if a.is_univariate_in_y() || b.is_univariate_in_y() {
        return MP::constant(nv, c);
    }
    let (la, lb) = (a.lead().1.clone(), b.lead().1.clone());
    let g = uni::gcd(&la, &lb);
    let bound = uni::deg(&g) + a.y_degree().min(b.y_degree());

    let mut interp: Option<Interpolant> = None;
    let mut used: Vec<u64> = Vec::new();
    loop {
        let t: u64 = rng.gen();
        if used.contains(&t) || uni::eval(&la, t) == 0 || uni::eval(&lb, t) == 0 {
            continue;
        }
        let image = brown(&a.eval_last(t), &b.eval_last(t), rng);
        if image.is_constant() {
            return MP::constant(nv, c);
        }
        let scale = uni::eval(&g, t);
        let image: BTreeMap<Vec<u32>, u64> = image.terms().into_iter().map(|(e, v)| (e, gf::mul(v, scale))).collect();
        let lm = image.keys().next_back().expect("nonzero image").clone();

        let restart = match &interp {
            None => true,
            Some((cur, _, _)) if lm < *cur => true,
            Some((cur, _, _)) if lm > *cur => continue,
            _ => false,
        };
        if restart {
            used.clear();
            let h = image.iter().map(|(e, &v)| (e.clone(), vec![v])).collect();
            interp = Some((lm, h, vec![t, 1]));
            used.push(t);
            if bound == 0 {
                let h = &interp.as_ref().expect("set").1;
                return finish(nv, h, &c);
            }
            continue;
        }

        let (_, h, q) = interp.as_mut().expect("initialized");
        let mut changed = false;
        let qt_inv = gf::inv(uni::eval(q, t));
        let keys: Vec<Vec<u32>> = h.keys().chain(image.keys()).cloned().collect();
        for key in keys {
            let current = h.get(&key).map_or(0, |u| uni::eval(u, t));
            let target = image.get(&key).copied().unwrap_or(0);
            let diff = current ^ target;
            if diff == 0 {
                continue;
            }
            changed = true;
            let step = uni::scale(q, gf::mul(diff, qt_inv));
            let entry = h.entry(key).or_default();
            *entry = uni::add(entry, &step);
        }
        h.retain(|_, u| !u.is_empty());
        *q = uni::mul(q, &vec![t, 1]);
        used.push(t);
        if !changed || used.len() > bound {
            return finish(nv, h, &c);
        }
    }
}

/// Leading exponent, coefficients interpolated so far, and the product of
/// `z - t` over the points used.
type Interpolant = (Vec<u32>, BTreeMap<Vec<u32>, U>, U);

fn finish(nv: usize, h: &BTreeMap<Vec<u32>, U>, c: &U) -> MP {
    // h maps full x-exponents (nv - 1 entries) to y-coefficients
    let terms = h.iter().flat_map(|(e, u)| {
        u.iter().enumerate().map(move |(k, &v)| {
            let mut exps = e.clone();
            exps.push(k as u32);
            (exps, v)
        })
    });
    let candidate = MP::from_terms(nv, terms).normalized();
    candidate.map_coeffs(|u| uni::mul(u, c))
}

/// Gcd candidate for two nonzero GF(2) polynomials, or `None` if the result
/// has coefficients outside GF(2). The caller must confirm by division.
pub(super) fn candidate(a: &Poly, b: &Poly) -> Option<Poly> {
    let nvars = a.nvars();
    let vars: Vec<usize> = (0..nvars).filter(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0).collect();
    if vars.is_empty() {
        return Some(Poly::one(nvars));
    }
    let to_mp = |p: &Poly| {
        MP::from_terms(vars.len(), p.terms().iter().map(|m| (vars.iter().map(|&v| m.exponents()[v]).collect(), 1u64)))
    };
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let g = brown(&to_mp(a), &to_mp(b), &mut rng);
    let mut monomials = Vec::new();
    for (exps, c) in g.terms() {
        if c != 1 {
            return None;
        }
        let mut full = vec![0u32; nvars];
        for (&v, &e) in vars.iter().zip(&exps) {
            full[v] = e;
        }
        monomials.push(Monomial::from_exponents(&full));
    }
    Some(Poly::from_monomials(nvars, monomials))
}
