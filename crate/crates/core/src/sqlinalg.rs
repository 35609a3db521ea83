//! Linear algebra over the subfield `F^2` for subspaces of `F`.
//!
//! In square-root coordinates an `F^2`-combination `sum c_i^2 g_i` becomes
//! the `F`-combination `sum c_i * coords(g_i)`, because `sqrt(a + b) =
//! sqrt(a) + sqrt(b)` and `sqrt(c^2 a) = c sqrt(a)` in characteristic 2. All
//! work here is therefore Gaussian elimination over `F` on rows of length
//! `2^n`.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, TwoBasisCoords};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

type Row = Vec<FieldElement>;

/// An `F^2`-subspace of `F`, held as the reduced row echelon basis of its
/// square-root coordinate rows. Pivots are the first nonzero column, columns
/// ordered by the 2-basis mask, so the representation is unique and
/// structural equality is subspace equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqSubspace {
    nvars: usize,
    rows: Vec<Row>,
}

/// Full reduction of `rows`, choosing pivots only among the first `pivot_cols`
/// columns. Returns the pivot column of each leading row; rows past the
/// returned length have zeros in all pivot-eligible columns.
fn reduce(rows: &mut [Row], pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..pivot_cols {
        if rank == rows.len() {
            break;
        }
        // the reduced form does not depend on the pivot row, so take the
        // sparsest entry to limit growth
        let Some(found) = (rank..rows.len())
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| rows[r][col].num().terms().len() + rows[r][col].den().terms().len())
        else {
            continue;
        };
        rows.swap(rank, found);
        let inv = rows[rank][col].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in rows[rank].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

/// Basis of the left kernel `{z : sum z_i rows_i = 0}`.
fn left_kernel(rows: &[Row], nvars: usize) -> Vec<Row> {
    let k = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut aug: Vec<Row> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..k).map(|j| if i == j { FieldElement::one(nvars) } else { FieldElement::zero(nvars) }));
            row
        })
        .collect();
    let rank = reduce(&mut aug, width).len();
    aug.drain(rank..).map(|row| row[width..].to_vec()).collect()
}

fn check_context(nvars: usize, f: &FieldElement) -> Result<()> {
    if f.nvars() != nvars {
        return Err(Error::ContextMismatch { left: nvars, right: f.nvars() });
    }
    Ok(())
}

impl SqSubspace {
    pub fn zero(field: Field) -> Self {
        SqSubspace { nvars: field.nvars, rows: Vec::new() }
    }

    fn from_rows(nvars: usize, mut rows: Vec<Row>) -> Self {
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        let width = 1 << nvars;
        let rank = reduce(&mut rows, width).len();
        rows.truncate(rank);
        SqSubspace { nvars, rows }
    }

    /// `F^2`-span of the generators. Zero generators are dropped.
    pub fn span<'a>(field: Field, generators: impl IntoIterator<Item = &'a FieldElement>) -> Result<Self> {
        let mut rows = Vec::new();
        for g in generators {
            check_context(field.nvars, g)?;
            if !g.is_zero() {
                rows.push(g.frobenius_decompose().into_vec());
            }
        }
        Ok(Self::from_rows(field.nvars, rows))
    }

    /// `F^2`-span of all `2^n` basis monomials, i.e. `F` itself.
    pub fn whole(field: Field) -> Self {
        let gens: Vec<_> = (0..field.degree_over_squares()).map(|m| field.basis_monomial(m)).collect();
        Self::span(field, &gens).expect("same context")
    }

    pub fn field(&self) -> Field {
        Field::new(self.nvars)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        1 << self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduced basis rows in square-root coordinates.
    pub fn basis_coords(&self) -> Vec<TwoBasisCoords> {
        self.rows
            .iter()
            .map(|r| TwoBasisCoords::from_coords(self.nvars, r.clone()).expect("row has 2^n entries"))
            .collect()
    }

    /// The reduced basis as elements of `F`.
    pub fn basis(&self) -> Vec<FieldElement> {
        self.basis_coords().iter().map(TwoBasisCoords::recompose).collect()
    }

    /// Pivot column (2-basis mask) of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero")).collect()
    }

    /// Membership test. On success returns `c_i` with
    /// `f = sum c_i^2 g_i` over the reduced basis `g_i`.
    pub fn member(&self, f: &FieldElement) -> Result<Option<Vec<FieldElement>>> {
        check_context(self.nvars, f)?;
        let target = f.frobenius_decompose().into_vec();
        let coeffs: Vec<FieldElement> = self.pivots().iter().map(|&p| target[p].clone()).collect();
        let mut acc = vec![FieldElement::zero(self.nvars); self.ambient_dim()];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(row) {
                if !x.is_zero() {
                    *a = &*a + &(c * x);
                }
            }
        }
        Ok((acc == target).then_some(coeffs))
    }

    pub fn contains(&self, f: &FieldElement) -> bool {
        matches!(self.member(f), Ok(Some(_)))
    }

    pub fn contains_space(&self, other: &SqSubspace) -> bool {
        other.dim() <= self.dim() && self.sum(other).dim() == self.dim()
    }

    /// `S1 + S2`, by concatenating bases.
    pub fn sum(&self, other: &SqSubspace) -> SqSubspace {
        assert_eq!(self.nvars, other.nvars, "subspace context mismatch");
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Self::from_rows(self.nvars, rows)
    }

    /// `S1 ∩ S2` from the left kernel of the stacked bases, eliminating the
    /// larger basis first: with `R(x)` the residual of `x` modulo the larger
    /// space, `sum z_i R(s_i) = 0` exactly when `sum z_i s_i` lies in both.
    pub fn intersect(&self, other: &SqSubspace) -> SqSubspace {
        assert_eq!(self.nvars, other.nvars, "subspace context mismatch");
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field());
        }
        if self == other {
            return self.clone();
        }
        let (small, large) = if self.dim() <= other.dim() { (self, other) } else { (other, self) };
        let residuals: Vec<Row> = small.rows.iter().map(|r| large.residual(r)).collect();
        let width = self.ambient_dim();
        let rows = left_kernel(&residuals, self.nvars)
            .into_iter()
            .map(|z| {
                let mut v = vec![FieldElement::zero(self.nvars); width];
                for (c, row) in z.iter().zip(&small.rows) {
                    if c.is_zero() {
                        continue;
                    }
                    for (a, x) in v.iter_mut().zip(row) {
                        if !x.is_zero() {
                            *a = &*a + &(c * x);
                        }
                    }
                }
                v
            })
            .collect();
        Self::from_rows(self.nvars, rows)
    }

    /// `x` minus its component along the basis; zero exactly on members.
    fn residual(&self, x: &Row) -> Row {
        let mut v = x.clone();
        for (row, p) in self.rows.iter().zip(self.pivots()) {
            let c = v[p].clone();
            if c.is_zero() {
                continue;
            }
            for (a, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *a = &*a - &(&c * y);
                }
            }
        }
        v
    }

    pub fn intersect_all<'a>(spaces: impl IntoIterator<Item = &'a SqSubspace>) -> Option<SqSubspace> {
        let mut it = spaces.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, s| if acc.is_zero() { acc } else { acc.intersect(s) }))
    }

    /// `t * S`; multiplication by a fixed element is `F^2`-linear.
    pub fn scaled(&self, t: &FieldElement) -> Result<SqSubspace> {
        check_context(self.nvars, t)?;
        let gens: Vec<FieldElement> = self.basis().iter().map(|g| g * t).collect();
        Self::span(self.field(), &gens)
    }
}

/// Expresses `f` as `sum c_i^2 g_i` over arbitrary (possibly dependent)
/// generators. Returns `None` if `f` is outside their span.
pub fn combination(f: &FieldElement, generators: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
    let nvars = f.nvars();
    for g in generators {
        check_context(nvars, g)?;
    }
    let mut rows: Vec<Row> = generators.iter().map(|g| g.frobenius_decompose().into_vec()).collect();
    rows.push(f.frobenius_decompose().into_vec());
    let last = generators.len();
    let kernel = left_kernel(&rows, nvars);
    let Some(z) = kernel.into_iter().find(|z| !z[last].is_zero()) else {
        return Ok(None);
    };
    let scale = z[last].inv().expect("nonzero");
    Ok(Some(z[..last].iter().map(|c| c * &scale).collect()))
}

impl Serialize for SqSubspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self.basis_coords();
        let mut seq = serializer.serialize_seq(Some(rows.len()))?;
        for r in &rows {
            seq.serialize_element(r)?;
        }
        seq.end()
    }
}
