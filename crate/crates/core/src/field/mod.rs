//! Exact arithmetic in `GF(2)[a1, ..., an]` and its fraction field.

mod element;
mod frobenius;
mod modgcd;
mod poly;

pub use element::{Field, FieldElement};
pub use frobenius::{mask_label, TwoBasisCoords};
pub use poly::{Monomial, Poly};
