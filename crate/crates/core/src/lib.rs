//! Exact computations with bilinear and quadratic Pfister forms over the
//! characteristic-2 rational function field `GF(2)(a1, ..., an)`.

pub mod bilinear;
pub mod error;
pub mod field;
pub mod quadratic;
pub mod quaternion;
pub mod sample;
pub mod sqlinalg;
pub mod valuation;

pub use error::{Error, Result};
pub use field::{Field, FieldElement, Monomial, Poly, TwoBasisCoords};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
