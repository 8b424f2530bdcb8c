//! Logarithmic matrices for modular forms that are non-ordinary at an odd
//! prime `p`, and the factorisation of one- and two-variable p-adic
//! distributions into bounded sharp/flat components.
//!
//! Arithmetic is exact up to tracked p-adic precision: Q_p and its ramified
//! quadratic extension live in [`padic`], truncated power series and
//! cyclotomic evaluation in [`series`]. The matrices themselves are built in
//! [`logmatrix`]; [`factor`] and [`twovar`] perform the one- and two-variable
//! factorisations and verify every interpolation identity they rely on.

pub mod character;
pub mod error;
pub mod exact;
pub mod factor;
pub mod logmatrix;
pub mod padic;
pub mod poly;
pub mod ring;
pub mod series;
pub mod twovar;
pub mod valuation;

pub use error::{Error, Result};
pub use padic::{root_power, FormParams, Padic, PadicRing, QuadExtElem, Root};
pub use ring::Coefficient;
pub use series::{Cyclo, CycloRing, Series1, Series2, Var};
pub use valuation::Valuation;
