//! Descent by a degree-`p` isogeny over `ℚ` and quadratic fields, together
//! with the logarithmic class group pairing and the class-invariant map `ψ`.

pub mod abelian;
pub mod arith;
pub mod descent;
pub mod ellcurve;
pub mod error;
pub mod isogeny;
pub mod logpic;
pub mod pairing;
pub mod qfield;

pub use error::{Error, Result};
