//! Exact construction and numerical certification of lemniscates of
//! rational functions over the number field Q(i, a), a^2 + a + 3 = 0.

pub mod error;
pub mod constructions;
pub mod curvekit;
pub mod exactfield;
pub mod factorcount;
pub mod ratfunc;
pub mod solvekit;

pub use error::{Error, Result};
pub use exactfield::ExactComplex;
pub use ratfunc::{Poly, RatFunc};
