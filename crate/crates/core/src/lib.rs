//! Extended-precision evaluation of generalized, bilateral and basic
//! hypergeometric series, together with an executable catalog of summation
//! identities and a seeded verification harness.

pub mod error;
pub mod numerics;
pub mod series;
pub mod qseries;
pub mod identities;
pub mod harness;

pub use error::{Error, Result};
pub use numerics::{ComplexValue, GaussRational, PrecisionContext};
