//! Extended-precision scalars, the precision contract and gamma-family
//! primitives.

mod complex;
mod context;
pub mod exact;
mod gamma;

pub use complex::{format_float, ComplexValue};
pub use context::PrecisionContext;
pub use exact::{pochhammer_exact, GaussRational};
pub use gamma::{gamma, gamma_ratio, log_gamma, pochhammer};
