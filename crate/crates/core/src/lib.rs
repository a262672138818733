pub mod descartes;
pub mod dyadic;
pub mod error;
pub mod eval;
pub mod isolate;
pub mod newton;
pub mod observe;
pub mod oracle;
pub mod refine;

pub use dyadic::{Dyadic, DyadicInterval, Mag, Precision};
pub use error::{Error, Result};
pub use oracle::{ApproxPolynomial, CoefficientOracle, CoefficientSource};
