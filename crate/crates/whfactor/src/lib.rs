//! Wiener-Hopf factorization `p(z) = p_-(z) z^k p_+(z)` of scalar complex
//! polynomials that do not vanish on the unit circle.
//!
//! Both factors are read off finite Toeplitz systems built from a window of
//! Laurent coefficients of `1/p`; no polynomial roots or divisions appear on
//! the main path. Alongside the factors the pipeline emits a certified
//! accuracy ledger (condition bounds and factor error bounds derived a
//! priori from the polynomial data).

pub mod bounds;
pub mod cli;
pub mod contour;
pub mod error;
pub mod factor;
pub mod laurent;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod toeplitz;

pub use error::Error;
pub use poly::Polynomial;
pub use scalar::{BigReal, Cplx, Precision, PrecisionContext, Real};
