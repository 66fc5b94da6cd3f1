use thiserror::Error;

/// Errors surfaced by the factorization pipeline.
///
/// Validation-class errors mean the input polynomial is outside the method's
/// domain; numerical-class errors mean the run must be retried with a larger
/// sampling order or higher precision.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial vanishes numerically on the contour: min |p| = {min_abs:e} below threshold {threshold:e}")]
    ZeroOnCircle { min_abs: f64, threshold: f64 },

    #[error("winding number uncertain: quadrature value {value} is {distance} away from the nearest integer")]
    IndexUncertain { value: f64, distance: f64 },

    #[error("no annulus free of zeros with rho <= 0.999; a root lies numerically on the unit circle")]
    NoAnnulus,

    #[error("sampling order ell = {ell} below the window requirement 2(n + kappa) = {required}")]
    EllTooSmall { ell: usize, required: usize },

    #[error("requested accuracy {eps_tilde:e} is not below q/(1-q) = {limit}")]
    EpsTooLarge { eps_tilde: f64, limit: f64 },

    #[error("index {index} outside the coefficient window [{lo}, {hi}]")]
    IndexOutOfWindow { index: i64, lo: i64, hi: i64 },

    #[error("numerical rank ambiguous: singular value gap ratio {gap_ratio:e} below 1e3; raise ell or precision")]
    RankAmbiguous { gap_ratio: f64 },

    #[error("coefficient window is identically zero")]
    ZeroWindow,

    #[error("polynomial is not in the stated Toeplitz kernel: orthogonality residual {residual:e} exceeds {tolerance:e}")]
    NotInKernel { residual: f64, tolerance: f64 },

    #[error("essential pair degenerate: |sigma1| = {sigma1:e}, |sigma0| = {sigma0:e} below threshold {threshold:e}; raise n or fix the window")]
    DegeneratePair { sigma0: f64, sigma1: f64, threshold: f64 },

    #[error("Toeplitz system singular; the window, kappa or n is inconsistent")]
    SingularSystem,

    #[error("structurally zero coefficient has magnitude {magnitude:e} >= certified accuracy {eps:e}; raise ell or precision")]
    TrimViolation { magnitude: f64, eps: f64 },

    #[error("polynomial fails the self-inversive coefficient symmetry test (deviation {deviation:e})")]
    NotSelfInversive { deviation: f64 },

    #[error("coefficient symmetry hypothesis for the requested delta0 mode fails (deviation {deviation:e})")]
    SymmetryViolation { deviation: f64 },

    #[error("perturbation hypothesis violated: {0}; reported bounds are not certified")]
    HypothesisViolated(String),

    #[error("eigenvalue iteration failed to converge")]
    EigFailure,

    #[error("a root lies within 1e-6 of the unit circle; naive separation impossible")]
    RootOnCircle,

    #[error("repeated root detected; the partial-fraction oracle needs simple roots")]
    RepeatedRoot,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code class: 2 = validation, 3 = numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ZeroOnCircle { .. }
            | Error::IndexUncertain { .. }
            | Error::NoAnnulus
            | Error::EllTooSmall { .. }
            | Error::EpsTooLarge { .. }
            | Error::NotSelfInversive { .. }
            | Error::SymmetryViolation { .. }
            | Error::RootOnCircle
            | Error::RepeatedRoot
            | Error::InvalidInput(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
            _ => 3,
        }
    }
}
