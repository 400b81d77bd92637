use thiserror::Error;

/// Result alias for fallible operations in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the library.
///
/// Variants fall in two classes: validation errors (malformed or
/// out-of-domain input) and numerical failures (a computation reached a
/// singular or ill-conditioned point). [`Error::is_numerical`] tells them
/// apart.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Verblunsky coefficient at index {index}: |alpha| = {modulus} > 1")]
    InvalidCoefficient { index: i64, modulus: f64 },

    #[error("phase at index {index} is not unimodular: |zeta| = {modulus}")]
    NonUnimodularPhase { index: i64, modulus: f64 },

    #[error("alpha and zeta lengths differ: {alpha} vs {zeta}")]
    LengthMismatch { alpha: usize, zeta: usize },

    #[error("empty schedule window")]
    EmptySchedule,

    #[error("index {index} outside window [{lo}, {hi}]")]
    OutOfWindow { index: i64, lo: i64, hi: i64 },

    #[error("|alpha_{index}| = 1: the recursion denominator rho_{index} vanishes")]
    SingularCoefficient { index: i64 },

    #[error("|alpha_{index}| = {modulus} < 1: no split at this index")]
    NoSplit { index: i64, modulus: f64 },

    #[error("polynomial degree {degree} exceeds reverse order {order}")]
    DegreeTooLarge { degree: usize, order: usize },

    #[error("{needed} phases required, {given} supplied")]
    MissingPhases { needed: usize, given: usize },

    #[error("Theta-block normalisation violated: |alpha|^2 + |rho|^2 - 1 = {residual}")]
    NormalizationViolated { residual: f64 },

    #[error("density integrates to {total}, not 1")]
    NonNormalizedDensity { total: f64 },

    #[error("density value at grid point {index} is negative or not finite")]
    InvalidDensity { index: usize },

    #[error("density grid must be uniform and periodic on [-pi, pi)")]
    NonUniformGrid,

    #[error("{nodes} quadrature nodes cannot resolve moments up to order {max_order} (need at least {required})")]
    TooFewNodes { nodes: usize, max_order: usize, required: usize },

    #[error("moment matrix is not positive definite at order {order}")]
    NotPositiveDefinite { order: usize },

    #[error("constant term {value} of z*phi_n is not zero; backward step is inconsistent")]
    NonzeroConstantTerm { value: f64 },

    #[error("denominator 1 - conj(xi) z vanishes")]
    VanishingDenominator,

    #[error("spectral parameter |z| = {modulus} outside [1e-6, 1e6]")]
    SpectralParameter { modulus: f64 },

    #[error("point |z| = {modulus} is not inside the unit disk")]
    OutsideDisk { modulus: f64 },

    #[error("vector length {got} does not match dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("term count {n} outside [{min}, {max}]")]
    TermCount { n: usize, min: usize, max: usize },

    #[error("periodic window of odd length {len}")]
    OddPeriodicWindow { len: usize },

    #[error("window [{lo}, {hi}] too small: {reason}")]
    WindowTooSmall { lo: i64, hi: i64, reason: &'static str },

    #[error("unsupported: {0}")]
    Unsupported(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("tolerance breach in {identity}: residual {residual:e} > {tolerance:e}")]
    ToleranceBreach { identity: String, residual: f64, tolerance: f64 },
}

impl Error {
    /// True for failures of a computation, false for rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularCoefficient { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::NonzeroConstantTerm { .. }
                | Error::VanishingDenominator
                | Error::ToleranceBreach { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
