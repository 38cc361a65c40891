use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("poles must be pairwise distinct (poles {0} and {1} coincide)")]
    DuplicatePoles(usize, usize),

    #[error("non-finite function sample at {0}")]
    NonFiniteSample(String),

    #[error("path passes within {distance:e} of base point {point}")]
    PathHitsBasePoint { point: String, distance: f64 },

    #[error("initial branch does not match the radicand: relative mismatch {0:e}")]
    BadInitialBranch(f64),

    #[error("geometry infeasible: {0}")]
    GeometryInfeasible(String),

    #[error("singularity on integration path: {0}")]
    SingularityOnPath(String),

    #[error("quadrature did not converge: estimate {estimate:e} above tolerance {tolerance:e}")]
    QuadratureNotConverged { estimate: f64, tolerance: f64 },

    #[error("series diverges: |x_{index}| = {modulus} is outside the convergence margin")]
    SeriesDiverges { index: usize, modulus: f64 },

    #[error("series did not reach the requested tolerance within {0} terms")]
    MaxTermsExceeded(usize),

    #[error("branch of the integrand is not closed along the cycle (base point {0})")]
    BranchNotClosed(String),

    #[error("branch data along the path does not match the configured seeds: {0}")]
    BranchMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid index {index} (expected 1..={max})")]
    InvalidIndex { index: usize, max: usize },

    #[error("inadmissible sample point: {0}")]
    InadmissiblePoint(String),

    #[error("no clear singular value gap at ratio {0:e}")]
    NoClearGap(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
