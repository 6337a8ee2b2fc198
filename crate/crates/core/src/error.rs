use thiserror::Error;

/// Errors produced by the solvers and numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{0} is undefined when U·N = 0")]
    Undefined(&'static str),

    #[error("Fock dimension overflows for M = {sites}, N = {bosons}")]
    DimensionOverflow { sites: usize, bosons: usize },

    #[error("Fock dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("no sign change on [{lo}, {hi}] (f = {f_lo}, {f_hi})")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root finder did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("secular problem has no poles")]
    EmptyProblem,

    #[error("matrix is not symmetric (max deviation {max_deviation:e})")]
    Asymmetric { max_deviation: f64 },

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("quadratic form unstable: {which} has minimum eigenvalue {min_eigenvalue:e}")]
    Unstable { which: &'static str, min_eigenvalue: f64 },

    #[error("invalid regime in {sector} sector at mode {index} (margin {margin:e})")]
    InvalidRegime { sector: &'static str, index: usize, margin: f64 },

    #[error("singular: {0}")]
    Singular(String),

    #[error("condensate depleted beyond N (m_0 = {m0:e})")]
    DepletionOverflow { m0: f64 },

    #[error("occupations sum to {got}, expected {expected}")]
    OccupationMismatch { expected: usize, got: usize },

    #[error("no bound state parametrization: lambda_0 = {lambda0} <= 2T = {two_t}")]
    NoBoundState { lambda0: f64, two_t: f64 },

    #[error("eigensolver failure: {0}")]
    Eigen(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
