use ringbose::Error;

pub const OK: &str = "ok";

/// Maps a solver error onto the per-point status vocabulary.
pub fn status_of(err: &Error) -> &'static str {
    match err {
        Error::InvalidRegime { .. }
        | Error::Unstable { .. }
        | Error::NoBoundState { .. }
        | Error::DepletionOverflow { .. }
        | Error::Undefined(_)
        | Error::InvalidParams(_) => "invalid_regime",
        Error::Singular(_) => "singular",
        Error::DimensionCap { .. } | Error::DimensionOverflow { .. } => "dimension_cap",
        Error::NoBracket { .. }
        | Error::NoConvergence { .. }
        | Error::Eigen(_)
        | Error::EmptyProblem
        | Error::Asymmetric { .. }
        | Error::Shape(_)
        | Error::OccupationMismatch { .. } => "no_convergence",
    }
}
