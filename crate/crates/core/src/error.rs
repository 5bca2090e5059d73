use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric argument is outside the range an operation accepts.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// A point handed to an evaluator lies outside `[0, 1]`.
    #[error("{what} = {value} lies outside [0, 1]")]
    Domain { what: &'static str, value: f64 },

    /// A solver configuration that violates a structural requirement, such as
    /// the quadrature precision guard `2ρ - 1 >= 3r`.
    #[error("invalid configuration: {0}")]
    Configuration(String),

    /// A user-supplied function (kernel, right-hand side, integrand) produced
    /// a non-finite value.
    #[error("non-finite value {value} from {what} at {location}")]
    Evaluation {
        what: &'static str,
        location: String,
        value: f64,
    },

    #[error("Newton iteration did not converge after {iterations} iterations (residual history {trace:?})")]
    Convergence { iterations: usize, trace: Vec<f64> },

    /// The Newton matrix `I - K'` is numerically singular, i.e. 1 is (close
    /// to) an eigenvalue of the discrete linearised operator.
    #[error("singular Newton matrix of dimension {dimension} at iteration {iteration}")]
    Singular { dimension: usize, iteration: usize },

    #[error("point sets do not align: {0}")]
    Alignment(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    /// A solver failure inside a convergence study, tagged with the level.
    #[error("solve at n = {n} failed: {source}")]
    Level {
        n: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    /// Strips [`Error::Level`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Level { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for Newton divergence and singular Newton matrices.
    pub fn is_solver_failure(&self) -> bool {
        matches!(self.root(), Error::Convergence { .. } | Error::Singular { .. })
    }
}

pub(crate) fn check_finite(value: f64, what: &'static str, location: impl FnOnce() -> String) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Evaluation {
            what,
            location: location(),
            value,
        })
    }
}
