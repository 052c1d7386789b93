use thiserror::Error;

/// Errors raised by the analysis routines.
///
/// Every variant maps to a stable machine-readable code (see [`Error::code`]),
/// which the command-line front end reports alongside the message.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("time constant {name} must be finite and > 0, got {value}")]
    InvalidTimeConstant { name: &'static str, value: f64 },

    #[error("input gain {name} must be finite and nonzero, got {value}")]
    InvalidGain { name: &'static str, value: f64 },

    #[error("pole {name} must be finite and nonzero, got {value}")]
    InvalidPole { name: &'static str, value: f64 },

    #[error("state entries must be finite")]
    NonFiniteState,

    #[error("poles have opposite signs; use the mixed-case set instead")]
    MixedClass,

    #[error("poles share a sign; the mixed-case set does not apply")]
    NotMixed,

    #[error("degenerate system: {0}")]
    DegenerateSystem(&'static str),

    #[error("argument {name} = {value} is outside {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("Gramian is singular and the target is not in its range")]
    SingularGramian,

    #[error("quadrature did not converge ({0})")]
    NonConvergence(String),

    #[error("constraint map is rank deficient and the boundary conditions cannot be met")]
    InfeasibleDiscretization,

    #[error("endpoint residual {residual:e} exceeds tolerance {tolerance:e}")]
    HorizonTooShort { residual: f64, tolerance: f64 },

    #[error("pendulum parameter {name} must be finite and > 0, got {value}")]
    InvalidPendulumParameter { name: &'static str, value: f64 },
}

impl Error {
    /// Stable identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidTimeConstant { .. } => "invalid_time_constant",
            Error::InvalidGain { .. } => "invalid_gain",
            Error::InvalidPole { .. } => "invalid_pole",
            Error::NonFiniteState => "non_finite_state",
            Error::MixedClass => "mixed_class",
            Error::NotMixed => "not_mixed",
            Error::DegenerateSystem(_) => "degenerate_system",
            Error::Domain { .. } => "domain_error",
            Error::SingularGramian => "singular_gramian",
            Error::NonConvergence(_) => "non_convergence",
            Error::InfeasibleDiscretization => "infeasible_discretization",
            Error::HorizonTooShort { .. } => "horizon_too_short",
            Error::InvalidPendulumParameter { .. } => "invalid_pendulum_parameter",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
