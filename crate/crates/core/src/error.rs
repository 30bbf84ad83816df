use thiserror::Error;

pub type Result<T> = std::result::Result<T, CasimirError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CasimirError {
    /// The operation is not defined for this material model.
    #[error("unsupported material model: {0}")]
    UnsupportedModel(String),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A value object was constructed with parameters that violate its invariants.
    #[error("invalid parameter: {0}")]
    Invalid(String),

    /// The quadrature exhausted its node budget before meeting the tolerance.
    #[error(
        "quadrature did not converge: value {value:e}, error estimate {err_estimate:e} \
         after {nodes_used} nodes"
    )]
    NonConvergence {
        value: f64,
        err_estimate: f64,
        nodes_used: usize,
    },

    /// Successive Richardson extrapolants of the mode sum disagree.
    #[error("cutoff extrapolation unstable: successive estimates {previous:e} and {latest:e}")]
    ExtrapolationUnstable { previous: f64, latest: f64 },
}
