use alloc::string::String;

/// Errors raised by the numerical kernels and the physics layers above them.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A physical parameter violates its record's constraints.
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Adaptive quadrature ran out of its evaluation budget.
    #[error("quadrature failed to converge: best estimate {estimate} (error estimate {error_estimate})")]
    QuadratureFailure { estimate: f64, error_estimate: f64 },

    /// Partial sums of an oscillatory integral did not settle.
    #[error("oscillatory integral failed to converge: best estimate {estimate}")]
    OscillatoryFailure { estimate: f64 },

    /// The Γ-dependent denominator vanishes or turns negative.
    #[error("singular configuration: denominator {denominator} <= 0 at rho = {rho}")]
    SingularConfiguration { rho: f64, denominator: f64 },

    /// A potential sample is not finite.
    #[error("discretization error: potential is {value} at node {node} (rho = {rho})")]
    Discretization { node: usize, rho: f64, value: f64 },

    /// An eigenfunction does not decay at the grid boundary.
    #[error("grid too small: state {state} has boundary amplitude ratio {ratio:e}; widen the domain")]
    GridTooSmall { state: usize, ratio: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
