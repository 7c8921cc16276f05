use thiserror::Error;

/// Errors raised by the planning library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the range where a model is defined.
    #[error("{quantity} = {value} is outside the valid domain ({expected})")]
    Domain {
        quantity: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// The endpoint links consume more horizontal distance than the corridor offers.
    #[error(
        "infeasible geometry: endpoint links cover {covered_km:.3} km of a {corridor_km:.3} km corridor"
    )]
    InfeasibleGeometry { covered_km: f64, corridor_km: f64 },

    /// Adaptive quadrature hit its subdivision budget before meeting tolerance.
    #[error(
        "quadrature did not converge: estimate {estimate:e}, error {error:e} > tolerance {tolerance:e} after {intervals} intervals"
    )]
    Quadrature {
        estimate: f64,
        error: f64,
        tolerance: f64,
        intervals: usize,
    },

    /// A configuration value or search space is unusable.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The plan violates one or more placement constraints.
    #[error("infeasible plan: {0}")]
    InfeasiblePlan(String),

    /// An exhaustive search would exceed its point budget.
    #[error("search grid has {points} points, more than the limit of {limit}")]
    GridTooLarge { points: u64, limit: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(quantity: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        quantity,
        value,
        expected,
    }
}
