//! Error type shared by all modules.

use crate::quartic::ValidityInterval;
use thiserror::Error;

/// Errors produced by phase-space operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A field contains a non-finite value.
    #[error("invalid field: {reason}{}", location_suffix(.location))]
    InvalidField {
        reason: String,
        /// Grid node (i, j, q, p) where the problem was detected, if known.
        location: Option<(usize, usize, f64, f64)>,
    },

    /// Two grid fields do not live on the same grid.
    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),

    /// A state that must be normalized is not.
    #[error("state not normalized: integral = {measured} (expected 1 within {tolerance})")]
    NotNormalized { measured: f64, tolerance: f64 },

    /// A variance came out negative beyond tolerance, indicating loss of
    /// star-product accuracy.
    #[error("star-product accuracy loss: variance residual {residual} below -{tolerance}")]
    StarAccuracy { residual: f64, tolerance: f64 },

    /// A constructor parameter is outside its domain.
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// Closed-form case parameters violate the case's regime constraints.
    #[error("case constraint violated: {0}")]
    CaseConstraint(String),

    /// The second minimization-time family is undefined for these parameters.
    #[error("minimization-time family two undefined: {0}")]
    FamilyTwoUndefined(String),

    /// A canonical-reduction parameter leaves its admissible range.
    #[error("reduction parameter out of domain: {0}")]
    ParameterDomain(String),

    /// The requested reduction does not exist in this regime.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// Quantum-flow evaluation at an excluded time.
    #[error("quantum flow singular at t = {t}; nearest excluded point t = {nearest}")]
    FlowSingularity { t: f64, nearest: f64 },

    /// Star-square evaluation at an excluded time.
    #[error("star-square singular at t = {t}; nearest excluded point t = {nearest}")]
    StarSquareSingularity { t: f64, nearest: f64 },

    /// Evaluation time outside the formula's validity interval.
    #[error("t = {t} outside validity interval ({}, {}) (window n = {})",
        .interval.t_lo, .interval.t_hi, .interval.window)]
    OutsideValidity { t: f64, interval: ValidityInterval },

    /// Integrator step exceeds the stability limit.
    #[error("time step {dt} exceeds stability limit {limit}")]
    StepSize { dt: f64, limit: f64 },

    /// Too much mass reached the grid boundary during evolution.
    #[error("domain too small: boundary mass {boundary_mass} exceeds {limit}")]
    DomainTooSmall { boundary_mass: f64, limit: f64 },

    /// Gauss-Hermite quadrature failed to converge under order doubling.
    #[error("quadrature divergence: relative change {relative_change} between orders {order_lo} and {order_hi}")]
    QuadratureDivergence {
        relative_change: f64,
        order_lo: usize,
        order_hi: usize,
    },

    /// A closed form produced an internally inconsistent value.
    #[error("formula consistency violation: {0}")]
    FormulaConsistency(String),

    /// The evolution engine only supports polynomial Hamiltonians of degree <= 4.
    #[error("unsupported Hamiltonian degree {degree} (maximum 4)")]
    UnsupportedHamiltonian { degree: u32 },
}

fn location_suffix(loc: &Option<(usize, usize, f64, f64)>) -> String {
    match loc {
        Some((i, j, q, p)) => format!(" at node ({i}, {j}) = (q = {q}, p = {p})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
