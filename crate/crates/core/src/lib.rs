//! Phase-space quantum dynamics for one degree of freedom: Moyal products
//! and brackets (exact on polynomials, spectral on grids), Gaussian states,
//! closed-form flows and uncertainty laws for quadratic and quartic
//! Hamiltonians, and an independent Liouville-evolution oracle.

pub mod config;
pub mod error;
pub mod grid;
pub mod oracle;
pub mod poly;
pub mod quadratic;
pub mod quartic;
pub mod spectral;
pub mod star;
pub mod states;
pub mod verify;

pub use config::SimConfig;
pub use error::{Error, Result};
pub use grid::{GridField, PhaseGrid};
pub use poly::PolyObservable;
pub use quadratic::{
    ClosedFormCase, CovarianceMatrix, LinearFlowMap, QuadraticHamiltonian, Regime,
};
pub use quartic::{QuarticHamiltonian, ValidityInterval};
pub use states::GaussianState;
