//! Independent numerical checks of the closed-form solution: a
//! Crank-Nicolson propagator on a uniform grid, spectral residual
//! evaluators, and finite-difference matrix elements.

mod grid;
mod propagate;
mod residual;
mod tridiag;

pub use grid::{fidelity, fidelity_defect, spectral_derivatives, GridSpec};
pub use propagate::{propagate, Propagation, PropagationReport, Snapshot, Tracking};
pub use residual::{berry_connection_fd, invariant_expectation, invariant_expectation_series, tdse_residual};
pub use tridiag::solve_tridiagonal;
