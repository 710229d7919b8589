//! Exact solution of the free particle with a time-dependent effective mass
//! m(t) by the invariant-operator method, with numerical cross-checks.
//!
//! The quadratic invariant Î = α(t)p̂² + β x̂² + γ(t){x̂, p̂} has ladder
//! eigenstates φ_n(x, t); multiplied by the dynamical and geometric phases
//! they solve the Schrödinger equation. On top of that the crate builds the
//! two-packet superposition of ground states and its Wigner function, and an
//! independent Crank-Nicolson propagator to check everything against.
//!
//! Every numerical routine is generic over [`scalar::Real`] (`f32` or
//! `f64`); the aliases below fix the common `f64` case.
//!
//! ```
//! use tdem::{cat_state, InvariantParamsF64, MassProfileF64};
//!
//! let params = InvariantParamsF64::new(2.0, 1.0, 1.0, 1.0).unwrap();
//! let mass = MassProfileF64::quadratic(1.0, 0.5).unwrap();
//! let cat = cat_state(&params, &mass, 20.0, 4.0, false).unwrap();
//! let w = cat.wigner_closed(0.0, 0.0);
//! assert!((w - 2.506628).abs() < 1e-6);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cat;
pub mod cli;
pub mod eigenstates;
pub mod error;
pub mod invariant;
pub mod mass;
pub mod observables;
pub mod oracle;
pub mod packet;
pub mod quadrature;
pub mod scalar;

pub use cat::{cat_state, wigner_grid, CatState, PhaseSpaceGrid, WignerMethod};
pub use eigenstates::{eigenstate, full_solution, phases, PhaseTriple};
pub use error::{Error, Result};
pub use invariant::{coefficients_at, CoefficientState, InvariantParams};
pub use mass::MassProfile;
pub use observables::{uncertainty_at, UncertaintyRecord};
pub use oracle::{propagate, GridSpec, PropagationReport};
pub use packet::WavePacket;
pub use scalar::Real;

pub type MassProfileF64 = MassProfile<f64>;
pub type InvariantParamsF64 = InvariantParams<f64>;
pub type CoefficientStateF64 = CoefficientState<f64>;
pub type WavePacketF64 = WavePacket<f64>;
pub type CatStateF64 = CatState<f64>;
pub type PhaseSpaceGridF64 = PhaseSpaceGrid<f64>;
pub type GridSpecF64 = GridSpec<f64>;

pub type MassProfileF32 = MassProfile<f32>;
pub type InvariantParamsF32 = InvariantParams<f32>;
pub type WavePacketF32 = WavePacket<f32>;
pub type CatStateF32 = CatState<f32>;
