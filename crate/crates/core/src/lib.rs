//! Simulation and analytic error budgets for quantum memories built from
//! high-Q microwave cavities controlled by transmons and SNAIL couplers.
//!
//! The crate is layered bottom-up:
//!
//! * [`hilbert`]: truncated Fock spaces, operators, Lindblad superoperators.
//! * [`model`]: device parameters and every derived coupling or decay rate.
//! * [`dynamics`]: per-phase generators (Hamiltonian, dissipators, envelope).
//! * [`solver`]: propagation, channel extraction and pulse calibration.
//! * [`fidelity`]: channel fidelities, single-jump perturbation theory,
//!   closed-form error estimates and concurrence.
//! * [`protocols`]: write/idle/read memories, participation optimization,
//!   memory-time limits, Bell-state storage and the QFT error budget.

pub mod dynamics;
pub mod error;
pub mod fidelity;
pub mod hilbert;
pub mod model;
pub mod numeric;
pub mod protocols;
pub mod solver;

pub use error::{Error, Result};
