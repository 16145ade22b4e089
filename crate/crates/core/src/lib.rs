//! Subradiant spectra of finite atom chains coupled to a waveguide.
//!
//! The crate builds the single-excitation effective Hamiltonian of N
//! two-level atoms with a guided channel (rate Γ) and an optional free-space
//! channel (rate γ), diagonalizes it, and compares the Bragg-edge branches
//! with closed-form asymptotics for their linewidths and energy shifts.
//!
//! All rates and energies are in units of Γ.

// Guards like `!(x > 0.0)` are written to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod eigen;
pub mod error;
pub mod experiments;
pub mod hamiltonian;
pub mod kernels;
pub mod mode;
pub mod params;
pub mod quadrature;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use hamiltonian::{build_freespace, build_guided, build_total, EffectiveHamiltonian};
pub use kernels::{coupling_vjl, kernel_kfs, kernel_lfs};
pub use mode::{autocorrelation, dirichlet_mode, structure_factor, ModeVector};
pub use params::ChainParams;
pub use spectrum::{classify_branches, eigendecompose, CollectiveMode, SpectrumResult};
