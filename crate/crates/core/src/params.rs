//! Physical configuration of the chain.
//!
//! Energies and rates are measured in units of the single-atom guided decay
//! rate Γ, so Γ = 1 everywhere in this crate. Distances enter only through the
//! dimensionless spacing d/λ, from which the lattice phase β = k₀d = 2π·d/λ
//! follows.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    n_atoms: usize,
    spacing: f64,
    gamma_fs: f64,
    branch_max: usize,
}

impl ChainParams {
    /// `spacing` is d/λ and `gamma_fs` is γ/Γ. `branch_max` caps the branch
    /// indices that are tracked and may not exceed the number of atoms.
    pub fn new(n_atoms: usize, spacing: f64, gamma_fs: f64, branch_max: usize) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::argument("n_atoms", "must be at least 1"));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::argument(
                "spacing",
                format!("d/λ must be finite and > 0, got {spacing}"),
            ));
        }
        if !(gamma_fs.is_finite() && gamma_fs >= 0.0) {
            return Err(Error::argument(
                "gamma_fs",
                format!("γ/Γ must be finite and >= 0, got {gamma_fs}"),
            ));
        }
        if branch_max == 0 || branch_max > n_atoms {
            return Err(Error::argument(
                "branch_max",
                format!("must lie in 1..={n_atoms}, got {branch_max}"),
            ));
        }
        Ok(Self {
            n_atoms,
            spacing,
            gamma_fs,
            branch_max,
        })
    }

    /// Convenience constructor tracking up to five branches (fewer for short chains).
    pub fn with_defaults(n_atoms: usize, spacing: f64, gamma_fs: f64) -> Result<Self> {
        Self::new(n_atoms, spacing, gamma_fs, n_atoms.clamp(1, 5))
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn gamma_fs(&self) -> f64 {
        self.gamma_fs
    }

    pub fn branch_max(&self) -> usize {
        self.branch_max
    }

    /// β = k₀d.
    pub fn beta(&self) -> f64 {
        2.0 * PI * self.spacing
    }

    /// Bragg-edge variable a = πξ/(N+1).
    pub fn bragg_variable(&self, xi: usize) -> f64 {
        PI * xi as f64 / (self.n_atoms as f64 + 1.0)
    }

    /// θ_{N+1} = (N+1)k₀d, the boundary-interference phase.
    pub fn boundary_phase(&self) -> f64 {
        (self.n_atoms as f64 + 1.0) * self.beta()
    }

    /// (−1)^{N+ξ}.
    pub fn parity_sign(&self, xi: usize) -> f64 {
        if (self.n_atoms + xi).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn with_n_atoms(&self, n_atoms: usize) -> Result<Self> {
        Self::new(n_atoms, self.spacing, self.gamma_fs, self.branch_max.min(n_atoms))
    }

    pub fn with_gamma_fs(&self, gamma_fs: f64) -> Result<Self> {
        Self::new(self.n_atoms, self.spacing, gamma_fs, self.branch_max)
    }

    pub(crate) fn check_branch(&self, xi: usize) -> Result<()> {
        if xi == 0 || xi > self.n_atoms {
            return Err(Error::argument(
                "xi",
                format!("branch index must lie in 1..={}, got {xi}", self.n_atoms),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_configurations() {
        assert!(ChainParams::new(0, 0.1, 0.0, 1).is_err());
        assert!(ChainParams::new(10, 0.0, 0.0, 1).is_err());
        assert!(ChainParams::new(10, f64::NAN, 0.0, 1).is_err());
        assert!(ChainParams::new(10, 0.1, -0.1, 1).is_err());
        assert!(ChainParams::new(10, 0.1, 0.0, 0).is_err());
        assert!(ChainParams::new(10, 0.1, 0.0, 11).is_err());
        assert!(ChainParams::new(1, 0.1, 0.1, 1).is_ok());
    }

    #[test]
    fn derived_accessors() {
        let p = ChainParams::new(99, 0.25, 0.0, 3).unwrap();
        assert!((p.beta() - PI / 2.0).abs() < 1e-15);
        assert!((p.bragg_variable(2) - PI / 50.0).abs() < 1e-15);
        assert_eq!(p.parity_sign(1), 1.0);
        assert_eq!(p.parity_sign(2), -1.0);
    }
}
