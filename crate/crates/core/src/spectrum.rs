//! Diagonalization of the effective Hamiltonian and branch bookkeeping.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen::eigenpairs;
use crate::error::{Error, Result};
use crate::hamiltonian::EffectiveHamiltonian;
use crate::mode::dirichlet_mode;
use crate::params::ChainParams;

/// Residual tolerance relative to ‖H‖_F.
pub const DEFAULT_EIG_TOL: f64 = 1e-10;
/// Largest admissible `eig_tol`.
pub const MAX_EIG_TOL: f64 = 1e-6;
/// QR sweeps allowed per matrix dimension.
pub const SWEEPS_PER_DIM: usize = 100;
/// Squared ansatz overlap below which a branch label is flagged.
pub const OVERLAP_ACCEPT_THRESHOLD: f64 = 0.5;
/// Linewidths in [this, 0) are roundoff and clamped to zero.
pub const NEGATIVE_LINEWIDTH_FLOOR: f64 = -1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollectiveMode {
    /// λ = J − iΓ_ξ/2 in units of Γ.
    pub eigenvalue: Complex64,
    /// Unit norm, phase fixed so the largest component is real and positive.
    pub eigenvector: Vec<Complex64>,
    /// Γ_ξ = −2 Im λ.
    pub linewidth: f64,
    /// J_ξ = Re λ.
    pub shift: f64,
    pub branch: Option<usize>,
    /// |⟨ansatz_ξ|v⟩|² for the assigned branch, 0 when unassigned.
    pub overlap: f64,
    /// Set when a branch was assigned with overlap below the accept threshold.
    pub low_confidence: bool,
    /// ‖Hv − λv‖₂.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub sweeps: usize,
    pub max_residual: f64,
    pub residual_bound: f64,
    pub clamped_linewidths: usize,
    pub frobenius_norm: f64,
    pub eig_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Ascending linewidth, ties broken by ascending shift.
    pub modes: Vec<CollectiveMode>,
    pub params: ChainParams,
    pub stats: SolverStats,
    /// Trace of the diagonalized matrix, kept for sum-rule checks.
    pub trace: Complex64,
}

/// Observables of one classified branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchObservables {
    pub linewidth: f64,
    pub shift: f64,
    pub overlap: f64,
    pub residual: f64,
    pub low_confidence: bool,
}

fn canonical_phase(v: &mut [Complex64]) {
    let mut best = 0;
    for (i, c) in v.iter().enumerate() {
        if c.norm() > v[best].norm() {
            best = i;
        }
    }
    let pivot = v[best];
    if pivot.norm() > 0.0 {
        let rot = pivot.conj() / pivot.norm();
        for c in v.iter_mut() {
            *c *= rot;
        }
        v[best] = Complex64::new(v[best].norm(), 0.0);
    }
}

fn residual_norm(h: &EffectiveHamiltonian, lambda: Complex64, v: &[Complex64]) -> f64 {
    h.matrix()
        .rows()
        .into_iter()
        .zip(v)
        .map(|(row, vi)| {
            let hv: Complex64 = row.iter().zip(v).map(|(a, b)| a * b).sum();
            (hv - lambda * vi).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

/// Full spectrum of `h`, sorted by ascending linewidth.
///
/// Every returned pair satisfies ‖Hv − λv‖₂ ≤ eig_tol·‖H‖_F.
pub fn eigendecompose(h: &EffectiveHamiltonian, eig_tol: f64) -> Result<SpectrumResult> {
    if !(eig_tol > 0.0 && eig_tol <= MAX_EIG_TOL) {
        return Err(Error::argument(
            "eig_tol",
            format!("must lie in (0, {MAX_EIG_TOL:e}], got {eig_tol}"),
        ));
    }
    let n = h.dim();
    let pairs = eigenpairs(h.matrix(), SWEEPS_PER_DIM * n.max(1))?;
    let norm = h.frobenius_norm();
    let bound = eig_tol * norm;

    let mut clamped = 0;
    let mut max_residual: f64 = 0.0;
    let mut modes = Vec::with_capacity(n);
    for (index, (lambda, mut v)) in pairs.values.into_iter().zip(pairs.vectors).enumerate() {
        let residual = residual_norm(h, lambda, &v);
        if !(residual <= bound) {
            return Err(Error::Residual { index, residual, bound });
        }
        max_residual = max_residual.max(residual);
        let mut linewidth = -2.0 * lambda.im;
        if linewidth < 0.0 {
            if linewidth < NEGATIVE_LINEWIDTH_FLOOR {
                return Err(Error::NegativeLinewidth { index, linewidth });
            }
            linewidth = 0.0;
            clamped += 1;
        }
        canonical_phase(&mut v);
        modes.push(CollectiveMode {
            eigenvalue: lambda,
            eigenvector: v,
            linewidth,
            shift: lambda.re,
            branch: None,
            overlap: 0.0,
            low_confidence: false,
            residual,
        });
    }
    modes.sort_by(|a, b| a.linewidth.total_cmp(&b.linewidth).then(a.shift.total_cmp(&b.shift)));

    Ok(SpectrumResult {
        modes,
        params: *h.params(),
        stats: SolverStats {
            sweeps: pairs.sweeps,
            max_residual,
            residual_bound: bound,
            clamped_linewidths: clamped,
            frobenius_norm: norm,
            eig_tol,
        },
        trace: h.trace(),
    })
}

/// Label eigenvectors with Bragg-edge branch indices 1..=xi_max.
///
/// Branches are assigned greedily in ascending ξ, each to the not yet
/// labelled eigenvector with the largest squared overlap with the Dirichlet
/// ansatz. Labels with overlap below [`OVERLAP_ACCEPT_THRESHOLD`] are kept but
/// flagged `low_confidence`.
pub fn classify_branches(mut spec: SpectrumResult, xi_max: usize) -> Result<SpectrumResult> {
    let n = spec.params.n_atoms();
    if xi_max > n {
        return Err(Error::argument(
            "xi_max",
            format!("cannot exceed N = {n}, got {xi_max}"),
        ));
    }
    for mode in spec.modes.iter_mut() {
        mode.branch = None;
        mode.overlap = 0.0;
        mode.low_confidence = false;
    }
    for xi in 1..=xi_max {
        let ansatz = dirichlet_mode(&spec.params, xi)?;
        let mut best: Option<(usize, f64)> = None;
        for (k, mode) in spec.modes.iter().enumerate() {
            if mode.branch.is_some() {
                continue;
            }
            let proj: Complex64 = ansatz
                .amplitudes()
                .iter()
                .zip(&mode.eigenvector)
                .map(|(a, v)| a.conj() * v)
                .sum();
            let ov = proj.norm_sqr();
            if best.is_none_or(|(_, b)| ov > b) {
                best = Some((k, ov));
            }
        }
        if let Some((k, ov)) = best {
            let mode = &mut spec.modes[k];
            mode.branch = Some(xi);
            mode.overlap = ov.min(1.0);
            mode.low_confidence = ov < OVERLAP_ACCEPT_THRESHOLD;
            if mode.low_confidence {
                log::warn!(
                    "branch {xi} at N = {n}, d = {} assigned with overlap {ov:.3}",
                    spec.params.spacing()
                );
            }
        }
    }
    Ok(spec)
}

impl SpectrumResult {
    pub fn branch(&self, xi: usize) -> Option<&CollectiveMode> {
        self.modes.iter().find(|m| m.branch == Some(xi))
    }

    /// (Γ_ξ, J_ξ, overlap) of an assigned branch.
    pub fn extract_observables(&self, xi: usize) -> Result<BranchObservables> {
        let m = self.branch(xi).ok_or(Error::UnassignedBranch { xi })?;
        Ok(BranchObservables {
            linewidth: m.linewidth,
            shift: m.shift,
            overlap: m.overlap,
            residual: m.residual,
            low_confidence: m.low_confidence,
        })
    }

    pub fn linewidth_sum(&self) -> f64 {
        self.modes.iter().map(|m| m.linewidth).sum()
    }

    pub fn eigenvalue_sum(&self) -> Complex64 {
        self.modes.iter().map(|m| m.eigenvalue).sum()
    }
}

/// Assemble, diagonalize and classify in one call.
pub fn solve(params: &ChainParams, eig_tol: f64) -> Result<SpectrumResult> {
    let h = crate::hamiltonian::build_total(params, false);
    classify_branches(eigendecompose(&h, eig_tol)?, params.branch_max())
}
