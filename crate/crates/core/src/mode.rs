//! Bragg-edge Dirichlet modes and the lattice sums built on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ChainParams;

/// Single-excitation amplitudes c_ξ(j), j = 1..N, of one trial mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeVector {
    amplitudes: Vec<Complex64>,
    branch: usize,
}

impl ModeVector {
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn branch(&self) -> usize {
        self.branch
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Open-boundary standing wave at the Bragg edge:
/// c_ξ(j) = √(2/(N+1))·sin(πξj/(N+1))·e^{iπ(j−1)}.
///
/// The Bragg phase e^{ik_b z_j} with k_b = π/d is the alternating sign
/// (−1)^{j−1}, so the amplitudes are real.
pub fn dirichlet_mode(params: &ChainParams, xi: usize) -> Result<ModeVector> {
    params.check_branch(xi)?;
    let n = params.n_atoms();
    let a = params.bragg_variable(xi);
    let norm = (2.0 / (n as f64 + 1.0)).sqrt();
    let amplitudes = (1..=n)
        .map(|j| {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            Complex64::new(sign * norm * (a * j as f64).sin(), 0.0)
        })
        .collect();
    Ok(ModeVector { amplitudes, branch: xi })
}

/// S_ξ(κ) = Σ_j c_ξ(j)·e^{iκz_j} with z_j = (j−1)d, summed directly.
///
/// `kappa_over_k0` is κ/k₀, so the light cone is |κ/k₀| ≤ 1.
pub fn structure_factor(mode: &ModeVector, kappa_over_k0: f64, params: &ChainParams) -> Complex64 {
    let step = kappa_over_k0 * params.beta();
    mode.amplitudes()
        .iter()
        .enumerate()
        .map(|(j, c)| c * Complex64::from_polar(1.0, step * j as f64))
        .sum()
}

/// Closed-form lag autocorrelation of the Dirichlet mode,
/// C_ξ(Δ) = Σ_n c*_ξ(n+Δ)c_ξ(n)
///        = ((−1)^Δ/(N+1))·[(N+1−Δ)cos(aΔ) + cot a·sin(aΔ)].
pub fn autocorrelation(params: &ChainParams, xi: usize, delta: usize) -> Result<f64> {
    params.check_branch(xi)?;
    let n = params.n_atoms();
    if delta >= n {
        return Err(Error::argument("delta", format!("lag must lie in 0..{n}, got {delta}")));
    }
    Ok(autocorrelation_unchecked(n, params.bragg_variable(xi), delta))
}

#[inline]
fn autocorrelation_unchecked(n: usize, a: f64, delta: usize) -> f64 {
    let m = n as f64 + 1.0;
    let d = delta as f64;
    let sign = if delta.is_multiple_of(2) { 1.0 } else { -1.0 };
    let (s, c) = (a * d).sin_cos();
    sign * ((m - d) * c + s / a.tan()) / m
}

/// All lags 0..N−1 at once.
pub fn autocorrelation_table(params: &ChainParams, xi: usize) -> Result<Vec<f64>> {
    params.check_branch(xi)?;
    let n = params.n_atoms();
    let a = params.bragg_variable(xi);
    Ok((0..n).map(|d| autocorrelation_unchecked(n, a, d)).collect())
}

/// Σ_{j,l} c*(j)c(l)f(|j−l|) for the Dirichlet mode, grouped by lag.
///
/// `f(Δ)` is evaluated once per lag. When `include_diagonal` is false the
/// Δ = 0 term is dropped.
pub fn lag_sum<F>(params: &ChainParams, xi: usize, include_diagonal: bool, f: F) -> Result<f64>
where
    F: Fn(usize) -> f64,
{
    let table = autocorrelation_table(params, xi)?;
    let diag = if include_diagonal { table[0] * f(0) } else { 0.0 };
    let off: f64 = table.iter().enumerate().skip(1).map(|(d, c)| c * f(d)).sum();
    Ok(diag + 2.0 * off)
}
