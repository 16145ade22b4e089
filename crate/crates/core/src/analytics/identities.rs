//! Integral and series identities behind the free-space asymptotics.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::ZETA3;
use crate::error::{Error, Result};
use crate::kernels::kernel_kfs;
use crate::quadrature::integrate;

pub const ANGULAR_QUADRATURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    /// Σ(−1)^Δ/Δ³ → −(3/4)ζ(3)
    Zeta3,
    /// Σ(−1)^Δ/Δ → −ln 2
    Log2,
}

impl SeriesKind {
    pub fn term(self, k: usize) -> f64 {
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        let k = k as f64;
        match self {
            SeriesKind::Zeta3 => sign / (k * k * k),
            SeriesKind::Log2 => sign / k,
        }
    }

    pub fn limit(self) -> f64 {
        match self {
            SeriesKind::Zeta3 => -0.75 * ZETA3,
            SeriesKind::Log2 => -LN_2,
        }
    }
}

/// Partial sum S_m = Σ_{Δ=1}^{m} of the chosen series, accumulated from the
/// small end.
pub fn alternating_series(kind: SeriesKind, terms: usize) -> Result<f64> {
    if terms == 0 {
        return Err(Error::argument("terms", "need at least one term"));
    }
    Ok((1..=terms).rev().map(|k| kind.term(k)).sum())
}

/// Midpoint of S_m and S_{m+1}; the error drops from O(1/m) to O(1/m²) for
/// the logarithmic series.
pub fn alternating_series_estimate(kind: SeriesKind, terms: usize) -> Result<f64> {
    Ok(alternating_series(kind, terms)? + 0.5 * kind.term(terms + 1))
}

/// I₁(θ) = ∫₀¹(1+μ²)cos(θμ)dμ by adaptive quadrature.
pub fn angular_integral(theta: f64) -> Result<f64> {
    integrate(
        |mu| (1.0 + mu * mu) * (theta * mu).cos(),
        0.0,
        1.0,
        ANGULAR_QUADRATURE_TOL,
    )
}

/// (3/8)∫₋₁¹(1+μ²)e^{ixμ}dμ as (real, imaginary) parts.
pub fn angular_average(x: f64) -> Result<(f64, f64)> {
    let re = integrate(|mu| (1.0 + mu * mu) * (x * mu).cos(), -1.0, 1.0, ANGULAR_QUADRATURE_TOL)?;
    let im = integrate(|mu| (1.0 + mu * mu) * (x * mu).sin(), -1.0, 1.0, ANGULAR_QUADRATURE_TOL)?;
    Ok((0.375 * re, 0.375 * im))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularIdentityCheck {
    /// max |I₁(θ) − (4/3)K_fs(θ)|
    pub half_range: f64,
    /// max |(3/8)∫₋₁¹(1+μ²)e^{iθμ}dμ − K_fs(θ)|
    pub full_range: f64,
}

impl AngularIdentityCheck {
    pub fn max_error(&self) -> f64 {
        self.half_range.max(self.full_range)
    }
}

pub fn verify_angular_identity(theta_grid: &[f64]) -> Result<AngularIdentityCheck> {
    let mut out = AngularIdentityCheck {
        half_range: 0.0,
        full_range: 0.0,
    };
    for &theta in theta_grid {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::argument("theta_grid", format!("need θ > 0, got {theta}")));
        }
        let k = kernel_kfs(theta);
        let half = (angular_integral(theta)? - 4.0 / 3.0 * k).abs();
        let (re, im) = angular_average(theta)?;
        let full = (re - k).hypot(im);
        out.half_range = out.half_range.max(half);
        out.full_range = out.full_range.max(full);
    }
    Ok(out)
}
