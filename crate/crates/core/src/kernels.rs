//! Free-space dipole–dipole kernels for dipoles perpendicular to the chain.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Below this argument the decay kernel switches to its Taylor series.
pub const KFS_SERIES_THRESHOLD: f64 = 1e-3;

/// Dissipative free-space kernel
/// K(x) = (3/2)[sin x/x + cos x/x² − sin x/x³], with K(0) = 1.
///
/// The three closed-form terms are O(x⁻³) and cancel to O(1), so small
/// arguments use the series 1 − x²/5 + 3x⁴/280 − x⁶/3780.
pub fn kernel_kfs(x: f64) -> f64 {
    debug_assert!(x >= 0.0, "kernel_kfs needs x >= 0, got {x}");
    if x < KFS_SERIES_THRESHOLD {
        let x2 = x * x;
        return 1.0 - x2 / 5.0 + 3.0 * x2 * x2 / 280.0 - x2 * x2 * x2 / 3780.0;
    }
    let (s, c) = x.sin_cos();
    let x2 = x * x;
    1.5 * (s / x + c / x2 - s / (x2 * x))
}

/// Coherent free-space kernel
/// L(x) = (3/2)[−cos x/x + sin x/x² + cos x/x³].
///
/// Diverges as x⁻³ at the origin; x = 0 is the self-term, which is absorbed
/// into the renormalized transition frequency and has no value here.
pub fn kernel_lfs(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "kernel_lfs",
            format!("self-term x = {x} has no regularized value"),
        ));
    }
    Ok(lfs_unchecked(x))
}

#[inline]
pub(crate) fn lfs_unchecked(x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let x2 = x * x;
    1.5 * (-c / x + s / x2 + c / (x2 * x))
}

/// Pair coupling V(x) = (3γ/4)[−i/x + 1/x² + i/x³] at x = k₀|z_j − z_l|.
pub fn coupling_vjl(x: f64, gamma: f64) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "coupling_vjl",
            format!("x = {x}: self-coupling is excluded"),
        ));
    }
    Ok(coupling_unchecked(x, gamma))
}

#[inline]
pub(crate) fn coupling_unchecked(x: f64, gamma: f64) -> Complex64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    0.75 * gamma * Complex64::new(inv2, inv2 * inv - inv)
}
