//! Ideal waveguide (γ = 0): Bloch dispersion of the infinite chain and its
//! expansion at the Bragg edge.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ChainParams;

const POLE_GUARD: f64 = 1e-14;

/// cos(β/2), rejecting the d = λ/2 pole of the half-angle tangent.
fn half_angle_cos(params: &ChainParams, function: &'static str) -> Result<f64> {
    let c = (0.5 * params.beta()).cos();
    if c.abs() < POLE_GUARD {
        return Err(Error::domain(function, "tan(k0 d/2) diverges at d = lambda/2"));
    }
    Ok(c)
}

/// Complex Bragg-edge detuning δ_ξ·d = (πξ/N)[1 + (i/N)tan(β/2)].
pub fn ideal_bragg_detuning(params: &ChainParams, xi: usize) -> Result<Complex64> {
    params.check_branch(xi)?;
    let c = half_angle_cos(params, "ideal_bragg_detuning")?;
    let n = params.n_atoms() as f64;
    let tan = (0.5 * params.beta()).sin() / c;
    Ok(std::f64::consts::PI * xi as f64 / n * Complex64::new(1.0, tan / n))
}

/// ω(k) = (1/2)·sin β/(cos kd − cos β) for real or complex kd.
pub fn bloch_dispersion(kd: Complex64, params: &ChainParams) -> Result<Complex64> {
    let beta = params.beta();
    let den = kd.cos() - beta.cos();
    if den.norm() < POLE_GUARD {
        return Err(Error::domain(
            "bloch_dispersion",
            format!("cos(kd) = cos(k0 d) at kd = {kd}"),
        ));
    }
    Ok(0.5 * beta.sin() / den)
}

/// Γ_ξ = (1/2)(π²ξ²/N³)·sin²(β/2)/cos⁴(β/2).
pub fn gamma_ideal(params: &ChainParams, xi: usize) -> Result<f64> {
    params.check_branch(xi)?;
    let c = half_angle_cos(params, "gamma_ideal")?;
    let s = (0.5 * params.beta()).sin();
    let n = params.n_atoms() as f64;
    let a = std::f64::consts::PI * xi as f64;
    Ok(0.5 * a * a / (n * n * n) * s * s / (c * c * c * c))
}

/// J_ξ = −(1/2)tan(β/2) − (1/8)·sin(β/2)/cos³(β/2)·(πξ/M)².
///
/// M = N for the ideal chain; `open_boundary` switches to M = N + 1, the
/// form that comes out of the Dirichlet ansatz.
pub fn j_ideal(params: &ChainParams, xi: usize, open_boundary: bool) -> Result<f64> {
    params.check_branch(xi)?;
    let c = half_angle_cos(params, "j_ideal")?;
    let s = (0.5 * params.beta()).sin();
    let m = params.n_atoms() as f64 + if open_boundary { 1.0 } else { 0.0 };
    let q = std::f64::consts::PI * xi as f64 / m;
    Ok(-0.5 * s / c - 0.125 * s / (c * c * c) * q * q)
}

/// N-independent band-edge part −(1/2)tan(β/2).
pub(crate) fn band_edge_shift(params: &ChainParams) -> Result<f64> {
    let c = half_angle_cos(params, "band_edge_shift")?;
    Ok(-0.5 * (0.5 * params.beta()).sin() / c)
}

/// Coefficient of (πξ/M)² in the guided shift: −(1/8)·sin(β/2)/cos³(β/2).
pub(crate) fn band_curvature(params: &ChainParams) -> Result<f64> {
    let c = half_angle_cos(params, "band_curvature")?;
    Ok(-0.125 * (0.5 * params.beta()).sin() / (c * c * c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn p(n: usize, d: f64) -> ChainParams {
        ChainParams::new(n, d, 0.0, n.min(5)).unwrap()
    }

    #[test]
    fn detuning_examples() {
        let z = ideal_bragg_detuning(&p(100, 0.25), 1).unwrap();
        assert!((z - Complex64::new(PI / 100.0, PI / 1e4)).norm() < 1e-15);
        let z = ideal_bragg_detuning(&p(100, 1e-9), 1).unwrap();
        assert!((z.re - PI / 100.0).abs() < 1e-15 && z.im.abs() < 1e-9);
        let z = ideal_bragg_detuning(&p(50, 0.1), 3).unwrap();
        assert!((z.re - 3.0 * PI / 50.0).abs() < 1e-15);
        assert!(ideal_bragg_detuning(&p(50, 0.5), 1).is_err());
    }

    #[test]
    fn dispersion_at_zone_edge_is_half_angle_tangent() {
        for d in [0.02, 0.1, 0.25, 0.4] {
            let w = bloch_dispersion(Complex64::new(PI, 0.0), &p(10, d)).unwrap();
            assert!((w.re + 0.5 * (PI * d).tan()).abs() < 1e-13);
            assert!(w.im.abs() < 1e-15);
        }
    }

    #[test]
    fn dispersion_matches_cotangent_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let d: f64 = rng.gen_range(0.01..0.49);
            let kd: f64 = rng.gen_range(0.0..PI);
            let beta = 2.0 * PI * d;
            if (kd.cos() - beta.cos()).abs() < 1e-3 {
                continue;
            }
            let w = bloch_dispersion(Complex64::new(kd, 0.0), &p(4, d)).unwrap();
            let cot = |x: f64| x.cos() / x.sin();
            let alt = 0.25 * (cot(0.5 * (beta + kd)) + cot(0.5 * (beta - kd)));
            assert!((w.re - alt).abs() < 1e-12 * alt.abs().max(1.0), "{d} {kd}");
        }
    }

    #[test]
    fn dispersion_pole_is_rejected() {
        let pr = p(4, 0.1);
        let kd = Complex64::new(pr.beta(), 0.0);
        assert!(bloch_dispersion(kd, &pr).is_err());
    }

    #[test]
    fn expansion_agrees_with_full_dispersion() {
        let pr = p(200, 0.1);
        let kd = Complex64::new(PI, 0.0) - ideal_bragg_detuning(&pr, 1).unwrap();
        let w = bloch_dispersion(kd, &pr).unwrap();
        let j = j_ideal(&pr, 1, false).unwrap();
        let g = gamma_ideal(&pr, 1).unwrap();
        assert!((w.re - j).abs() < 0.01 * j.abs());
        assert!((-2.0 * w.im - g).abs() < 0.01 * g);
    }

    #[test]
    fn linewidth_examples() {
        let g = gamma_ideal(&p(100, 0.25), 1).unwrap();
        assert!((g - PI * PI * 1e-6).abs() < 1e-18);
        let pr = p(100, 0.1);
        let ratio = gamma_ideal(&pr, 2).unwrap() / gamma_ideal(&pr, 1).unwrap();
        assert!((ratio - 4.0).abs() < 1e-14);
        let pr = p(100, 1e-4);
        let beta = pr.beta();
        let small = 0.125 * PI * PI / 1e6 * beta * beta;
        assert!((gamma_ideal(&pr, 1).unwrap() / small - 1.0).abs() < 1e-6);
        assert!(gamma_ideal(&p(10, 0.5), 1).is_err());
    }

    #[test]
    fn shift_examples() {
        let j = j_ideal(&p(1_000_000, 0.25), 1, false).unwrap();
        assert!((j + 0.5).abs() < 1e-9);
        let pr = p(100, 1e-5);
        let j = j_ideal(&pr, 1, false).unwrap();
        assert!((j / (-0.25 * pr.beta()) - 1.0).abs() < 1e-3);
        let pr = p(100, 0.1);
        let edge = band_edge_shift(&pr).unwrap();
        let c1 = j_ideal(&pr, 1, false).unwrap() - edge;
        let c3 = j_ideal(&pr, 3, false).unwrap() - edge;
        assert!((c3 / c1 - 9.0).abs() < 1e-9);
        let open = j_ideal(&pr, 1, true).unwrap() - edge;
        assert!((open / c1 - (100.0f64 / 101.0).powi(2)).abs() < 1e-12);
        assert!(j_ideal(&p(10, 0.5), 1, true).is_err());
    }
}
