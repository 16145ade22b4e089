//! Dirichlet-ansatz asymptotics with both guided and free-space channels.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use super::ideal::{band_curvature, band_edge_shift, j_ideal};
use super::ZETA3;
use crate::error::{Error, Result};
use crate::kernels::{kernel_kfs, lfs_unchecked};
use crate::mode::lag_sum;
use crate::params::ChainParams;

/// Geometric-series closed form of S_ξ(κ) for the Dirichlet mode,
/// with κ in units of k₀.
pub fn structure_factor_closed_form(params: &ChainParams, xi: usize, kappa_over_k0: f64) -> Result<Complex64> {
    params.check_branch(xi)?;
    let n = params.n_atoms() as f64;
    let a = params.bragg_variable(xi);
    let b = kappa_over_k0 * params.beta();
    let e = |x: f64| Complex64::from_polar(1.0, x);
    let den = 2.0 * (e(a) + e(b)) * (1.0 + e(a + b));
    if den.norm() < 1e-14 {
        return Err(Error::domain(
            "structure_factor_closed_form",
            "phase per site coincides with the mode's Bragg-shifted wavenumber",
        ));
    }
    let num = Complex64::i()
        * (2.0 / (n + 1.0)).sqrt()
        * (1.0 - e(2.0 * a))
        * (1.0 + params.parity_sign(xi) * e((n + 1.0) * b));
    Ok(num / den)
}

fn scaled_branch(params: &ChainParams, xi: usize) -> f64 {
    let m = params.n_atoms() as f64 + 1.0;
    PI * PI * (xi * xi) as f64 / (m * m * m)
}

/// Γ^(1D) = (π²ξ²/(N+1)³)(1/4)[1 + (−1)^{N+ξ}cos((N+1)β)].
pub fn gamma_guided_subwavelength(params: &ChainParams, xi: usize) -> Result<f64> {
    params.check_branch(xi)?;
    Ok(scaled_branch(params, xi) * guided_prefactor(params, xi))
}

/// The bracket (1/4)[1 + (−1)^{N+ξ}cos θ_{N+1}].
pub fn guided_prefactor(params: &ChainParams, xi: usize) -> f64 {
    0.25 * (1.0 + params.parity_sign(xi) * params.boundary_phase().cos())
}

/// Γ^(fs) = (π²ξ²/(N+1)³)(γ/4)[1 + (−1)^{N+ξ}K_fs((N+1)β)].
pub fn gamma_fs_analytic(params: &ChainParams, xi: usize) -> Result<f64> {
    params.check_branch(xi)?;
    Ok(scaled_branch(params, xi) * params.gamma_fs() * fs_prefactor_analytic(params, xi))
}

/// The bracket (1/4)[1 + (−1)^{N+ξ}K_fs(θ_{N+1})]; tends to 1/4.
pub fn fs_prefactor_analytic(params: &ChainParams, xi: usize) -> f64 {
    0.25 * (1.0 + params.parity_sign(xi) * kernel_kfs(params.boundary_phase()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSpaceLinewidth {
    pub linewidth: f64,
    /// F = Γ_fs·(N+1)³/(γπ²ξ²); NaN when γ = 0.
    pub prefactor: f64,
}

/// Exact ansatz expectation Γ_fs = γ[C(0) + 2Σ_{Δ≥1}K_fs(βΔ)C(Δ)].
pub fn gamma_fs_discrete(params: &ChainParams, xi: usize) -> Result<FreeSpaceLinewidth> {
    let beta = params.beta();
    let gamma = params.gamma_fs();
    let linewidth = gamma * lag_sum(params, xi, true, |d| kernel_kfs(beta * d as f64))?;
    let prefactor = if gamma > 0.0 {
        linewidth / (gamma * scaled_branch(params, xi))
    } else {
        f64::NAN
    };
    Ok(FreeSpaceLinewidth { linewidth, prefactor })
}

/// Exact ansatz expectation of the guided linewidth, |S_ξ(k₀)|².
pub fn gamma_guided_discrete(params: &ChainParams, xi: usize) -> Result<f64> {
    let beta = params.beta();
    lag_sum(params, xi, true, |d| (beta * d as f64).cos())
}

/// Exact ansatz expectation of the guided shift, (1/2)Σ_{j≠l}c(j)c(l)sin(β|j−l|).
pub fn j_guided_discrete(params: &ChainParams, xi: usize) -> Result<f64> {
    let beta = params.beta();
    Ok(0.5 * lag_sum(params, xi, false, |d| (beta * d as f64).sin())?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSpaceShift {
    pub shift_fs: f64,
    pub shift_infty_fs: f64,
    pub finite_size_term: f64,
}

fn require_spacing(params: &ChainParams, function: &'static str) -> Result<f64> {
    let beta = params.beta();
    if !(beta > 0.0) {
        return Err(Error::domain(function, "near-field terms diverge at d = 0"));
    }
    Ok(beta)
}

/// Near-field asymptotics of the free-space shift:
/// J∞_fs = −(9γ/8)ζ(3)/β³ + (3γ ln2/4)/β plus (3γπ²ξ² ln2/4)/((N+1)²β³).
pub fn j_fs_asymptotic(params: &ChainParams, xi: usize) -> Result<FreeSpaceShift> {
    params.check_branch(xi)?;
    let beta = require_spacing(params, "j_fs_asymptotic")?;
    let g = params.gamma_fs();
    let b3 = beta * beta * beta;
    let shift_infty_fs = -1.125 * g * ZETA3 / b3 + 0.75 * g * LN_2 / beta;
    let m = params.n_atoms() as f64 + 1.0;
    let q = PI * xi as f64 / m;
    let finite_size_term = 0.75 * g * LN_2 * q * q / b3;
    Ok(FreeSpaceShift {
        shift_fs: shift_infty_fs + finite_size_term,
        shift_infty_fs,
        finite_size_term,
    })
}

/// Exact ansatz expectation J_fs = γΣ_{Δ≥1}L_fs(βΔ)C(Δ); the self-term is
/// not included.
pub fn j_fs_discrete(params: &ChainParams, xi: usize) -> Result<f64> {
    let beta = params.beta();
    let gamma = params.gamma_fs();
    if gamma == 0.0 {
        params.check_branch(xi)?;
        return Ok(0.0);
    }
    require_spacing(params, "j_fs_discrete")?;
    Ok(0.5 * gamma * lag_sum(params, xi, false, |d| lfs_unchecked(beta * d as f64))?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftAsymptotics {
    pub shift_total: f64,
    pub shift_guided: f64,
    pub shift_fs: f64,
    pub shift_infty: f64,
    pub finite_size_coeff: f64,
}

/// C(d) = (3γ ln2/4)/β³ − (1/8)·sin(β/2)/cos³(β/2).
pub fn finite_size_coefficient(params: &ChainParams) -> Result<f64> {
    let beta = require_spacing(params, "finite_size_coefficient")?;
    Ok(0.75 * params.gamma_fs() * LN_2 / (beta * beta * beta) + band_curvature(params)?)
}

/// J∞ = J∞_fs − (1/2)tan(β/2).
pub fn j_infty_asymptotic(params: &ChainParams) -> Result<f64> {
    let beta = require_spacing(params, "j_infty_asymptotic")?;
    let g = params.gamma_fs();
    Ok(-1.125 * g * ZETA3 / (beta * beta * beta) + 0.75 * g * LN_2 / beta + band_edge_shift(params)?)
}

/// Total asymptotic shift J = J∞ + π²ξ²C(d)/(N+1)², split into the guided
/// and free-space parts so that `shift_total = shift_guided + shift_fs`.
pub fn j_total_asymptotic(params: &ChainParams, xi: usize) -> Result<ShiftAsymptotics> {
    let fs = j_fs_asymptotic(params, xi)?;
    let shift_guided = j_ideal(params, xi, true)?;
    Ok(ShiftAsymptotics {
        shift_total: shift_guided + fs.shift_fs,
        shift_guided,
        shift_fs: fs.shift_fs,
        shift_infty: j_infty_asymptotic(params)?,
        finite_size_coeff: finite_size_coefficient(params)?,
    })
}

const LATTICE_TERMS: usize = 20_000;
const LATTICE_ROUNDS: usize = 200;

/// Σ_{Δ=1}^{terms} (−1)^Δ f(Δ), accelerated by repeatedly averaging
/// neighbouring partial sums. Each round damps a tail oscillating as
/// (−1)^Δe^{±iβΔ} by sin(β/2), so convergence degrades towards β = π.
pub(crate) fn accelerated_alternating<F: Fn(usize) -> f64>(f: F, terms: usize, rounds: usize) -> f64 {
    let mut partial = Vec::with_capacity(rounds + 1);
    let mut s = 0.0;
    for k in 1..=terms {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * f(k);
        if k + rounds >= terms {
            partial.push(s);
        }
    }
    for _ in 0..rounds {
        partial = partial.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    partial[0]
}

/// Thermodynamic-limit shift from the infinite lattice sum,
/// J∞ = −(1/2)tan(β/2) + γΣ_{Δ≥1}(−1)^Δ L_fs(βΔ), without the near-field
/// truncation used in [`j_infty_asymptotic`].
pub fn j_infty_lattice(params: &ChainParams) -> Result<f64> {
    let beta = require_spacing(params, "j_infty_lattice")?;
    let edge = band_edge_shift(params)?;
    let g = params.gamma_fs();
    if g == 0.0 {
        return Ok(edge);
    }
    let sum = accelerated_alternating(|k| lfs_unchecked(beta * k as f64), LATTICE_TERMS, LATTICE_ROUNDS);
    Ok(edge + g * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::{dirichlet_mode, structure_factor};

    fn p(n: usize, d: f64, g: f64) -> ChainParams {
        ChainParams::new(n, d, g, n.min(5)).unwrap()
    }

    fn brute(params: &ChainParams, xi: usize, f: impl Fn(usize) -> f64, diag: bool) -> f64 {
        let c = dirichlet_mode(params, xi).unwrap();
        let c = c.amplitudes();
        let mut s = 0.0;
        for j in 0..c.len() {
            for l in 0..c.len() {
                if j == l && !diag {
                    continue;
                }
                s += (c[j].conj() * c[l]).re * f(j.abs_diff(l));
            }
        }
        s
    }

    #[test]
    fn closed_form_structure_factor_matches_direct_sum() {
        for (n, xi, d, kappa) in [
            (40, 1, 0.02, 1.0),
            (41, 2, 0.05, -1.0),
            (7, 3, 0.17, 0.3),
            (30, 5, 0.1, 0.77),
        ] {
            let pr = p(n, d, 0.1);
            let direct = structure_factor(&dirichlet_mode(&pr, xi).unwrap(), kappa, &pr);
            let closed = structure_factor_closed_form(&pr, xi, kappa).unwrap();
            assert!((direct - closed).norm() < 1e-13, "{direct} {closed}");
        }
    }

    #[test]
    fn discrete_sums_equal_double_sums() {
        for n in [1usize, 2, 3, 7, 16, 31, 40] {
            for d in [0.01, 0.02, 0.05, 0.1] {
                for xi in 1..=n.min(5) {
                    let pr = p(n, d, 0.1);
                    let beta = pr.beta();
                    let g = gamma_fs_discrete(&pr, xi).unwrap().linewidth;
                    let gb = 0.1 * brute(&pr, xi, |k| kernel_kfs(beta * k as f64), true);
                    assert!((g - gb).abs() < 1e-12, "{n} {d} {xi}");
                    let j = j_fs_discrete(&pr, xi).unwrap();
                    let jb = 0.05 * brute(&pr, xi, |k| lfs_unchecked(beta * k as f64), false);
                    assert!((j - jb).abs() < 1e-12 * jb.abs().max(1.0), "{n} {d} {xi}");
                    let gg = gamma_guided_discrete(&pr, xi).unwrap();
                    let s = structure_factor(&dirichlet_mode(&pr, xi).unwrap(), 1.0, &pr);
                    assert!((gg - s.norm_sqr()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn two_atom_shift_by_hand() {
        let pr = p(2, 0.02, 0.1);
        let l = kernel_lfs_at(pr.beta());
        // c = (1, −1)/√2 · sin(π/3)·√(2/3): c(1)c(2) = −1/2
        let want = 0.1 * l * -0.5;
        assert!((j_fs_discrete(&pr, 1).unwrap() - want).abs() < 1e-14 * want.abs());
    }

    fn kernel_lfs_at(x: f64) -> f64 {
        crate::kernels::kernel_lfs(x).unwrap()
    }

    #[test]
    fn guided_subwavelength_tracks_exact_sum() {
        let pr = p(120, 0.02, 0.0);
        let exact = gamma_guided_discrete(&pr, 1).unwrap();
        let approx = gamma_guided_subwavelength(&pr, 1).unwrap();
        assert!((approx - exact).abs() < 0.05 * exact);
    }

    #[test]
    fn guided_bracket_vanishes_on_destructive_boundary() {
        // (N+1)β = π with N + ξ even
        let n = 99;
        let pr = p(n, 0.5 / (n as f64 + 1.0), 0.0);
        assert!(gamma_guided_subwavelength(&pr, 1).unwrap().abs() < 1e-20);
    }

    #[test]
    fn parity_flip_inverts_brackets() {
        let theta = 2.3;
        for n in [50usize, 51, 120] {
            let a = p(n, theta / (2.0 * PI * (n as f64 + 1.0)), 0.1);
            let b = p(n + 1, theta / (2.0 * PI * (n as f64 + 2.0)), 0.1);
            let osc = |f: f64| 4.0 * f - 1.0;
            let (ga, gb) = (osc(guided_prefactor(&a, 1)), osc(guided_prefactor(&b, 1)));
            assert!((ga + gb).abs() < 1e-12 && ga.abs() > 0.1);
            let (fa, fb) = (osc(fs_prefactor_analytic(&a, 1)), osc(fs_prefactor_analytic(&b, 1)));
            assert!((fa + fb).abs() < 1e-12 && fa.abs() > 0.01);
        }
    }

    #[test]
    fn fs_linewidth_limits() {
        let pr = p(2000, 0.4, 0.1);
        let g = gamma_fs_analytic(&pr, 1).unwrap();
        let lim = PI * PI / 2001f64.powi(3) * 0.025;
        assert!((g / lim - 1.0).abs() < 1e-3);
        let d = gamma_fs_discrete(&p(50, 0.02, 0.0), 1).unwrap();
        assert_eq!(d.linewidth, 0.0);
        assert!(d.prefactor.is_nan());
        let f = gamma_fs_discrete(&p(200, 0.01, 0.1), 1).unwrap().prefactor;
        assert!((f - 0.25).abs() < 0.1, "{f}");
    }

    #[test]
    fn fs_analytic_approaches_discrete() {
        // paired over parity to strip the boundary oscillation
        let err = |n: usize| {
            let a = p(n, 0.02, 0.1);
            let b = p(n + 1, 0.02, 0.1);
            let ana = gamma_fs_analytic(&a, 1).unwrap() * (n as f64 + 1.0).powi(3)
                + gamma_fs_analytic(&b, 1).unwrap() * (n as f64 + 2.0).powi(3);
            let dis = gamma_fs_discrete(&a, 1).unwrap().linewidth * (n as f64 + 1.0).powi(3)
                + gamma_fs_discrete(&b, 1).unwrap().linewidth * (n as f64 + 2.0).powi(3);
            ((ana - dis) / dis).abs()
        };
        let e: Vec<f64> = [50, 100, 200, 400].iter().map(|&n| err(n)).collect();
        assert!(e.windows(2).all(|w| w[1] < w[0]), "{e:?}");
        let single = p(100, 0.02, 0.1);
        let a = gamma_fs_analytic(&single, 1).unwrap();
        let d = gamma_fs_discrete(&single, 1).unwrap().linewidth;
        assert!(((a - d) / d).abs() < 0.1);
    }

    #[test]
    fn shift_asymptotics_reference_values() {
        let pr = p(200, 0.02, 0.1);
        let fs = j_fs_asymptotic(&pr, 1).unwrap();
        let beta = 0.04 * PI;
        let near = -1.125 * 0.1 * ZETA3 / beta.powi(3);
        let far = 0.075 * LN_2 / beta;
        assert!((near + 68.15).abs() < 0.01 && (far - 0.414).abs() < 1e-3);
        assert!((fs.shift_infty_fs - (near + far)).abs() < 1e-12);
        let f3 = j_fs_asymptotic(&pr, 3).unwrap().finite_size_term;
        assert!((f3 / fs.finite_size_term - 9.0).abs() < 1e-12);
        let tot = j_total_asymptotic(&pr, 1).unwrap();
        assert!((tot.shift_infty + 67.76).abs() < 0.01, "{}", tot.shift_infty);
        assert_eq!(tot.shift_total, tot.shift_guided + tot.shift_fs);
        let rebuilt = tot.shift_infty + PI * PI * tot.finite_size_coeff / 201f64.powi(2);
        assert!((rebuilt - tot.shift_total).abs() < 1e-12 * tot.shift_total.abs());
        let z = j_fs_asymptotic(&p(200, 0.02, 0.0), 2).unwrap();
        assert_eq!((z.shift_fs, z.shift_infty_fs, z.finite_size_term), (0.0, 0.0, 0.0));
    }

    #[test]
    fn total_without_free_space_is_open_boundary_ideal() {
        let pr = p(80, 0.1, 0.0);
        let tot = j_total_asymptotic(&pr, 2).unwrap();
        assert_eq!(tot.shift_total, j_ideal(&pr, 2, true).unwrap());
        assert!(j_total_asymptotic(&p(80, 0.5, 0.0), 1).is_err());
    }

    #[test]
    fn discrete_shift_converges_like_inverse_square() {
        let infty = j_infty_lattice(&p(10, 0.02, 0.1)).unwrap() - band_edge_shift(&p(10, 0.02, 0.1)).unwrap();
        let dev = |n: usize| (j_fs_discrete(&p(n, 0.02, 0.1), 1).unwrap() - infty).abs();
        let (d1, d2) = (dev(100), dev(400));
        let ratio = d1 / d2;
        let expect = (401.0f64 / 101.0).powi(2);
        assert!((ratio / expect - 1.0).abs() < 0.15, "{ratio} {expect}");
    }

    #[test]
    fn accelerator_reproduces_known_sum() {
        for beta in [0.05, 0.3, 1.0, 2.0] {
            let s = accelerated_alternating(|k| (beta * k as f64).cos() / k as f64, LATTICE_TERMS, LATTICE_ROUNDS);
            let want = -(2.0 * (0.5 * beta).cos()).ln();
            assert!((s - want).abs() < 1e-12, "{beta}: {s} {want}");
        }
    }

    #[test]
    fn lattice_limit_close_to_near_field_form() {
        let pr = p(10, 0.02, 0.1);
        let lat = j_infty_lattice(&pr).unwrap();
        let asy = j_infty_asymptotic(&pr).unwrap();
        assert!((lat - asy).abs() < 5e-3, "{lat} {asy}");
        let pr0 = p(10, 0.02, 0.0);
        assert_eq!(j_infty_lattice(&pr0).unwrap(), j_infty_asymptotic(&pr0).unwrap());
        assert!(j_infty_lattice(&p(10, 0.5, 0.1)).is_err());
    }
}
