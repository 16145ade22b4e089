//! Self-checks of the identities the closed forms rest on.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analytics::{alternating_series_estimate, angular_average, angular_integral, SeriesKind};
use crate::hamiltonian::build_total;
use crate::kernels::{coupling_unchecked, kernel_kfs, lfs_unchecked};
use crate::mode::{autocorrelation, dirichlet_mode};
use crate::params::ChainParams;
use crate::spectrum::{eigendecompose, DEFAULT_EIG_TOL};

pub const RECIPROCITY_TOL: f64 = 1e-12;
pub const ANGULAR_TOL: f64 = 1e-9;
pub const AUTOCORRELATION_TOL: f64 = 1e-12;
pub const SERIES_TOL: f64 = 1e-8;
pub const SUM_RULE_TOL_PER_ATOM: f64 = 1e-9;

/// Kernel implementations under test; swap one out to exercise a failure.
#[derive(Debug, Clone, Copy)]
pub struct Kernels {
    pub kfs: fn(f64) -> f64,
    pub lfs: fn(f64) -> f64,
}

impl Default for Kernels {
    fn default() -> Self {
        Self {
            kfs: kernel_kfs,
            lfs: lfs_unchecked,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub quick: bool,
    pub seed: u64,
    pub kernels: Kernels,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            quick: false,
            seed: 20_240_601,
            kernels: Kernels::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, max_error: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: max_error <= tolerance,
            max_error,
            tolerance,
            detail,
        }
    }

    fn failed(name: &str, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: false,
            max_error: f64::INFINITY,
            tolerance,
            detail,
        }
    }
}

fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
        .collect()
}

/// K and L against 2V(x)e^{ix}/γ, relative to |2V(x)e^{ix}/γ|.
pub fn check_kernel_reciprocity(kernels: &Kernels, quick: bool) -> CheckResult {
    let grid = log_grid(1e-3, 1e3, if quick { 61 } else { 601 });
    let mut worst = (0.0f64, 0.0f64);
    for &x in &grid {
        let w = 2.0 * coupling_unchecked(x, 1.0) * Complex64::from_polar(1.0, x);
        let err = ((kernels.kfs)(x) - w.re).abs().max(((kernels.lfs)(x) - w.im).abs()) / w.norm();
        if err > worst.0 {
            worst = (err, x);
        }
    }
    CheckResult::new(
        "kernel_reciprocity",
        worst.0,
        RECIPROCITY_TOL,
        format!("{} points on [1e-3, 1e3], worst at x = {:.3e}", grid.len(), worst.1),
    )
}

/// I₁(θ) = (4/3)K(θ) and the full angular average (3/8)∫₋₁¹(1+μ²)e^{iθμ}dμ = K(θ).
pub fn check_angular_identity(kernels: &Kernels, quick: bool) -> CheckResult {
    let grid = if quick {
        vec![0.1, 1.0, 10.0, 100.0]
    } else {
        log_grid(1e-2, 1e2, 41)
    };
    let mut worst = 0.0f64;
    for &t in &grid {
        let k = (kernels.kfs)(t);
        let half = angular_integral(t).map(|v| (v - 4.0 / 3.0 * k).abs());
        let full = angular_average(t).map(|(re, im)| (re - k).hypot(im));
        match (half, full) {
            (Ok(a), Ok(b)) => worst = worst.max(a).max(b),
            (Err(e), _) | (_, Err(e)) => {
                return CheckResult::failed("angular_identity", ANGULAR_TOL, format!("θ = {t}: {e}"))
            }
        }
    }
    CheckResult::new(
        "angular_identity",
        worst,
        ANGULAR_TOL,
        format!("{} angles on [{}, {}]", grid.len(), grid[0], grid[grid.len() - 1]),
    )
}

/// Closed-form C_ξ(Δ) against the conjugated lag sum of the mode amplitudes.
pub fn check_autocorrelation(quick: bool) -> CheckResult {
    let n_max = if quick { 12 } else { 30 };
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 1..=n_max {
        let p = ChainParams::new(n, 0.1, 0.0, 1).expect("valid chain");
        for xi in 1..=n.min(5) {
            let c = dirichlet_mode(&p, xi).expect("valid branch");
            let c = c.amplitudes();
            for delta in 0..n {
                let brute: Complex64 = (0..n - delta).map(|k| c[k + delta].conj() * c[k]).sum();
                let closed = autocorrelation(&p, xi, delta).expect("lag in range");
                worst = worst.max((brute - closed).norm());
                cases += 1;
            }
        }
    }
    CheckResult::new(
        "autocorrelation",
        worst,
        AUTOCORRELATION_TOL,
        format!("{cases} lags, N <= {n_max}, xi <= 5"),
    )
}

/// Limits −(3/4)ζ(3) and −ln 2 from 10⁵ terms, and the alternating bound
/// |S_m − S∞| ≤ |a_{m+1}| along the way.
pub fn check_alternating_series(quick: bool) -> CheckResult {
    let bound_terms = if quick { 1_000 } else { 10_000 };
    let mut worst = 0.0f64;
    let mut violations = 0;
    for kind in [SeriesKind::Zeta3, SeriesKind::Log2] {
        match alternating_series_estimate(kind, 100_000) {
            Ok(v) => worst = worst.max((v - kind.limit()).abs()),
            Err(e) => return CheckResult::failed("alternating_series", SERIES_TOL, e.to_string()),
        }
        let mut s = 0.0;
        for m in 1..=bound_terms {
            s += kind.term(m);
            if (s - kind.limit()).abs() > kind.term(m + 1).abs() * (1.0 + 1e-9) + 1e-15 {
                violations += 1;
            }
        }
    }
    let mut out = CheckResult::new(
        "alternating_series",
        worst,
        SERIES_TOL,
        format!("1e5 terms; bound checked for m <= {bound_terms}, {violations} violations"),
    );
    out.passed &= violations == 0;
    out
}

/// Σλ = tr H on random small chains, within 1e-9·N.
pub fn check_sum_rule(seed: u64, quick: bool) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = if quick { 8 } else { 20 };
    let mut worst = 0.0f64;
    for _ in 0..count {
        let n = rng.gen_range(2..=16);
        let d = rng.gen_range(0.01..0.49);
        let g = rng.gen_range(0.0..0.5);
        let p = ChainParams::new(n, d, g, 1).expect("valid chain");
        let h = build_total(&p, false);
        match eigendecompose(&h, DEFAULT_EIG_TOL) {
            Ok(s) => worst = worst.max((s.eigenvalue_sum() - h.trace()).norm() / n as f64),
            Err(e) => {
                return CheckResult::failed(
                    "eigen_sum_rule",
                    SUM_RULE_TOL_PER_ATOM,
                    format!("N = {n}, d = {d}, gamma = {g}: {e}"),
                )
            }
        }
    }
    CheckResult::new(
        "eigen_sum_rule",
        worst,
        SUM_RULE_TOL_PER_ATOM,
        format!("{count} random chains, error per atom"),
    )
}

pub fn run_identity_suite(opts: &VerifyOptions) -> Vec<CheckResult> {
    vec![
        check_kernel_reciprocity(&opts.kernels, opts.quick),
        check_angular_identity(&opts.kernels, opts.quick),
        check_autocorrelation(opts.quick),
        check_alternating_series(opts.quick),
        check_sum_rule(opts.seed, opts.quick),
    ]
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}
