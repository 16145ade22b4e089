use num_complex::Complex64;
use proptest::prelude::*;

use subradiance_core::analytics::{
    bloch_dispersion, fs_prefactor_analytic, guided_prefactor, AnalyticPrediction, SeriesKind,
};
use subradiance_core::experiments::{run_sweep, write_csv, SweepSpec};
use subradiance_core::mode::autocorrelation_table;
use subradiance_core::spectrum::{eigendecompose, DEFAULT_EIG_TOL};
use subradiance_core::{build_total, dirichlet_mode, structure_factor, ChainParams};

fn chain() -> impl Strategy<Value = ChainParams> {
    (1usize..40, 0.005f64..0.49, 0.0f64..0.5).prop_map(|(n, d, g)| ChainParams::new(n, d, g, n.min(5)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hamiltonian_is_symmetric_toeplitz(p in chain()) {
        let h = build_total(&p, false);
        let m = h.matrix();
        let n = p.n_atoms();
        for j in 0..n {
            for l in 0..n {
                prop_assert_eq!(m[[j, l]], m[[l, j]]);
                prop_assert_eq!(m[[j, l]], m[[0, j.abs_diff(l)]]);
            }
        }
        let want = Complex64::new(0.0, -0.5 * n as f64 * (1.0 + p.gamma_fs()));
        prop_assert!((h.trace() - want).norm() < 1e-12 * n as f64);
    }

    #[test]
    fn eigenvalues_sum_to_trace(p in chain()) {
        let h = build_total(&p, false);
        let s = eigendecompose(&h, DEFAULT_EIG_TOL).unwrap();
        let n = p.n_atoms() as f64;
        prop_assert!((s.eigenvalue_sum() - h.trace()).norm() < 1e-9 * n);
        prop_assert!((s.linewidth_sum() - n * (1.0 + p.gamma_fs())).abs() < 1e-8 * n);
        prop_assert!(s.modes.iter().all(|m| m.linewidth >= 0.0));
    }

    #[test]
    fn autocorrelation_matches_lag_products(n in 1usize..60, xi_seed in 0usize..5) {
        let p = ChainParams::new(n, 0.1, 0.0, 1).unwrap();
        let xi = 1 + xi_seed % n.min(5);
        let c = dirichlet_mode(&p, xi).unwrap();
        let c = c.amplitudes();
        let table = autocorrelation_table(&p, xi).unwrap();
        for (delta, closed) in table.iter().enumerate() {
            let brute: Complex64 = (0..n - delta).map(|k| c[k + delta].conj() * c[k]).sum();
            prop_assert!((brute - closed).norm() < 1e-12);
        }
    }

    #[test]
    fn dirichlet_modes_are_normalized(n in 1usize..10_000, xi_seed in 0usize..5) {
        let p = ChainParams::new(n, 0.1, 0.0, 1).unwrap();
        let xi = 1 + xi_seed % n.min(5);
        prop_assert!((dirichlet_mode(&p, xi).unwrap().norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn odd_parity_modes_do_not_couple_to_zero_momentum(n in 1usize..200, xi_seed in 0usize..5) {
        let p = ChainParams::new(n, 0.05, 0.0, 1).unwrap();
        let xi = 1 + xi_seed % n.min(5);
        prop_assume!((n + xi) % 2 == 1);
        let s = structure_factor(&dirichlet_mode(&p, xi).unwrap(), 0.0, &p);
        prop_assert!(s.norm() < 1e-12);
    }

    #[test]
    fn predictions_decompose_exactly(n in 10usize..500, d in 0.005f64..0.45, g in 0.0f64..1.0, xi in 1usize..5) {
        let p = ChainParams::new(n, d, g, 5).unwrap();
        let a = AnalyticPrediction::for_params(&p, xi).unwrap();
        prop_assert_eq!(a.linewidth_total, a.linewidth_guided + a.linewidth_fs);
        prop_assert_eq!(a.shift_total, a.shift_guided + a.shift_fs);
    }

    #[test]
    fn dispersion_cotangent_form(d in 0.01f64..0.49, kd in 0.0f64..std::f64::consts::PI) {
        let p = ChainParams::new(2, d, 0.0, 1).unwrap();
        let beta = p.beta();
        prop_assume!((kd.cos() - beta.cos()).abs() > 1e-3);
        let w = bloch_dispersion(Complex64::new(kd, 0.0), &p).unwrap();
        let cot = |x: f64| x.cos() / x.sin();
        let alt = 0.25 * (cot(0.5 * (beta + kd)) + cot(0.5 * (beta - kd)));
        prop_assert!((w.re - alt).abs() < 1e-12 * alt.abs().max(1.0));
    }

    #[test]
    fn boundary_brackets_flip_with_parity(n in 20usize..400, theta in 0.3f64..20.0) {
        let at = |m: usize| ChainParams::new(m, theta / (2.0 * std::f64::consts::PI * (m as f64 + 1.0)), 0.1, 1).unwrap();
        let (a, b) = (at(n), at(n + 1));
        let osc = |f: f64| 4.0 * f - 1.0;
        prop_assert!((osc(guided_prefactor(&a, 1)) + osc(guided_prefactor(&b, 1))).abs() < 1e-12);
        prop_assert!((osc(fs_prefactor_analytic(&a, 1)) + osc(fs_prefactor_analytic(&b, 1))).abs() < 1e-12);
    }
}

#[test]
fn alternating_partial_sums_bracket_limits() {
    for kind in [SeriesKind::Zeta3, SeriesKind::Log2] {
        let mut s = 0.0;
        let mut prev_side = 0.0;
        for m in 1..=10_000 {
            s += kind.term(m);
            let gap = s - kind.limit();
            assert!(gap.abs() <= kind.term(m + 1).abs() * (1.0 + 1e-9) + 1e-15);
            // consecutive partial sums straddle the limit
            assert!(gap * prev_side <= 0.0);
            prev_side = gap;
        }
    }
}

#[test]
fn sweeps_are_byte_deterministic() {
    let spec = SweepSpec::new(vec![16, 24, 33], vec![0.02, 0.2], vec![0.0, 0.1], vec![1, 2, 3]);
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    write_csv(&a, &run_sweep(&spec, 1).unwrap()).unwrap();
    write_csv(&b, &run_sweep(&spec, 3).unwrap()).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
