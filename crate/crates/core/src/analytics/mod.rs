//! Closed-form and asymptotic predictions for the Bragg-edge branches.

mod ideal;
mod identities;
mod nonideal;

pub use ideal::{bloch_dispersion, gamma_ideal, ideal_bragg_detuning, j_ideal};
pub use identities::{
    alternating_series, alternating_series_estimate, angular_average, angular_integral, verify_angular_identity,
    AngularIdentityCheck, SeriesKind, ANGULAR_QUADRATURE_TOL,
};
pub use nonideal::{
    finite_size_coefficient, fs_prefactor_analytic, gamma_fs_analytic, gamma_fs_discrete, gamma_guided_discrete,
    gamma_guided_subwavelength, guided_prefactor, j_fs_asymptotic, j_fs_discrete, j_guided_discrete,
    j_infty_asymptotic, j_infty_lattice, j_total_asymptotic, structure_factor_closed_form, FreeSpaceLinewidth,
    FreeSpaceShift, ShiftAsymptotics,
};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::params::ChainParams;

/// Apéry's constant ζ(3).
pub const ZETA3: f64 = 1.202_056_903_159_594_3;

/// Deep-subwavelength threshold on k₀d.
pub const DEEP_SUBWAVELENGTH_MAX: f64 = 0.5;

/// Branches with ξ ≤ N/DIVISOR count as close to the band edge.
pub const SMALL_BRANCH_DIVISOR: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeFlags {
    /// k₀d ≤ 0.5
    pub deep_subwavelength: bool,
    /// ξ ≤ N/10
    pub small_branch: bool,
}

impl RegimeFlags {
    pub fn new(params: &ChainParams, xi: usize) -> Self {
        Self {
            deep_subwavelength: params.beta() <= DEEP_SUBWAVELENGTH_MAX,
            small_branch: xi * SMALL_BRANCH_DIVISOR <= params.n_atoms(),
        }
    }

    /// Whether the formulas of `model` are inside their stated regime.
    pub fn valid_for(&self, model: Model) -> bool {
        match model {
            Model::Ideal => self.small_branch,
            Model::Nonideal => self.small_branch && self.deep_subwavelength,
        }
    }

    /// Compact text form: `deep`/`wide` and `small`/`large` joined by `|`.
    pub fn label(&self) -> String {
        let d = if self.deep_subwavelength { "deep" } else { "wide" };
        let s = if self.small_branch { "small" } else { "large" };
        format!("{d}|{s}")
    }
}

/// Which set of closed forms a prediction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Infinite-chain dispersion expanded at the Bragg edge, M = N.
    Ideal,
    /// Dirichlet ansatz with near-field free-space terms, M = N + 1.
    Nonideal,
}

impl Model {
    /// Ideal closed forms without free-space loss, the ansatz forms otherwise.
    pub fn for_params(params: &ChainParams) -> Self {
        if params.gamma_fs() == 0.0 {
            Model::Ideal
        } else {
            Model::Nonideal
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticPrediction {
    pub model: Model,
    pub linewidth_total: f64,
    pub linewidth_guided: f64,
    pub linewidth_fs: f64,
    pub shift_total: f64,
    pub shift_guided: f64,
    pub shift_fs: f64,
    pub shift_infty: f64,
    pub finite_size_coeff: f64,
    pub regime_flags: RegimeFlags,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinewidthAsymptotics {
    pub linewidth_total: f64,
    pub linewidth_guided: f64,
    pub linewidth_fs: f64,
    pub regime_flags: RegimeFlags,
}

/// Γ^(1D) + Γ^(fs) with both parts kept.
pub fn gamma_total_analytic(params: &ChainParams, xi: usize) -> Result<LinewidthAsymptotics> {
    let linewidth_guided = gamma_guided_subwavelength(params, xi)?;
    let linewidth_fs = gamma_fs_analytic(params, xi)?;
    Ok(LinewidthAsymptotics {
        linewidth_total: linewidth_guided + linewidth_fs,
        linewidth_guided,
        linewidth_fs,
        regime_flags: RegimeFlags::new(params, xi),
    })
}

impl AnalyticPrediction {
    pub fn evaluate(params: &ChainParams, xi: usize, model: Model) -> Result<Self> {
        let regime_flags = RegimeFlags::new(params, xi);
        match model {
            Model::Ideal => {
                let linewidth_guided = gamma_ideal(params, xi)?;
                let shift_guided = j_ideal(params, xi, false)?;
                Ok(Self {
                    model,
                    linewidth_total: linewidth_guided,
                    linewidth_guided,
                    linewidth_fs: 0.0,
                    shift_total: shift_guided,
                    shift_guided,
                    shift_fs: 0.0,
                    shift_infty: ideal::band_edge_shift(params)?,
                    finite_size_coeff: ideal::band_curvature(params)?,
                    regime_flags,
                })
            }
            Model::Nonideal => {
                let g = gamma_total_analytic(params, xi)?;
                let j = j_total_asymptotic(params, xi)?;
                Ok(Self {
                    model,
                    linewidth_total: g.linewidth_total,
                    linewidth_guided: g.linewidth_guided,
                    linewidth_fs: g.linewidth_fs,
                    shift_total: j.shift_total,
                    shift_guided: j.shift_guided,
                    shift_fs: j.shift_fs,
                    shift_infty: j.shift_infty,
                    finite_size_coeff: j.finite_size_coeff,
                    regime_flags,
                })
            }
        }
    }

    /// Prediction with the model picked by [`Model::for_params`].
    pub fn for_params(params: &ChainParams, xi: usize) -> Result<Self> {
        Self::evaluate(params, xi, Model::for_params(params))
    }

    pub fn in_regime(&self) -> bool {
        self.regime_flags.valid_for(self.model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta3_literal_is_full_precision() {
        let digits: f64 = "1.2020569031595942853997381615114".parse().unwrap();
        assert_eq!(ZETA3, digits);
    }

    #[test]
    fn decomposition_is_exact() {
        for (n, d, g, xi) in [(100, 0.02, 0.1, 1), (57, 0.01, 0.3, 3), (300, 0.2, 0.05, 2)] {
            let pr = ChainParams::new(n, d, g, 5).unwrap();
            let a = AnalyticPrediction::for_params(&pr, xi).unwrap();
            assert_eq!(a.model, Model::Nonideal);
            assert_eq!(a.linewidth_total, a.linewidth_guided + a.linewidth_fs);
            assert_eq!(a.shift_total, a.shift_guided + a.shift_fs);
        }
    }

    #[test]
    fn ideal_model_without_free_space() {
        let pr = ChainParams::new(100, 0.25, 0.0, 5).unwrap();
        let a = AnalyticPrediction::for_params(&pr, 1).unwrap();
        assert_eq!(a.model, Model::Ideal);
        assert!((a.linewidth_total - PI * PI * 1e-6).abs() < 1e-18);
        assert!((a.shift_infty + 0.5).abs() < 1e-15);
        let rebuilt = a.shift_infty + PI * PI * a.finite_size_coeff / 1e4;
        assert!((rebuilt - a.shift_total).abs() < 1e-15);
        assert!(a.in_regime());
    }

    #[test]
    fn regime_flags() {
        let pr = ChainParams::new(100, 0.25, 0.1, 5).unwrap();
        let f = RegimeFlags::new(&pr, 3);
        assert!(!f.deep_subwavelength && f.small_branch);
        assert!(f.valid_for(Model::Ideal) && !f.valid_for(Model::Nonideal));
        assert!(!RegimeFlags::new(&pr.with_n_atoms(20).unwrap(), 3).small_branch);
        assert_eq!(f.label(), "wide|small");
    }
}
