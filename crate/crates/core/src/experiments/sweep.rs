//! Cartesian parameter sweeps comparing diagonalization with the closed forms.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{AnalyticPrediction, Model};
use crate::error::{Error, Result};
use crate::params::ChainParams;
use crate::spectrum::{solve, SpectrumResult, DEFAULT_EIG_TOL};

pub const CSV_HEADER: &str = "N,d_over_lambda,gamma_over_Gamma,xi,parity,Gamma_num,Gamma_ana_total,Gamma_ana_1d,Gamma_ana_fs,J_num,J_ana_total,J_infty,C_d,overlap,residual,flags";

/// Guard against division by an exactly vanishing numeric value.
pub const RELATIVE_ERROR_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub n_list: Vec<usize>,
    pub d_list: Vec<f64>,
    pub gamma_list: Vec<f64>,
    pub xi_list: Vec<usize>,
    /// Closed forms to compare against; `None` picks per point.
    pub model: Option<Model>,
    pub eig_tol: f64,
}

impl SweepSpec {
    pub fn new(n_list: Vec<usize>, d_list: Vec<f64>, gamma_list: Vec<f64>, xi_list: Vec<usize>) -> Self {
        Self {
            n_list,
            d_list,
            gamma_list,
            xi_list,
            model: None,
            eig_tol: DEFAULT_EIG_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, empty) in [
            ("n_list", self.n_list.is_empty()),
            ("d_list", self.d_list.is_empty()),
            ("gamma_list", self.gamma_list.is_empty()),
            ("xi_list", self.xi_list.is_empty()),
        ] {
            if empty {
                return Err(Error::argument(name, "must not be empty"));
            }
        }
        if self.xi_list.contains(&0) {
            return Err(Error::argument("xi_list", "branch indices start at 1"));
        }
        for &n in &self.n_list {
            for &d in &self.d_list {
                for &g in &self.gamma_list {
                    ChainParams::new(n, d, g, 1)?;
                }
            }
        }
        Ok(())
    }

    /// Grid points (N, d, γ) in sorted order.
    fn points(&self) -> Vec<(usize, f64, f64)> {
        let mut pts = Vec::new();
        for &n in &self.n_list {
            for &d in &self.d_list {
                for &g in &self.gamma_list {
                    pts.push((n, d, g));
                }
            }
        }
        pts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.total_cmp(&b.2)));
        pts.dedup();
        pts
    }

    fn branches(&self) -> Vec<usize> {
        let mut xs = self.xi_list.clone();
        xs.sort_unstable();
        xs.dedup();
        xs
    }
}

/// One (N, d, γ, ξ) row. Missing values are absent numbers, not NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    #[serde(rename = "N")]
    pub n: usize,
    pub d_over_lambda: f64,
    #[serde(rename = "gamma_over_Gamma")]
    pub gamma_over_gamma: f64,
    pub xi: usize,
    /// (−1)^{N+ξ}
    pub parity: i8,
    #[serde(rename = "Gamma_num")]
    pub gamma_num: Option<f64>,
    #[serde(rename = "Gamma_ana_total")]
    pub gamma_ana_total: Option<f64>,
    #[serde(rename = "Gamma_ana_1d")]
    pub gamma_ana_1d: Option<f64>,
    #[serde(rename = "Gamma_ana_fs")]
    pub gamma_ana_fs: Option<f64>,
    #[serde(rename = "J_num")]
    pub j_num: Option<f64>,
    #[serde(rename = "J_ana_total")]
    pub j_ana_total: Option<f64>,
    #[serde(rename = "J_infty")]
    pub j_infty: Option<f64>,
    #[serde(rename = "C_d")]
    pub c_d: Option<f64>,
    pub overlap: Option<f64>,
    pub residual: Option<f64>,
    /// `|`-separated tags: model, regime, `low_overlap`, `failed:<reason>`.
    pub flags: String,
}

fn relative_error(num: f64, ana: f64) -> f64 {
    (num - ana).abs() / num.abs().max(RELATIVE_ERROR_FLOOR)
}

impl ComparisonRecord {
    pub fn has_flag(&self, tag: &str) -> bool {
        self.flags.split('|').any(|t| t == tag)
    }

    pub fn failed(&self) -> bool {
        self.flags.split('|').any(|t| t.starts_with("failed"))
    }

    /// Inside the regime of the closed forms used for this row.
    pub fn in_regime(&self) -> bool {
        let small = self.has_flag("small");
        if self.has_flag("ideal") {
            small
        } else {
            small && self.has_flag("deep")
        }
    }

    pub fn gamma_relative_error(&self) -> Option<f64> {
        Some(relative_error(self.gamma_num?, self.gamma_ana_total?))
    }

    pub fn shift_relative_error(&self) -> Option<f64> {
        Some(relative_error(self.j_num?, self.j_ana_total?))
    }

    /// Relative error of the finite-size part J − J∞.
    pub fn deviation_relative_error(&self) -> Option<f64> {
        let j_inf = self.j_infty?;
        Some(relative_error(self.j_num? - j_inf, self.j_ana_total? - j_inf))
    }

    fn blank(params: &ChainParams, xi: usize) -> Self {
        Self {
            n: params.n_atoms(),
            d_over_lambda: params.spacing(),
            gamma_over_gamma: params.gamma_fs(),
            xi,
            parity: params.parity_sign(xi) as i8,
            gamma_num: None,
            gamma_ana_total: None,
            gamma_ana_1d: None,
            gamma_ana_fs: None,
            j_num: None,
            j_ana_total: None,
            j_infty: None,
            c_d: None,
            overlap: None,
            residual: None,
            flags: String::new(),
        }
    }
}

fn failure_tag(err: &Error) -> String {
    let text: String = err
        .to_string()
        .chars()
        .map(|c| if matches!(c, ',' | '|' | '\n' | '"') { ' ' } else { c })
        .collect();
    format!("failed:{text}")
}

fn point_records(spec: &SweepSpec, xis: &[usize], (n, d, g): (usize, f64, f64)) -> Vec<ComparisonRecord> {
    let branch_max = xis.iter().copied().filter(|&x| x <= n).max().unwrap_or(1);
    let params = ChainParams::new(n, d, g, branch_max).expect("grid checked by SweepSpec::validate");
    let spectrum: Result<SpectrumResult> = solve(&params, spec.eig_tol);
    if let Err(e) = &spectrum {
        log::warn!("N = {n}, d = {d}, gamma = {g}: {e}");
    }
    compare_branches(&params, spectrum.as_ref(), xis, spec.model)
}

/// Comparison rows for branches `xis` of an already solved chain. A solver
/// failure is recorded in each row's flags rather than returned.
pub fn compare_branches(
    params: &ChainParams,
    spectrum: std::result::Result<&SpectrumResult, &Error>,
    xis: &[usize],
    model: Option<Model>,
) -> Vec<ComparisonRecord> {
    let n = params.n_atoms();
    xis.iter()
        .map(|&xi| {
            let mut rec = ComparisonRecord::blank(params, xi);
            let mut tags: Vec<String> = Vec::new();
            if xi > n {
                rec.flags = failure_tag(&Error::argument("xi", format!("branch {xi} exceeds N = {n}")));
                return rec;
            }
            let model = model.unwrap_or_else(|| Model::for_params(params));
            tags.push(format!("{model:?}").to_lowercase());
            match AnalyticPrediction::evaluate(params, xi, model) {
                Ok(a) => {
                    rec.gamma_ana_total = Some(a.linewidth_total);
                    rec.gamma_ana_1d = Some(a.linewidth_guided);
                    rec.gamma_ana_fs = Some(a.linewidth_fs);
                    rec.j_ana_total = Some(a.shift_total);
                    rec.j_infty = Some(a.shift_infty);
                    rec.c_d = Some(a.finite_size_coeff);
                    tags.push(a.regime_flags.label());
                }
                Err(e) => {
                    tags.push(crate::analytics::RegimeFlags::new(params, xi).label());
                    tags.push(format!("analytic_{}", failure_tag(&e)));
                }
            }
            match spectrum.map_err(Clone::clone).and_then(|s| s.extract_observables(xi)) {
                Ok(obs) => {
                    rec.gamma_num = Some(obs.linewidth);
                    rec.j_num = Some(obs.shift);
                    rec.overlap = Some(obs.overlap);
                    rec.residual = Some(obs.residual);
                    if obs.low_confidence {
                        tags.push("low_overlap".into());
                    }
                }
                Err(e) => tags.push(failure_tag(&e)),
            }
            rec.flags = tags.join("|");
            rec
        })
        .collect()
}

/// Numeric and analytic observables on every grid point. One diagonalization
/// per (N, d, γ) serves all requested branches; `workers = 0` uses rayon's
/// default pool size.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<ComparisonRecord>> {
    spec.validate()?;
    let points = spec.points();
    let xis = spec.branches();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::argument("workers", e.to_string()))?;
    let mut records: Vec<ComparisonRecord> = pool.install(|| {
        points
            .par_iter()
            .flat_map_iter(|&pt| point_records(spec, &xis, pt))
            .collect()
    });
    records.sort_by(|a, b| {
        a.n.cmp(&b.n)
            .then(a.d_over_lambda.total_cmp(&b.d_over_lambda))
            .then(a.gamma_over_gamma.total_cmp(&b.gamma_over_gamma))
            .then(a.xi.cmp(&b.xi))
    });
    Ok(records)
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    r.deserialize().map(|row| row.map_err(|e| csv_error(path, e))).collect()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}
