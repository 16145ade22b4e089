//! Data and plots for the four benchmark figures.
//!
//! Every panel gets a CSV and an SVG. Panels that compare diagonalization
//! with closed forms use the sweep schema; fig3 and fig5(c) have their own
//! columns (see the row types below).

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::fit::{fit_power_law, PowerLawFit};
use super::svg::{Plot, Series, Style};
use super::sweep::{run_sweep, write_csv, ComparisonRecord, SweepSpec};
use crate::analytics::{fs_prefactor_analytic, gamma_fs_analytic, gamma_fs_discrete, j_infty_lattice};
use crate::error::{Error, Result};
use crate::params::ChainParams;
use crate::spectrum::DEFAULT_EIG_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [FigureId::Fig2, FigureId::Fig3, FigureId::Fig4, FigureId::Fig5];
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
        };
        f.write_str(s)
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| Error::argument("figure", format!("expected fig2..fig5, got `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureOptions {
    pub workers: usize,
    pub eig_tol: f64,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            workers: 0,
            eig_tol: DEFAULT_EIG_TOL,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOutput {
    pub files: Vec<PathBuf>,
}

/// Inclusive integer range with a step.
pub fn n_range(start: usize, stop: usize, step: usize) -> Vec<usize> {
    (start..=stop).step_by(step.max(1)).collect()
}

/// Spacings d/λ for k₀d = start, start + step, ..., ≤ stop.
pub fn spacings_for_k0d(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=count).map(|k| (start + step * k as f64) / (2.0 * PI)).collect()
}

/// fig3 rows: the free-space prefactor and linewidth, discrete vs analytic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefactorRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub d_over_lambda: f64,
    #[serde(rename = "gamma_over_Gamma")]
    pub gamma_over_gamma: f64,
    pub xi: usize,
    pub parity: i8,
    #[serde(rename = "F_discrete")]
    pub f_discrete: f64,
    #[serde(rename = "F_analytic")]
    pub f_analytic: f64,
    #[serde(rename = "Gamma_fs_discrete")]
    pub gamma_fs_discrete: f64,
    #[serde(rename = "Gamma_fs_analytic")]
    pub gamma_fs_analytic: f64,
}

pub fn prefactor_rows(n_list: &[usize], d: f64, gamma: f64, xi: usize) -> Result<Vec<PrefactorRow>> {
    n_list
        .iter()
        .map(|&n| {
            let p = ChainParams::new(n, d, gamma, xi.min(n))?;
            let disc = gamma_fs_discrete(&p, xi)?;
            Ok(PrefactorRow {
                n,
                d_over_lambda: d,
                gamma_over_gamma: gamma,
                xi,
                parity: p.parity_sign(xi) as i8,
                f_discrete: disc.prefactor,
                f_analytic: fs_prefactor_analytic(&p, xi),
                gamma_fs_discrete: disc.linewidth,
                gamma_fs_analytic: gamma_fs_analytic(&p, xi)?,
            })
        })
        .collect()
}

/// fig5(c) rows: J − J∞ with J∞ from the near-field closed form and from
/// the full lattice sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub d_over_lambda: f64,
    #[serde(rename = "gamma_over_Gamma")]
    pub gamma_over_gamma: f64,
    pub xi: usize,
    #[serde(rename = "J_num")]
    pub j_num: f64,
    #[serde(rename = "J_infty_asymptotic")]
    pub j_infty_asymptotic: f64,
    #[serde(rename = "J_infty_lattice")]
    pub j_infty_lattice: f64,
    pub deviation_num_asymptotic: f64,
    pub deviation_num_lattice: f64,
    /// π²ξ²C(d)/(N+1)²
    pub deviation_ana: f64,
}

/// Deviation rows for every record carrying a numeric shift and an analytic J∞.
pub fn deviation_rows(records: &[ComparisonRecord]) -> Result<Vec<DeviationRow>> {
    let mut cache: Vec<((f64, f64), f64)> = Vec::new();
    let mut rows = Vec::new();
    for r in records {
        let (Some(j), Some(j_inf), Some(ana)) = (r.j_num, r.j_infty, r.j_ana_total) else {
            continue;
        };
        let key = (r.d_over_lambda, r.gamma_over_gamma);
        let lattice = match cache.iter().find(|(k, _)| *k == key) {
            Some((_, v)) => *v,
            None => {
                let v = j_infty_lattice(&ChainParams::new(1, key.0, key.1, 1)?)?;
                cache.push((key, v));
                v
            }
        };
        rows.push(DeviationRow {
            n: r.n,
            d_over_lambda: r.d_over_lambda,
            gamma_over_gamma: r.gamma_over_gamma,
            xi: r.xi,
            j_num: j,
            j_infty_asymptotic: j_inf,
            j_infty_lattice: lattice,
            deviation_num_asymptotic: j - j_inf,
            deviation_num_lattice: j - lattice,
            deviation_ana: ana - j_inf,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationFit {
    pub xi: usize,
    /// `lattice` or `asymptotic`: which J∞ was subtracted.
    pub reference: String,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Log–log fits of (J − J∞) against N for each branch and both references.
pub fn deviation_fits(rows: &[DeviationRow], window: (f64, f64)) -> Vec<DeviationFit> {
    let mut xis: Vec<usize> = rows.iter().map(|r| r.xi).collect();
    xis.sort_unstable();
    xis.dedup();
    let mut out = Vec::new();
    for xi in xis {
        for reference in ["lattice", "asymptotic"] {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.xi == xi)
                .map(|r| {
                    let v = if reference == "lattice" {
                        r.deviation_num_lattice
                    } else {
                        r.deviation_num_asymptotic
                    };
                    (r.n as f64, v)
                })
                .collect();
            match fit_power_law(&pts, window) {
                Ok(PowerLawFit {
                    slope,
                    intercept,
                    r_squared,
                    points,
                }) => out.push(DeviationFit {
                    xi,
                    reference: reference.into(),
                    slope,
                    intercept,
                    r_squared,
                    points,
                }),
                Err(e) => log::warn!("deviation fit for xi = {xi} ({reference}): {e}"),
            }
        }
    }
    out
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        let path = self.dir.join(format!("{name}.csv"));
        write_csv(&path, rows)?;
        self.files.push(path);
        Ok(())
    }

    fn svg(&mut self, name: &str, plot: Plot) -> Result<()> {
        let path = self.dir.join(format!("{name}.svg"));
        std::fs::write(&path, plot.render()).map_err(|e| Error::io(&path, e))?;
        self.files.push(path);
        Ok(())
    }
}

fn select(records: &[ComparisonRecord], f: impl Fn(&ComparisonRecord) -> bool) -> Vec<ComparisonRecord> {
    records.iter().filter(|r| f(r)).cloned().collect()
}

fn series(
    rows: &[ComparisonRecord],
    name: String,
    x: impl Fn(&ComparisonRecord) -> f64,
    y: impl Fn(&ComparisonRecord) -> Option<f64>,
    style: Style,
) -> Series {
    Series::new(name, rows.iter().filter_map(|r| Some((x(r), y(r)?))).collect(), style)
}

fn k0d(r: &ComparisonRecord) -> f64 {
    2.0 * PI * r.d_over_lambda
}

fn n_of(r: &ComparisonRecord) -> f64 {
    r.n as f64
}

/// Numeric markers plus analytic line for each group of rows.
fn comparison_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    groups: &[(String, Vec<ComparisonRecord>)],
    x: fn(&ComparisonRecord) -> f64,
    num: fn(&ComparisonRecord) -> Option<f64>,
    ana: fn(&ComparisonRecord) -> Option<f64>,
) -> Plot {
    let mut plot = Plot::new(title, x_label, y_label);
    for (label, rows) in groups {
        plot = plot
            .with(series(rows, format!("{label} analytic"), x, ana, Style::Line))
            .with(series(rows, format!("{label} numeric"), x, num, Style::Markers));
    }
    plot
}

fn fig2(w: &mut Writer, opts: &FigureOptions) -> Result<()> {
    let spacings = [0.02, 0.1, 0.25];
    let mut spec = SweepSpec::new(n_range(20, 200, 5), spacings.to_vec(), vec![0.0], vec![1, 3]);
    spec.eig_tol = opts.eig_tol;
    let by_n = run_sweep(&spec, opts.workers)?;
    let mut spec = SweepSpec::new(vec![100], spacings_for_k0d(0.1, 3.0, 0.1), vec![0.0], vec![1, 3]);
    spec.eig_tol = opts.eig_tol;
    let by_d = run_sweep(&spec, opts.workers)?;

    let gamma = |r: &ComparisonRecord| r.gamma_num;
    let gamma_ana = |r: &ComparisonRecord| r.gamma_ana_total;
    let shift = |r: &ComparisonRecord| r.j_num;
    let shift_ana = |r: &ComparisonRecord| r.j_ana_total;
    for (xi, lw_panel, j_panel) in [(1, "fig2a", "fig2d"), (3, "fig2b", "fig2e")] {
        let rows = select(&by_n, |r| r.xi == xi);
        w.csv(lw_panel, &rows)?;
        w.csv(j_panel, &rows)?;
        let groups: Vec<(String, Vec<ComparisonRecord>)> = spacings
            .iter()
            .map(|&d| (format!("d={d}λ"), select(&rows, |r| r.d_over_lambda == d)))
            .collect();
        let title = format!("Γ_{xi} vs N, γ = 0");
        w.svg(
            lw_panel,
            comparison_plot(&title, "N", "Γ/Γ₀", &groups, n_of, gamma, gamma_ana).log_log(),
        )?;
        let title = format!("J_{xi} vs N, γ = 0");
        w.svg(
            j_panel,
            comparison_plot(&title, "N", "J/Γ", &groups, n_of, shift, shift_ana),
        )?;
    }
    w.csv("fig2c", &by_d)?;
    w.csv("fig2f", &by_d)?;
    let groups: Vec<(String, Vec<ComparisonRecord>)> = [1, 3]
        .iter()
        .map(|&xi| (format!("ξ={xi}"), select(&by_d, |r| r.xi == xi)))
        .collect();
    w.svg(
        "fig2c",
        comparison_plot("Γ vs k₀d, N = 100", "k₀d", "Γ/Γ₀", &groups, k0d, gamma, gamma_ana).log_y(),
    )?;
    w.svg(
        "fig2f",
        comparison_plot("J vs k₀d, N = 100", "k₀d", "J/Γ", &groups, k0d, shift, shift_ana),
    )
}

fn fig3(w: &mut Writer) -> Result<()> {
    let ns = n_range(20, 400, 1);
    for (d, f_panel, g_panel) in [
        (0.01, "fig3a", "fig3d"),
        (0.02, "fig3b", "fig3e"),
        (0.03, "fig3c", "fig3f"),
    ] {
        let rows = prefactor_rows(&ns, d, 0.1, 1)?;
        w.csv(f_panel, &rows)?;
        w.csv(g_panel, &rows)?;
        let pts = |f: fn(&PrefactorRow) -> f64| rows.iter().map(|r| (r.n as f64, f(r))).collect::<Vec<_>>();
        let plot = Plot::new(format!("F prefactor, d = {d}λ"), "N", "F")
            .with(Series::new("analytic", pts(|r| r.f_analytic), Style::Line))
            .with(Series::new("discrete", pts(|r| r.f_discrete), Style::Markers));
        w.svg(f_panel, plot)?;
        let plot = Plot::new(format!("Γ_fs, d = {d}λ"), "N", "Γ_fs/Γ")
            .log_log()
            .with(Series::new("analytic", pts(|r| r.gamma_fs_analytic), Style::Line))
            .with(Series::new("discrete", pts(|r| r.gamma_fs_discrete), Style::Markers));
        w.svg(g_panel, plot)?;
    }
    Ok(())
}

fn fig4(w: &mut Writer, opts: &FigureOptions) -> Result<()> {
    let mut spec = SweepSpec::new(n_range(40, 200, 1), vec![0.02], vec![0.1], vec![1, 3]);
    spec.eig_tol = opts.eig_tol;
    let recs = run_sweep(&spec, opts.workers)?;
    for (xi, panel) in [(1, "fig4a"), (3, "fig4b")] {
        let rows = select(&recs, |r| r.xi == xi);
        w.csv(panel, &rows)?;
        let plot = Plot::new(format!("Γ_{xi}, d = 0.02λ, γ = 0.1Γ"), "N", "Γ/Γ₀")
            .log_log()
            .with(series(&rows, "Γ_1D".into(), n_of, |r| r.gamma_ana_1d, Style::Line))
            .with(series(&rows, "Γ_fs".into(), n_of, |r| r.gamma_ana_fs, Style::Line))
            .with(series(&rows, "total".into(), n_of, |r| r.gamma_ana_total, Style::Line))
            .with(series(&rows, "numeric".into(), n_of, |r| r.gamma_num, Style::Markers));
        w.svg(panel, plot)?;
    }
    Ok(())
}

/// Window of the fig5(c) fits.
pub const FIG5_FIT_WINDOW: (f64, f64) = (60.0, 300.0);

fn fig5(w: &mut Writer, opts: &FigureOptions) -> Result<()> {
    let mut spec = SweepSpec::new(n_range(20, 300, 10), vec![0.02], vec![0.1], vec![1, 3]);
    spec.eig_tol = opts.eig_tol;
    let by_n = run_sweep(&spec, opts.workers)?;
    let mut spec = SweepSpec::new(vec![100], spacings_for_k0d(0.05, 1.0, 0.05), vec![0.1], vec![1, 3]);
    spec.eig_tol = opts.eig_tol;
    let by_d = run_sweep(&spec, opts.workers)?;

    w.csv("fig5a", &by_n)?;
    let groups: Vec<(String, Vec<ComparisonRecord>)> = [1, 3]
        .iter()
        .map(|&xi| (format!("ξ={xi}"), select(&by_n, |r| r.xi == xi)))
        .collect();
    w.svg(
        "fig5a",
        comparison_plot(
            "J vs N, d = 0.02λ, γ = 0.1Γ",
            "N",
            "J/Γ",
            &groups,
            n_of,
            |r| r.j_num,
            |r| r.j_ana_total,
        ),
    )?;

    w.csv("fig5b", &by_d)?;
    let groups: Vec<(String, Vec<ComparisonRecord>)> = [1, 3]
        .iter()
        .map(|&xi| (format!("ξ={xi}"), select(&by_d, |r| r.xi == xi)))
        .collect();
    let mut plot = Plot::new("J vs k₀d, N = 100, γ = 0.1Γ", "k₀d", "J/Γ").with(series(
        &groups[0].1,
        "J∞".into(),
        k0d,
        |r| r.j_infty,
        Style::Line,
    ));
    for (label, rows) in &groups {
        plot = plot.with(series(
            rows,
            format!("{label} numeric"),
            k0d,
            |r| r.j_num,
            Style::Markers,
        ));
    }
    w.svg("fig5b", plot)?;

    let window_rows: Vec<ComparisonRecord> = select(&by_n, |r| {
        (r.n as f64) >= FIG5_FIT_WINDOW.0 && (r.n as f64) <= FIG5_FIT_WINDOW.1
    });
    let dev = deviation_rows(&window_rows)?;
    w.csv("fig5c", &dev)?;
    w.csv("fig5c_fit", &deviation_fits(&dev, FIG5_FIT_WINDOW))?;
    let mut plot = Plot::new("J − J∞ vs N, d = 0.02λ, γ = 0.1Γ", "N", "(J − J∞)/Γ").log_log();
    for xi in [1, 3] {
        let rows: Vec<&DeviationRow> = dev.iter().filter(|r| r.xi == xi).collect();
        let pts = |f: fn(&DeviationRow) -> f64| rows.iter().map(|r| (r.n as f64, f(r))).collect::<Vec<_>>();
        plot = plot
            .with(Series::new(
                format!("ξ={xi} π²ξ²C/(N+1)²"),
                pts(|r| r.deviation_ana),
                Style::Line,
            ))
            .with(Series::new(
                format!("ξ={xi} numeric"),
                pts(|r| r.deviation_num_lattice),
                Style::Markers,
            ));
    }
    w.svg("fig5c", plot)
}

/// Write the panel CSVs and SVGs of one figure into `outdir`.
pub fn reproduce_figure(id: FigureId, outdir: &Path, opts: &FigureOptions) -> Result<FigureOutput> {
    std::fs::create_dir_all(outdir).map_err(|e| Error::io(outdir, e))?;
    let mut w = Writer {
        dir: outdir,
        files: Vec::new(),
    };
    match id {
        FigureId::Fig2 => fig2(&mut w, opts)?,
        FigureId::Fig3 => fig3(&mut w)?,
        FigureId::Fig4 => fig4(&mut w, opts)?,
        FigureId::Fig5 => fig5(&mut w, opts)?,
    }
    Ok(FigureOutput { files: w.files })
}
