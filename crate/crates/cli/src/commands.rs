//! One function per subcommand. Each takes a validated [`RunConfig`] and
//! delegates the numerics to `subradiance_core`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use subradiance_core::experiments::{
    benchmark_compare, compare_branches, fit_parity_aware, fit_power_law, parity_averaged, read_csv, reproduce_figure,
    run_sweep, write_csv, write_json, ComparisonRecord, FigureId, FigureOptions, PowerLawFit, SweepSpec,
};
use subradiance_core::spectrum::solve;
use subradiance_core::verify::{all_passed, run_identity_suite, CheckResult, VerifyOptions};
use subradiance_core::ChainParams;

use crate::config::{Format, RunConfig};
use crate::manifest::RunManifest;
use crate::CliError;

/// One eigenpair of a `spectrum` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeRow {
    pub index: usize,
    pub eigenvalue_re: f64,
    pub eigenvalue_im: f64,
    #[serde(rename = "Gamma")]
    pub linewidth: f64,
    #[serde(rename = "J")]
    pub shift: f64,
    pub xi: Option<usize>,
    pub overlap: f64,
    pub low_overlap: bool,
    pub residual: f64,
}

/// One power-law fit of a `fit` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub d_over_lambda: f64,
    #[serde(rename = "gamma_over_Gamma")]
    pub gamma_over_gamma: f64,
    pub xi: usize,
    pub column: String,
    /// `all`, `even`, `odd` or `averaged`.
    pub variant: String,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub r_squared: Option<f64>,
    pub points: usize,
}

/// Write `rows` as `<stem>.csv` or `<stem>.json` under `dir`.
pub fn emit<T: Serialize>(dir: &Path, stem: &str, format: Format, rows: &[T]) -> Result<PathBuf, CliError> {
    let path = match format {
        Format::Csv => dir.join(format!("{stem}.csv")),
        Format::Json => dir.join(format!("{stem}.json")),
    };
    match format {
        Format::Csv => write_csv(&path, rows)?,
        Format::Json => write_json(&path, &rows)?,
    }
    Ok(path)
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })
}

fn finish(mut manifest: RunManifest, dir: &Path, files: Vec<PathBuf>) -> Result<(), CliError> {
    for f in &files {
        println!("wrote {}", f.display());
    }
    manifest.files = files;
    let path = manifest.write(dir)?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn spectrum(cfg: &RunConfig, mut manifest: RunManifest) -> Result<(), CliError> {
    let g = &cfg.grid;
    let xi_max = g.xi.iter().copied().max().unwrap_or(1);
    let params = ChainParams::new(g.n[0], g.d[0], g.gamma[0], xi_max)?;
    let result = manifest.stage("solve", || solve(&params, cfg.eig_tol))?;
    let records = manifest.stage("compare", || compare_branches(&params, Ok(&result), &g.xi, None));
    let modes: Vec<ModeRow> = result
        .modes
        .iter()
        .enumerate()
        .map(|(index, m)| ModeRow {
            index,
            eigenvalue_re: m.eigenvalue.re,
            eigenvalue_im: m.eigenvalue.im,
            linewidth: m.linewidth,
            shift: m.shift,
            xi: m.branch,
            overlap: m.overlap,
            low_overlap: m.low_confidence,
            residual: m.residual,
        })
        .collect();
    create_dir(&cfg.out_dir)?;
    let files = manifest.stage("write", || -> Result<_, CliError> {
        Ok(vec![
            emit(&cfg.out_dir, "modes", cfg.format, &modes)?,
            emit(&cfg.out_dir, "records", cfg.format, &records)?,
        ])
    })?;
    finish(manifest, &cfg.out_dir, files)
}

pub fn sweep(cfg: &RunConfig, mut manifest: RunManifest) -> Result<(), CliError> {
    let g = &cfg.grid;
    let mut spec = SweepSpec::new(g.n.clone(), g.d.clone(), g.gamma.clone(), g.xi.clone());
    spec.eig_tol = cfg.eig_tol;
    let records = manifest.stage("sweep", || run_sweep(&spec, cfg.workers))?;
    let summary = manifest.stage("summarize", || benchmark_compare(&records))?;
    if summary.failed_rows > 0 {
        log::warn!(
            "{} of {} rows failed; see their flags column",
            summary.failed_rows,
            records.len()
        );
    }
    create_dir(&cfg.out_dir)?;
    let files = manifest.stage("write", || -> Result<_, CliError> {
        let summary_path = cfg.out_dir.join("summary.json");
        write_json(&summary_path, &summary)?;
        Ok(vec![emit(&cfg.out_dir, "records", cfg.format, &records)?, summary_path])
    })?;
    finish(manifest, &cfg.out_dir, files)
}

pub fn figure(cfg: &RunConfig, id: FigureId, mut manifest: RunManifest) -> Result<(), CliError> {
    let opts = FigureOptions {
        workers: cfg.workers,
        eig_tol: cfg.eig_tol,
    };
    let out = manifest.stage(&id.to_string(), || reproduce_figure(id, &cfg.out_dir, &opts))?;
    finish(manifest, &cfg.out_dir, out.files)
}

fn observable(r: &ComparisonRecord, column: &str) -> Option<f64> {
    match column {
        "Gamma_num" => r.gamma_num,
        "Gamma_ana_total" => r.gamma_ana_total,
        "Gamma_ana_1d" => r.gamma_ana_1d,
        "Gamma_ana_fs" => r.gamma_ana_fs,
        "J_deviation" => Some((r.j_num? - r.j_infty?).abs()),
        "Gamma_rel_error" => r.gamma_relative_error(),
        _ => None,
    }
}

/// Power-law fits of one observable against N, per (d, γ, ξ) group.
pub fn fit_records(records: &[ComparisonRecord], column: &str, window: (f64, f64)) -> Vec<FitRow> {
    let mut groups: BTreeMap<(u64, u64, usize), Vec<(usize, f64)>> = BTreeMap::new();
    for r in records.iter().filter(|r| !r.failed()) {
        if let Some(v) = observable(r, column) {
            let key = (r.d_over_lambda.to_bits(), r.gamma_over_gamma.to_bits(), r.xi);
            groups.entry(key).or_default().push((r.n, v));
        }
    }
    let mut rows = Vec::new();
    for ((d, g, xi), points) in groups {
        let (d, g) = (f64::from_bits(d), f64::from_bits(g));
        let all: Vec<(f64, f64)> = points.iter().map(|&(n, v)| (n as f64, v)).collect();
        let parity = fit_parity_aware(&points, window);
        let count = |pts: &[(f64, f64)]| pts.iter().filter(|p| p.0 >= window.0 && p.0 <= window.1).count();
        let averaged = parity_averaged(&points);
        let even: Vec<(f64, f64)> = all
            .iter()
            .copied()
            .filter(|p| (p.0 as usize).is_multiple_of(2))
            .collect();
        let odd: Vec<(f64, f64)> = all
            .iter()
            .copied()
            .filter(|p| !(p.0 as usize).is_multiple_of(2))
            .collect();
        let variants: [(&str, Option<PowerLawFit>, usize); 4] = [
            ("all", fit_power_law(&all, window).ok(), count(&all)),
            ("even", parity.even, count(&even)),
            ("odd", parity.odd, count(&odd)),
            ("averaged", parity.averaged, count(&averaged)),
        ];
        for (variant, fit, points) in variants {
            rows.push(FitRow {
                d_over_lambda: d,
                gamma_over_gamma: g,
                xi,
                column: column.into(),
                variant: variant.into(),
                slope: fit.map(|f| f.slope),
                intercept: fit.map(|f| f.intercept),
                r_squared: fit.map(|f| f.r_squared),
                points: fit.map_or(points, |f| f.points),
            });
        }
    }
    rows.sort_by(|a, b| {
        a.d_over_lambda
            .total_cmp(&b.d_over_lambda)
            .then(a.gamma_over_gamma.total_cmp(&b.gamma_over_gamma))
            .then(a.xi.cmp(&b.xi))
    });
    rows
}

pub fn fit(cfg: &RunConfig, mut manifest: RunManifest) -> Result<(), CliError> {
    let input = cfg.fit.input.as_ref().expect("resolve requires fit.input");
    let records: Vec<ComparisonRecord> = manifest.stage("read", || read_csv(input))?;
    let rows = manifest.stage("fit", || fit_records(&records, &cfg.fit.column, cfg.fit.window));
    if rows.is_empty() {
        log::warn!("no usable `{}` values in {}", cfg.fit.column, input.display());
    }
    create_dir(&cfg.out_dir)?;
    let file = manifest.stage("write", || emit(&cfg.out_dir, "fits", cfg.format, &rows))?;
    finish(manifest, &cfg.out_dir, vec![file])
}

/// Run the identity suite, print a table to `out`, and return the exit code.
pub fn verify_command(opts: &VerifyOptions, out: &mut dyn Write) -> i32 {
    let results = run_identity_suite(opts);
    match print_table(&results, out) {
        Ok(()) if all_passed(&results) => crate::EXIT_OK,
        Ok(()) => crate::EXIT_VERIFY,
        Err(_) => crate::EXIT_IO,
    }
}

fn print_table(results: &[CheckResult], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<20} {:<6} {:>11} {:>11}  detail",
        "check", "result", "max_error", "tolerance"
    )?;
    for r in results {
        writeln!(
            out,
            "{:<20} {:<6} {:>11.3e} {:>11.3e}  {}",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.max_error,
            r.tolerance,
            r.detail
        )?;
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
    if failed.is_empty() {
        writeln!(out, "all {} checks passed", results.len())
    } else {
        writeln!(out, "FAILED: {}", failed.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(n: usize, xi: usize, gamma: f64) -> ComparisonRecord {
        ComparisonRecord {
            n,
            d_over_lambda: 0.02,
            gamma_over_gamma: 0.0,
            xi,
            parity: if (n + xi).is_multiple_of(2) { 1 } else { -1 },
            gamma_num: Some(gamma),
            gamma_ana_total: None,
            gamma_ana_1d: None,
            gamma_ana_fs: None,
            j_num: None,
            j_ana_total: None,
            j_infty: None,
            c_d: None,
            overlap: Some(1.0),
            residual: Some(0.0),
            flags: "ideal|deep|small".into(),
        }
    }

    #[test]
    fn fits_recover_a_cubic_law() {
        let records: Vec<_> = (20..60).map(|n| rec(n, 1, 5.0 * (n as f64).powi(-3))).collect();
        let rows = fit_records(&records, "Gamma_num", (1.0, 1e9));
        assert_eq!(rows.len(), 4);
        for r in &rows {
            // averaging neighbours bends a pure power law slightly
            let tol = if r.variant == "averaged" { 1e-2 } else { 1e-9 };
            assert!((r.slope.unwrap() + 3.0).abs() < tol, "{r:?}");
        }
        assert_eq!(rows[0].variant, "all");
        assert_eq!(rows[0].points, 40);
    }

    #[test]
    fn groups_are_split_by_branch() {
        let mut records: Vec<_> = (20..30).map(|n| rec(n, 1, (n as f64).powi(-3))).collect();
        records.extend((20..30).map(|n| rec(n, 2, (n as f64).powi(-2))));
        let rows = fit_records(&records, "Gamma_num", (1.0, 1e9));
        let all: Vec<_> = rows.iter().filter(|r| r.variant == "all").collect();
        assert_eq!(all.len(), 2);
        assert!((all[1].slope.unwrap() + 2.0).abs() < 1e-9);
    }

    #[test]
    fn missing_values_are_skipped() {
        let records: Vec<_> = (20..30).map(|n| rec(n, 1, 1.0)).collect();
        assert!(fit_records(&records, "J_deviation", (1.0, 1e9)).is_empty());
    }

    #[test]
    fn verify_table_names_every_check() {
        let mut buf = Vec::new();
        let opts = VerifyOptions {
            quick: true,
            ..Default::default()
        };
        assert_eq!(verify_command(&opts, &mut buf), 0);
        let text = String::from_utf8(buf).unwrap();
        for name in [
            "kernel_reciprocity",
            "angular_identity",
            "autocorrelation",
            "alternating_series",
            "eigen_sum_rule",
        ] {
            assert!(text.contains(name), "{text}");
        }
        assert!(text.contains("all 5 checks passed"));
    }
}
