//! Per-group error statistics over sweep records.

use serde::{Deserialize, Serialize};

use super::sweep::ComparisonRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub d_over_lambda: f64,
    pub gamma_over_gamma: f64,
    pub xi: usize,
    /// Rows inside the regime of their closed forms.
    pub gated_rows: usize,
    pub flagged_rows: usize,
    pub failed_rows: usize,
    pub largest_n: Option<usize>,
    pub gamma_error_at_largest_n: Option<f64>,
    pub deviation_error_at_largest_n: Option<f64>,
    pub gamma_error_max: Option<f64>,
    pub gamma_error_median: Option<f64>,
    pub deviation_error_max: Option<f64>,
    pub deviation_error_median: Option<f64>,
    pub max_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSummary {
    pub groups: Vec<GroupSummary>,
    pub flagged_rows: usize,
    pub failed_rows: usize,
}

impl BenchmarkSummary {
    pub fn max_residual(&self) -> Option<f64> {
        self.groups.iter().filter_map(|g| g.max_residual).reduce(f64::max)
    }
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    })
}

fn max_of(values: &[f64]) -> Option<f64> {
    values.iter().copied().reduce(f64::max)
}

/// Group by (d, γ, ξ); rows outside their regime or without results are
/// counted but kept out of the error statistics.
pub fn benchmark_compare(records: &[ComparisonRecord]) -> Result<BenchmarkSummary> {
    if records.is_empty() {
        return Err(Error::argument("records", "nothing to summarize"));
    }
    let mut keys: Vec<(f64, f64, usize)> = records
        .iter()
        .map(|r| (r.d_over_lambda, r.gamma_over_gamma, r.xi))
        .collect();
    keys.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    keys.dedup();

    let mut groups = Vec::with_capacity(keys.len());
    for (d, g, xi) in keys {
        let rows: Vec<&ComparisonRecord> = records
            .iter()
            .filter(|r| r.d_over_lambda == d && r.gamma_over_gamma == g && r.xi == xi)
            .collect();
        let failed = rows.iter().filter(|r| r.failed()).count();
        let gated: Vec<&ComparisonRecord> = rows
            .iter()
            .copied()
            .filter(|r| !r.failed() && r.in_regime() && r.gamma_relative_error().is_some())
            .collect();
        let flagged = rows.len() - failed - gated.len();
        let mut gamma_err: Vec<f64> = gated.iter().filter_map(|r| r.gamma_relative_error()).collect();
        let mut dev_err: Vec<f64> = gated.iter().filter_map(|r| r.deviation_relative_error()).collect();
        let last = gated.iter().max_by_key(|r| r.n);
        groups.push(GroupSummary {
            d_over_lambda: d,
            gamma_over_gamma: g,
            xi,
            gated_rows: gated.len(),
            flagged_rows: flagged,
            failed_rows: failed,
            largest_n: last.map(|r| r.n),
            gamma_error_at_largest_n: last.and_then(|r| r.gamma_relative_error()),
            deviation_error_at_largest_n: last.and_then(|r| r.deviation_relative_error()),
            gamma_error_max: max_of(&gamma_err),
            gamma_error_median: median(&mut gamma_err),
            deviation_error_max: max_of(&dev_err),
            deviation_error_median: median(&mut dev_err),
            max_residual: max_of(&rows.iter().filter_map(|r| r.residual).collect::<Vec<_>>()),
        });
    }
    Ok(BenchmarkSummary {
        flagged_rows: groups.iter().map(|g| g.flagged_rows).sum(),
        failed_rows: groups.iter().map(|g| g.failed_rows).sum(),
        groups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::sweep::{run_sweep, SweepSpec};

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&mut []), None);
    }

    #[test]
    fn ideal_groups_converge() {
        let spec = SweepSpec::new(vec![50, 100, 200], vec![0.02, 0.1, 0.25], vec![0.0], vec![1]);
        let recs = run_sweep(&spec, 0).unwrap();
        let s = benchmark_compare(&recs).unwrap();
        assert_eq!(s.groups.len(), 3);
        let mut at_200: Vec<f64> = s.groups.iter().map(|g| g.gamma_error_at_largest_n.unwrap()).collect();
        assert!(median(&mut at_200).unwrap() < 0.05);
        assert!(s.max_residual().unwrap() < 1e-9);
        assert_eq!(s.failed_rows, 0);
    }

    #[test]
    fn flagged_rows_are_excluded() {
        let spec = SweepSpec::new(vec![20], vec![0.1], vec![0.0], vec![1, 3]);
        let recs = run_sweep(&spec, 1).unwrap();
        let s = benchmark_compare(&recs).unwrap();
        let g3 = s.groups.iter().find(|g| g.xi == 3).unwrap();
        assert_eq!((g3.gated_rows, g3.flagged_rows), (0, 1));
        assert!(g3.gamma_error_max.is_none());
        assert_eq!(s.flagged_rows, 1);
        assert!(benchmark_compare(&[]).is_err());
    }
}
