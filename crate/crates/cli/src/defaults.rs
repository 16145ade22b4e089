//! The one table of run defaults. Every value is parsed by the same code as a
//! config file, and the table is rendered into `--help`.

use subradiance_core::spectrum::DEFAULT_EIG_TOL;

pub struct DefaultEntry {
    pub key: &'static str,
    pub value: String,
    pub doc: &'static str,
}

fn entry(key: &'static str, value: impl ToString, doc: &'static str) -> DefaultEntry {
    DefaultEntry {
        key,
        value: value.to_string(),
        doc,
    }
}

pub fn defaults() -> Vec<DefaultEntry> {
    vec![
        entry("chain.d", "0.02", "atom spacing d/λ"),
        entry("chain.gamma", "0.1", "free-space decay rate γ/Γ"),
        entry("chain.xi", "1", "Bragg-edge branch indices"),
        entry(
            "solver.eig_tol",
            format!("{DEFAULT_EIG_TOL:e}"),
            "eigenpair residual bound relative to ‖H‖_F",
        ),
        entry(
            "solver.workers",
            "0",
            "worker threads (0: all cores); SUBRADIANCE_WORKERS overrides this default",
        ),
        entry("output.dir", "results", "output directory"),
        entry("output.format", "csv", "record format, csv or json"),
        entry("fit.column", "Gamma_num", "observable to fit against N"),
        entry("fit.window", "1:1e9", "inclusive N window lo:hi"),
    ]
}

pub fn help_table() -> String {
    let mut s = String::from("Defaults (config key = value):\n");
    for e in defaults() {
        s.push_str(&format!("  {:<16} {:<10} {}\n", e.key, e.value, e.doc));
    }
    s.push_str("Required: chain.n for spectrum and sweep, fit.input for fit.\n");
    s
}
