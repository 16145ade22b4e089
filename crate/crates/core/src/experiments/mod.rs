//! Parameter sweeps, comparison tables, power-law fits and figure pipelines.

pub mod figures;
pub mod fit;
pub mod summary;
pub mod svg;
pub mod sweep;

pub use figures::{
    deviation_fits, deviation_rows, reproduce_figure, DeviationFit, DeviationRow, FigureId, FigureOptions,
    FigureOutput, PrefactorRow,
};
pub use fit::{fit_parity_aware, fit_power_law, parity_averaged, ParityFits, PowerLawFit};
pub use summary::{benchmark_compare, BenchmarkSummary, GroupSummary};
pub use sweep::{
    compare_branches, read_csv, run_sweep, write_csv, write_json, ComparisonRecord, SweepSpec, CSV_HEADER,
};
