//! Experiment orchestration: verification suites, sweeps and reports.

pub mod bounds;
pub mod config;
pub mod suite;

pub use bounds::{phi, BoundsParams};
pub use config::{ExperimentConfig, GridPoint, OutputPaths, Suite};
pub use suite::{
    bundle_from_json, bundle_to_csv, bundle_to_json, construction_records, emit_report, grid_set, random_subset,
    records_from_csv, run_verification_suite, sweep, write_sweep_csv, CheckRecord, ReportBundle, ReportFormat, SweepRow,
};
