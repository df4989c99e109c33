//! Configuration-driven experiments with reproducible on-disk records.
//!
//! A run is a pure function of its [`config::ExperimentConfig`], seed
//! included. Reports land as JSONL records whose payload bytes are
//! deterministic, plus CSV sidecars for plotting.

pub mod config;
pub mod experiments;
pub mod presets;
pub mod record;
pub mod selftest;

pub use config::{ExperimentConfig, ExperimentKind, HamiltonianSource, TimeGrid};
pub use experiments::{
    parse_initial_state, persist_report, qudit_table, run_dimension_scan, run_experiment,
    run_family, run_entangling, EntanglingReport, ExperimentReport, FamilyReport,
    QuditTableRow, ScanReport, TransformOutcome, ENTANGLING_RESIDUAL,
};
pub use presets::{preset_factor_dims, preset_matrix};
pub use record::{read_payload_strings, RunWriter};
pub use selftest::{run_selftests, SelftestResult};
