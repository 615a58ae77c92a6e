//! Experiment harness: exhaustive oracle, experiment specs, runners and CSV output.

pub mod experiments;
pub mod oracle;
pub mod record;
pub mod spec;
pub mod stats;

pub use experiments::{environment_for, matched_ga_config, run_experiment};
pub use oracle::{oracle_exhaustive, oracle_exhaustive_with};
pub use record::{read_csv, read_csv_file, write_csv, write_csv_file, GenerationLabel, ResultRow, CSV_HEADER};
pub use spec::{load_config, parse_config, ExperimentKind, ExperimentSpec};
