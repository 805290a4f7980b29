//! File formats, experiment configs, CSV records and the scripted experiments.

mod config;
mod dimacs;
mod experiment;
mod record;

pub use config::{Density, ExperimentConfig, ExperimentKind, GridPoint, SCHEMA_VERSION};
pub use dimacs::{dimacs_read, dimacs_write, model_line, DimacsInstance};
pub use experiment::{
    instance_stream, run_experiment, run_experiment_csv, with_workers, WORKERS_ENV,
};
pub use record::{read_csv, reproducibility_header, write_csv, ExperimentRecord, COLUMNS};
