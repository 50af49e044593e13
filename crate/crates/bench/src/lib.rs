//! Experiment harness for the `nsopt` solvers: run configs, first-hit
//! iteration counts, table reproduction, reports and trace files.

pub mod error;
pub mod experiment;
pub mod methods;
pub mod report;
pub mod tables;

pub use error::{BenchError, Result};
pub use experiment::{
    read_trace, run_experiment, write_trace, Experiment, ExperimentConfig, TableEntry, TableRow,
};
pub use methods::Method;
pub use report::{emit_report, parse_csv_report, Format, ReportLine};
pub use tables::{reproduce_table, ReproducedRow, Table};
