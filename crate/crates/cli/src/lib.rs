//! Reports, sweeps and table checks behind the `s4` binary.

pub mod checks;
pub mod report;
pub mod sweep;

pub use checks::{tables, witness, TableReport, WitnessReport};
pub use report::{compute, render, CliError, FieldOutcome, FieldReport, PrimeReport};
pub use sweep::{canonical_pairs, sweep, write_csv, write_json_lines, SweepRun, SweepSummary};
