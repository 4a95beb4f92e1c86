//! Seeded sweeps over every scalar and operator check, with summaries that
//! can be written as JSON or CSV.

pub mod ensemble;
pub mod report;
pub mod suite;

pub use ensemble::{gen_instance, gen_matrix, Ensemble, Instance, InstanceKind};
pub use report::{read_csv_report, read_report, write_report, CsvRow, CheckSummary, ReportFormat, SlackBin, SuiteSummary};
pub use suite::{run_suite, summarize, trial_stream, CheckInfo, Outcome, Suite, SweepConfig, TrialReport, CHECKS};
