//! The laboratory harness: experiment configs, the pipeline registry,
//! reports, golden-file regression and deterministic sweeps.

pub mod config;
pub mod experiments;
pub mod golden;
pub mod registry;
pub mod report;

pub use config::ExperimentConfig;
pub use golden::{compare_golden, GoldenReport, GoldenVerdict};
pub use registry::{Experiment, Registry};
pub use report::ExperimentReport;
