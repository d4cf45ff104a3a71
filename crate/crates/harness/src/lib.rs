//! Experiment driver and verification harness over the protocol library:
//! seeded Monte Carlo estimation with exact reference values, exhaustive
//! verification suites, and machine-readable reports.

pub mod checks;
pub mod experiment;
pub mod quadrature;
pub mod report;

pub use checks::{run_suite, CheckResult, Suite, CHECKS};
pub use experiment::{run_experiment, ExperimentConfig, InputSpec, Params, ProtocolKind, REGISTRY};
pub use report::{EstimateRow, Report, ReportHeader, SeedSource};
