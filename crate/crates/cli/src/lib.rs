//! Scenario-driven harness around the witness machinery: scenario parsing,
//! suite execution with certificate output, and file round-tripping.

pub mod scenario;
pub mod suites;

pub use scenario::{parse_scenario, CliError, Scenario, SuiteName};
pub use suites::{roundtrip, run, CertStore, Report, SuiteOutcome, TrialRecord};
