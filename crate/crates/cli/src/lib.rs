//! Seeded verification suites over `herr-core`, with JSON, CSV and text reports.

pub mod instance;
pub mod report;
pub mod suite;

pub use instance::Instance;
pub use report::{emit_report, Format, Record, Report, Status};
pub use suite::{gen, run_suite, SuiteConfig, UsageError, SUITES};
