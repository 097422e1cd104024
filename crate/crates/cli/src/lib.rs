//! Scenario parsing, execution and reporting for the `locce` binary.

pub mod emit;
pub mod error;
pub mod run;
pub mod scenario;
pub mod suite;

pub use emit::{emit, Cell, Format, Row, Status};
pub use error::CliError;
pub use run::{run_all, run_scenario, validate};
pub use scenario::{parse, Family, Protocol, Scenario, ScenarioFile, Shape};
pub use suite::paper_suite;

/// True iff every row passed.
pub fn all_pass(rows: &[Row]) -> bool {
    rows.iter().all(|r| r.status == Status::Pass)
}
