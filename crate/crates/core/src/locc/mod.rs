//! LOCC protocols as measurement trees, resource attachment and exact
//! evaluation by branch enumeration.

mod problem;
mod run;
mod tree;

pub use problem::{attach_resource, JointProblem, Resource};
pub use run::{assign_optimal_guesses, flatten_to_povm, run_protocol, BranchRecord, BranchReport, ProtocolRun};
pub use tree::{validate_one_way, Guess, Instrument, ProtocolTree};
