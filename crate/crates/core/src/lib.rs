//! Quantum state discrimination by local operations and classical
//! communication, optionally assisted by a shared entangled resource.
//!
//! The numeric core is generic over the real scalar ([`Real`], implemented
//! for `f32` and `f64`); the `*64` aliases below fix it to `f64`, which is
//! what the tolerances in the tests and the CLI assume.

pub mod error;
pub mod scalar;
pub mod families;
pub mod fidelity;
pub mod locc;
pub mod oneway;
pub mod zoo;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::{Real, C};
pub use tensor::{Bipartition, Kron, Operator, SchmidtData, StateVector};

pub type StateVector64 = StateVector<f64>;
pub type Operator64 = Operator<f64>;
pub type Ensemble64 = families::Ensemble<f64>;
pub type Povm64 = fidelity::Povm<f64>;
pub type GuessStrategy64 = fidelity::GuessStrategy<f64>;
pub type Instrument64 = locc::Instrument<f64>;
pub type ProtocolTree64 = locc::ProtocolTree<f64>;
pub type JointProblem64 = locc::JointProblem<f64>;
pub type MatrixRep64 = oneway::MatrixRep<f64>;
pub type ResourceSpectrum64 = oneway::ResourceSpectrum<f64>;
