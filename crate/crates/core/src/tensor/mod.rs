//! Dense complex linear algebra on multipartite Hilbert spaces.

pub(crate) mod index;
pub mod linalg;
mod operator;
mod schmidt;
mod state;

pub use operator::{gates, Operator};
pub use schmidt::{
    entanglement_entropy, schmidt, schmidt_measure_bounds, schmidt_rank, shannon_bits,
    von_neumann_entropy, Bipartition, SchmidtData,
};
pub use state::StateVector;

use crate::scalar::Real;

/// Tensor product of two values of the same kind, left factor most significant.
pub trait Kron {
    fn kron(&self, other: &Self) -> Self;
}

impl<T: Real> Kron for StateVector<T> {
    fn kron(&self, other: &Self) -> Self {
        StateVector::kron(self, other)
    }
}

impl<T: Real> Kron for Operator<T> {
    fn kron(&self, other: &Self) -> Self {
        Operator::kron(self, other)
    }
}

pub fn kron<K: Kron>(a: &K, b: &K) -> K {
    a.kron(b)
}

/// Tensor product of a non-empty list of factors.
pub fn kron_all<K: Kron + Clone>(factors: &[K]) -> Option<K> {
    let (first, rest) = factors.split_first()?;
    Some(rest.iter().fold(first.clone(), |acc, f| acc.kron(f)))
}
