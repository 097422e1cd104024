use serde::{Deserialize, Serialize};

use super::linalg;
use super::operator::Operator;
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Split of subsystem indices into two non-empty sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bipartition {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl Bipartition {
    pub fn new(a: Vec<usize>, b: Vec<usize>) -> Self {
        Self { a, b }
    }

    /// `a` against every other subsystem of an `n`-subsystem space.
    pub fn against_rest(a: Vec<usize>, n: usize) -> Self {
        let b = (0..n).filter(|k| !a.contains(k)).collect();
        Self { a, b }
    }

    pub fn swapped(&self) -> Self {
        Self {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.a.is_empty() || self.b.is_empty() {
            return Err(Error::InvalidBipartition("empty side".into()));
        }
        let mut all: Vec<usize> = self.a.iter().chain(&self.b).copied().collect();
        all.sort_unstable();
        if all != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidBipartition(format!(
                "{:?}|{:?} does not partition 0..{n}",
                self.a, self.b
            )));
        }
        Ok(())
    }

    /// Every unordered bipartition of `n` subsystems (side `a` holds 0).
    pub fn all(n: usize) -> Vec<Self> {
        if n < 2 {
            return Vec::new();
        }
        (1usize..(1 << (n - 1)))
            .map(|mask| {
                // subsystem 0 always on side a; mask chooses members of b among 1..n
                let b: Vec<usize> = (1..n).filter(|k| mask >> (k - 1) & 1 == 1).collect();
                Self::against_rest(b, n).swapped()
            })
            .collect()
    }
}

/// Schmidt decomposition of a bipartite pure state.
#[derive(Debug, Clone)]
pub struct SchmidtData<T: Real> {
    /// Descending non-negative coefficients, `min(dim_a, dim_b)` of them.
    pub coefficients: Vec<T>,
    /// Orthonormal states on side `a`, one per nonzero coefficient.
    pub left_vectors: Vec<StateVector<T>>,
    /// Orthonormal states on side `b`, one per nonzero coefficient.
    pub right_vectors: Vec<StateVector<T>>,
    pub rank: usize,
}

impl<T: Real> SchmidtData<T> {
    /// Largest squared coefficient.
    pub fn max_weight(&self) -> T {
        self.coefficients.first().map(|c| *c * *c).unwrap_or_else(T::zero)
    }

    /// Squared coefficients (the spectrum of either marginal).
    pub fn weights(&self) -> Vec<T> {
        self.coefficients.iter().map(|c| *c * *c).collect()
    }

    /// `sum_k c_k |u_k>|v_k>` in the subsystem order `a ++ b`.
    pub fn reconstruct(&self) -> Vec<C<T>> {
        let rows = self.left_vectors.first().map(|v| v.dim()).unwrap_or(0);
        let cols = self.right_vectors.first().map(|v| v.dim()).unwrap_or(0);
        let mut out = vec![C::new(T::zero(), T::zero()); rows * cols];
        for k in 0..self.rank {
            let s = self.coefficients[k];
            for (i, u) in self.left_vectors[k].amps().iter().enumerate() {
                for (j, v) in self.right_vectors[k].amps().iter().enumerate() {
                    out[i * cols + j] += *u * *v * s;
                }
            }
        }
        out
    }
}

/// Schmidt decomposition across `bp` via the SVD of the amplitude matrix.
pub fn schmidt<T: Real>(psi: &StateVector<T>, bp: &Bipartition) -> Result<SchmidtData<T>> {
    bp.validate(psi.num_subsystems())?;
    let (rows, cols, m) = psi.bipartite_matrix(&bp.a, &bp.b)?;
    let s = linalg::svd(rows, cols, &m);
    let rank = s.values.iter().filter(|&&v| v > T::tolerance()).count();
    let adims: Vec<usize> = bp.a.iter().map(|&i| psi.dims()[i]).collect();
    let bdims: Vec<usize> = bp.b.iter().map(|&i| psi.dims()[i]).collect();
    let mut left = Vec::with_capacity(rank);
    let mut right = Vec::with_capacity(rank);
    for k in 0..rank {
        left.push(StateVector::from_unnormalized(adims.clone(), s.left[k].clone())?);
        // psi = sum s_k u_k conj(v_k) where v_k is the right singular vector.
        let rv = s.right[k].iter().map(|z| z.conj()).collect();
        right.push(StateVector::from_unnormalized(bdims.clone(), rv)?);
    }
    Ok(SchmidtData {
        coefficients: s.values,
        left_vectors: left,
        right_vectors: right,
        rank,
    })
}

/// Shannon entropy (base 2) of a probability vector; `0 log 0 = 0`.
pub fn shannon_bits<T: Real>(p: impl IntoIterator<Item = T>) -> T {
    p.into_iter()
        .filter(|&x| x > T::zero())
        .map(|x| -x * x.log2())
        .sum::<T>()
        .max(T::zero())
}

/// Entanglement entropy in ebits across `bp`.
pub fn entanglement_entropy<T: Real>(psi: &StateVector<T>, bp: &Bipartition) -> Result<T> {
    Ok(shannon_bits(schmidt(psi, bp)?.weights()))
}

/// Von Neumann entropy (base 2) of a density operator.
pub fn von_neumann_entropy<T: Real>(rho: &Operator<T>) -> T {
    shannon_bits(rho.eigh().values)
}

/// Bracket on the Schmidt measure: the largest `log2` Schmidt rank over all
/// bipartitions of the subsystems, and `log2` of the number of product terms
/// in a known expansion.
pub fn schmidt_measure_bounds<T: Real>(psi: &StateVector<T>, decomposition_terms: usize) -> Result<(T, T)> {
    if decomposition_terms == 0 {
        return Err(Error::ParameterOutOfRange("decomposition_terms must be >= 1".into()));
    }
    let mut lower = T::zero();
    for bp in Bipartition::all(psi.num_subsystems()) {
        let r = schmidt(psi, &bp)?.rank;
        lower = lower.max(T::from_usize_lossy(r).log2());
    }
    let upper = T::from_usize_lossy(decomposition_terms).log2();
    Ok((lower, upper))
}

/// Numerical rank of the amplitude matrix across `bp`.
pub fn schmidt_rank<T: Real>(psi: &StateVector<T>, bp: &Bipartition) -> Result<usize> {
    Ok(schmidt(psi, bp)?.rank)
}
