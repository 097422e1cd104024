//! Matrix picture of bipartite `d x d` ensembles and the one-way
//! orthogonality condition on a resource `(I (x) Lambda^(1/2))|Phi>`.
//!
//! A state corresponds to the matrix `M` with `|psi> = (I (x) M)|Phi>`,
//! `|Phi> = sum_i |ii>/sqrt(d)`. Products `M_i^* M_j` use the adjoint.

mod search;

pub use search::{feasibility_search, feasibility_search_with, FeasibilityReport, RestartOutcome, SearchOptions};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::Ensemble;
use crate::scalar::{cr, czero, Real, C};
use crate::tensor::linalg::{self, matmul};
use crate::tensor::StateVector;

/// `d x d` complex matrix, row-major.
pub type Matrix<T> = Vec<C<T>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct MatrixRep<T: Real> {
    pub d: usize,
    pub matrices: Vec<Matrix<T>>,
}

fn adjoint<T: Real>(d: usize, m: &[C<T>]) -> Matrix<T> {
    let mut out = vec![czero(); d * d];
    for i in 0..d {
        for j in 0..d {
            out[j * d + i] = m[i * d + j].conj();
        }
    }
    out
}

/// `M = sqrt(d) * A^T` where `A[i][j]` is the amplitude of `|i>|j>`.
fn state_to_matrix<T: Real>(d: usize, amps: &[C<T>]) -> Matrix<T> {
    let s = cr(T::from_usize_lossy(d).sqrt());
    let mut m = vec![czero(); d * d];
    for i in 0..d {
        for j in 0..d {
            m[j * d + i] = amps[i * d + j] * s;
        }
    }
    m
}

impl<T: Real> MatrixRep<T> {
    /// Reconstructs `(I (x) M_i)|Phi>` on dims `[d, d]`.
    pub fn reconstruct(&self, i: usize) -> Result<StateVector<T>> {
        let d = self.d;
        let s = cr(T::one() / T::from_usize_lossy(d).sqrt());
        let m = &self.matrices[i];
        let mut amps = vec![czero(); d * d];
        for a in 0..d {
            for b in 0..d {
                amps[a * d + b] = m[b * d + a] * s;
            }
        }
        StateVector::new(vec![d, d], amps)
    }

    /// `M_i^dagger M_j`.
    pub fn product(&self, i: usize, j: usize) -> Matrix<T> {
        let d = self.d;
        matmul(d, d, d, &adjoint(d, &self.matrices[i]), &self.matrices[j])
    }

    /// `(1/d) Tr(M_i^dagger M_j)` for all pairs.
    pub fn trace_gram(&self) -> Vec<Vec<C<T>>> {
        let d = self.d;
        let n = self.matrices.len();
        let inv = cr(T::one() / T::from_usize_lossy(d));
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let p = self.product(i, j);
                        (0..d).map(|k| p[k * d + k]).sum::<C<T>>() * inv
                    })
                    .collect()
            })
            .collect()
    }

    /// Index of the first member whose matrix has full rank.
    pub fn full_rank_member(&self) -> Option<usize> {
        self.matrices
            .iter()
            .position(|m| linalg::rank(self.d, self.d, m) == self.d)
    }

    /// Same representation with member `i` moved to the front.
    pub fn with_first(&self, i: usize) -> Self {
        let mut matrices = self.matrices.clone();
        let m = matrices.remove(i);
        matrices.insert(0, m);
        Self { d: self.d, matrices }
    }
}

/// Matrix representation of a two-party ensemble with equal local dimensions.
pub fn to_matrix_rep<T: Real>(ens: &Ensemble<T>) -> Result<MatrixRep<T>> {
    let layout = ens.layout();
    if layout.len() != 2 {
        return Err(Error::InvalidEnsemble("matrix picture needs two parties".into()));
    }
    let a = &layout.parties()[0].subsystems;
    let b = &layout.parties()[1].subsystems;
    let da: usize = a.iter().map(|&s| ens.dims()[s]).product();
    let db: usize = b.iter().map(|&s| ens.dims()[s]).product();
    if da != db {
        return Err(Error::DimensionMismatch(format!("local dimensions {da} and {db} differ")));
    }
    let matrices = ens
        .states()
        .map(|s| s.bipartite_matrix(a, b).map(|(_, _, m)| state_to_matrix(da, &m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(MatrixRep { d: da, matrices })
}

/// Schmidt spectrum of the resource, normalized to `Tr Lambda = d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ResourceSpectrum<T: Real> {
    lambdas: Vec<T>,
}

impl<T: Real> ResourceSpectrum<T> {
    pub fn new(lambdas: Vec<T>) -> Result<Self> {
        let d = T::from_usize_lossy(lambdas.len());
        if lambdas.is_empty() || lambdas.iter().any(|&l| l < T::zero()) {
            return Err(Error::ParameterOutOfRange("spectrum must be nonempty and nonnegative".into()));
        }
        let tr: T = lambdas.iter().copied().sum();
        if (tr - d).abs() > T::tolerance() {
            return Err(Error::ParameterOutOfRange(format!("spectrum trace {tr}, expected {d}")));
        }
        Ok(Self { lambdas })
    }

    /// `Lambda = I`, the maximally entangled resource.
    pub fn maximal(d: usize) -> Self {
        Self {
            lambdas: vec![T::one(); d],
        }
    }

    pub fn lambdas(&self) -> &[T] {
        &self.lambdas
    }

    pub fn d(&self) -> usize {
        self.lambdas.len()
    }
}

/// Outcome vectors `phi_k` in `C^d (x) C^d` with weights `a_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Certificate<T: Real> {
    pub phis: Vec<StateVector<T>>,
    pub weights: Vec<T>,
}

/// Teleportation solution for `Lambda = I`: `phi_k = (I (x) X^a Z^b)|Phi>`
/// with unit weights.
pub fn teleportation_certificate<T: Real>(d: usize) -> Result<Certificate<T>> {
    let phis = crate::zoo::generalized_bell_basis::<T>(d, &[d])?;
    Ok(Certificate {
        weights: vec![T::one(); phis.len()],
        phis,
    })
}

/// `B_ij = Lambda (x) M_i^dagger M_j` for every ordered pair `i != j`, as
/// dense `d^2 x d^2` matrices.
pub(crate) fn condition_operators<T: Real>(rep: &MatrixRep<T>, lambdas: &ResourceSpectrum<T>) -> Vec<Matrix<T>> {
    let d = rep.d;
    let n = rep.matrices.len();
    let dd = d * d;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let p = rep.product(i, j);
            let mut b = vec![czero(); dd * dd];
            for (a, &l) in lambdas.lambdas().iter().enumerate() {
                for r in 0..d {
                    for c in 0..d {
                        b[(a * d + r) * dd + a * d + c] = p[r * d + c] * cr(l);
                    }
                }
            }
            out.push(b);
        }
    }
    out
}

/// `sum_k sum_{i != j} |<phi_k|Lambda (x) M_i^* M_j|phi_k>|^2
///  + ||sum_k a_k |phi_k><phi_k| - I||_F^2`.
pub fn orthogonality_residual<T: Real>(
    rep: &MatrixRep<T>,
    lambdas: &ResourceSpectrum<T>,
    phis: &[StateVector<T>],
    weights: &[T],
) -> Result<T> {
    let d = rep.d;
    if lambdas.d() != d {
        return Err(Error::DimensionMismatch(format!("spectrum of length {} for d = {d}", lambdas.d())));
    }
    if phis.len() != weights.len() {
        return Err(Error::DimensionMismatch("one weight per outcome vector".into()));
    }
    if weights.iter().any(|&a| a <= T::zero()) {
        return Err(Error::ParameterOutOfRange("weights must be positive".into()));
    }
    if let Some(p) = phis.iter().find(|p| p.dim() != d * d) {
        return Err(Error::DimensionMismatch(format!("outcome vector of dimension {}", p.dim())));
    }
    let ws: Vec<Vec<C<T>>> = phis
        .iter()
        .zip(weights)
        .map(|(p, &a)| p.amps().iter().map(|x| *x * cr(a.sqrt())).collect())
        .collect();
    Ok(search::residual(&condition_operators(rep, lambdas), d * d, &ws))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct RkReport<T: Real> {
    /// `R Lambda R^dagger`, row-major.
    pub product: Matrix<T>,
    /// `Tr(R Lambda R^dagger) / d`.
    pub scale: T,
    /// Frobenius distance from `scale * I`.
    pub distance: T,
}

/// Writes `phi = (I (x) R)|Phi>` and measures how far `R Lambda R^dagger` is
/// from a multiple of the identity. The first member must have full rank.
pub fn rk_structure_check<T: Real>(
    rep: &MatrixRep<T>,
    lambdas: &ResourceSpectrum<T>,
    phi: &StateVector<T>,
) -> Result<RkReport<T>> {
    let d = rep.d;
    if lambdas.d() != d || phi.dim() != d * d {
        return Err(Error::DimensionMismatch("rk check dimensions".into()));
    }
    match rep.matrices.first() {
        Some(m) if linalg::rank(d, d, m) == d => {}
        _ => return Err(Error::NoFullRankMember),
    }
    let r = state_to_matrix(d, phi.amps());
    let mut rl = r.clone();
    for row in 0..d {
        for (col, &l) in lambdas.lambdas().iter().enumerate() {
            rl[row * d + col] *= cr(l);
        }
    }
    let product = matmul(d, d, d, &rl, &adjoint(d, &r));
    let scale = (0..d).map(|k| product[k * d + k].re).sum::<T>() / T::from_usize_lossy(d);
    let distance = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| {
            let target = if i == j { cr(scale) } else { czero() };
            (product[i * d + j] - target).norm_sqr()
        })
        .sum::<T>()
        .sqrt();
    Ok(RkReport {
        product,
        scale,
        distance,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SpanReport<T: Real> {
    /// Rank of the vectorized `{M_1^* M_j}`, `j >= 2`.
    pub rank: usize,
    pub count: usize,
    /// Largest `|Tr(M_1^* M_j)|` over `j >= 2`.
    pub max_trace: T,
}

impl<T: Real> SpanReport<T> {
    pub fn independent(&self) -> bool {
        self.rank == self.count
    }

    pub fn traceless(&self) -> bool {
        self.max_trace <= T::tolerance()
    }
}

/// Linear independence and tracelessness of `{M_1^* M_j}_{j >= 2}`.
pub fn span_check<T: Real>(rep: &MatrixRep<T>) -> Result<SpanReport<T>> {
    let d = rep.d;
    let n = rep.matrices.len();
    if n < 2 {
        return Err(Error::Empty("span check needs two members".into()));
    }
    let mut rows = Vec::with_capacity((n - 1) * d * d);
    let mut max_trace = T::zero();
    for j in 1..n {
        let p = rep.product(0, j);
        let tr: C<T> = (0..d).map(|k| p[k * d + k]).sum();
        max_trace = max_trace.max(tr.norm());
        rows.extend(p);
    }
    Ok(SpanReport {
        rank: linalg::rank(n - 1, d * d, &rows),
        count: n - 1,
        max_trace,
    })
}
