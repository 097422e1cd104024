use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::Ensemble;
use crate::scalar::{cr, Real};
use crate::tensor::{linalg, Operator, StateVector};

/// Positive operators summing to the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Povm<T: Real> {
    dims: Vec<usize>,
    elements: Vec<Operator<T>>,
}

/// Outcome index -> guessed state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct GuessStrategy<T: Real> {
    pub guesses: Vec<StateVector<T>>,
}

impl<T: Real> GuessStrategy<T> {
    pub fn new(guesses: Vec<StateVector<T>>) -> Self {
        Self { guesses }
    }
}

impl<T: Real> Povm<T> {
    /// Validated constructor: every element positive semidefinite and the
    /// elements summing to the identity, both within `T::tolerance()`.
    pub fn new(elements: Vec<Operator<T>>) -> Result<Self> {
        let povm = Self::from_elements_unchecked(elements)?;
        for (k, e) in povm.elements.iter().enumerate() {
            if !e.is_hermitian(T::tolerance()) {
                return Err(Error::InvalidPovm(format!("element {k} is not Hermitian")));
            }
            let min = e.eigh().values.last().copied().unwrap_or_else(T::zero);
            if min < -T::tolerance() {
                return Err(Error::InvalidPovm(format!(
                    "element {k} has negative eigenvalue {min}"
                )));
            }
        }
        let r = povm.completeness_residual();
        if r > T::tolerance() {
            return Err(Error::InvalidPovm(format!("elements sum to identity within {r}")));
        }
        Ok(povm)
    }

    /// Only checks that the elements share dims; used for measurements that
    /// are positive by construction.
    pub fn from_elements_unchecked(elements: Vec<Operator<T>>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm("no elements".into()))?;
        let dims = first.dims().to_vec();
        if elements.iter().any(|e| e.dims() != dims.as_slice()) {
            return Err(Error::InvalidPovm("elements act on different spaces".into()));
        }
        Ok(Self { dims, elements })
    }

    /// Projective measurement in the computational basis.
    pub fn computational(dims: &[usize]) -> Result<Self> {
        let n: usize = dims.iter().product();
        let elements = (0..n)
            .map(|i| StateVector::basis(dims.to_vec(), i).map(|s| s.projector()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_elements_unchecked(elements)
    }

    /// Projectors onto orthonormal `states`, plus the complement when they do
    /// not span the space.
    pub fn projective(states: &[StateVector<T>]) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::InvalidPovm("no states".into()))?;
        let dims = first.dims().to_vec();
        let mut elements: Vec<Operator<T>> = states.iter().map(|s| s.projector()).collect();
        let mut sum = Operator::zeros(dims.clone());
        for e in &elements {
            sum = sum.add(e)?;
        }
        let rest = Operator::identity(dims).sub(&sum)?;
        if rest.frobenius_norm() > T::tolerance() {
            elements.push(rest);
        }
        Self::new(elements)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn elements(&self) -> &[Operator<T>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Frobenius norm of `sum_a M_a - I`.
    pub fn completeness_residual(&self) -> T {
        let n: usize = self.dims.iter().product();
        let mut sum = vec![cr(T::zero()); n * n];
        for e in &self.elements {
            for (s, x) in sum.iter_mut().zip(e.data()) {
                *s += *x;
            }
        }
        for i in 0..n {
            sum[i * n + i] -= cr(T::one());
        }
        sum.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }
}

fn check_dims<T: Real>(ens: &Ensemble<T>, m: &Povm<T>) -> Result<()> {
    if ens.dims() != m.dims() {
        return Err(Error::DimensionMismatch(format!(
            "ensemble dims {:?}, POVM dims {:?}",
            ens.dims(),
            m.dims()
        )));
    }
    Ok(())
}

/// `sum_{i,a} p_i <psi_i|M_a|psi_i> |<psi_i|phi_a>|^2`.
pub fn average_fidelity<T: Real>(ens: &Ensemble<T>, m: &Povm<T>, g: &GuessStrategy<T>) -> Result<T> {
    check_dims(ens, m)?;
    if g.guesses.len() != m.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} guesses for {} outcomes",
            g.guesses.len(),
            m.len()
        )));
    }
    let mut f = T::zero();
    for (e, phi) in m.elements().iter().zip(&g.guesses) {
        if phi.dims() != ens.dims() {
            return Err(Error::DimensionMismatch("guess dims".into()));
        }
        for mem in ens.members() {
            let pa = e.expectation(&mem.state)?.re;
            if pa == T::zero() {
                continue;
            }
            f += mem.prior * pa * mem.state.overlap_sqr(phi);
        }
    }
    Ok(f)
}

/// Best guess per outcome: the principal eigenvector of
/// `rho_a = sum_i p_i <psi_i|M_a|psi_i> |psi_i><psi_i|`.
pub fn optimal_guess<T: Real>(ens: &Ensemble<T>, m: &Povm<T>) -> Result<(GuessStrategy<T>, T)> {
    check_dims(ens, m)?;
    let n = ens.dim();
    let mut guesses = Vec::with_capacity(m.len());
    for e in m.elements() {
        let mut rho = vec![cr(T::zero()); n * n];
        for mem in ens.members() {
            let w = mem.prior * e.expectation(&mem.state)?.re;
            if w == T::zero() {
                continue;
            }
            let a = mem.state.amps();
            for i in 0..n {
                for j in 0..n {
                    rho[i * n + j] += a[i] * a[j].conj() * w;
                }
            }
        }
        let (_, v) = linalg::principal_eigenvector(n, &rho);
        guesses.push(match StateVector::from_unnormalized(ens.dims().to_vec(), v) {
            Ok(s) => s,
            // outcome never occurs: any guess will do
            Err(_) => StateVector::basis(ens.dims().to_vec(), 0)?,
        });
    }
    let g = GuessStrategy { guesses };
    let f = average_fidelity(ens, m, &g)?;
    Ok((g, f))
}

/// Global optimum for an orthonormal ensemble, evaluated on the projective
/// measurement onto the members with identity guessing.
pub fn global_optimum_orthonormal<T: Real>(ens: &Ensemble<T>) -> Result<T> {
    if !ens.is_orthonormal() {
        return Err(Error::NonOrthogonal);
    }
    let states: Vec<StateVector<T>> = ens.states().cloned().collect();
    let m = Povm::projective(&states)?;
    let mut guesses = states.clone();
    if m.len() > states.len() {
        guesses.push(states[0].clone());
    }
    average_fidelity(ens, &m, &GuessStrategy { guesses })
}
