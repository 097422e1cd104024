use serde::{Deserialize, Serialize};

use super::index::{apply_local, permute, product};
use super::operator::Operator;
use crate::error::{Error, Result};
use crate::scalar::{cone, czero, Real, C};

/// Normalized pure state on a tensor product of finite-dimensional subsystems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "StateRepr<T>",
    into = "StateRepr<T>",
    bound = "T: Real"
)]
pub struct StateVector<T: Real> {
    dims: Vec<usize>,
    amps: Vec<C<T>>,
}

/// Serialized form: real and imaginary parts as separate arrays.
#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct StateRepr<T: Real> {
    dims: Vec<usize>,
    re: Vec<T>,
    im: Vec<T>,
}

impl<T: Real> From<StateVector<T>> for StateRepr<T> {
    fn from(s: StateVector<T>) -> Self {
        StateRepr {
            re: s.amps.iter().map(|z| z.re).collect(),
            im: s.amps.iter().map(|z| z.im).collect(),
            dims: s.dims,
        }
    }
}

impl<T: Real> TryFrom<StateRepr<T>> for StateVector<T> {
    type Error = Error;
    fn try_from(r: StateRepr<T>) -> Result<Self> {
        if r.re.len() != r.im.len() {
            return Err(Error::DimensionMismatch("re/im length differ".into()));
        }
        let amps = r.re.into_iter().zip(r.im).map(|(a, b)| C::new(a, b)).collect();
        StateVector::new(r.dims, amps)
    }
}

pub(crate) fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::DimensionMismatch("no subsystems".into()));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::BadDimension(d));
    }
    Ok(product(dims))
}

fn norm_sqr<T: Real>(amps: &[C<T>]) -> T {
    amps.iter().map(|z| z.norm_sqr()).sum()
}

impl<T: Real> StateVector<T> {
    /// Validated constructor; amplitudes must already be normalized.
    pub fn new(dims: Vec<usize>, amps: Vec<C<T>>) -> Result<Self> {
        let expected = check_dims(&dims)?;
        if amps.len() != expected {
            return Err(Error::LengthMismatch {
                len: amps.len(),
                expected,
            });
        }
        let n = norm_sqr(&amps).sqrt();
        if (n - T::one()).abs() > T::tolerance() {
            return Err(Error::NotNormalized(n.as_f64()));
        }
        Ok(Self { dims, amps })
    }

    /// Normalizes the given amplitudes.
    pub fn from_unnormalized(dims: Vec<usize>, amps: Vec<C<T>>) -> Result<Self> {
        let expected = check_dims(&dims)?;
        if amps.len() != expected {
            return Err(Error::LengthMismatch {
                len: amps.len(),
                expected,
            });
        }
        let n = norm_sqr(&amps).sqrt();
        if n <= T::min_positive_value() {
            return Err(Error::ZeroVector);
        }
        let amps = amps.into_iter().map(|z| z / n).collect();
        Ok(Self { dims, amps })
    }

    pub fn from_real(dims: Vec<usize>, amps: &[f64]) -> Result<Self> {
        Self::from_unnormalized(dims, amps.iter().map(|&x| C::new(T::lit(x), T::zero())).collect())
    }

    /// Computational basis state `|index>`.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let n = check_dims(&dims)?;
        if index >= n {
            return Err(Error::IndexOutOfRange { index, count: n });
        }
        let mut amps = vec![czero(); n];
        amps[index] = cone();
        Ok(Self { dims, amps })
    }

    /// Qubit computational basis state from a bit string, most significant first.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b as usize & 1));
        Self::basis(vec![2; bits.len()], idx)
    }

    /// `(1/sqrt d) sum_i |ii>` on `C^d (x) C^d`.
    pub fn max_entangled(d: usize) -> Result<Self> {
        check_dims(&[d])?;
        let s = T::one() / T::from_usize_lossy(d).sqrt();
        let mut amps = vec![czero(); d * d];
        for i in 0..d {
            amps[i * d + i] = C::new(s, T::zero());
        }
        Ok(Self {
            dims: vec![d, d],
            amps,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn norm(&self) -> T {
        norm_sqr(&self.amps).sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C<T> {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<self|other>|^2`.
    pub fn overlap_sqr(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| *a * *b))
            .collect();
        Self { dims, amps }
    }

    /// Reorders subsystems so that new subsystem `k` is old `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        self.check_indices(order)?;
        if order.len() != self.dims.len() {
            return Err(Error::DimensionMismatch("permutation length".into()));
        }
        let mut seen = vec![false; order.len()];
        for &o in order {
            if std::mem::replace(&mut seen[o], true) {
                return Err(Error::DimensionMismatch("repeated index in permutation".into()));
            }
        }
        Ok(Self {
            dims: order.iter().map(|&o| self.dims[o]).collect(),
            amps: permute(&self.dims, &self.amps, order),
        })
    }

    /// Applies `op` on the listed subsystems (identity elsewhere). The result
    /// is returned unnormalized.
    pub fn apply_local(&self, op: &Operator<T>, targets: &[usize]) -> Result<Vec<C<T>>> {
        self.check_indices(targets)?;
        let tdims: Vec<usize> = targets.iter().map(|&t| self.dims[t]).collect();
        if tdims != op.dims() {
            return Err(Error::DimensionMismatch(format!(
                "operator dims {:?} vs target dims {:?}",
                op.dims(),
                tdims
            )));
        }
        Ok(apply_local(op.data(), &self.dims, targets, &self.amps))
    }

    /// Applies `op` on the listed subsystems and renormalizes.
    pub fn evolve(&self, op: &Operator<T>, targets: &[usize]) -> Result<Self> {
        let amps = self.apply_local(op, targets)?;
        Self::from_unnormalized(self.dims.clone(), amps)
    }

    pub(crate) fn check_indices(&self, idx: &[usize]) -> Result<()> {
        for &i in idx {
            if i >= self.dims.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    count: self.dims.len(),
                });
            }
        }
        Ok(())
    }

    /// Amplitude matrix across `a | b`: rows indexed by the `a` subsystems
    /// (in the order listed), columns by `b`.
    pub fn bipartite_matrix(&self, a: &[usize], b: &[usize]) -> Result<(usize, usize, Vec<C<T>>)> {
        let order: Vec<usize> = a.iter().chain(b).copied().collect();
        let p = self.permute(&order)?;
        let rows = a.iter().map(|&i| self.dims[i]).product();
        let cols = b.iter().map(|&i| self.dims[i]).product();
        Ok((rows, cols, p.amps))
    }

    /// Reduced density operator on `keep` (ascending subsystem order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Operator<T>> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(Error::InvalidBipartition("nothing kept".into()));
        }
        self.check_indices(&keep)?;
        let rest: Vec<usize> = (0..self.dims.len()).filter(|k| !keep.contains(k)).collect();
        let (rows, cols, m) = if rest.is_empty() {
            (self.dim(), 1, self.amps.clone())
        } else {
            self.bipartite_matrix(&keep, &rest)?
        };
        let mut rho = vec![czero(); rows * rows];
        for i in 0..rows {
            for j in 0..rows {
                let mut acc = czero();
                for k in 0..cols {
                    acc += m[i * cols + k] * m[j * cols + k].conj();
                }
                rho[i * rows + j] = acc;
            }
        }
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        Operator::new(dims, rho)
    }

    /// Density operator `|psi><psi|`.
    pub fn projector(&self) -> Operator<T> {
        Operator::outer(self, self)
    }
}
