use serde::{Deserialize, Serialize};

use super::index::{apply_local, local_offsets, product, rest_bases};
use super::linalg;
use super::state::{check_dims, StateVector};
use crate::error::{Error, Result};
use crate::scalar::{c, cone, cr, czero, Real, C};

/// Dense square operator on a tensor-product space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorRepr<T>", into = "OperatorRepr<T>", bound = "T: Real")]
pub struct Operator<T: Real> {
    dims: Vec<usize>,
    data: Vec<C<T>>,
}

/// Serialized form: nested row arrays for the real and imaginary parts.
#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Real")]
struct OperatorRepr<T: Real> {
    dims: Vec<usize>,
    re: Vec<Vec<T>>,
    im: Vec<Vec<T>>,
}

impl<T: Real> From<Operator<T>> for OperatorRepr<T> {
    fn from(op: Operator<T>) -> Self {
        let n = op.side();
        let rows = |f: fn(&C<T>) -> T| -> Vec<Vec<T>> {
            (0..n).map(|i| op.data[i * n..(i + 1) * n].iter().map(f).collect()).collect()
        };
        OperatorRepr {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
            dims: op.dims.clone(),
        }
    }
}

impl<T: Real> TryFrom<OperatorRepr<T>> for Operator<T> {
    type Error = Error;
    fn try_from(r: OperatorRepr<T>) -> Result<Self> {
        if r.re.len() != r.im.len() || r.re.iter().zip(&r.im).any(|(a, b)| a.len() != b.len()) {
            return Err(Error::DimensionMismatch("re/im shapes differ".into()));
        }
        let data = r
            .re
            .into_iter()
            .zip(r.im)
            .flat_map(|(a, b)| a.into_iter().zip(b).map(|(x, y)| C::new(x, y)))
            .collect();
        Operator::new(r.dims, data)
    }
}

impl<T: Real> Operator<T> {
    pub fn new(dims: Vec<usize>, data: Vec<C<T>>) -> Result<Self> {
        let side = check_dims(&dims)?;
        if data.len() != side * side {
            return Err(Error::LengthMismatch {
                len: data.len(),
                expected: side * side,
            });
        }
        Ok(Self { dims, data })
    }

    /// Real-valued operator from row-major entries.
    pub fn from_real(dims: Vec<usize>, entries: &[f64]) -> Result<Self> {
        Self::new(dims, entries.iter().map(|&x| cr(T::lit(x))).collect())
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let n = product(&dims);
        Self {
            dims,
            data: vec![czero(); n * n],
        }
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let mut op = Self::zeros(dims);
        let n = op.side();
        for i in 0..n {
            op.data[i * n + i] = cone();
        }
        op
    }

    /// `|a><b|`.
    pub fn outer(a: &StateVector<T>, b: &StateVector<T>) -> Self {
        let data = a
            .amps()
            .iter()
            .flat_map(|x| b.amps().iter().map(move |y| *x * y.conj()))
            .collect();
        Self {
            dims: a.dims().to_vec(),
            data,
        }
    }

    pub fn diagonal(dims: Vec<usize>, diag: &[T]) -> Result<Self> {
        let mut op = Self::zeros(dims);
        let n = op.side();
        if diag.len() != n {
            return Err(Error::LengthMismatch {
                len: diag.len(),
                expected: n,
            });
        }
        for (i, &d) in diag.iter().enumerate() {
            op.data[i * n + i] = cr(d);
        }
        Ok(op)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[C<T>] {
        &self.data
    }

    pub fn side(&self) -> usize {
        product(&self.dims)
    }

    pub fn get(&self, r: usize, col: usize) -> C<T> {
        self.data[r * self.side() + col]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.side();
        let mut data = vec![czero(); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self {
            dims: self.dims.clone(),
            data,
        }
    }

    /// Entrywise conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "{:?} * {:?}",
                self.dims, other.dims
            )));
        }
        let n = self.side();
        Ok(Self {
            dims: self.dims.clone(),
            data: linalg::matmul(n, n, n, &self.data, &other.data),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "{:?} + {:?}",
                self.dims, other.dims
            )));
        }
        Ok(Self {
            dims: self.dims.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a + *b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(cr(-T::one())))
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self {
            dims: self.dims.clone(),
            data: self.data.iter().map(|z| *z * s).collect(),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.side(), other.side());
        let mut data = vec![czero(); n * m * n * m];
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        data[(i * m + k) * (n * m) + j * m + l] = a * other.data[k * m + l];
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, data }
    }

    pub fn trace(&self) -> C<T> {
        let n = self.side();
        (0..n).map(|i| self.data[i * n + i]).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `A|psi>` (unnormalized).
    pub fn apply(&self, psi: &StateVector<T>) -> Result<Vec<C<T>>> {
        if self.dims != psi.dims() {
            return Err(Error::DimensionMismatch(format!(
                "operator {:?} on state {:?}",
                self.dims,
                psi.dims()
            )));
        }
        let n = self.side();
        Ok(linalg::matmul(n, n, 1, &self.data, psi.amps()))
    }

    /// `<psi|A|psi>`.
    pub fn expectation(&self, psi: &StateVector<T>) -> Result<C<T>> {
        let v = self.apply(psi)?;
        Ok(psi.amps().iter().zip(&v).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        let n = self.side();
        (0..n).all(|i| (i..n).all(|j| (self.data[i * n + j] - self.data[j * n + i].conj()).norm() <= tol))
    }

    /// Hermitian eigendecomposition (descending eigenvalues).
    pub fn eigh(&self) -> linalg::Eigh<T> {
        linalg::eigh(self.side(), &self.data)
    }

    /// Embeds this operator on `targets` of a space with `full_dims`,
    /// identity on the remaining subsystems.
    pub fn embed(&self, full_dims: &[usize], targets: &[usize]) -> Result<Self> {
        for &t in targets {
            if t >= full_dims.len() {
                return Err(Error::IndexOutOfRange {
                    index: t,
                    count: full_dims.len(),
                });
            }
        }
        let tdims: Vec<usize> = targets.iter().map(|&t| full_dims[t]).collect();
        if tdims != self.dims {
            return Err(Error::DimensionMismatch(format!(
                "embedding {:?} into targets with dims {:?}",
                self.dims, tdims
            )));
        }
        let offs = local_offsets(full_dims, targets);
        let bases = rest_bases(full_dims, targets);
        let n = product(full_dims);
        let l = offs.len();
        let mut data = vec![czero(); n * n];
        for &b in &bases {
            for i in 0..l {
                for j in 0..l {
                    data[(b + offs[i]) * n + b + offs[j]] = self.data[i * l + j];
                }
            }
        }
        Ok(Self {
            dims: full_dims.to_vec(),
            data,
        })
    }

    /// Left-multiplies by an operator acting on `targets` only.
    pub fn left_mul_local(&self, local: &Self, targets: &[usize]) -> Result<Self> {
        let n = self.side();
        let tdims: Vec<usize> = targets.iter().map(|&t| self.dims[t]).collect();
        if tdims != local.dims {
            return Err(Error::DimensionMismatch("local operator dims".into()));
        }
        let mut out = vec![czero(); n * n];
        for col in 0..n {
            let v: Vec<C<T>> = (0..n).map(|r| self.data[r * n + col]).collect();
            let w = apply_local(&local.data, &self.dims, targets, &v);
            for r in 0..n {
                out[r * n + col] = w[r];
            }
        }
        Ok(Self {
            dims: self.dims.clone(),
            data: out,
        })
    }

    /// Reduced operator on `keep` (ascending subsystem order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(Error::InvalidBipartition("nothing kept".into()));
        }
        for &k in &keep {
            if k >= self.dims.len() {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    count: self.dims.len(),
                });
            }
        }
        let rest: Vec<usize> = (0..self.dims.len()).filter(|k| !keep.contains(k)).collect();
        let koffs = local_offsets(&self.dims, &keep);
        let roffs = local_offsets(&self.dims, &rest);
        let n = self.side();
        let kd = koffs.len();
        let mut data = vec![czero(); kd * kd];
        for i in 0..kd {
            for j in 0..kd {
                let mut acc = czero();
                for &r in &roffs {
                    acc += self.data[(koffs[i] + r) * n + koffs[j] + r];
                }
                data[i * kd + j] = acc;
            }
        }
        Ok(Self {
            dims: keep.iter().map(|&k| self.dims[k]).collect(),
            data,
        })
    }
}

/// Single-qubit Pauli matrices and related gates.
pub mod gates {
    use super::*;

    pub fn pauli_x<T: Real>() -> Operator<T> {
        Operator::from_real(vec![2], &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn pauli_z<T: Real>() -> Operator<T> {
        Operator::from_real(vec![2], &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    pub fn pauli_y<T: Real>() -> Operator<T> {
        let z = czero();
        let i = c(T::zero(), T::one());
        Operator::new(vec![2], vec![z, -i, i, z]).unwrap()
    }

    /// `XZ`, the Pauli used for the singlet outcome (`-iY`).
    pub fn pauli_xz<T: Real>() -> Operator<T> {
        pauli_x::<T>().matmul(&pauli_z()).unwrap()
    }

    pub fn hadamard<T: Real>() -> Operator<T> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Operator::from_real(vec![2], &[h, h, h, -h]).unwrap()
    }

    /// Controlled-Z on two qubits.
    pub fn cz<T: Real>() -> Operator<T> {
        Operator::diagonal(vec![2, 2], &[T::one(), T::one(), T::one(), -T::one()]).unwrap()
    }

    /// Generalized shift `X|j> = |j+1 mod d>`.
    pub fn shift<T: Real>(d: usize) -> Operator<T> {
        let mut op = Operator::zeros(vec![d]);
        for j in 0..d {
            op.data[((j + 1) % d) * d + j] = cone();
        }
        op
    }

    /// Generalized clock `Z|j> = w^j |j>`, `w = exp(2 pi i / d)`.
    pub fn clock<T: Real>(d: usize) -> Operator<T> {
        let mut op = Operator::zeros(vec![d]);
        for j in 0..d {
            let ang = T::lit(2.0 * std::f64::consts::PI * j as f64 / d as f64);
            op.data[j * d + j] = c(ang.cos(), ang.sin());
        }
        op
    }

    /// Weyl operator `X^a Z^b`.
    pub fn weyl<T: Real>(d: usize, a: usize, b: usize) -> Operator<T> {
        let mut op = Operator::identity(vec![d]);
        for _ in 0..a {
            op = shift::<T>(d).matmul(&op).unwrap();
        }
        for _ in 0..b {
            op = op.matmul(&clock::<T>(d)).unwrap();
        }
        op
    }
}
