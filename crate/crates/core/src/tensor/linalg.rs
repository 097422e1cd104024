//! Jacobi eigen and singular value decompositions for small dense complex
//! matrices (row-major storage).

use crate::scalar::{c, cone, cr, czero, Real, C};

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigh<T: Real> {
    /// Descending eigenvalues.
    pub values: Vec<T>,
    /// `vectors[k]` is the eigenvector for `values[k]`, first entry of
    /// non-negligible magnitude made real-positive.
    pub vectors: Vec<Vec<C<T>>>,
}

/// Thin singular value decomposition `A = U diag(s) V†`.
#[derive(Debug, Clone)]
pub struct Svd<T: Real> {
    /// Descending singular values, `min(rows, cols)` of them.
    pub values: Vec<T>,
    /// Left singular vectors (length `rows`), one per value.
    pub left: Vec<Vec<C<T>>>,
    /// Right singular vectors (length `cols`), one per value.
    pub right: Vec<Vec<C<T>>>,
}

pub(crate) fn phase_normalize<T: Real>(v: &mut [C<T>]) {
    let tol = T::tolerance();
    if let Some(lead) = v.iter().find(|z| z.norm() > tol).copied() {
        let ph = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= ph;
        }
    }
}

/// Cyclic Jacobi diagonalization of a Hermitian `n x n` matrix.
pub fn eigh<T: Real>(n: usize, m: &[C<T>]) -> Eigh<T> {
    assert_eq!(m.len(), n * n, "eigh: matrix is not square");
    let mut a = m.to_vec();
    // Symmetrize to remove round-off asymmetry.
    for i in 0..n {
        a[i * n + i] = cr(a[i * n + i].re);
        for j in i + 1..n {
            let z = (a[i * n + j] + a[j * n + i].conj()) * T::lit(0.5);
            a[i * n + j] = z;
            a[j * n + i] = z.conj();
        }
    }
    let mut v = vec![czero(); n * n];
    for i in 0..n {
        v[i * n + i] = cone();
    }
    let total: T = a.iter().map(|z| z.norm_sqr()).sum();
    let eps = T::jacobi_epsilon();
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum();
        if off <= eps * eps * total || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= T::min_positive_value() {
                    continue;
                }
                let phase = apq / r;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (r + r);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                // J = W P, W = diag(1, conj(phase)) on (p, q).
                let jpp = cr(cs);
                let jpq = cr(sn);
                let jqp = phase.conj() * (-sn);
                let jqq = phase.conj() * cs;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * jpp + akq * jqp;
                    a[k * n + q] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[p * n + q] = czero();
                a[q * n + p] = czero();
                a[p * n + p] = cr(a[p * n + p].re);
                a[q * n + q] = cr(a[q * n + q].re);
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * jpp + vkq * jqp;
                    v[k * n + q] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        a[y * n + y]
            .re
            .partial_cmp(&a[x * n + x].re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.cmp(&y))
    });
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let mut col: Vec<C<T>> = (0..n).map(|i| v[i * n + k]).collect();
            phase_normalize(&mut col);
            col
        })
        .collect();
    Eigh { values, vectors }
}

/// Principal eigenvector with a deterministic choice inside a degenerate top
/// eigenspace: the projection of the lowest-index computational basis vector
/// with non-negligible weight, normalized and phase-fixed.
pub fn principal_eigenvector<T: Real>(n: usize, m: &[C<T>]) -> (T, Vec<C<T>>) {
    let e = eigh(n, m);
    let top = e.values[0];
    let scale = e.values.iter().fold(T::one(), |acc, v| acc.max(v.abs()));
    let tol = T::tolerance() * scale;
    let space: Vec<&Vec<C<T>>> = e
        .values
        .iter()
        .zip(&e.vectors)
        .filter(|(v, _)| (top - **v).abs() <= tol)
        .map(|(_, vec)| vec)
        .collect();
    if space.len() == 1 {
        return (top, space[0].clone());
    }
    for j in 0..n {
        // P e_j = sum_k v_k conj(v_k[j])
        let mut w = vec![czero(); n];
        for vk in &space {
            let coef = vk[j].conj();
            for (wi, x) in w.iter_mut().zip(vk.iter()) {
                *wi += *x * coef;
            }
        }
        let nrm = w.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if nrm > T::lit(1e-6).max(T::tolerance()) {
            for z in w.iter_mut() {
                *z = *z / nrm;
            }
            phase_normalize(&mut w);
            return (top, w);
        }
    }
    (top, space[0].clone())
}

/// One-sided (Hestenes) Jacobi SVD of a `rows x cols` matrix.
pub fn svd<T: Real>(rows: usize, cols: usize, m: &[C<T>]) -> Svd<T> {
    assert_eq!(m.len(), rows * cols, "svd: shape mismatch");
    if rows < cols {
        // A† = V S U†
        let mut h = vec![czero(); rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                h[j * rows + i] = m[i * cols + j].conj();
            }
        }
        let s = svd(cols, rows, &h);
        return Svd {
            values: s.values,
            left: s.right,
            right: s.left,
        };
    }
    // Column-major working copies.
    let mut a: Vec<Vec<C<T>>> = (0..cols)
        .map(|j| (0..rows).map(|i| m[i * cols + j]).collect())
        .collect();
    let mut v: Vec<Vec<C<T>>> = (0..cols)
        .map(|j| (0..cols).map(|i| if i == j { cone() } else { czero() }).collect())
        .collect();
    let eps = T::jacobi_epsilon();
    for _sweep in 0..100 {
        let mut rotated = false;
        for i in 0..cols {
            for j in i + 1..cols {
                let alpha: T = a[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: T = a[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C<T> = a[i].iter().zip(&a[j]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= eps * (alpha * beta).sqrt() || g <= T::min_positive_value() {
                    continue;
                }
                rotated = true;
                let ph = (gamma / g).conj();
                for z in a[j].iter_mut() {
                    *z *= ph;
                }
                for z in v[j].iter_mut() {
                    *z *= ph;
                }
                let zeta = (beta - alpha) / (g + g);
                let t = if zeta >= T::zero() {
                    T::one() / (zeta + (T::one() + zeta * zeta).sqrt())
                } else {
                    -T::one() / (-zeta + (T::one() + zeta * zeta).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                rotate(&mut a, i, j, cs, sn);
                rotate(&mut v, i, j, cs, sn);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<T> = a
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| {
        norms[y]
            .partial_cmp(&norms[x])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.cmp(&y))
    });
    let mut values = Vec::with_capacity(cols);
    let mut left = Vec::with_capacity(cols);
    let mut right = Vec::with_capacity(cols);
    for &k in &order {
        let s = norms[k];
        values.push(s);
        let mut u: Vec<C<T>> = if s > T::min_positive_value() {
            a[k].iter().map(|z| *z / s).collect()
        } else {
            vec![czero(); rows]
        };
        let mut vk = v[k].clone();
        // Fix the gauge on the left vector, carry the phase to the right one.
        if let Some(lead) = u.iter().find(|z| z.norm() > T::tolerance()).copied() {
            let ph = lead.conj() / lead.norm();
            for z in u.iter_mut() {
                *z *= ph;
            }
            for z in vk.iter_mut() {
                *z *= ph;
            }
        }
        left.push(u);
        right.push(vk);
    }
    Svd {
        values,
        left,
        right,
    }
}

fn rotate<T: Real>(cols: &mut [Vec<C<T>>], i: usize, j: usize, cs: T, sn: T) {
    let (lo, hi) = cols.split_at_mut(j);
    let ci = &mut lo[i];
    let cj = &mut hi[0];
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let xi = *x;
        let yj = *y;
        *x = xi * cs - yj * sn;
        *y = xi * sn + yj * cs;
    }
}

/// Numerical rank: singular values above `T::tolerance()` relative to one.
pub fn rank<T: Real>(rows: usize, cols: usize, m: &[C<T>]) -> usize {
    svd(rows, cols, m)
        .values
        .iter()
        .filter(|&&s| s > T::tolerance())
        .count()
}

/// Complex `d x d` matrix product, row-major.
pub(crate) fn matmul<T: Real>(n: usize, k: usize, m: usize, a: &[C<T>], b: &[C<T>]) -> Vec<C<T>> {
    let mut out = vec![czero(); n * m];
    for i in 0..n {
        for l in 0..k {
            let x = a[i * k + l];
            if x.re == T::zero() && x.im == T::zero() {
                continue;
            }
            for j in 0..m {
                out[i * m + j] += x * b[l * m + j];
            }
        }
    }
    out
}

#[allow(dead_code)]
pub(crate) fn ci<T: Real>(re: f64, im: f64) -> C<T> {
    c(T::lit(re), T::lit(im))
}
