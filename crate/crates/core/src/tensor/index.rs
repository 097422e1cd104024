//! Index bookkeeping for tensor-product spaces. Subsystem 0 is the most
//! significant digit of a flat index.

use crate::scalar::{czero, Real, C};

pub(crate) fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Flat offset contributed by every local index of `targets`, in the order
/// the targets are listed.
pub(crate) fn local_offsets(dims: &[usize], targets: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let tdims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
    let tst = strides(&tdims);
    let local = product(&tdims);
    (0..local)
        .map(|l| {
            targets
                .iter()
                .enumerate()
                .map(|(j, &t)| ((l / tst[j]) % tdims[j]) * st[t])
                .sum()
        })
        .collect()
}

/// Flat indices whose digits on `targets` are all zero.
pub(crate) fn rest_bases(dims: &[usize], targets: &[usize]) -> Vec<usize> {
    let rest: Vec<usize> = (0..dims.len()).filter(|k| !targets.contains(k)).collect();
    local_offsets(dims, &rest)
}

/// Applies a dense operator on the listed subsystems, identity elsewhere.
pub(crate) fn apply_local<T: Real>(
    op: &[C<T>],
    dims: &[usize],
    targets: &[usize],
    amps: &[C<T>],
) -> Vec<C<T>> {
    let offs = local_offsets(dims, targets);
    let bases = rest_bases(dims, targets);
    let l = offs.len();
    debug_assert_eq!(op.len(), l * l);
    let mut out = vec![czero(); amps.len()];
    let mut buf = vec![czero(); l];
    for &b in &bases {
        for (j, &o) in offs.iter().enumerate() {
            buf[j] = amps[b + o];
        }
        for (i, &o) in offs.iter().enumerate() {
            let row = &op[i * l..(i + 1) * l];
            let mut acc = czero();
            for (a, x) in row.iter().zip(&buf) {
                if a.re != T::zero() || a.im != T::zero() {
                    acc += *a * *x;
                }
            }
            out[b + o] = acc;
        }
    }
    out
}

/// Reorders subsystems: new subsystem `k` is old subsystem `order[k]`.
pub(crate) fn permute<T: Real>(dims: &[usize], amps: &[C<T>], order: &[usize]) -> Vec<C<T>> {
    let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let offs = local_offsets(dims, order);
    debug_assert_eq!(product(&new_dims), amps.len());
    offs.iter().map(|&o| amps[o]).collect()
}
