use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{condition_operators, Certificate, Matrix, MatrixRep, ResourceSpectrum};
use crate::error::{Error, Result};
use crate::scalar::{c, cr, czero, Real, C};
use crate::tensor::StateVector;

fn mat_vec<T: Real>(n: usize, m: &[C<T>], v: &[C<T>]) -> Vec<C<T>> {
    (0..n)
        .map(|r| m[r * n..(r + 1) * n].iter().zip(v).map(|(a, x)| *a * *x).sum())
        .collect()
}

fn adj_vec<T: Real>(n: usize, m: &[C<T>], v: &[C<T>]) -> Vec<C<T>> {
    let mut out = vec![czero(); n];
    for r in 0..n {
        for (col, o) in out.iter_mut().enumerate() {
            *o += m[r * n + col].conj() * v[r];
        }
    }
    out
}

fn dot<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).map(|(x, y)| x.conj() * *y).sum()
}

/// Completeness defect `sum_k w_k w_k^dagger - I`.
fn completeness<T: Real>(n: usize, ws: &[Vec<C<T>>]) -> Vec<C<T>> {
    let mut m = vec![czero(); n * n];
    for w in ws {
        for r in 0..n {
            for col in 0..n {
                m[r * n + col] += w[r] * w[col].conj();
            }
        }
    }
    for k in 0..n {
        m[k * n + k] -= cr(T::one());
    }
    m
}

/// Residual in terms of `w_k = sqrt(a_k) phi_k`.
pub(crate) fn residual<T: Real>(ops: &[Matrix<T>], n: usize, ws: &[Vec<C<T>>]) -> T {
    let mut f = T::zero();
    for w in ws {
        let nn: T = w.iter().map(|x| x.norm_sqr()).sum();
        if nn <= T::zero() {
            continue;
        }
        for b in ops {
            f += dot(w, &mat_vec(n, b, w)).norm_sqr() / (nn * nn);
        }
    }
    f + completeness(n, ws).iter().map(|x| x.norm_sqr()).sum::<T>()
}

/// Value and Wirtinger gradient `df/dconj(w_k)`.
fn residual_grad<T: Real>(ops: &[Matrix<T>], n: usize, ws: &[Vec<C<T>>]) -> (T, Vec<Vec<C<T>>>) {
    let defect = completeness(n, ws);
    let two = cr(T::lit(2.0));
    let mut f: T = defect.iter().map(|x| x.norm_sqr()).sum();
    let mut grads = Vec::with_capacity(ws.len());
    for w in ws {
        let mut g: Vec<C<T>> = mat_vec(n, &defect, w).into_iter().map(|x| x * two).collect();
        let nn: T = w.iter().map(|x| x.norm_sqr()).sum();
        if nn > T::zero() {
            let n2 = nn * nn;
            for b in ops {
                let bw = mat_vec(n, b, w);
                let btw = adj_vec(n, b, w);
                let q = dot(w, &bw);
                let q2 = q.norm_sqr();
                f += q2 / n2;
                for i in 0..n {
                    g[i] += (q.conj() * bw[i] + q * btw[i]) / cr(n2) - w[i] * cr(T::lit(2.0) * q2 / (n2 * nn));
                }
            }
        }
        grads.push(g);
    }
    (f, grads)
}

fn unpack<T: Real>(x: &[T], k: usize, n: usize) -> Vec<Vec<C<T>>> {
    (0..k)
        .map(|j| (0..n).map(|i| c(x[2 * (j * n + i)], x[2 * (j * n + i) + 1])).collect())
        .collect()
}

fn pack_grad<T: Real>(g: &[Vec<C<T>>]) -> Vec<T> {
    let two = T::lit(2.0);
    g.iter()
        .flat_map(|v| v.iter().flat_map(move |z| [two * z.re, two * z.im]))
        .collect()
}

fn vdot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

/// Limited-memory BFGS with Armijo backtracking. Returns the final point,
/// its value and the iteration count.
fn lbfgs<T: Real>(
    mut x: Vec<T>,
    f: impl Fn(&[T]) -> (T, Vec<T>),
    max_iters: usize,
    memory: usize,
    target: T,
    stall_tolerance: T,
) -> (Vec<T>, T, usize) {
    let (mut fx, mut g) = f(&x);
    let mut hist: Vec<(Vec<T>, Vec<T>, T)> = Vec::new();
    // Stop on a vanishing gradient or after a run of negligible decreases.
    let gtol = T::epsilon() * T::epsilon();
    let ftol = T::lit(8.0) * T::epsilon();
    let window_tol = stall_tolerance.max(ftol);
    let mut stalled = 0;
    let mut trace = vec![fx];
    for it in 0..max_iters {
        let slow = it >= 50 && trace[it - 50] - fx <= window_tol * fx.abs();
        if fx <= target || vdot(&g, &g) <= gtol || stalled >= 20 || slow {
            return (x, fx, it);
        }
        // Two-loop recursion.
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(hist.len());
        for (s, y, rho) in hist.iter().rev() {
            let a = *rho * vdot(s, &q);
            for (qi, yi) in q.iter_mut().zip(y) {
                *qi -= a * *yi;
            }
            alphas.push(a);
        }
        let gamma = match hist.last() {
            Some((s, y, _)) => vdot(s, y) / vdot(y, y),
            None => T::one() / vdot(&g, &g).sqrt().max(T::one()),
        };
        for qi in q.iter_mut() {
            *qi *= gamma;
        }
        for ((s, y, rho), a) in hist.iter().zip(alphas.iter().rev()) {
            let b = *rho * vdot(y, &q);
            for (qi, si) in q.iter_mut().zip(s) {
                *qi += (*a - b) * *si;
            }
        }
        let mut dir: Vec<T> = q.iter().map(|v| -*v).collect();
        let mut slope = vdot(&g, &dir);
        if slope >= T::zero() {
            hist.clear();
            dir = g.iter().map(|v| -*v).collect();
            slope = -vdot(&g, &g);
        }
        let mut step = T::one();
        let mut accepted = None;
        for _ in 0..60 {
            let xn: Vec<T> = x.iter().zip(&dir).map(|(a, d)| *a + step * *d).collect();
            let (fnew, gnew) = f(&xn);
            if fnew <= fx + T::lit(1e-4) * step * slope {
                accepted = Some((xn, fnew, gnew));
                break;
            }
            step *= T::lit(0.5);
        }
        let Some((xn, fnew, gnew)) = accepted else {
            return (x, fx, it);
        };
        let s: Vec<T> = xn.iter().zip(&x).map(|(a, b)| *a - *b).collect();
        let y: Vec<T> = gnew.iter().zip(&g).map(|(a, b)| *a - *b).collect();
        let sy = vdot(&s, &y);
        if sy > T::epsilon() * vdot(&y, &y) {
            if hist.len() == memory {
                hist.remove(0);
            }
            hist.push((s, y, T::one() / sy));
        }
        if fx - fnew <= ftol * fx.abs().max(T::min_positive_value()) {
            stalled += 1;
        } else {
            stalled = 0;
        }
        x = xn;
        fx = fnew;
        g = gnew;
        trace.push(fx);
    }
    (x, fx, max_iters)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Number of outcome vectors `K`, between `d^2` and `4 d^2`.
    pub outcomes: usize,
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub memory: usize,
    /// A restart stops once 50 iterations improve the residual by less than
    /// this relative amount.
    pub stall_tolerance: f64,
}

impl SearchOptions {
    pub fn new(outcomes: usize, restarts: usize, seed: u64) -> Self {
        Self {
            outcomes,
            restarts,
            seed,
            max_iters: 4000,
            memory: 12,
            stall_tolerance: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct RestartOutcome<T: Real> {
    pub restart: usize,
    pub residual: T,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FeasibilityReport<T: Real> {
    pub lambdas: Vec<T>,
    pub outcomes: usize,
    pub restarts: usize,
    pub seed: u64,
    pub best_residual: T,
    pub best_restart: usize,
    /// Minimizer of the best restart. A weight may be zero if the optimizer
    /// switched an outcome off entirely.
    pub certificate: Certificate<T>,
    pub per_restart: Vec<RestartOutcome<T>>,
}

/// Multi-start local minimization of the orthogonality residual. Restart
/// `r` starts from a ChaCha8 stream seeded with `seed + r`; the best restart
/// (lowest residual, then lowest index) is reported.
pub fn feasibility_search<T: Real>(
    rep: &MatrixRep<T>,
    lambdas: &ResourceSpectrum<T>,
    outcomes: usize,
    restarts: usize,
    seed: u64,
) -> Result<FeasibilityReport<T>> {
    feasibility_search_with(rep, lambdas, &SearchOptions::new(outcomes, restarts, seed))
}

pub fn feasibility_search_with<T: Real>(
    rep: &MatrixRep<T>,
    lambdas: &ResourceSpectrum<T>,
    opts: &SearchOptions,
) -> Result<FeasibilityReport<T>> {
    let d = rep.d;
    let n = d * d;
    let k = opts.outcomes;
    if lambdas.d() != d {
        return Err(Error::DimensionMismatch(format!("spectrum of length {} for d = {d}", lambdas.d())));
    }
    if k < n || k > 4 * n {
        return Err(Error::ParameterOutOfRange(format!("outcomes must lie in [{n}, {}], got {k}", 4 * n)));
    }
    if opts.restarts == 0 {
        return Err(Error::ParameterOutOfRange("at least one restart".into()));
    }
    let ops = condition_operators(rep, lambdas);
    let objective = |x: &[T]| {
        let (f, g) = residual_grad(&ops, n, &unpack(x, k, n));
        (f, pack_grad(&g))
    };
    let scale = T::one() / T::from_usize_lossy(k).sqrt();
    let runs: Vec<(Vec<T>, T, usize)> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(r as u64));
            let x0: Vec<T> = (0..2 * k * n)
                .map(|_| T::lit(rng.gen_range(-1.0..1.0)) * scale)
                .collect();
            lbfgs(x0, objective, opts.max_iters, opts.memory, T::lit(1e-24), T::lit(opts.stall_tolerance))
        })
        .collect();
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.1 < runs[best].1 {
            best = i;
        }
    }
    let ws = unpack(&runs[best].0, k, n);
    let mut phis = Vec::with_capacity(k);
    let mut weights = Vec::with_capacity(k);
    for w in ws {
        let nn: T = w.iter().map(|x| x.norm_sqr()).sum();
        let phi = if nn > T::zero() {
            StateVector::from_unnormalized(vec![d, d], w)?
        } else {
            StateVector::basis(vec![d, d], 0)?
        };
        phis.push(phi);
        weights.push(nn);
    }
    Ok(FeasibilityReport {
        lambdas: lambdas.lambdas().to_vec(),
        outcomes: k,
        restarts: opts.restarts,
        seed: opts.seed,
        best_residual: runs[best].1,
        best_restart: best,
        certificate: Certificate { phis, weights },
        per_restart: runs
            .iter()
            .enumerate()
            .map(|(restart, r)| RestartOutcome {
                restart,
                residual: r.1,
                iterations: r.2,
            })
            .collect(),
    })
}
