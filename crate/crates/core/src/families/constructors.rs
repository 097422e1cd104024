use serde::{Deserialize, Serialize};

use super::ensemble::Ensemble;
use super::graph::Graph;
use super::layout::PartyLayout;
use crate::error::{Error, Result};
use crate::scalar::{cr, czero, Real};
use crate::tensor::{gates, Operator, StateVector};

fn qubit_state<T: Real>(n: usize, terms: &[(usize, T)]) -> Result<StateVector<T>> {
    let mut amps = vec![czero(); 1 << n];
    for &(idx, a) in terms {
        amps[idx] += cr(a);
    }
    StateVector::from_unnormalized(vec![2; n], amps)
}

/// The four Bell states `(|00>+|11>, |00>-|11>, |01>+|10>, |01>-|10>)/sqrt2`,
/// equiprobable, one qubit each for `A` and `B`.
pub fn bell_basis<T: Real>() -> Result<Ensemble<T>> {
    Ensemble::equiprobable(PartyLayout::from_sizes(&[1, 1])?, bell_states()?)
}

pub fn bell_states<T: Real>() -> Result<Vec<StateVector<T>>> {
    let one = T::one();
    [
        [(0, one), (3, one)],
        [(0, one), (3, -one)],
        [(1, one), (2, one)],
        [(1, one), (2, -one)],
    ]
    .iter()
    .map(|t| qubit_state(2, t))
    .collect()
}

/// `(|0...0> + |1...1>)/sqrt2` on `m` qubits.
pub fn ghz_state<T: Real>(m: usize) -> Result<StateVector<T>> {
    if m < 2 {
        return Err(Error::ParameterOutOfRange(format!("GHZ needs m >= 2, got {m}")));
    }
    qubit_state(m, &[(0, T::one()), ((1 << m) - 1, T::one())])
}

fn ghz_members<T: Real>(n: usize, pairs: usize) -> Result<Vec<StateVector<T>>> {
    let full = (1usize << n) - 1;
    let mut out = Vec::with_capacity(2 * pairs);
    // Leading bit 0, lexicographic order, plus before minus.
    for k in 0..pairs {
        let kbar = full ^ k;
        out.push(qubit_state(n, &[(k, T::one()), (kbar, T::one())])?);
        out.push(qubit_state(n, &[(k, T::one()), (kbar, -T::one())])?);
    }
    Ok(out)
}

/// Complete `n`-qubit GHZ basis, qubits grouped contiguously by `party_sizes`.
pub fn ghz_basis<T: Real>(n: usize, party_sizes: &[usize]) -> Result<Ensemble<T>> {
    if n < 2 {
        return Err(Error::ParameterOutOfRange(format!("GHZ basis needs N >= 2, got {n}")));
    }
    if party_sizes.len() < 2 || party_sizes.contains(&0) || party_sizes.iter().sum::<usize>() != n {
        return Err(Error::ParameterOutOfRange(format!(
            "party sizes {party_sizes:?} are not a partition of {n} qubits into >= 2 parties"
        )));
    }
    Ensemble::equiprobable(PartyLayout::from_sizes(party_sizes)?, ghz_members(n, 1 << (n - 1))?)
}

/// The first `pairs` conjugate pairs of the `n`-qubit GHZ basis, one qubit per party.
pub fn ghz_subset<T: Real>(n: usize, pairs: usize) -> Result<Ensemble<T>> {
    if n < 2 || pairs == 0 || pairs > 1 << (n - 1) {
        return Err(Error::ParameterOutOfRange(format!("{pairs} pairs on {n} qubits")));
    }
    Ensemble::equiprobable(PartyLayout::one_per_subsystem(n)?, ghz_members(n, pairs)?)
}

/// All `4^n` products of Bell states on `n` qubit pairs. Party `A` holds the
/// first qubit of every pair, `B` the second.
pub fn lattice_basis<T: Real>(n: usize) -> Result<Ensemble<T>> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange("lattice basis needs n >= 1".into()));
    }
    let bells = bell_states::<T>()?;
    let mut states = Vec::with_capacity(1 << (2 * n));
    for idx in 0..(1usize << (2 * n)) {
        let mut s: Option<StateVector<T>> = None;
        for j in 0..n {
            let b = &bells[(idx >> (2 * (n - 1 - j))) & 3];
            s = Some(match s {
                None => b.clone(),
                Some(acc) => acc.kron(b),
            });
        }
        states.push(s.expect("n >= 1"));
    }
    let layout = PartyLayout::from_lists(vec![
        ("A".into(), (0..n).map(|j| 2 * j).collect()),
        ("B".into(), (0..n).map(|j| 2 * j + 1).collect()),
    ])?;
    Ensemble::equiprobable(layout, states)
}

/// Graph-state basis together with its resource and stabilizer generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct GraphStateBasis<T: Real> {
    pub graph: Graph,
    /// Member `x` is `prod_a Z_a^{x_a} |G>`, vertex 0 most significant in `x`.
    pub ensemble: Ensemble<T>,
    /// The `+1` common eigenvector of all stabilizers.
    pub graph_state: StateVector<T>,
    /// Entrywise complex conjugate of `graph_state`.
    pub resource: StateVector<T>,
    /// `K_a = X_a prod_{b ~ a} Z_b` as full operators.
    pub stabilizers: Vec<Operator<T>>,
}

pub fn graph_state_basis<T: Real>(g: &Graph) -> Result<GraphStateBasis<T>> {
    let n = g.vertex_count();
    let dims = vec![2; n];
    let amp = T::one() / T::from_usize_lossy(1 << n).sqrt();
    let plus = StateVector::new(dims.clone(), vec![cr(amp); 1 << n])?;
    let cz = gates::cz::<T>();
    let mut amps = plus.amps().to_vec();
    for (a, b) in g.edges() {
        amps = crate::tensor::index::apply_local(cz.data(), &dims, &[a, b], &amps);
    }
    let graph_state = StateVector::new(dims.clone(), amps)?;
    let x = gates::pauli_x::<T>();
    let z = gates::pauli_z::<T>();
    let mut stabilizers = Vec::with_capacity(n);
    for a in 0..n {
        let mut k = x.embed(&dims, &[a])?;
        for b in g.neighbors(a) {
            k = k.left_mul_local(&z, &[b])?;
        }
        stabilizers.push(k);
    }
    let mut states = Vec::with_capacity(1 << n);
    for xbits in 0..(1usize << n) {
        let mut s = graph_state.amps().to_vec();
        for a in 0..n {
            if xbits >> (n - 1 - a) & 1 == 1 {
                s = crate::tensor::index::apply_local(z.data(), &dims, &[a], &s);
            }
        }
        states.push(StateVector::new(dims.clone(), s)?);
    }
    Ok(GraphStateBasis {
        graph: g.clone(),
        ensemble: Ensemble::equiprobable(PartyLayout::one_per_subsystem(n)?, states)?,
        resource: graph_state.conj(),
        graph_state,
        stabilizers,
    })
}

/// Two-qubit basis `a|00>+b|11>, b|00>-a|11>, g|01>+d|10>, d|01>-g|10>` with
/// `b = sqrt(1-a^2)`, `d = sqrt(1-g^2)`.
pub fn parametric_basis<T: Real>(alpha: T, gamma: T) -> Result<Ensemble<T>> {
    let lo = T::FRAC_1_SQRT_2() - T::tolerance();
    let hi = T::one() + T::tolerance();
    for (name, v) in [("alpha", alpha), ("gamma", gamma)] {
        if !(v >= lo && v <= hi) {
            return Err(Error::ParameterOutOfRange(format!(
                "{name} = {v} outside [1/sqrt2, 1]"
            )));
        }
    }
    let alpha = alpha.min(T::one());
    let gamma = gamma.min(T::one());
    let beta = (T::one() - alpha * alpha).max(T::zero()).sqrt();
    let delta = (T::one() - gamma * gamma).max(T::zero()).sqrt();
    let states = vec![
        qubit_state(2, &[(0, alpha), (3, beta)])?,
        qubit_state(2, &[(0, beta), (3, -alpha)])?,
        qubit_state(2, &[(1, gamma), (2, delta)])?,
        qubit_state(2, &[(1, delta), (2, -gamma)])?,
    ];
    Ensemble::equiprobable(PartyLayout::from_sizes(&[1, 1])?, states)
}

/// Computational basis of `dims`, one party per subsystem.
pub fn computational_basis<T: Real>(dims: &[usize]) -> Result<Ensemble<T>> {
    let n: usize = dims.iter().product();
    let states = (0..n)
        .map(|i| StateVector::basis(dims.to_vec(), i))
        .collect::<Result<Vec<_>>>()?;
    Ensemble::equiprobable(PartyLayout::one_per_subsystem(dims.len())?, states)
}

