//! Protocol builders. Each returns the problem it is meant for together with
//! its tree, ready for `run_protocol`.

mod bipartite;
mod multipartite;

pub use bipartite::{
    computational_protocol, lattice_partial_teleport, teleportation_protocol, vidal_then_fallback,
};
pub use multipartite::{
    appendix_a_protocol, appendix_a_protocol_with_order, example4_bc_states, example4_protocol,
    ghz_partitioned_protocol, graph_decode_protocol, graph_decode_table,
};

use crate::error::Result;
use crate::families::bell_states;
use crate::locc::{Instrument, ProtocolTree};
use crate::scalar::{czero, Real};
use crate::tensor::{gates, Operator, StateVector};

/// Pauli applied after Bell outcome `k`, `[I, Z, X, XZ]`; outcome `k` is the
/// state `(I (x) P_k)|Phi+>`.
pub fn bell_correction<T: Real>(k: usize) -> Operator<T> {
    match k {
        0 => Operator::identity(vec![2]),
        1 => gates::pauli_z(),
        2 => gates::pauli_x(),
        _ => gates::pauli_xz(),
    }
}

/// Two-qubit Bell measurement (outcomes in Bell basis order).
pub fn bell_measurement<T: Real>(party: &str, slots: Option<Vec<usize>>) -> Result<Instrument<T>> {
    Ok(Instrument::projective(party, slots, &bell_states()?))
}

/// `(I (x) X^a Z^b)|Phi_d>` on a `d`-dimensional first factor and a second
/// factor with `second_dims` (total dimension `d`), indexed `a*d + b`.
pub fn generalized_bell_basis<T: Real>(d: usize, second_dims: &[usize]) -> Result<Vec<StateVector<T>>> {
    let mut dims = vec![d];
    dims.extend_from_slice(second_dims);
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let w = gates::weyl::<T>(d, a, b);
            let mut amps = vec![czero(); d * d];
            for i in 0..d {
                for j in 0..d {
                    amps[i * d + j] = w.get(j, i);
                }
            }
            out.push(StateVector::from_unnormalized(dims.clone(), amps)?);
        }
    }
    Ok(out)
}

/// Runs `stages` one after another; stage `s` sees the outcomes of stages
/// `0..s` and returns its instrument. Leaves guess member 0.
pub(crate) fn sequence<T: Real>(
    stages: &[&dyn Fn(&[usize]) -> Result<Instrument<T>>],
) -> Result<ProtocolTree<T>> {
    fn go<T: Real>(
        stages: &[&dyn Fn(&[usize]) -> Result<Instrument<T>>],
        path: &mut Vec<usize>,
    ) -> Result<ProtocolTree<T>> {
        let Some((stage, rest)) = stages.split_first() else {
            return Ok(ProtocolTree::leaf(0));
        };
        let instrument = stage(path)?;
        let mut children = Vec::with_capacity(instrument.outcomes());
        for k in 0..instrument.outcomes() {
            path.push(k);
            children.push(go(rest, path)?);
            path.pop();
        }
        Ok(ProtocolTree::round(instrument, children))
    }
    go(stages, &mut Vec::new())
}

/// Projective measurement onto orthonormal `states`, plus the projector
/// onto their complement when they do not span the space.
pub(crate) fn projective_with_complement<T: Real>(
    party: &str,
    slots: Option<Vec<usize>>,
    states: &[StateVector<T>],
) -> Result<Instrument<T>> {
    let mut kraus: Vec<Operator<T>> = states.iter().map(|s| s.projector()).collect();
    let dims = states[0].dims().to_vec();
    if states.len() < states[0].dim() {
        let mut rest = Operator::identity(dims);
        for p in &kraus {
            rest = rest.sub(p)?;
        }
        kraus.push(rest);
    }
    Ok(Instrument::new(party, slots, kraus))
}
