use super::{bell_correction, bell_measurement, sequence};
use crate::error::{Error, Result};
use crate::families::{bell_states, ghz_basis, ghz_state, ghz_subset, graph_state_basis, party_name, Graph, PartyLayout};
use crate::locc::{assign_optimal_guesses, Guess, Instrument, JointProblem, ProtocolTree};
use crate::scalar::{cone, cr, czero, Real};
use crate::tensor::index::apply_local;
use crate::tensor::{gates, Operator, StateVector};

type Stage<'a, T> = Box<dyn Fn(&[usize]) -> Result<Instrument<T>> + 'a>;

/// Sequential Bell measurements of `(resource, unknown)` pairs, party
/// `names[order[s]]` at step `s`, each followed by the next party's Pauli
/// correction on its resource qubit. Leaves are placeholders.
fn bell_chain<T: Real>(names: &[String], order: &[usize]) -> Result<ProtocolTree<T>> {
    let mut stages: Vec<Stage<'_, T>> = Vec::new();
    for (s, &j) in order.iter().enumerate() {
        let name = names[j].as_str();
        if s > 0 {
            // Outcome of the previous measurement sits at path index 2(s-1).
            stages.push(Box::new(move |p: &[usize]| {
                Ok(Instrument::unitary(name, Some(vec![0]), bell_correction(p[2 * (s - 1)])))
            }));
        }
        stages.push(Box::new(move |_: &[usize]| bell_measurement(name, Some(vec![0, 1]))));
    }
    let refs: Vec<&dyn Fn(&[usize]) -> Result<Instrument<T>>> = stages.iter().map(|s| s.as_ref()).collect();
    sequence(&refs)
}

fn check_order(n: usize, order: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::ParameterOutOfRange(format!("order must list all {n} parties")));
    }
    for &j in order {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return Err(Error::ParameterOutOfRange(format!("invalid party order {order:?}")));
        }
    }
    Ok(())
}

/// `N`-qubit GHZ resource plus an unknown member of the `N`-party GHZ
/// basis; parties Bell-measure in turn, passing Pauli corrections on.
pub fn appendix_a_protocol<T: Real>(n: usize) -> Result<(JointProblem<T>, ProtocolTree<T>)> {
    appendix_a_protocol_with_order(n, &(0..n).collect::<Vec<_>>())
}

/// As [`appendix_a_protocol`] with the parties measuring in `order`.
pub fn appendix_a_protocol_with_order<T: Real>(n: usize, order: &[usize]) -> Result<(JointProblem<T>, ProtocolTree<T>)> {
    let ens = ghz_basis::<T>(n, &vec![1; n])?;
    check_order(n, order)?;
    let problem = JointProblem::with_resource(ens, ghz_state(n)?, PartyLayout::one_per_subsystem(n)?)?;
    let names: Vec<String> = (0..n).map(party_name).collect();
    let tree = bell_chain(&names, order)?;
    let tree = assign_optimal_guesses(&problem, &tree)?;
    Ok((problem, tree))
}

/// CNOT fan-out from the first of `k` qubits onto the other `k - 1`.
fn fan_out<T: Real>(k: usize) -> Result<Operator<T>> {
    let l = 1usize << k;
    let rest = (1usize << (k - 1)) - 1;
    let mut data = vec![czero(); l * l];
    for y in 0..l {
        let out = if y >> (k - 1) & 1 == 1 { y ^ rest } else { y };
        data[out * l + y] = cone();
    }
    Operator::new(vec![2; k], data)
}

/// `m`-qubit GHZ resource (padded with `|0>` ancillas) for the `N`-qubit
/// GHZ basis split among `m` parties: each party fans its GHZ qubit out to
/// its ancillas, then the parties run the single-qubit Bell chain.
pub fn ghz_partitioned_protocol<T: Real>(n: usize, sizes: &[usize]) -> Result<(JointProblem<T>, ProtocolTree<T>)> {
    let ens = ghz_basis::<T>(n, sizes)?;
    if sizes.len() < 2 {
        return Err(Error::ParameterOutOfRange("need at least two parties".into()));
    }
    // GHZ on the first qubit of every party block, |0> elsewhere.
    let mut x = 0usize;
    let mut start = 0;
    for &s in sizes {
        x |= 1 << (n - 1 - start);
        start += s;
    }
    let h = T::one() / T::lit(2.0).sqrt();
    let mut amps = vec![czero(); 1 << n];
    amps[0] = cr(h);
    amps[x] = cr(h);
    let resource = StateVector::new(vec![2; n], amps)?;
    let problem = JointProblem::with_resource(ens, resource, PartyLayout::from_sizes(sizes)?)?;

    let coarse = problem.layout().clone();
    let fine = PartyLayout::from_lists((0..n).map(|q| (format!("Q{q}"), vec![q, n + q])).collect())?;
    let names: Vec<String> = (0..n).map(|q| format!("Q{q}")).collect();
    let chain = bell_chain::<T>(&names, &(0..n).collect::<Vec<_>>())?.coarsen(&fine, &coarse)?;

    let mut stages: Vec<Stage<'_, T>> = Vec::new();
    for (i, &s) in sizes.iter().enumerate() {
        if s > 1 {
            let name = coarse.parties()[i].name.clone();
            let u = fan_out::<T>(s)?;
            stages.push(Box::new(move |_: &[usize]| {
                Ok(Instrument::unitary(name.as_str(), Some((0..s).collect()), u.clone()))
            }));
        }
    }
    let refs: Vec<&dyn Fn(&[usize]) -> Result<Instrument<T>>> = stages.iter().map(|s| s.as_ref()).collect();
    let tree = sequence(&refs)?.graft(&mut |_| chain.clone());
    let tree = assign_optimal_guesses(&problem, &tree)?;
    Ok((problem, tree))
}

/// Member identified by every Bell-outcome tuple `(b_0, .., b_{N-1})`
/// (index `sum b_k 4^(N-1-k)`): the unique `x` with
/// `|<Psi_x| (x)_k P_{b_k} |Psi_G>|^2 = 1`.
pub fn graph_decode_table<T: Real>(g: &Graph) -> Result<Vec<usize>> {
    let basis = graph_state_basis::<T>(g)?;
    let n = g.vertex_count();
    let dims = vec![2; n];
    let members: Vec<&StateVector<T>> = basis.ensemble.states().collect();
    (0..1usize << (2 * n))
        .map(|t| {
            let mut amps = basis.graph_state.amps().to_vec();
            for k in 0..n {
                let b = (t >> (2 * (n - 1 - k))) & 3;
                amps = apply_local(bell_correction::<T>(b).data(), &dims, &[k], &amps);
            }
            let moved = StateVector::new(dims.clone(), amps)?;
            let hits: Vec<usize> = (0..members.len())
                .filter(|&x| members[x].overlap_sqr(&moved) > T::one() - T::tolerance())
                .collect();
            match hits.as_slice() {
                [x] => Ok(*x),
                _ => Err(Error::InvalidTree(format!("outcome {t} decodes to {} members", hits.len()))),
            }
        })
        .collect()
}

/// Conjugate graph-state resource; every party Bell-measures its
/// `(resource, unknown)` pair and the outcome tuple is looked up.
pub fn graph_decode_protocol<T: Real>(g: &Graph) -> Result<(JointProblem<T>, ProtocolTree<T>)> {
    let basis = graph_state_basis::<T>(g)?;
    let n = g.vertex_count();
    let problem = JointProblem::with_resource(
        basis.ensemble.clone(),
        basis.resource.clone(),
        PartyLayout::one_per_subsystem(n)?,
    )?;
    let table = graph_decode_table::<T>(g)?;
    let names: Vec<String> = (0..n).map(party_name).collect();
    let stages: Vec<Stage<'_, T>> = names
        .iter()
        .map(|name| Box::new(move |_: &[usize]| bell_measurement(name, None)) as Stage<'_, T>)
        .collect();
    let refs: Vec<&dyn Fn(&[usize]) -> Result<Instrument<T>>> = stages.iter().map(|s| s.as_ref()).collect();
    let tree = sequence(&refs)?.graft(&mut |path| {
        let t = path.iter().fold(0, |acc, &b| acc * 4 + b);
        ProtocolTree::Leaf {
            guess: Guess::Member(table[t]),
        }
    });
    Ok((problem, tree))
}

fn plus_minus<T: Real>() -> Result<Vec<StateVector<T>>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(vec![
        StateVector::from_real(vec![2], &[h, h])?,
        StateVector::from_real(vec![2], &[h, -h])?,
    ])
}

/// Four-state three-qubit GHZ subset with a Bell pair shared by `B` and
/// `C`: `A` measures `|+->`, `B` applies `Z` on `-`, then `B` teleports its
/// qubit to `C`, who Bell-measures.
pub fn example4_protocol<T: Real>() -> Result<(JointProblem<T>, ProtocolTree<T>)> {
    let ens = ghz_subset::<T>(3, 2)?;
    let phi = bell_states::<T>()?.swap_remove(0);
    let rlayout = PartyLayout::from_lists(vec![("B".to_string(), vec![0]), ("C".to_string(), vec![1])])?;
    let problem = JointProblem::with_resource(ens, phi, rlayout)?;
    let pm = plus_minus::<T>()?;
    let stages: Vec<Stage<'_, T>> = vec![
        Box::new(|_: &[usize]| Ok(Instrument::projective("A", None, &pm))),
        Box::new(|p: &[usize]| {
            let u = if p[0] == 1 { gates::pauli_z() } else { Operator::identity(vec![2]) };
            Ok(Instrument::unitary("B", Some(vec![1]), u))
        }),
        Box::new(|_: &[usize]| bell_measurement("B", None)),
        Box::new(|p: &[usize]| Ok(Instrument::unitary("C", Some(vec![0]), bell_correction(p[2])))),
        Box::new(|_: &[usize]| bell_measurement("C", None)),
    ];
    let refs: Vec<&dyn Fn(&[usize]) -> Result<Instrument<T>>> = stages.iter().map(|s| s.as_ref()).collect();
    let tree = assign_optimal_guesses(&problem, &sequence(&refs)?)?;
    Ok((problem, tree))
}

/// Normalized `BC` states of the four members after `A` obtains `outcome`
/// (0 for `+`, 1 for `-`) and `B` applies the matching correction.
pub fn example4_bc_states<T: Real>(outcome: usize) -> Result<Vec<StateVector<T>>> {
    if outcome > 1 {
        return Err(Error::IndexOutOfRange { index: outcome, count: 2 });
    }
    let ens = ghz_subset::<T>(3, 2)?;
    let a = &plus_minus::<T>()?[outcome];
    let z = gates::pauli_z::<T>();
    ens.states()
        .map(|s| {
            let mut bc = vec![czero(); 4];
            for (i, x) in s.amps().iter().enumerate() {
                bc[i & 3] += a.amps()[i >> 2].conj() * *x;
            }
            if outcome == 1 {
                bc = apply_local(z.data(), &[2, 2], &[0], &bc);
            }
            StateVector::from_unnormalized(vec![2, 2], bc)
        })
        .collect()
}
