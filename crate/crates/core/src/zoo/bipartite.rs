use super::{bell_correction, bell_measurement, generalized_bell_basis, projective_with_complement, sequence};
use crate::error::{Error, Result};
use crate::families::{bell_states, lattice_basis, Ensemble, PartyLayout};
use crate::fidelity::{mixed_strategy_fidelity, vidal_conversion_probability};
use crate::locc::{assign_optimal_guesses, run_protocol, Guess, Instrument, JointProblem, ProtocolTree};
use crate::scalar::Real;
use crate::tensor::{gates, Bipartition, StateVector};

fn check_bipartite<T: Real>(ens: &Ensemble<T>) -> Result<()> {
    if ens.layout().len() != 2 {
        return Err(Error::InvalidEnsemble(format!(
            "expected a bipartite ensemble, got {} parties",
            ens.layout().len()
        )));
    }
    Ok(())
}

/// The sender teleports its whole share through a `d x d` maximally
/// entangled resource (generalized Bell measurement, Weyl correction), then
/// the receiver measures the member projectors. Needs an orthonormal ensemble.
pub fn teleportation_protocol<T: Real>(
    ens: &Ensemble<T>,
    sender: &str,
    receiver: &str,
) -> Result<(JointProblem<T>, ProtocolTree<T>)> {
    check_bipartite(ens)?;
    if sender == receiver {
        return Err(Error::InvalidLayout("sender and receiver coincide".into()));
    }
    if !ens.is_orthonormal() {
        return Err(Error::NonOrthogonal);
    }
    let layout = ens.layout();
    let sp = layout.party(sender)?.subsystems.clone();
    let rp = layout.party(receiver)?.subsystems.clone();
    let sdims: Vec<usize> = sp.iter().map(|&s| ens.dims()[s]).collect();
    let rdims: Vec<usize> = rp.iter().map(|&s| ens.dims()[s]).collect();
    let d: usize = sdims.iter().product();

    let resource = StateVector::max_entangled(d)?;
    let rlayout = PartyLayout::from_lists(vec![(sender.to_string(), vec![0]), (receiver.to_string(), vec![1])])?;
    let problem = JointProblem::with_resource(ens.clone(), resource, rlayout)?;

    // Members as seen by the receiver once the sender's share sits on its
    // resource subsystem.
    let order: Vec<usize> = sp.iter().chain(&rp).copied().collect();
    let mut rframe_dims = vec![d];
    rframe_dims.extend_from_slice(&rdims);
    let targets = ens
        .states()
        .map(|s| StateVector::new(rframe_dims.clone(), s.permute(&order)?.amps().to_vec()))
        .collect::<Result<Vec<_>>>()?;

    let bell = generalized_bell_basis::<T>(d, &sdims)?;
    let measure_sender = |_: &[usize]| Ok(Instrument::projective(sender, None, &bell));
    let correct = |p: &[usize]| {
        let (a, b) = (p[0] / d, p[0] % d);
        Ok(Instrument::unitary(receiver, Some(vec![0]), gates::weyl(d, a, b)))
    };
    let measure_receiver = |_: &[usize]| projective_with_complement(receiver, None, &targets);
    let tree = sequence::<T>(&[&measure_sender, &correct, &measure_receiver])?;
    let k = ens.len();
    let tree = tree.graft(&mut |path| ProtocolTree::Leaf {
        guess: Guess::Member(if path[2] < k { path[2] } else { 0 }),
    });
    Ok((problem, tree))
}

/// `n` unknown Bell pairs with `m` shared ebits: `A` teleports `m` halves
/// and measures the rest in the computational basis, `B` corrects,
/// Bell-measures the teleported pairs and measures the rest likewise.
pub fn lattice_partial_teleport<T: Real>(n: usize, m: usize) -> Result<(JointProblem<T>, ProtocolTree<T>)> {
    if m == 0 || m > n {
        return Err(Error::ParameterOutOfRange(format!("need 1 <= m <= n, got n={n}, m={m}")));
    }
    let ens = lattice_basis::<T>(n)?;
    let phi = bell_states::<T>()?.swap_remove(0);
    let mut resource = phi.clone();
    for _ in 1..m {
        resource = resource.kron(&phi);
    }
    let rlayout = PartyLayout::from_lists(vec![
        ("A".to_string(), (0..m).map(|t| 2 * t).collect()),
        ("B".to_string(), (0..m).map(|t| 2 * t + 1).collect()),
    ])?;
    let problem = JointProblem::with_resource(ens, resource, rlayout)?;

    // Slots: resource halves 0..m, unknown halves m..m+n.
    let mut a_stages: Vec<Box<dyn Fn(&[usize]) -> Result<Instrument<T>>>> = Vec::new();
    for t in 0..m {
        a_stages.push(Box::new(move |_: &[usize]| bell_measurement("A", Some(vec![t, m + t]))));
    }
    for t in m..n {
        a_stages.push(Box::new(move |_: &[usize]| Instrument::computational("A", Some(vec![m + t]), &[2])));
    }
    let mut b_stages: Vec<Box<dyn Fn(&[usize]) -> Result<Instrument<T>>>> = Vec::new();
    for t in 0..m {
        b_stages.push(Box::new(move |p: &[usize]| {
            Ok(Instrument::unitary("B", Some(vec![t]), bell_correction(p[t])))
        }));
        b_stages.push(Box::new(move |_: &[usize]| bell_measurement("B", Some(vec![t, m + t]))));
    }
    for t in m..n {
        b_stages.push(Box::new(move |_: &[usize]| Instrument::computational("B", Some(vec![m + t]), &[2])));
    }
    let stages: Vec<&dyn Fn(&[usize]) -> Result<Instrument<T>>> =
        a_stages.iter().chain(&b_stages).map(|s| s.as_ref()).collect();
    let tree = sequence(&stages)?;
    let tree = assign_optimal_guesses(&problem, &tree)?;
    Ok((problem, tree))
}

/// Every party in layout order measures all its subsystems in the
/// computational basis; leaves carry the optimal guesses.
pub fn computational_protocol<T: Real>(problem: &JointProblem<T>) -> Result<ProtocolTree<T>> {
    let layout = problem.layout();
    let dims = problem.dims();
    let stages: Vec<Box<dyn Fn(&[usize]) -> Result<Instrument<T>>>> = layout
        .parties()
        .iter()
        .map(|p| {
            let name = p.name.clone();
            let local: Vec<usize> = p.subsystems.iter().map(|&s| dims[s]).collect();
            Box::new(move |_: &[usize]| Instrument::computational(name.as_str(), None, &local))
                as Box<dyn Fn(&[usize]) -> Result<Instrument<T>>>
        })
        .collect();
    let refs: Vec<&dyn Fn(&[usize]) -> Result<Instrument<T>>> = stages.iter().map(|s| s.as_ref()).collect();
    assign_optimal_guesses(problem, &sequence(&refs)?)
}

/// Converts the two-party `resource` into a rank-`target_rank` maximally
/// entangled state when possible (then discriminating perfectly), otherwise
/// runs `fallback_tree` without a resource.
pub fn vidal_then_fallback<T: Real>(
    ens: &Ensemble<T>,
    resource: &StateVector<T>,
    target_rank: usize,
    fallback_tree: &ProtocolTree<T>,
) -> Result<T> {
    check_bipartite(ens)?;
    if resource.num_subsystems() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "resource must have two subsystems, has {}",
            resource.num_subsystems()
        )));
    }
    let p = vidal_conversion_probability(resource, &Bipartition::new(vec![0], vec![1]), target_rank)?;
    let fallback = run_protocol(&JointProblem::new(ens.clone()), fallback_tree)?.fidelity;
    mixed_strategy_fidelity(p, T::one(), fallback)
}
