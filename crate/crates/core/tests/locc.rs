use locce_core::families::*;
use locce_core::fidelity::{average_fidelity, Povm};
use locce_core::locc::*;
use locce_core::zoo::*;
use locce_core::{Error, Operator, StateVector};

const TOL: f64 = 1e-9;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < TOL
}

/// A then B measure one qubit each in the computational basis, leaving any
/// other subsystem alone.
fn local_z_tree(slot: usize) -> ProtocolTree<f64> {
    let b = ProtocolTree::uniform(
        Instrument::computational("B", Some(vec![slot]), &[2]).unwrap(),
        ProtocolTree::leaf(0),
    );
    ProtocolTree::uniform(Instrument::computational("A", Some(vec![slot]), &[2]).unwrap(), b)
}

fn zoo_protocols() -> Vec<(JointProblem<f64>, ProtocolTree<f64>)> {
    let mut out = vec![
        teleportation_protocol(&parametric_basis(0.9, 0.8).unwrap(), "A", "B").unwrap(),
        lattice_partial_teleport(2, 1).unwrap(),
        appendix_a_protocol(2).unwrap(),
        appendix_a_protocol(3).unwrap(),
        ghz_partitioned_protocol(4, &[2, 2]).unwrap(),
        graph_decode_protocol(&Graph::path(3).unwrap()).unwrap(),
        example4_protocol().unwrap(),
    ];
    let ghz = JointProblem::new(ghz_basis(3, &[1, 1, 1]).unwrap());
    let t = computational_protocol(&ghz).unwrap();
    out.push((ghz, t));
    out
}

#[test]
fn attach_bell_to_bell_basis() {
    let bell = bell_states::<f64>().unwrap().swap_remove(0);
    let layout = PartyLayout::from_sizes(&[1, 1]).unwrap();
    let joint = attach_resource(&bell_basis().unwrap(), &bell, &layout).unwrap();
    assert_eq!(joint.dim(), 16);
    assert_eq!(joint.layout().party("A").unwrap().subsystems, vec![0, 2]);
    assert_eq!(joint.layout().party("B").unwrap().subsystems, vec![1, 3]);
    assert!(close(joint.prior(3), 0.25));
}

#[test]
fn attach_ghz_to_ghz_basis() {
    let ens = ghz_basis::<f64>(3, &[1, 1, 1]).unwrap();
    let joint = attach_resource(&ens, &ghz_state(3).unwrap(), &PartyLayout::one_per_subsystem(3).unwrap()).unwrap();
    assert_eq!(joint.len(), 8);
    assert_eq!(joint.dims(), &[2; 6]);
    assert!(joint.is_orthonormal());
}

#[test]
fn attach_bell_on_bc_for_example4() {
    let (p, _) = example4_protocol::<f64>().unwrap();
    let layout = p.layout();
    assert_eq!(layout.party("A").unwrap().subsystems.len(), 1);
    assert_eq!(layout.party("B").unwrap().subsystems.len(), 2);
    assert_eq!(layout.party("C").unwrap().subsystems.len(), 2);
}

#[test]
fn attach_rejects_unknown_party() {
    let bell = bell_states::<f64>().unwrap().swap_remove(0);
    let layout = PartyLayout::from_lists(vec![("A".into(), vec![0]), ("Z".into(), vec![1])]).unwrap();
    assert!(matches!(
        attach_resource(&bell_basis().unwrap(), &bell, &layout),
        Err(Error::UnknownParty(_))
    ));
}

#[test]
fn depth_zero_tree_scores_one_over_k() {
    for ens in [bell_basis::<f64>().unwrap(), ghz_basis(3, &[1, 1, 1]).unwrap()] {
        let k = ens.len() as f64;
        let run = run_protocol(&JointProblem::new(ens), &ProtocolTree::leaf(0)).unwrap();
        assert!(close(run.fidelity, 1.0 / k));
    }
}

#[test]
fn appendix_a_three_is_exact() {
    let (p, t) = appendix_a_protocol::<f64>(3).unwrap();
    assert!(close(run_protocol(&p, &t).unwrap().fidelity, 1.0));
}

#[test]
fn incomplete_instrument_is_rejected() {
    let half = Operator::from_real(vec![2], &[1.0, 0.0, 0.0, 0.0]).unwrap();
    let tree = ProtocolTree::round(Instrument::new("A", None, vec![half]), vec![ProtocolTree::leaf(0)]);
    let p = JointProblem::new(bell_basis::<f64>().unwrap());
    assert!(matches!(run_protocol(&p, &tree), Err(Error::IncompleteInstrument(_))));
}

#[test]
fn unknown_party_is_rejected() {
    let tree = ProtocolTree::uniform(
        Instrument::computational("Q", None, &[2]).unwrap(),
        ProtocolTree::<f64>::leaf(0),
    );
    assert!(run_protocol(&JointProblem::new(bell_basis().unwrap()), &tree).is_err());
}

#[test]
fn child_count_must_match_outcomes() {
    let tree = ProtocolTree::round(
        Instrument::computational("A", None, &[2]).unwrap(),
        vec![ProtocolTree::<f64>::leaf(0)],
    );
    assert!(run_protocol(&JointProblem::new(bell_basis().unwrap()), &tree).is_err());
}

#[test]
fn one_way_validation() {
    let ab = local_z_tree(0);
    assert!(validate_one_way(&ab, &["A", "B"]));
    assert!(!validate_one_way(&ab, &["B", "A"]));
    let a_again = ProtocolTree::<f64>::uniform(
        Instrument::computational("A", Some(vec![0]), &[2]).unwrap(),
        ProtocolTree::leaf(0),
    );
    let ba = ProtocolTree::<f64>::uniform(Instrument::computational("B", Some(vec![0]), &[2]).unwrap(), a_again);
    let aba = ProtocolTree::<f64>::uniform(Instrument::computational("A", Some(vec![0]), &[2]).unwrap(), ba);
    assert!(!validate_one_way(&aba, &["A", "B"]));
    let (_, t) = appendix_a_protocol::<f64>(2).unwrap();
    assert!(validate_one_way(&t, &["A", "B"]));
}

#[test]
fn single_round_flattens_to_its_projectors() {
    let bell = bell_states::<f64>().unwrap();
    let ens = computational_basis::<f64>(&[2, 2]).unwrap();
    let layout = PartyLayout::from_lists(vec![("AB".into(), vec![0, 1])]).unwrap();
    let p = JointProblem::new(ens.with_layout(layout).unwrap());
    let tree = ProtocolTree::round(
        Instrument::projective("AB", None, &bell),
        (0..4).map(ProtocolTree::leaf).collect(),
    );
    let (povm, _) = flatten_to_povm(&p, &tree).unwrap();
    for (e, b) in povm.elements().iter().zip(&bell) {
        let d: f64 = e.data().iter().zip(b.projector().data()).map(|(x, y)| (x - y).norm()).sum();
        assert!(d < TOL);
    }
}

#[test]
fn appendix_a_two_flattens_to_sixteen_outcomes() {
    let (p, t) = appendix_a_protocol::<f64>(2).unwrap();
    let (povm, _) = flatten_to_povm(&p, &t).unwrap();
    assert_eq!(povm.len(), 16);
    assert!(povm.completeness_residual() < TOL);
}

#[test]
fn flatten_agrees_with_run_on_zoo() {
    for (p, t) in zoo_protocols() {
        let (povm, g) = flatten_to_povm(&p, &t).unwrap();
        assert!(povm.completeness_residual() < TOL);
        let flat = average_fidelity(p.joint(), &povm, &g).unwrap();
        let run = run_protocol(&p, &t).unwrap().fidelity;
        assert!(close(flat, run), "{flat} vs {run}");
    }
}

#[test]
fn member_totals_equal_priors() {
    for (p, t) in zoo_protocols() {
        let run = run_protocol(&p, &t).unwrap();
        let n = p.joint().len();
        for (i, w) in run.report.member_totals(n).iter().enumerate() {
            assert!(close(*w, p.joint().prior(i)));
        }
    }
}

#[test]
fn coarsening_preserves_fidelity() {
    let (p, t) = appendix_a_protocol::<f64>(3).unwrap();
    let g = grouping(&[("A", "X"), ("B", "X"), ("C", "Y")]);
    let coarse = p.coarsen(&g).unwrap();
    let ct = t.coarsen(p.layout(), coarse.layout()).unwrap();
    ct.validate(coarse.layout(), coarse.dims()).unwrap();
    let f = run_protocol(&p, &t).unwrap().fidelity;
    assert!(close(run_protocol(&coarse, &ct).unwrap().fidelity, f));

    let ghz = JointProblem::new(ghz_basis::<f64>(4, &[1, 1, 1, 1]).unwrap());
    let t = computational_protocol(&ghz).unwrap();
    let coarse = ghz.coarsen(&grouping(&[("A", "A"), ("B", "A"), ("C", "B"), ("D", "B")])).unwrap();
    let ct = t.coarsen(ghz.layout(), coarse.layout()).unwrap();
    assert!(close(
        run_protocol(&coarse, &ct).unwrap().fidelity,
        run_protocol(&ghz, &t).unwrap().fidelity
    ));
}

#[test]
fn product_resource_changes_nothing() {
    let ens = parametric_basis::<f64>(0.9, 0.8).unwrap();
    let bare = JointProblem::new(ens.clone());
    let t0 = assign_optimal_guesses(&bare, &local_z_tree(0)).unwrap();
    let f0 = run_protocol(&bare, &t0).unwrap().fidelity;

    let product = StateVector::from_bits(&[0, 1]).unwrap();
    let with = JointProblem::with_resource(ens, product, PartyLayout::from_sizes(&[1, 1]).unwrap()).unwrap();
    let t1 = assign_optimal_guesses(&with, &local_z_tree(1)).unwrap();
    let f1 = run_protocol(&with, &t1).unwrap().fidelity;
    assert!(close(f0, f1), "{f0} vs {f1}");
    assert!(close(f0, (0.81 + 0.64) / 2.0));
}

#[test]
fn json_round_trip() {
    let (_, t) = example4_protocol::<f64>().unwrap();
    let js = serde_json::to_string(&t).unwrap();
    let back: ProtocolTree<f64> = serde_json::from_str(&js).unwrap();
    assert_eq!(back, t);

    let v: serde_json::Value = serde_json::from_str(&js).unwrap();
    assert_eq!(v["node"], "round");
    let kraus = &v["instrument"]["kraus"][0];
    assert!(kraus["re"].is_array() && kraus["im"][0].is_array());
}

#[test]
fn computational_povm_matches_measurement_tree() {
    let ens = ghz_basis::<f64>(3, &[1, 1, 1]).unwrap();
    let p = JointProblem::new(ens.clone());
    let t = computational_protocol(&p).unwrap();
    let (povm, _) = flatten_to_povm(&p, &t).unwrap();
    let comp = Povm::<f64>::computational(&[2, 2, 2]).unwrap();
    assert_eq!(povm.len(), comp.len());
    for (a, b) in povm.elements().iter().zip(comp.elements()) {
        assert!(a.sub(b).unwrap().frobenius_norm() < TOL);
    }
}
