use std::collections::BTreeMap;

use locce_core::families::*;
use locce_core::tensor::{entanglement_entropy, gates, schmidt, schmidt_rank, Bipartition};
use locce_core::tensor::Operator;
use locce_core::{Error, StateVector, C};

const TOL: f64 = 1e-9;

fn gram_is_identity(ens: &Ensemble<f64>) -> bool {
    ens.gram_residual() < TOL
}

/// Index of the unique member with unit overlap, if any.
fn match_member(ens: &Ensemble<f64>, s: &StateVector<f64>) -> Option<usize> {
    let hits: Vec<usize> = ens
        .states()
        .enumerate()
        .filter(|(_, m)| (m.overlap_sqr(s) - 1.0).abs() < TOL)
        .map(|(i, _)| i)
        .collect();
    (hits.len() == 1).then(|| hits[0])
}

#[test]
fn bell_basis_members() {
    let ens = bell_basis::<f64>().unwrap();
    assert_eq!(ens.len(), 4);
    assert_eq!(ens.layout().names(), vec!["A", "B"]);
    let h = 0.5f64.sqrt();
    let want = StateVector::from_real(vec![2, 2], &[h, 0.0, 0.0, h]).unwrap();
    assert!((ens.state(0).overlap_sqr(&want) - 1.0).abs() < TOL);
    assert!((ens.state(0).amps()[0].re - h).abs() < TOL);
    assert!(gram_is_identity(&ens));
    let bp = Bipartition::new(vec![0], vec![1]);
    for s in ens.states() {
        assert!((entanglement_entropy(s, &bp).unwrap() - 1.0).abs() < TOL);
    }
}

#[test]
fn ghz_basis_three_qubits() {
    let ens = ghz_basis::<f64>(3, &[1, 1, 1]).unwrap();
    assert_eq!(ens.len(), 8);
    assert!(ens.is_complete_basis() && ens.is_equiprobable());
    // (|k> +- |k bar>)/sqrt2 with k = 000, 001, 010, 011, plus first.
    let h = 0.5f64.sqrt();
    for (i, s) in ens.states().enumerate() {
        let k = i / 2;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        assert!((s.amps()[k].re - h).abs() < TOL);
        assert!((s.amps()[7 - k].re - sign * h).abs() < TOL);
    }
}

#[test]
fn ghz_basis_two_qubits_is_bell_basis() {
    let ens = ghz_basis::<f64>(2, &[1, 1]).unwrap();
    let bell = bell_basis::<f64>().unwrap();
    let mut seen = [false; 4];
    for s in ens.states() {
        seen[match_member(&bell, s).unwrap()] = true;
    }
    assert_eq!(seen, [true; 4]);
}

#[test]
fn ghz_basis_grouped_parties() {
    let ens = ghz_basis::<f64>(4, &[2, 2]).unwrap();
    assert_eq!(ens.len(), 16);
    assert!(gram_is_identity(&ens));
    let bp = ens.layout().bipartition(&["A"]).unwrap();
    for s in ens.states() {
        assert!((entanglement_entropy(s, &bp).unwrap() - 1.0).abs() < TOL);
    }
    assert!(ghz_basis::<f64>(4, &[2, 1]).is_err());
    assert!(ghz_basis::<f64>(3, &[3]).is_err());
}

#[test]
fn ghz_members_have_half_max_coefficient() {
    for (n, sizes) in [(3, vec![1, 1, 1]), (4, vec![1, 1, 1, 1]), (5, vec![2, 1, 2])] {
        let ens = ghz_basis::<f64>(n, &sizes).unwrap();
        for (a, _) in ens.layout().party_bipartitions() {
            let bp = ens.layout().bipartition(&a).unwrap();
            for s in ens.states() {
                assert!((schmidt(s, &bp).unwrap().max_weight() - 0.5).abs() < TOL);
            }
        }
    }
}

#[test]
fn ghz_state_examples() {
    let bell = &bell_states::<f64>().unwrap()[0];
    assert!((ghz_state::<f64>(2).unwrap().overlap_sqr(bell) - 1.0).abs() < TOL);
    let g3 = ghz_state::<f64>(3).unwrap();
    let h = 0.5f64.sqrt();
    assert!((g3.amps()[0].re - h).abs() < TOL && (g3.amps()[7].re - h).abs() < TOL);
    let g4 = ghz_state::<f64>(4).unwrap();
    for bp in Bipartition::all(4) {
        assert!((entanglement_entropy(&g4, &bp).unwrap() - 1.0).abs() < TOL);
    }
    assert!(ghz_state::<f64>(1).is_err());
}

#[test]
fn lattice_examples() {
    let l1 = lattice_basis::<f64>(1).unwrap();
    let bell = bell_basis::<f64>().unwrap();
    for (a, b) in l1.states().zip(bell.states()) {
        assert!((a.overlap_sqr(b) - 1.0).abs() < TOL);
    }
    let l2 = lattice_basis::<f64>(2).unwrap();
    assert_eq!(l2.len(), 16);
    assert_eq!(l2.dims(), &[2, 2, 2, 2]);
    assert!(gram_is_identity(&l2));
    let bp = l2.layout().bipartition(&["A"]).unwrap();
    for s in l2.states() {
        assert_eq!(schmidt_rank(s, &bp).unwrap(), 4);
    }
    assert!(lattice_basis::<f64>(0).is_err());
}

#[test]
fn graph_basis_empty_graph() {
    let g = graph_state_basis::<f64>(&Graph::empty(2).unwrap()).unwrap();
    let plus = StateVector::from_real(vec![2], &[0.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
    let minus = StateVector::from_real(vec![2], &[0.5f64.sqrt(), -0.5f64.sqrt()]).unwrap();
    for (x, s) in g.ensemble.states().enumerate() {
        let a = if x & 2 == 0 { &plus } else { &minus };
        let b = if x & 1 == 0 { &plus } else { &minus };
        assert!((s.overlap_sqr(&a.kron(b)) - 1.0).abs() < TOL);
    }
}

#[test]
fn graph_basis_stabilizer_relations() {
    for g in [Graph::complete(3).unwrap(), Graph::path(4).unwrap(), Graph::cycle(4).unwrap()] {
        let n = g.vertex_count();
        let basis = graph_state_basis::<f64>(&g).unwrap();
        assert!(gram_is_identity(&basis.ensemble));
        let all: Vec<usize> = (0..n).collect();
        for (x, s) in basis.ensemble.states().enumerate() {
            for (a, k) in basis.stabilizers.iter().enumerate() {
                let sign = if (x >> (n - 1 - a)) & 1 == 1 { -1.0 } else { 1.0 };
                let out = s.apply_local(k, &all).unwrap();
                for (o, v) in out.iter().zip(s.amps()) {
                    assert!((o - v * sign).norm() < TOL);
                }
            }
        }
        let conj = basis.graph_state.conj();
        assert_eq!(basis.resource, conj);
    }
}

/// `exp(-i pi/4 X)` on vertex 0 and `H exp(i pi/4 Z)` elsewhere: local
/// complementation at vertex 0 turns `K_m` into a star, Hadamards on the
/// leaves turn the star into GHZ.
fn complete_to_ghz(s: &StateVector<f64>, m: usize) -> StateVector<f64> {
    let h = 0.5f64.sqrt();
    let rx = Operator::new(vec![2], vec![C::new(h, 0.0), C::new(0.0, -h), C::new(0.0, -h), C::new(h, 0.0)]).unwrap();
    let rz = Operator::new(vec![2], vec![C::new(h, h), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(h, -h)]).unwrap();
    let leaf = gates::hadamard().matmul(&rz).unwrap();
    let mut t = s.evolve(&rx, &[0]).unwrap();
    for v in 1..m {
        t = t.evolve(&leaf, &[v]).unwrap();
    }
    t
}

#[test]
fn complete_graph_is_locally_ghz() {
    for m in 2..=4 {
        let basis = graph_state_basis::<f64>(&Graph::complete(m).unwrap()).unwrap();
        let ghz = ghz_basis::<f64>(m, &vec![1; m]).unwrap();
        let mut seen = vec![false; ghz.len()];
        for s in basis.ensemble.states() {
            let t = complete_to_ghz(s, m);
            seen[match_member(&ghz, &t).expect("local image is a GHZ member")] = true;
        }
        assert!(seen.iter().all(|&b| b), "m = {m}");
    }
}

#[test]
fn graph_basis_contains_pauli_orbit() {
    let g = Graph::new(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
    let basis = graph_state_basis::<f64>(&g).unwrap();
    let paulis = [gates::pauli_x(), gates::pauli_y(), gates::pauli_z()];
    for code in 0..4usize.pow(4) {
        let mut s = basis.graph_state.clone();
        for v in 0..4 {
            let p = (code >> (2 * v)) & 3;
            if p > 0 {
                s = s.evolve(&paulis[p - 1], &[v]).unwrap();
            }
        }
        assert!(match_member(&basis.ensemble, &s).is_some());
    }
}

#[test]
fn graph_rejects_self_loops() {
    assert!(Graph::new(3, [(1, 1)]).is_err());
    assert!(Graph::new(3, [(0, 3)]).is_err());
}

#[test]
fn parametric_examples() {
    let comp = parametric_basis::<f64>(1.0, 1.0).unwrap();
    for s in comp.states() {
        assert_eq!(s.amps().iter().filter(|a| (a.norm() - 1.0).abs() < TOL).count(), 1);
    }
    let h = 0.5f64.sqrt();
    let bellish = parametric_basis::<f64>(h, h).unwrap();
    let bell = bell_basis::<f64>().unwrap();
    for s in bellish.states() {
        assert!(match_member(&bell, s).is_some());
    }
    assert!(gram_is_identity(&parametric_basis::<f64>(0.9, 0.8).unwrap()));
    assert!(matches!(parametric_basis::<f64>(0.5, 0.8), Err(Error::ParameterOutOfRange(_))));
    assert!(parametric_basis::<f64>(0.9, 1.2).is_err());
}

#[test]
fn coarsen_examples() {
    let abc = PartyLayout::from_sizes(&[1, 1, 1]).unwrap();
    let xy = coarsen(&abc, &grouping(&[("A", "X"), ("B", "X"), ("C", "Y")])).unwrap();
    assert_eq!(xy.names(), vec!["X", "Y"]);
    assert_eq!(xy.party("X").unwrap().subsystems, vec![0, 1]);
    assert_eq!(xy.party("Y").unwrap().subsystems, vec![2]);

    let id = coarsen(&abc, &grouping(&[("A", "A"), ("B", "B"), ("C", "C")])).unwrap();
    assert_eq!(id, abc);

    let four = PartyLayout::one_per_subsystem(4).unwrap();
    let two = coarsen(&four, &grouping(&[("A", "A"), ("B", "A"), ("C", "B"), ("D", "B")])).unwrap();
    assert_eq!(two.len(), 2);
    assert_eq!(two.num_subsystems(), 4);

    assert!(coarsen(&abc, &BTreeMap::from([("A".to_string(), "X".to_string())])).is_err());
}

#[test]
fn layout_validation() {
    assert!(PartyLayout::from_lists(vec![("A".into(), vec![0]), ("B".into(), vec![0])]).is_err());
    assert!(PartyLayout::from_lists(vec![("A".into(), vec![0]), ("B".into(), vec![])]).is_err());
    assert!(PartyLayout::from_lists(vec![("A".into(), vec![0]), ("B".into(), vec![2])]).is_err());
    assert_eq!(party_name(0), "A");
    assert_eq!(party_name(25), "Z");
    assert_eq!(party_name(26), "P26");
}

#[test]
fn ensemble_validation() {
    let s = bell_states::<f64>().unwrap();
    let layout = PartyLayout::from_sizes(&[1, 1]).unwrap();
    let bad = vec![Member { prior: 0.7, state: s[0].clone() }, Member { prior: 0.7, state: s[1].clone() }];
    assert!(Ensemble::new(layout.clone(), bad).is_err());
    assert!(Ensemble::equiprobable(PartyLayout::from_sizes(&[1, 2]).unwrap(), s).is_err());
}
