use locce_core::families::*;
use locce_core::fidelity::*;
use locce_core::tensor::{gates, Bipartition, Operator};
use locce_core::zoo::example4_protocol;
use locce_core::{Error, StateVector, C};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < TOL
}

fn ket(bits: &[u8]) -> StateVector<f64> {
    StateVector::from_bits(bits).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng, dims: &[usize]) -> StateVector<f64> {
    let n: usize = dims.iter().product();
    let amps = (0..n).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    StateVector::from_unnormalized(dims.to_vec(), amps).unwrap()
}

#[test]
fn trivial_povm_on_single_state() {
    let s = bell_states::<f64>().unwrap().swap_remove(0);
    let ens = Ensemble::equiprobable(PartyLayout::from_sizes(&[1, 1]).unwrap(), vec![s.clone()]).unwrap();
    let povm = Povm::new(vec![Operator::identity(vec![2, 2])]).unwrap();
    let f = average_fidelity(&ens, &povm, &GuessStrategy::new(vec![s])).unwrap();
    assert!(close(f, 1.0));
}

#[test]
fn ghz_in_computational_basis_is_half() {
    let ens = ghz_basis::<f64>(3, &[1, 1, 1]).unwrap();
    let (_, f) = optimal_guess(&ens, &Povm::computational(&[2, 2, 2]).unwrap()).unwrap();
    assert!(close(f, 0.5), "{f}");
}

#[test]
fn two_bell_states_are_perfectly_separated() {
    let bell = bell_states::<f64>().unwrap();
    let ens = Ensemble::equiprobable(
        PartyLayout::from_sizes(&[1, 1]).unwrap(),
        vec![bell[0].clone(), bell[3].clone()],
    )
    .unwrap();
    let povm = Povm::computational(&[2, 2]).unwrap();
    let g = GuessStrategy::new(vec![bell[0].clone(), bell[3].clone(), bell[3].clone(), bell[0].clone()]);
    assert!(close(average_fidelity(&ens, &povm, &g).unwrap(), 1.0));
}

#[test]
fn dimension_mismatch_is_reported() {
    let ens = bell_basis::<f64>().unwrap();
    let povm = Povm::computational(&[2, 2, 2]).unwrap();
    assert!(matches!(optimal_guess(&ens, &povm), Err(Error::DimensionMismatch(_))));
}

#[test]
fn povm_validation() {
    assert!(Povm::<f64>::new(vec![Operator::identity(vec![2]).scale(C::new(0.5, 0.0))]).is_err());
    let neg = Operator::from_real(vec![2], &[2.0, 0.0, 0.0, -1.0]).unwrap();
    let pos = Operator::from_real(vec![2], &[-1.0, 0.0, 0.0, 2.0]).unwrap();
    assert!(Povm::<f64>::new(vec![neg, pos]).is_err());
    assert!(Povm::<f64>::computational(&[2, 3]).unwrap().completeness_residual() < TOL);
}

#[test]
fn single_support_outcome_guesses_that_member() {
    let ens = computational_basis::<f64>(&[2, 2]).unwrap();
    let (g, f) = optimal_guess(&ens, &Povm::computational(&[2, 2]).unwrap()).unwrap();
    assert!(close(f, 1.0));
    for (i, s) in g.guesses.iter().enumerate() {
        assert!(close(s.overlap_sqr(ens.state(i)), 1.0));
    }
}

#[test]
fn parametric_closed_form() {
    for (a, c) in [(0.9f64, 0.8f64), (1.0, 0.75), (0.72, 0.95)] {
        let ens = parametric_basis(a, c).unwrap();
        let (_, f) = optimal_guess(&ens, &Povm::computational(&[2, 2]).unwrap()).unwrap();
        assert!(close(f, (a * a + c * c) / 2.0), "{a} {c}: {f}");
    }
}

#[test]
fn degenerate_outcome_picks_lowest_basis_state() {
    let bell = bell_states::<f64>().unwrap();
    let ens = Ensemble::equiprobable(PartyLayout::from_sizes(&[1, 1]).unwrap(), bell[..3].to_vec()).unwrap();
    let (g, _) = optimal_guess(&ens, &Povm::computational(&[2, 2]).unwrap()).unwrap();
    assert!(close(g.guesses[0].overlap_sqr(&ket(&[0, 0])), 1.0));
}

#[test]
fn optimal_guess_beats_random_strategies() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for ens in [parametric_basis::<f64>(0.9, 0.8).unwrap(), ghz_basis(3, &[1, 1, 1]).unwrap()] {
        let povm = Povm::computational(ens.dims()).unwrap();
        let (_, best) = optimal_guess(&ens, &povm).unwrap();
        for _ in 0..100 {
            let g = GuessStrategy::new((0..povm.len()).map(|_| random_state(&mut rng, ens.dims())).collect());
            assert!(average_fidelity(&ens, &povm, &g).unwrap() <= best + TOL);
        }
    }
}

#[test]
fn global_optimum_examples() {
    assert!(close(global_optimum_orthonormal(&bell_basis::<f64>().unwrap()).unwrap(), 1.0));
    assert!(close(global_optimum_orthonormal(&ghz_basis::<f64>(3, &[1, 1, 1]).unwrap()).unwrap(), 1.0));
    assert!(close(global_optimum_orthonormal(&lattice_basis::<f64>(2).unwrap()).unwrap(), 1.0));
    let h = 0.5f64.sqrt();
    let plus = StateVector::from_real(vec![2], &[h, h]).unwrap();
    let ens = Ensemble::equiprobable(PartyLayout::from_sizes(&[1]).unwrap(), vec![ket(&[0]), plus]).unwrap();
    assert!(matches!(global_optimum_orthonormal(&ens), Err(Error::NonOrthogonal)));
}

#[test]
fn mes_bound_examples() {
    assert!(close(mes_bound::<f64>(16, 4).unwrap(), 0.25));
    assert!(close(mes_bound::<f64>(4, 2).unwrap(), 0.5));
    assert!(close(mes_bound::<f64>(3, 2).unwrap(), 2.0 / 3.0));
}

#[test]
fn sep_bound_examples() {
    let g3 = ghz_basis::<f64>(3, &[1, 1, 1]).unwrap();
    let bp = Bipartition::new(vec![0], vec![1, 2]);
    assert!(close(schmidt_coeff_sep_bound(&g3, &bp).unwrap(), 0.5));
    let g4 = ghz_basis::<f64>(4, &[1, 1, 1, 1]).unwrap();
    for bp in Bipartition::all(4) {
        assert!(close(schmidt_coeff_sep_bound(&g4, &bp).unwrap(), 0.5));
    }
    let par = parametric_basis::<f64>(0.9, 0.8).unwrap();
    let err = schmidt_coeff_sep_bound(&par, &Bipartition::new(vec![0], vec![1])).unwrap_err();
    assert!(matches!(err, Error::PremiseViolated(_)));
}

#[test]
fn min_bound_examples() {
    let three = [("A|BC", 0.5), ("B|AC", 0.5), ("C|AB", 0.5)];
    assert!(close(bipartition_min_bound(three).unwrap(), 0.5));
    assert!(close(bipartition_min_bound([("A|B", 0.3)]).unwrap(), 0.3));
    assert!(close(bipartition_min_bound([(0, 0.7), (1, 1.0)]).unwrap(), 0.7));
    assert!(bipartition_min_bound(Vec::<(u8, f64)>::new()).is_err());
}

#[test]
fn entropy_check_ghz_resource() {
    for (n, sizes) in [(3, vec![1, 1, 1]), (5, vec![2, 2, 1])] {
        let ens = ghz_basis::<f64>(n, &sizes).unwrap();
        let m = sizes.len();
        let report =
            entropy_bound_check(&ghz_state(m).unwrap(), &PartyLayout::one_per_subsystem(m).unwrap(), &ens).unwrap();
        assert!(report.passes && report.premise_holds && report.corollary_holds);
        for row in &report.rows {
            assert!(close(row.mean_member_entropy, 1.0));
            assert!(close(row.resource_entropy, 1.0));
        }
    }
}

#[test]
fn entropy_check_product_resource_fails() {
    let ens = ghz_basis::<f64>(3, &[1, 1, 1]).unwrap();
    let report = entropy_bound_check(&ket(&[0, 0, 0]), &PartyLayout::one_per_subsystem(3).unwrap(), &ens).unwrap();
    assert!(!report.passes);
    assert!(report.rows.iter().all(|r| !r.satisfied));
}

#[test]
fn entropy_check_example4() {
    let (p, _) = example4_protocol::<f64>().unwrap();
    let bell = bell_states::<f64>().unwrap().swap_remove(0);
    let layout = PartyLayout::from_lists(vec![("B".into(), vec![0]), ("C".into(), vec![1])]).unwrap();
    let report = entropy_bound_check(&bell, &layout, p.ensemble()).unwrap();
    assert!(!p.ensemble().is_complete_basis());
    assert!(report.passes);
}

#[test]
fn entropy_check_rejects_unknown_party() {
    let ens = bell_basis::<f64>().unwrap();
    let layout = PartyLayout::from_lists(vec![("A".into(), vec![0]), ("Q".into(), vec![1])]).unwrap();
    let bell = bell_states::<f64>().unwrap().swap_remove(0);
    assert!(matches!(entropy_bound_check(&bell, &layout, &ens), Err(Error::UnknownParty(_))));
}

#[test]
fn mixed_strategy_examples() {
    assert!(close(mixed_strategy_fidelity(1.0, 0.9, 0.5).unwrap(), 0.9));
    assert!(close(mixed_strategy_fidelity(0.4, 1.0, 0.5).unwrap(), 0.7));
    assert!(mixed_strategy_fidelity(0.1, 1.0, 0.5).unwrap() > 0.5);
    assert!(mixed_strategy_fidelity(1.5, 1.0, 0.5).is_err());
}

#[test]
fn vidal_examples() {
    let bp = Bipartition::new(vec![0], vec![1]);
    let bell = bell_states::<f64>().unwrap().swap_remove(0);
    assert!(close(vidal_conversion_probability(&bell, &bp, 2).unwrap(), 1.0));
    let partial = StateVector::from_real(vec![2, 2], &[0.8f64.sqrt(), 0.0, 0.0, 0.2f64.sqrt()]).unwrap();
    assert!(close(vidal_conversion_probability(&partial, &bp, 2).unwrap(), 0.4));
    assert!(close(vidal_conversion_probability(&ket(&[0, 0]), &bp, 2).unwrap(), 0.0));
    assert!(vidal_conversion_probability(&bell, &bp, 1).is_err());
}

#[test]
fn vidal_monotone_in_smaller_coefficient() {
    let bp = Bipartition::new(vec![0], vec![1]);
    let mut last = -1.0;
    for k in 0..=10 {
        let small = 0.05 * k as f64;
        let s = StateVector::from_real(vec![2, 2], &[(1.0 - small).sqrt(), 0.0, 0.0, small.sqrt()]).unwrap();
        let p = vidal_conversion_probability(&s, &bp, 2).unwrap();
        assert!(p >= last - TOL);
        last = p;
    }
}

#[test]
fn fidelity_invariant_under_global_unitary() {
    let ens = parametric_basis::<f64>(0.9, 0.8).unwrap();
    let povm = Povm::computational(&[2, 2]).unwrap();
    let (g, f) = optimal_guess(&ens, &povm).unwrap();
    let u = gates::hadamard::<f64>().kron(&gates::pauli_y());
    let rot = |s: &StateVector<f64>| s.evolve(&u, &[0, 1]).unwrap();
    let ens2 = Ensemble::equiprobable(ens.layout().clone(), ens.states().map(rot).collect()).unwrap();
    let elements = povm
        .elements()
        .iter()
        .map(|e| u.matmul(e).unwrap().matmul(&u.adjoint()).unwrap())
        .collect();
    let povm2 = Povm::new(elements).unwrap();
    let g2 = GuessStrategy::new(g.guesses.iter().map(rot).collect());
    assert!(close(average_fidelity(&ens2, &povm2, &g2).unwrap(), f));
}
