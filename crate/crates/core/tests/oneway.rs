use locce_core::families::{bell_basis, bell_states, computational_basis, parametric_basis};
use locce_core::oneway::*;
use locce_core::StateVector;

fn bell_rep() -> MatrixRep<f64> {
    to_matrix_rep(&bell_basis().unwrap()).unwrap()
}

#[test]
fn matrix_rep_examples() {
    let comp = to_matrix_rep(&computational_basis::<f64>(&[2, 2]).unwrap()).unwrap();
    let m = &comp.matrices[0];
    assert!((m[0].re - 2f64.sqrt()).abs() < 1e-12);
    assert!(m[1..].iter().all(|x| x.norm() < 1e-12));

    let rep = bell_rep();
    let id = &rep.matrices[0];
    assert!((id[0].re - 1.0).abs() < 1e-12 && (id[3].re - 1.0).abs() < 1e-12);
    assert!(id[1].norm() < 1e-12 && id[2].norm() < 1e-12);

    let (a, g) = (0.9f64, 0.8f64);
    let par = to_matrix_rep(&parametric_basis(a, g).unwrap()).unwrap();
    let m = &par.matrices[0];
    let b = (1.0 - a * a).sqrt();
    assert!((m[0].re - 2f64.sqrt() * a).abs() < 1e-12);
    assert!((m[3].re - 2f64.sqrt() * b).abs() < 1e-12);
    assert_eq!(par.full_rank_member(), Some(0));
    assert_eq!(comp.full_rank_member(), None);
}

#[test]
fn round_trip_and_trace_orthogonality() {
    for ens in [bell_basis::<f64>().unwrap(), parametric_basis(0.8, 0.75).unwrap()] {
        let rep = to_matrix_rep(&ens).unwrap();
        for (i, s) in ens.states().enumerate() {
            assert!((rep.reconstruct(i).unwrap().overlap_sqr(s) - 1.0).abs() < 1e-9);
            let r = rep.reconstruct(i).unwrap();
            let diff: f64 = r.amps().iter().zip(s.amps()).map(|(x, y)| (x - y).norm_sqr()).sum();
            assert!(diff < 1e-18);
        }
        let gram = rep.trace_gram();
        for (i, row) in gram.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - want).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn span_argument() {
    let rep = bell_rep();
    let s = span_check(&rep).unwrap();
    assert_eq!(s.count, 3);
    assert!(s.independent() && s.traceless());
}

#[test]
fn teleportation_certificate_is_exact() {
    let cert = teleportation_certificate::<f64>(2).unwrap();
    let r = orthogonality_residual(&bell_rep(), &ResourceSpectrum::maximal(2), &cert.phis, &cert.weights).unwrap();
    assert!(r < 1e-9, "{r}");
    for phi in &cert.phis {
        let rk = rk_structure_check(&bell_rep(), &ResourceSpectrum::maximal(2), phi).unwrap();
        assert!(rk.distance < 1e-9);
    }
}

#[test]
fn single_member_leaves_completeness_only() {
    let rep = MatrixRep {
        d: 2,
        matrices: vec![bell_rep().matrices[0].clone()],
    };
    let phis: Vec<StateVector<f64>> = bell_states().unwrap();
    let r = orthogonality_residual(&rep, &ResourceSpectrum::maximal(2), &phis, &[0.5; 4]).unwrap();
    // sum_k 0.5 |phi_k><phi_k| = I/2, defect norm^2 = 4 * 0.25.
    assert!((r - 1.0).abs() < 1e-12);
}

#[test]
fn rk_check_on_unentangled_spectrum() {
    let lam = ResourceSpectrum::new(vec![1.6, 0.4]).unwrap();
    let phi = bell_states::<f64>().unwrap().swap_remove(0);
    let rk = rk_structure_check(&bell_rep(), &lam, &phi).unwrap();
    assert!((rk.distance - 0.6 * 2f64.sqrt()).abs() < 1e-12);
    let comp = to_matrix_rep(&computational_basis::<f64>(&[2, 2]).unwrap()).unwrap();
    assert!(rk_structure_check(&comp, &lam, &phi).is_err());
}

#[test]
fn spectrum_validation() {
    assert!(ResourceSpectrum::new(vec![1.5, 0.4]).is_err());
    assert!(ResourceSpectrum::new(vec![2.5, -0.5]).is_err());
    assert!(ResourceSpectrum::new(vec![1.6f64, 0.4]).is_ok());
}

#[test]
fn search_finds_teleportation_solution() {
    let r = feasibility_search(&bell_rep(), &ResourceSpectrum::maximal(2), 4, 4, 11).unwrap();
    assert!(r.best_residual < 1e-6, "{}", r.best_residual);
    let again = feasibility_search(&bell_rep(), &ResourceSpectrum::maximal(2), 4, 4, 11).unwrap();
    assert_eq!(r, again);
}

#[test]
fn search_on_computational_basis_is_feasible() {
    let comp = to_matrix_rep(&computational_basis::<f64>(&[2, 2]).unwrap()).unwrap();
    let lam = ResourceSpectrum::new(vec![1.6, 0.4]).unwrap();
    let r = feasibility_search(&comp, &lam, 4, 4, 3).unwrap();
    assert!(r.best_residual < 1e-6, "{}", r.best_residual);
}

#[test]
fn search_rejects_bad_options() {
    assert!(feasibility_search(&bell_rep(), &ResourceSpectrum::maximal(2), 3, 1, 0).is_err());
    assert!(feasibility_search(&bell_rep(), &ResourceSpectrum::maximal(2), 17, 1, 0).is_err());
    assert!(feasibility_search(&bell_rep(), &ResourceSpectrum::maximal(2), 4, 0, 0).is_err());
}

#[test]
fn non_maximal_spectrum_stays_infeasible() {
    let lam = ResourceSpectrum::new(vec![1.6, 0.4]).unwrap();
    for k in [4, 8] {
        let r = feasibility_search(&bell_rep(), &lam, k, 10, 5).unwrap();
        eprintln!("K={k}: best residual {}", r.best_residual);
        assert!(r.best_residual > 1e-2);
    }
}
