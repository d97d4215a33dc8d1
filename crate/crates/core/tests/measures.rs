use num_complex::Complex64;
use unimono::entropy::UnifiedParams;
use unimono::harness::oracle::{concurrence, unified_of_concurrence};
use unimono::measures::*;
use unimono::qstate::*;

fn p(q: f64, s: f64) -> UnifiedParams {
    UnifiedParams::new(q, s).unwrap()
}

fn cut2() -> Bipartition {
    Bipartition::new(2, &[0]).unwrap()
}

fn budget() -> OptBudget {
    OptBudget::default()
}

fn check_witness(rho: &DensityMatrix, cut: &Bipartition, params: &UnifiedParams, r: &RoofResult) {
    let total: f64 = r.witness.members().iter().map(|(w, _)| w).sum();
    assert!((total - 1.0).abs() < 1e-9);
    assert!(r.witness.reconstruct().max_abs_diff(rho.entries()) < 1e-7);
    let avg = r.witness.average_entanglement(cut, params).unwrap();
    assert!((avg - r.value).abs() < 1e-8, "{avg} vs {}", r.value);
}

#[test]
fn pure_examples() {
    let bell = named_state(StateKind::Bell, 2).unwrap();
    assert!((ue_pure(&bell, &cut2(), &p(2.0, 1.0)).unwrap() - 0.5).abs() < 1e-15);
    let s = 0.5f64.sqrt();
    let plus =
        PureState::new(2, [s, s, 0.0, 0.0].map(|x| Complex64::new(x, 0.0)).to_vec()).unwrap();
    assert!(ue_pure(&plus, &cut2(), &p(2.0, 1.0)).unwrap().abs() < 1e-15);
    let w = named_state(StateKind::W, 3).unwrap();
    let v = ue_pure(&w, &Bipartition::new(3, &[0]).unwrap(), &p(2.0, 1.0)).unwrap();
    assert!((v - 4.0 / 9.0).abs() < 1e-15);
}

#[test]
fn pure_swap_symmetry() {
    for seed in 0..30 {
        let psi = haar_random_pure(4, seed).unwrap();
        for side in [vec![0], vec![1, 2], vec![0, 3]] {
            let cut = Bipartition::new(4, &side).unwrap();
            for (q, s) in [(2.0, 1.0), (1.5, 0.8), (3.0, 0.5)] {
                let a = ue_pure(&psi, &cut, &p(q, s)).unwrap();
                let b = ue_pure(&psi, &cut.swapped(), &p(q, s)).unwrap();
                assert!((a - b).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn pure_inputs_have_a_single_decomposition() {
    let bell = named_state(StateKind::Bell, 2).unwrap().density();
    let r = ue_mixed(&bell, &cut2(), &p(2.0, 1.0), &budget()).unwrap();
    assert_eq!(r.witness.len(), 1);
    assert!((r.value - 0.5).abs() < 1e-12);
    for seed in 0..5 {
        let psi = haar_random_pure(3, seed).unwrap();
        let cut = Bipartition::new(3, &[1]).unwrap();
        let exact = ue_pure(&psi, &cut, &p(2.5, 1.0)).unwrap();
        let lo = ue_mixed(&psi.density(), &cut, &p(2.5, 1.0), &budget()).unwrap();
        let hi = ueoa(&psi.density(), &cut, &p(2.5, 1.0), &budget()).unwrap();
        assert!((lo.value - exact).abs() < 1e-10 && (hi.value - exact).abs() < 1e-10);
    }
}

#[test]
fn separable_mixture_has_zero_roof() {
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = Complex64::new(0.5, 0.0);
    m[(3, 3)] = Complex64::new(0.5, 0.0);
    let rho = DensityMatrix::new(2, m).unwrap();
    let r = ue_mixed(&rho, &cut2(), &p(2.0, 1.0), &budget()).unwrap();
    assert!(r.value.abs() < 1e-12);
    check_witness(&rho, &cut2(), &p(2.0, 1.0), &r);
}

#[test]
fn w_pair_matches_concurrence_oracle() {
    let rho = named_state(StateKind::W, 3)
        .unwrap()
        .reduced(&[0, 1])
        .unwrap();
    let c = concurrence(&rho).unwrap();
    assert!((c - 2.0 / 3.0).abs() < 1e-12);
    let r = ue_mixed(&rho, &cut2(), &p(2.0, 1.0), &budget()).unwrap();
    assert!((r.value - 2.0 / 9.0).abs() < 1e-3);
    assert!((r.value - unified_of_concurrence(c, &p(2.0, 1.0))).abs() < 1e-8);
    assert!(r.converged);
    check_witness(&rho, &cut2(), &p(2.0, 1.0), &r);
}

#[test]
fn ghz_pair_assisted_attains_bell_decomposition() {
    let rho = named_state(StateKind::Ghz, 3)
        .unwrap()
        .reduced(&[0, 1])
        .unwrap();
    let r = ueoa(&rho, &cut2(), &p(2.0, 1.0), &budget()).unwrap();
    assert!((r.value - 0.5).abs() < 1e-3);
    check_witness(&rho, &cut2(), &p(2.0, 1.0), &r);
    // The convex roof of the same state vanishes.
    let lo = ue_mixed(&rho, &cut2(), &p(2.0, 1.0), &budget()).unwrap();
    assert!(lo.value.abs() < 1e-12);
}

#[test]
fn pure_marginal_gives_zero_assistance() {
    let zero = PureState::basis(1, 0).unwrap().density();
    let rho = zero.tensor(&random_mixed(1, 2, 5).unwrap());
    let r = ueoa(&rho, &cut2(), &p(2.0, 1.0), &budget()).unwrap();
    assert!(r.value.abs() < 1e-12);
}

#[test]
fn roofs_match_oracle_on_random_two_qubit_states() {
    // The closed form is the convex roof for these parameters.
    for seed in 0..6 {
        let rho = random_mixed(2, 2 + seed as usize % 3, 100 + seed).unwrap();
        let c = concurrence(&rho).unwrap();
        for (q, s) in [(2.0, 1.0), (3.0, 0.5)] {
            let r = ue_mixed(&rho, &cut2(), &p(q, s), &budget()).unwrap();
            let oracle = unified_of_concurrence(c, &p(q, s));
            assert!(r.value >= oracle - 1e-10, "roof below the true minimum");
            assert!(
                r.value - oracle < 1e-6,
                "seed {seed}: {} vs {oracle}",
                r.value
            );
            check_witness(&rho, &cut2(), &p(q, s), &r);
        }
    }
}

#[test]
fn assisted_dominates_roof() {
    for seed in 0..8 {
        let rho = haar_random_pure(3, seed).unwrap().reduced(&[0, 2]).unwrap();
        for (q, s) in [(2.0, 1.0), (1.5, 0.8)] {
            let lo = ue_mixed(&rho, &cut2(), &p(q, s), &budget()).unwrap();
            let hi = ueoa(&rho, &cut2(), &p(q, s), &budget()).unwrap();
            assert!(hi.value >= lo.value - 1e-9);
            check_witness(&rho, &cut2(), &p(q, s), &hi);
        }
    }
}

#[test]
fn more_restarts_never_hurt() {
    let rho = random_mixed(2, 3, 42).unwrap();
    let params = p(2.5, 1.0);
    let mut last_min = f64::INFINITY;
    let mut last_max = f64::NEG_INFINITY;
    for restarts in [1, 2, 4, 8, 16] {
        let b = OptBudget {
            restarts,
            ..budget()
        };
        let lo = ue_mixed(&rho, &cut2(), &params, &b).unwrap();
        let hi = ueoa(&rho, &cut2(), &params, &b).unwrap();
        assert_eq!(lo.restarts_used, restarts);
        assert!(lo.value <= last_min && hi.value >= last_max);
        last_min = lo.value;
        last_max = hi.value;
    }
}

#[test]
fn results_are_reproducible() {
    let rho = random_mixed(2, 4, 8).unwrap();
    let a = ue_mixed(&rho, &cut2(), &p(2.0, 0.25), &budget()).unwrap();
    let b = ue_mixed(&rho, &cut2(), &p(2.0, 0.25), &budget()).unwrap();
    assert_eq!(a.value, b.value);
    assert_eq!(a.witness, b.witness);
}

#[test]
fn larger_systems_search_full_cut() {
    // A|BC cut of a mixed 3-qubit state: rank 2, member vectors of length 8.
    let rho = random_mixed(3, 2, 17).unwrap();
    let cut = Bipartition::new(3, &[0]).unwrap();
    let lo = ue_mixed(&rho, &cut, &p(2.0, 1.0), &budget()).unwrap();
    let hi = ueoa(&rho, &cut, &p(2.0, 1.0), &budget()).unwrap();
    check_witness(&rho, &cut, &p(2.0, 1.0), &lo);
    check_witness(&rho, &cut, &p(2.0, 1.0), &hi);
    assert!(hi.value >= lo.value);
}

#[test]
fn bad_inputs_are_rejected() {
    let rho = DensityMatrix::maximally_mixed(2).unwrap();
    let wrong_cut = Bipartition::new(3, &[0]).unwrap();
    assert!(ue_mixed(&rho, &wrong_cut, &p(2.0, 1.0), &budget()).is_err());
    let zero_budget = OptBudget {
        restarts: 0,
        ..budget()
    };
    assert!(ue_mixed(&rho, &cut2(), &p(2.0, 1.0), &zero_budget).is_err());
    assert_eq!(budget().ensemble_cap(4), 16);
    assert_eq!(budget().ensemble_cap(2), 6);
}
