use rand::Rng;
use unimono::entropy::*;
use unimono::inequality::{monogamy_valid, polygamy_valid};
use unimono::qstate::{seeded_rng, Spectrum};

fn random_spectrum<R: Rng>(rng: &mut R, dim: usize) -> Spectrum {
    let raw: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    Spectrum::new(raw.iter().map(|x| x / total).collect()).unwrap()
}

fn p(q: f64, s: f64) -> UnifiedParams {
    UnifiedParams::new(q, s).unwrap()
}

#[test]
fn limits_stitch_continuously() {
    let mut rng = seeded_rng(1);
    for _ in 0..100 {
        let dim = rng.random_range(2..=8);
        let spec = random_spectrum(&mut rng, dim);
        let q = rng.random_range(0.1..4.0);
        let s = rng.random_range(0.05..=1.0);
        let renyi = renyi_entropy(&spec, q).unwrap();
        assert!((unified_entropy(&spec, &p(q, 1e-5)) - renyi).abs() <= 1e-4);
        for q1 in [1.0 - 1e-5, 1.0 + 1e-5] {
            assert!((unified_entropy(&spec, &p(q1, s)) - von_neumann_entropy(&spec)).abs() <= 1e-4);
        }
        let tsallis = tsallis_entropy(&spec, q).unwrap();
        assert!((unified_entropy(&spec, &p(q, 1.0 - 1e-9)) - tsallis).abs() <= 1e-8);
    }
}

#[test]
fn zero_exactly_on_pure_spectra() {
    let mut rng = seeded_rng(2);
    let mut grid = Vec::new();
    for i in 0..=20 {
        for j in 0..=20 {
            let (q, s) = (1.0 + 3.0 * i as f64 / 20.0, j as f64 / 20.0);
            if (monogamy_valid(q, s) || polygamy_valid(q, s)) && s > 0.0 {
                grid.push((q, s));
            }
        }
    }
    assert!(grid.len() > 20);
    for &(q, s) in &grid {
        let pure = Spectrum::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(unified_entropy(&pure, &p(q, s)).abs() <= 1e-10);
        let mixed = random_spectrum(&mut rng, 4);
        assert!(unified_entropy(&mixed, &p(q, s)) > 1e-10);
    }
}

#[test]
fn maximally_mixed_is_the_maximizer() {
    let mut rng = seeded_rng(3);
    for (q, s) in [(2.0, 1.0), (2.5, 0.5), (1.5, 0.9), (3.0, 1.0), (1.0, 0.5)] {
        let params = p(q, s);
        for dim in [2, 4] {
            let top = unified_entropy(&Spectrum::maximally_mixed(dim), &params);
            for _ in 0..1000 {
                let v = unified_entropy(&random_spectrum(&mut rng, dim), &params);
                assert!(v <= top + 1e-12, "(q,s)=({q},{s}) dim {dim}: {v} > {top}");
            }
        }
    }
}

#[test]
fn near_zero_drift_is_clamped() {
    let spec = Spectrum::new(vec![1.0 + 5e-10, -5e-10]).unwrap();
    assert!(unified_entropy(&spec, &p(2.0, 0.5)) >= 0.0);
    assert!(Spectrum::new(vec![1.1, -0.1]).is_err());
    assert!(Spectrum::new(vec![0.5, 0.4]).is_err());
}

#[test]
fn regimes_dispatch_to_closed_forms() {
    let spec = Spectrum::new(vec![0.7, 0.2, 0.1]).unwrap();
    assert_eq!(
        unified_entropy(&spec, &p(1.0, 0.3)),
        von_neumann_entropy(&spec)
    );
    assert_eq!(
        unified_entropy(&spec, &p(3.0, 0.0)),
        renyi_entropy(&spec, 3.0).unwrap()
    );
}
