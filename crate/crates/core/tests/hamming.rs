use proptest::prelude::*;
use unimono::hamming::*;
use unimono::Error;

#[test]
fn expansion_examples() {
    let v = binary_vector(7, 3).unwrap();
    assert_eq!(v.bits(), &[1, 1, 1]);
    assert_eq!(hamming_weight(&v), 3);
    assert_eq!(v.to_string(), "(1,1,1)");
    assert_eq!(hamming_weight(&binary_vector(0, 4).unwrap()), 0);
    assert!(matches!(binary_vector(16, 4), Err(Error::Overflow { .. })));
}

#[test]
fn lemma_boundaries() {
    for e in [1.0, 1.5, 2.0, 7.0] {
        assert_eq!(lemma1_check(0.0, e, LemmaMode::Alpha).unwrap(), 0.0);
    }
    assert!(lemma1_check(1.0, 1.0, LemmaMode::Alpha).unwrap().abs() < 1e-15);
    assert!(lemma1_check(1.0, 1.0, LemmaMode::Beta).unwrap().abs() < 1e-15);
    assert!(lemma1_check(0.5, 0.5, LemmaMode::Alpha).is_err());
    assert!(lemma1_check(0.5, 1.5, LemmaMode::Beta).is_err());
    assert!(lemma1_check(1.5, 1.5, LemmaMode::Alpha).is_err());
}

proptest! {
    #[test]
    fn weight_never_exceeds_index(j in 0usize..(1 << 24)) {
        prop_assert!(weight_of(j) as usize <= j);
        prop_assert_eq!(hamming_weight(&binary_vector(j as u64, 24).unwrap()), weight_of(j));
    }

    #[test]
    fn alpha_lemma_holds(x in 0.0f64..=1.0, alpha in 1.0f64..10.0) {
        let slack = lemma1_check(x, alpha, LemmaMode::Alpha).unwrap();
        prop_assert!(lemma1_holds(slack, LemmaMode::Alpha), "x={x} alpha={alpha} slack={slack}");
    }

    #[test]
    fn beta_lemma_holds(x in 0.0f64..=1.0, beta in 0.0f64..=1.0) {
        let slack = lemma1_check(x, beta, LemmaMode::Beta).unwrap();
        prop_assert!(lemma1_holds(slack, LemmaMode::Beta), "x={x} beta={beta} slack={slack}");
    }
}
