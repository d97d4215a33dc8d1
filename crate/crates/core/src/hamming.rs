//! Binary expansions, Hamming weights, and the two scalar power inequalities
//! behind the weighted bounds:
//!
//! * `(1 + x)^α ≥ 1 + α x^α` for `x ∈ [0, 1]`, `α ≥ 1`
//! * `(1 + x)^β ≤ 1 + β x^β` for `x ∈ [0, 1]`, `0 ≤ β ≤ 1`

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the sign of [`lemma1_check`] slack.
pub const LEMMA_SLACK_TOL: f64 = 1e-12;

/// Coefficients `(j_0, …, j_{n−1})` with `j = Σ j_i 2^i`; `bits[0]` is the
/// least significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryVector {
    bits: Vec<u8>,
}

impl BinaryVector {
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn value(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .map(|(i, &b)| u64::from(b) << i)
            .sum()
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bits.iter().map(u8::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn binary_vector(j: u64, n: usize) -> Result<BinaryVector> {
    if n < 64 && j >> n != 0 {
        return Err(Error::Overflow { value: j, bits: n });
    }
    let bits = (0..n)
        .map(|i| if i < 64 { ((j >> i) & 1) as u8 } else { 0 })
        .collect();
    Ok(BinaryVector { bits })
}

pub fn hamming_weight(v: &BinaryVector) -> u32 {
    v.bits.iter().map(|&b| u32::from(b)).sum()
}

/// Hamming weight of `j` without materializing the vector.
#[inline]
pub fn weight_of(j: usize) -> u32 {
    j.count_ones()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaMode {
    /// `exponent ≥ 1`, slack must be nonnegative.
    Alpha,
    /// `0 ≤ exponent ≤ 1`, slack must be nonpositive.
    Beta,
}

/// Returns `(1 + x)^e − (1 + e·x^e)`.
pub fn lemma1_check(x: f64, exponent: f64, mode: LemmaMode) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} must lie in [0, 1]")));
    }
    let ok = match mode {
        LemmaMode::Alpha => exponent >= 1.0 && exponent.is_finite(),
        LemmaMode::Beta => (0.0..=1.0).contains(&exponent),
    };
    if !ok {
        return Err(Error::Domain(format!(
            "exponent {exponent} outside the {mode:?} range"
        )));
    }
    Ok((1.0 + x).powf(exponent) - (1.0 + exponent * x.powf(exponent)))
}

/// Whether `slack` has the sign the lemma promises, within
/// [`LEMMA_SLACK_TOL`].
pub fn lemma1_holds(slack: f64, mode: LemmaMode) -> bool {
    match mode {
        LemmaMode::Alpha => slack >= -LEMMA_SLACK_TOL,
        LemmaMode::Beta => slack <= LEMMA_SLACK_TOL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn expansions() {
        assert_eq!(binary_vector(0, 3).unwrap().bits(), &[0, 0, 0]);
        assert_eq!(binary_vector(5, 3).unwrap().bits(), &[1, 0, 1]);
        assert_eq!(binary_vector(6, 4).unwrap().bits(), &[0, 1, 1, 0]);
        assert!(matches!(
            binary_vector(8, 3),
            Err(Error::Overflow { value: 8, bits: 3 })
        ));
        assert_eq!(binary_vector(6, 4).unwrap().to_string(), "(0,1,1,0)");
    }

    #[test]
    fn weights() {
        for (j, w) in [(0, 0), (5, 2), (7, 3)] {
            assert_eq!(hamming_weight(&binary_vector(j, 3).unwrap()), w);
        }
    }

    #[test]
    fn weight_bounded_by_index() {
        for j in 0..(1usize << 16) {
            assert!(weight_of(j) as usize <= j, "j = {j}");
            assert_eq!(
                hamming_weight(&binary_vector(j as u64, 16).unwrap()),
                weight_of(j)
            );
        }
        for k in 0..=15 {
            assert_eq!(weight_of(1 << k), 1);
        }
    }

    #[test]
    fn lemma_examples() {
        assert_eq!(lemma1_check(1.0, 2.0, LemmaMode::Alpha).unwrap(), 1.0);
        assert_eq!(lemma1_check(0.0, 3.7, LemmaMode::Alpha).unwrap(), 0.0);
        assert_eq!(lemma1_check(0.0, 0.3, LemmaMode::Beta).unwrap(), 0.0);
        let slack = lemma1_check(0.5, 0.5, LemmaMode::Beta).unwrap();
        assert!((slack + 0.128_808_519_201_685).abs() < 1e-12, "{slack}");
    }

    #[test]
    fn lemma_domain_errors() {
        assert!(lemma1_check(1.5, 2.0, LemmaMode::Alpha).is_err());
        assert!(lemma1_check(0.5, 0.5, LemmaMode::Alpha).is_err());
        assert!(lemma1_check(0.5, 1.5, LemmaMode::Beta).is_err());
        assert!(lemma1_check(-0.1, 0.5, LemmaMode::Beta).is_err());
    }

    proptest! {
        #[test]
        fn weight_additive_on_disjoint_supports(a in 0u32..(1 << 16), b in 0u32..(1 << 16)) {
            let b = b & !a;
            prop_assert_eq!(weight_of((a | b) as usize), weight_of(a as usize) + weight_of(b as usize));
            prop_assert_eq!(weight_of((a + b) as usize), weight_of(a as usize) + weight_of(b as usize));
        }

        #[test]
        fn binary_vector_reconstructs(j in 0u64..(1 << 20)) {
            prop_assert_eq!(binary_vector(j, 20).unwrap().value(), j);
        }
    }
}
