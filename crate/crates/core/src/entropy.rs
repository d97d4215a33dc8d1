//! Unified-(q,s) entropy and its Rényi, Tsallis and von Neumann limits.
//!
//! `S_{q,s}(ρ) = [(tr ρ^q)^s − 1] / ((1 − q) s)`, in nats. Near the singular
//! lines `q = 1` and `s = 0` the quotient is replaced by its closed-form
//! limit instead of being evaluated.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::Spectrum;

/// Distance from `q = 1` or `s ∈ {0, 1}` below which a parameter pair is
/// classified as sitting on that limit.
pub const REGIME_TOL: f64 = 1e-6;

/// Eigenvalues below this are left out of `λ ln λ` and counted as zero rank.
pub const EIGEN_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Generic,
    RenyiLimit,
    TsallisValue,
    VonNeumannLimit,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Generic => "generic",
            Regime::RenyiLimit => "renyi_limit",
            Regime::TsallisValue => "tsallis_value",
            Regime::VonNeumannLimit => "von_neumann_limit",
        })
    }
}

/// The `(q, s)` pair together with its limit classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnifiedParams {
    q: f64,
    s: f64,
    regime: Regime,
}

impl UnifiedParams {
    pub fn new(q: f64, s: f64) -> Result<Self> {
        if !(q.is_finite() && s.is_finite()) || q < 0.0 || s < 0.0 {
            return Err(Error::Domain(format!(
                "q and s must be finite and nonnegative, got ({q}, {s})"
            )));
        }
        if q == 0.0 && s == 0.0 {
            return Err(Error::SingularParameters("q = s = 0".into()));
        }
        let regime = if (q - 1.0).abs() < REGIME_TOL {
            Regime::VonNeumannLimit
        } else if s.abs() < REGIME_TOL {
            Regime::RenyiLimit
        } else if (s - 1.0).abs() < REGIME_TOL {
            Regime::TsallisValue
        } else {
            Regime::Generic
        };
        Ok(UnifiedParams { q, s, regime })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }
}

impl fmt::Display for UnifiedParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q={}, s={})", self.q, self.s)
    }
}

/// `tr ρ^q` from eigenvalues, clamping drift below zero. For `q = 0` this
/// is the rank.
#[inline]
pub(crate) fn power_trace(eigenvalues: &[f64], q: f64) -> f64 {
    if q == 0.0 {
        return eigenvalues.iter().filter(|&&l| l > EIGEN_FLOOR).count() as f64;
    }
    let positive = eigenvalues.iter().map(|&l| l.max(0.0));
    // Common orders without powf.
    if q == 2.0 {
        positive.map(|l| l * l).sum()
    } else if q == 3.0 {
        positive.map(|l| l * l * l).sum()
    } else if q == 1.5 {
        positive.map(|l| l * l.sqrt()).sum()
    } else if q == 2.5 {
        positive.map(|l| l * l * l.sqrt()).sum()
    } else {
        positive.filter(|&l| l > 0.0).map(|l| l.powf(q)).sum()
    }
}

#[inline]
pub(crate) fn von_neumann_of(eigenvalues: &[f64]) -> f64 {
    -eigenvalues
        .iter()
        .filter(|&&l| l > EIGEN_FLOOR)
        .map(|&l| l * l.ln())
        .sum::<f64>()
}

/// Evaluates the unified entropy of raw (already normalized) eigenvalues.
/// This is the hot path of the roof optimizer; it skips spectrum validation.
#[inline]
pub(crate) fn unified_of(eigenvalues: &[f64], p: &UnifiedParams) -> f64 {
    let value = match p.regime {
        Regime::VonNeumannLimit => von_neumann_of(eigenvalues),
        Regime::RenyiLimit => power_trace(eigenvalues, p.q).ln() / (1.0 - p.q),
        Regime::Generic | Regime::TsallisValue => {
            let log_tr = power_trace(eigenvalues, p.q).ln();
            (p.s * log_tr).exp_m1() / ((1.0 - p.q) * p.s)
        }
    };
    value.max(0.0)
}

pub fn unified_entropy(spec: &Spectrum, p: &UnifiedParams) -> f64 {
    unified_of(&spec.clamped(), p)
}

pub fn von_neumann_entropy(spec: &Spectrum) -> f64 {
    von_neumann_of(&spec.clamped()).max(0.0)
}

/// `ln(tr ρ^q) / (1 − q)`; `q = 1` gives the von Neumann entropy.
pub fn renyi_entropy(spec: &Spectrum, q: f64) -> Result<f64> {
    check_order(q)?;
    if (q - 1.0).abs() < REGIME_TOL {
        return Ok(von_neumann_entropy(spec));
    }
    Ok((power_trace(&spec.clamped(), q).ln() / (1.0 - q)).max(0.0))
}

/// `(1 − tr ρ^q) / (q − 1)`; `q = 1` gives the von Neumann entropy.
pub fn tsallis_entropy(spec: &Spectrum, q: f64) -> Result<f64> {
    check_order(q)?;
    if (q - 1.0).abs() < REGIME_TOL {
        return Ok(von_neumann_entropy(spec));
    }
    Ok(unified_of(&spec.clamped(), &UnifiedParams::new(q, 1.0)?))
}

fn check_order(q: f64) -> Result<()> {
    if q.is_finite() && q >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "entropy order q = {q} must be finite and nonnegative"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    fn params(q: f64, s: f64) -> UnifiedParams {
        UnifiedParams::new(q, s).unwrap()
    }

    #[test]
    fn regime_classification() {
        assert_eq!(params(2.0, 0.5).regime(), Regime::Generic);
        assert_eq!(params(1.0, 0.5).regime(), Regime::VonNeumannLimit);
        assert_eq!(params(1.0 + 5e-7, 0.0).regime(), Regime::VonNeumannLimit);
        assert_eq!(params(2.0, 5e-7).regime(), Regime::RenyiLimit);
        assert_eq!(params(2.0, 1.0 - 5e-7).regime(), Regime::TsallisValue);
        assert_eq!(params(1.0 + 2e-6, 1.0).regime(), Regime::TsallisValue);
    }

    #[test]
    fn singular_and_negative_parameters_rejected() {
        assert!(matches!(
            UnifiedParams::new(0.0, 0.0),
            Err(Error::SingularParameters(_))
        ));
        assert!(matches!(
            UnifiedParams::new(-1.0, 0.5),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            UnifiedParams::new(2.0, f64::NAN),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(unified_entropy(&spec(&[1.0, 0.0]), &params(2.0, 1.0)), 0.0);
        assert_eq!(unified_entropy(&spec(&[0.5, 0.5]), &params(2.0, 1.0)), 0.5);
        // ((2·0.25)^0.5 − 1)/((1−2)·0.5) = 2 − √2, frozen from an mpmath evaluation.
        let v = unified_entropy(&spec(&[0.5, 0.5]), &params(2.0, 0.5));
        assert!((v - 0.585_786_437_626_905).abs() < 1e-12, "{v}");
        let w = unified_entropy(&spec(&[2.0 / 3.0, 1.0 / 3.0]), &params(2.0, 1.0));
        assert!((w - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn one_parameter_families() {
        let mm = spec(&[0.5, 0.5]);
        assert!((von_neumann_entropy(&mm) - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(tsallis_entropy(&mm, 2.0).unwrap(), 0.5);
        assert!((renyi_entropy(&mm, 2.0).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(renyi_entropy(&mm, 1.0).unwrap(), von_neumann_entropy(&mm));
        assert_eq!(tsallis_entropy(&mm, 1.0).unwrap(), von_neumann_entropy(&mm));
        assert!(renyi_entropy(&mm, -1.0).is_err());
    }

    #[test]
    fn tsallis_is_unified_at_s_one_exactly() {
        let sp = spec(&[0.6, 0.3, 0.1]);
        for q in [0.5, 1.5, 2.0, 3.0, 4.0] {
            assert_eq!(
                tsallis_entropy(&sp, q).unwrap(),
                unified_entropy(&sp, &params(q, 1.0))
            );
        }
    }

    #[test]
    fn order_zero_counts_rank() {
        // tr ρ^0 = rank = 2, Rényi-0 = ln 2; Tsallis-0 = rank − 1.
        let sp = spec(&[0.7, 0.3, 0.0, 0.0]);
        assert!((unified_entropy(&sp, &params(0.0, 1.0)) - 1.0).abs() < 1e-15);
        assert!(
            (unified_entropy(&sp, &params(0.0, 0.5)) - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-14
        );
    }
}
