//! Unified-(q,s) entanglement (UE) and its assisted dual (UEoA).
//!
//! Pure states are evaluated in closed form from one marginal. Mixed states
//! go through [`roof`], which searches pure-state decompositions and returns
//! the best one found together with the decomposition that achieves it.
//! A minimum found this way is an upper bound on the true convex roof, a
//! maximum is a lower bound on the true concave roof.

mod nelder_mead;
mod roof;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use nelder_mead::{minimize, SimplexOptions, SimplexResult};
pub use roof::{roof_search, RoofMode};

use crate::entropy::{unified_of, UnifiedParams};
use crate::error::{Error, Result};
use crate::qstate::{
    eigenvalues_2x2, hermitian_eigenvalues, Bipartition, CMatrix, DensityMatrix, PureState,
    TraceLayout,
};

/// Search budget for the roof optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptBudget {
    pub restarts: usize,
    /// Sweep cap per restart; a sweep visits every pair of members once.
    pub iterations: usize,
    /// Ensemble-size cap; the effective cap is `max(rank², max_ensemble)`.
    pub max_ensemble: usize,
    /// Sweeps stop once one improves the objective by less than this.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OptBudget {
    fn default() -> Self {
        OptBudget {
            restarts: 32,
            iterations: 2000,
            max_ensemble: 6,
            tolerance: 1e-9,
            seed: 0x5EED,
        }
    }
}

impl OptBudget {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.iterations == 0 || self.max_ensemble == 0 {
            return Err(Error::Domain(
                "restarts, iterations and ensemble cap must be positive".into(),
            ));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Domain(format!(
                "tolerance {} must be ≥ 0",
                self.tolerance
            )));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn ensemble_cap(&self, rank: usize) -> usize {
        (rank * rank).max(self.max_ensemble).max(rank)
    }
}

/// Pure-state ensemble `{(p_i, |ψ_i>)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    members: Vec<(f64, PureState)>,
}

/// Allowed deviation of `Σ p_i` from 1.
pub const PROBABILITY_SUM_TOL: f64 = 1e-9;

impl Decomposition {
    pub fn new(members: Vec<(f64, PureState)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidState("empty decomposition".into()));
        }
        if let Some((p, _)) = members.iter().find(|(p, _)| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidState(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::InvalidState(format!("probabilities sum to {total}")));
        }
        let n = members[0].1.n_qubits();
        if members.iter().any(|(_, s)| s.n_qubits() != n) {
            return Err(Error::InvalidState("members on different registers".into()));
        }
        Ok(Decomposition { members })
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `Σ p_i |ψ_i><ψ_i|` without validation.
    pub fn reconstruct(&self) -> CMatrix {
        let dim = self.members[0].1.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for (p, psi) in &self.members {
            m.add_scaled(&CMatrix::outer(psi.amplitudes()), *p);
        }
        m
    }

    /// `Σ p_i E_{q,s}(|ψ_i>)` across `cut`.
    pub fn average_entanglement(&self, cut: &Bipartition, p: &UnifiedParams) -> Result<f64> {
        self.members
            .iter()
            .map(|(w, psi)| ue_pure(psi, cut, p).map(|e| w * e))
            .sum()
    }
}

/// Outcome of a roof search. `value` is achieved by `witness`.
#[derive(Debug, Clone)]
pub struct RoofResult {
    pub value: f64,
    pub witness: Decomposition,
    pub mode: RoofMode,
    pub restarts_used: usize,
    /// Whether the winning restart stopped on the tolerance rather than on
    /// the sweep cap.
    pub converged: bool,
    /// Set when the witness uses every member slot the cap allows.
    pub at_ensemble_cap: bool,
}

impl fmt::Display for RoofResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:.12} ({} members, {} restarts{}{})",
            self.mode,
            self.value,
            self.witness.len(),
            self.restarts_used,
            if self.converged {
                ""
            } else {
                ", not converged"
            },
            if self.at_ensemble_cap {
                ", at ensemble cap"
            } else {
                ""
            },
        )
    }
}

/// Evaluates `‖w‖² · E_{q,s}(w/‖w‖)` for unnormalized vectors across one
/// fixed cut. Works on the smaller side of the cut.
pub(crate) struct MarginalEvaluator {
    layout: TraceLayout,
    params: UnifiedParams,
}

/// Members lighter than this contribute nothing.
pub(crate) const NEGLIGIBLE_WEIGHT: f64 = 1e-14;

impl MarginalEvaluator {
    pub(crate) fn new(cut: &Bipartition, params: UnifiedParams) -> Result<Self> {
        Ok(MarginalEvaluator {
            layout: TraceLayout::new(cut.n_qubits(), cut.smaller_side())?,
            params,
        })
    }

    #[inline]
    pub(crate) fn weighted(&self, w: &[Complex64]) -> f64 {
        let env = self.layout.env_dim();
        if self.layout.kept_dim() == 2 {
            let (mut a, mut d, mut b) = (0.0, 0.0, Complex64::new(0.0, 0.0));
            for e in 0..env {
                let x = w[self.layout.index(0, e)];
                let y = w[self.layout.index(1, e)];
                a += x.norm_sqr();
                d += y.norm_sqr();
                b += x * y.conj();
            }
            let weight = a + d;
            if weight < NEGLIGIBLE_WEIGHT {
                return 0.0;
            }
            let [l0, l1] = eigenvalues_2x2(a / weight, d / weight, b / weight);
            return weight * unified_of(&[l0, l1], &self.params);
        }
        let k = self.layout.kept_dim();
        let mut m = CMatrix::zeros(k, k);
        let mut weight = 0.0;
        for a in 0..k {
            for b in a..k {
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..env {
                    acc += w[self.layout.index(a, e)] * w[self.layout.index(b, e)].conj();
                }
                m[(a, b)] = acc;
                m[(b, a)] = acc.conj();
            }
            weight += m[(a, a)].re;
        }
        if weight < NEGLIGIBLE_WEIGHT {
            return 0.0;
        }
        m.scale(1.0 / weight);
        weight * unified_of(&hermitian_eigenvalues(&m), &self.params)
    }
}

fn check_cut(n_qubits: usize, cut: &Bipartition) -> Result<()> {
    if cut.n_qubits() != n_qubits {
        return Err(Error::InvalidPartition(format!(
            "cut is over {} qubits but the state has {n_qubits}",
            cut.n_qubits()
        )));
    }
    Ok(())
}

/// `E_{q,s}(|ψ>_{A|B}) = S_{q,s}(ρ_A)`.
pub fn ue_pure(psi: &PureState, cut: &Bipartition, p: &UnifiedParams) -> Result<f64> {
    check_cut(psi.n_qubits(), cut)?;
    Ok(MarginalEvaluator::new(cut, *p)?.weighted(psi.amplitudes()))
}

/// Convex-roof UE; the value is an upper bound on the true minimum.
pub fn ue_mixed(
    rho: &DensityMatrix,
    cut: &Bipartition,
    p: &UnifiedParams,
    budget: &OptBudget,
) -> Result<RoofResult> {
    check_cut(rho.n_qubits(), cut)?;
    roof_search(rho, cut, p, budget, RoofMode::Min)
}

/// Concave-roof UEoA; the value is a lower bound on the true maximum.
pub fn ueoa(
    rho: &DensityMatrix,
    cut: &Bipartition,
    p: &UnifiedParams,
    budget: &OptBudget,
) -> Result<RoofResult> {
    check_cut(rho.n_qubits(), cut)?;
    roof_search(rho, cut, p, budget, RoofMode::Max)
}
