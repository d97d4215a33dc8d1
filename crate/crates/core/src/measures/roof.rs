//! Search over pure-state decompositions of a mixed state.
//!
//! Every `m`-member decomposition of `ρ = Σ_k λ_k |e_k><e_k|` (rank `r`) has
//! subnormalized members `|w_i> = Σ_k U_ik √λ_k |e_k>` for some `m × r`
//! isometry `U`. Starting from a random isometry, the search repeatedly
//! mixes pairs of members with a two-dimensional rotation
//!
//! ```text
//! w_i' = cos θ · w_i − e^{iφ} sin θ · w_j
//! w_j' = sin θ · w_i + e^{iφ} cos θ · w_j
//! ```
//!
//! which left-multiplies `U` by a Givens rotation with a phase. These
//! rotations generate the whole unitary group on the member index, so the
//! moves reach every decomposition of size `m`. Each pair move is a
//! two-parameter simplex search that only re-evaluates the two touched
//! members.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nelder_mead::{minimize, SimplexOptions};
use super::{Decomposition, MarginalEvaluator, OptBudget, RoofResult, NEGLIGIBLE_WEIGHT};
use crate::entropy::UnifiedParams;
use crate::error::{Error, Result};
use crate::qstate::{
    derive_seed, hermitian_eigen, seeded_rng, Bipartition, DensityMatrix, PureState, RANK_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoofMode {
    Min,
    Max,
}

impl RoofMode {
    /// Multiplier turning the objective into one to minimize.
    fn sign(self) -> f64 {
        match self {
            RoofMode::Min => 1.0,
            RoofMode::Max => -1.0,
        }
    }
}

impl fmt::Display for RoofMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RoofMode::Min => "min",
            RoofMode::Max => "max",
        })
    }
}

const PAIR_SIMPLEX: SimplexOptions = SimplexOptions {
    max_iterations: 15,
    f_tol: 1e-13,
};
const PAIR_STEPS: [f64; 2] = [0.35, 1.2];

/// Ensemble sizes cycled through by the restarts. Most restarts use the
/// rank, every fourth uses two extra members, and one in sixteen uses the
/// full cap so the search still covers every size up to it.
fn ensemble_size(k: usize, rank: usize, cap: usize) -> usize {
    match k % 16 {
        15 => cap,
        3 | 7 | 11 => (rank + 2).min(cap),
        _ => rank,
    }
}

struct Outcome {
    members: Vec<Vec<Complex64>>,
    objective: f64,
    converged: bool,
}

struct Search<'a> {
    eval: &'a MarginalEvaluator,
    sign: f64,
    budget: &'a OptBudget,
}

impl Search<'_> {
    fn objective(&self, w: &[Complex64]) -> f64 {
        self.sign * self.eval.weighted(w)
    }

    fn run(&self, mut members: Vec<Vec<Complex64>>) -> Outcome {
        let m = members.len();
        let dim = members[0].len();
        let zero = Complex64::new(0.0, 0.0);
        let mut contrib: Vec<f64> = members.iter().map(|w| self.objective(w)).collect();
        let (mut wi, mut wj) = (vec![zero; dim], vec![zero; dim]);
        let (mut buf_i, mut buf_j) = (vec![zero; dim], vec![zero; dim]);
        let mut converged = m < 2;

        let mut sweeps = 0;
        while m >= 2 && sweeps < self.budget.iterations {
            sweeps += 1;
            let mut gained = 0.0;
            for i in 0..m {
                for j in (i + 1)..m {
                    wi.copy_from_slice(&members[i]);
                    wj.copy_from_slice(&members[j]);
                    let base = contrib[i] + contrib[j];
                    let res = minimize(
                        |x| {
                            rotate_pair(x, &wi, &wj, &mut buf_i, &mut buf_j);
                            self.objective(&buf_i) + self.objective(&buf_j)
                        },
                        &[0.0, 0.0],
                        &PAIR_STEPS,
                        PAIR_SIMPLEX,
                    );
                    if res.fx >= base {
                        continue;
                    }
                    rotate_pair(&res.x, &wi, &wj, &mut buf_i, &mut buf_j);
                    let (ci, cj) = (self.objective(&buf_i), self.objective(&buf_j));
                    if ci + cj < base {
                        gained += base - (ci + cj);
                        members[i].copy_from_slice(&buf_i);
                        members[j].copy_from_slice(&buf_j);
                        contrib[i] = ci;
                        contrib[j] = cj;
                    }
                }
            }
            if gained < self.budget.tolerance {
                converged = true;
                break;
            }
        }
        let objective = members.iter().map(|w| self.objective(w)).sum();
        Outcome {
            members,
            objective,
            converged,
        }
    }
}

/// Mixes two rows with the phased rotation `(θ, φ) = (x[0], x[1])`.
#[inline]
fn rotate_pair(
    x: &[f64],
    wi: &[Complex64],
    wj: &[Complex64],
    out_i: &mut [Complex64],
    out_j: &mut [Complex64],
) {
    let (s, c) = x[0].sin_cos();
    let ph = Complex64::from_polar(1.0, x[1]);
    for k in 0..wi.len() {
        let b = ph * wj[k];
        out_i[k] = wi[k] * c - b * s;
        out_j[k] = wi[k] * s + b * c;
    }
}

/// `m × r` matrix with orthonormal columns, drawn by Gram–Schmidt on
/// complex Gaussian columns.
fn random_isometry<R: Rng + ?Sized>(m: usize, r: usize, rng: &mut R) -> Vec<Vec<Complex64>> {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(r);
    while cols.len() < r {
        let mut v: Vec<Complex64> = (0..m)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        for c in &cols {
            let overlap: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= overlap * y;
            }
        }
        let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            cols.push(v);
        }
    }
    cols
}

/// Members `w_i = Σ_k U_ik v_k` for the isometry given by its columns.
fn apply_isometry(columns: &[Vec<Complex64>], basis: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let m = columns[0].len();
    let dim = basis[0].len();
    (0..m)
        .map(|i| {
            let mut w = vec![Complex64::new(0.0, 0.0); dim];
            for (col, v) in columns.iter().zip(basis) {
                let u = col[i];
                for (x, y) in w.iter_mut().zip(v) {
                    *x += u * y;
                }
            }
            w
        })
        .collect()
}

/// Runs the multi-restart decomposition search. Restart 0 starts from the
/// spectral decomposition; restart `k` from a random isometry seeded by
/// `(budget.seed, k)`. The best objective wins, ties going to the lower
/// restart index, so results do not depend on scheduling.
pub fn roof_search(
    rho: &DensityMatrix,
    cut: &Bipartition,
    p: &UnifiedParams,
    budget: &OptBudget,
    mode: RoofMode,
) -> Result<RoofResult> {
    budget.validate()?;
    if cut.n_qubits() != rho.n_qubits() {
        return Err(Error::InvalidPartition(
            "cut and state registers differ".into(),
        ));
    }
    let eval = MarginalEvaluator::new(cut, *p)?;
    let eig = hermitian_eigen(rho.entries());
    let basis: Vec<Vec<Complex64>> = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .filter(|(&l, _)| l > RANK_TOL)
        .map(|(&l, v)| v.iter().map(|z| z * l.sqrt()).collect())
        .collect();
    let rank = basis.len();
    if rank == 0 {
        return Err(Error::InvalidState("density matrix has no support".into()));
    }
    let search = Search {
        eval: &eval,
        sign: mode.sign(),
        budget,
    };

    let cap = budget.ensemble_cap(rank);
    let outcomes: Vec<Outcome> = if rank == 1 {
        vec![search.run(basis.clone())]
    } else {
        (0..budget.restarts)
            .into_par_iter()
            .map(|k| {
                let m = ensemble_size(k, rank, cap);
                let columns = if k == 0 {
                    (0..rank)
                        .map(|c| {
                            let mut col = vec![Complex64::new(0.0, 0.0); m];
                            col[c] = Complex64::new(1.0, 0.0);
                            col
                        })
                        .collect()
                } else {
                    random_isometry(m, rank, &mut seeded_rng(derive_seed(budget.seed, k as u64)))
                };
                search.run(apply_isometry(&columns, &basis))
            })
            .collect()
    };

    let (_, best) = outcomes
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.objective.total_cmp(&b.objective).then(i.cmp(j)))
        .expect("at least one restart");

    let mut members = Vec::new();
    for w in &best.members {
        let weight: f64 = w.iter().map(Complex64::norm_sqr).sum();
        if weight < NEGLIGIBLE_WEIGHT {
            continue;
        }
        let psi = PureState::normalized(rho.n_qubits(), w.clone())?;
        members.push((weight, psi));
    }
    // Renormalize away the rank truncation so probabilities sum to one.
    let total: f64 = members.iter().map(|(w, _)| w).sum();
    for (w, _) in &mut members {
        *w /= total;
    }
    let value = members
        .iter()
        .map(|(w, psi)| w * eval.weighted(psi.amplitudes()))
        .sum::<f64>();
    let at_ensemble_cap = rank > 1 && members.len() >= cap;
    Ok(RoofResult {
        value,
        witness: Decomposition::new(members)?,
        mode,
        restarts_used: outcomes.len(),
        converged: best.converged,
        at_ensemble_cap,
    })
}
