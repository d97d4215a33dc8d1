//! Base and weighted monogamy/polygamy checks.
//!
//! For a focus qubit `A` and parties `B_0, …, B_{N−1}` the checkers compare
//!
//! ```text
//! monogamy:  E(A|B_0⋯B_{N−1})^α   ≥ Σ_j w_j E(A|B_j)^α      (α ≥ 1)
//! polygamy:  Eᵃ(A|B_0⋯B_{N−1})^β  ≤ Σ_j w_j Eᵃ(A|B_j)^β     (0 ≤ β ≤ 1)
//! ```
//!
//! with the pairwise values sorted in descending order first. The weight of
//! sorted position `j` is `1` (plain), `e^{ω_H(j)}` (Hamming) or `e^j`
//! (indexed), where `e` is the exponent.
//!
//! Pairwise UE values come from a minimizing roof search and are upper
//! bounds; pairwise UEoA values come from a maximizing search and are lower
//! bounds. Both errors shrink the slack, so a nonnegative slack (within the
//! gate) confirms the inequality and a negative one is only inconclusive.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::UnifiedParams;
use crate::error::{Error, Result};
use crate::hamming::weight_of;
use crate::measures::{ue_mixed, ue_pure, ueoa, Decomposition, OptBudget, RoofResult};
use crate::qstate::{derive_seed, Bipartition, QuantumState};

/// A report is confirmed iff `slack ≥ SLACK_GATE`.
pub const SLACK_GATE: f64 = -1e-7;
/// Allowance on the indexed-weight ordering conditions.
pub const CONDITION_TOL: f64 = 1e-9;
/// Values at or below this are floating-point noise around zero and are
/// reported as exactly zero. Without this, `x^β` for small `β` would turn
/// noise of order `1e-16` into visible terms.
pub const ZERO_TERM_TOL: f64 = 1e-14;
/// Allowance on the RHS ordering certified by [`tightness_chain`].
pub const CHAIN_TOL: f64 = 1e-10;

/// Purity above which a marginal is treated as a pure state.
const PURE_MARGINAL: f64 = 1.0 - 1e-10;
/// Seed stream of the LHS roof; pairwise roofs use their party index.
const LHS_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Monogamy,
    Polygamy,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Monogamy => "monogamy",
            Mode::Polygamy => "polygamy",
        })
    }
}

/// Parameter region in which an inequality family is proven.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionSpec {
    pub mode: Mode,
    pub q: f64,
    pub s: f64,
}

impl RegionSpec {
    pub fn new(mode: Mode, q: f64, s: f64) -> Self {
        RegionSpec { mode, q, s }
    }

    pub fn is_valid(&self) -> bool {
        match self.mode {
            Mode::Monogamy => monogamy_valid(self.q, self.s),
            Mode::Polygamy => polygamy_valid(self.q, self.s),
        }
    }

    pub fn require(&self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::Region {
                mode: match self.mode {
                    Mode::Monogamy => "monogamy",
                    Mode::Polygamy => "polygamy",
                },
                q: self.q,
                s: self.s,
            })
        }
    }
}

/// `q ≥ 2`, `0 ≤ s ≤ 1`, `qs ≤ 3`.
pub fn monogamy_valid(q: f64, s: f64) -> bool {
    q >= 2.0 && (0.0..=1.0).contains(&s) && q * s <= 3.0
}

/// `1 ≤ q ≤ 2`, `−q² + 4q − 3 ≤ s ≤ 1`.
pub fn polygamy_valid(q: f64, s: f64) -> bool {
    (1.0..=2.0).contains(&q) && -q * q + 4.0 * q - 3.0 <= s && s <= 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    Plain,
    Hamming,
    Indexed,
}

impl Weighting {
    /// Weight of sorted position `j` for exponent `e`.
    pub fn weight(self, j: usize, e: f64) -> f64 {
        match self {
            Weighting::Plain => 1.0,
            Weighting::Hamming => e.powi(weight_of(j) as i32),
            Weighting::Indexed => e.powi(j as i32),
        }
    }
}

/// The checked inequality. The base families use plain weights; at
/// exponent 1 they are the unweighted inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    BaseMono,
    BasePoly,
    /// Monogamy with Hamming weights.
    One,
    /// Monogamy with indexed weights, under an ordering condition.
    Two,
    /// Polygamy with Hamming weights.
    Three,
    /// Polygamy with indexed weights, under an ordering condition.
    Four,
}

impl Theorem {
    pub const ALL: [Theorem; 6] = [
        Theorem::One,
        Theorem::Two,
        Theorem::Three,
        Theorem::Four,
        Theorem::BaseMono,
        Theorem::BasePoly,
    ];

    pub fn mode(self) -> Mode {
        match self {
            Theorem::BaseMono | Theorem::One | Theorem::Two => Mode::Monogamy,
            Theorem::BasePoly | Theorem::Three | Theorem::Four => Mode::Polygamy,
        }
    }

    pub fn weighting(self) -> Weighting {
        match self {
            Theorem::BaseMono | Theorem::BasePoly => Weighting::Plain,
            Theorem::One | Theorem::Three => Weighting::Hamming,
            Theorem::Two | Theorem::Four => Weighting::Indexed,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Theorem::BaseMono => "base-mono",
            Theorem::BasePoly => "base-poly",
            Theorem::One => "1",
            Theorem::Two => "2",
            Theorem::Three => "3",
            Theorem::Four => "4",
        }
    }

    pub fn for_weighting(mode: Mode, weighting: Weighting) -> Theorem {
        match (mode, weighting) {
            (Mode::Monogamy, Weighting::Plain) => Theorem::BaseMono,
            (Mode::Monogamy, Weighting::Hamming) => Theorem::One,
            (Mode::Monogamy, Weighting::Indexed) => Theorem::Two,
            (Mode::Polygamy, Weighting::Plain) => Theorem::BasePoly,
            (Mode::Polygamy, Weighting::Hamming) => Theorem::Three,
            (Mode::Polygamy, Weighting::Indexed) => Theorem::Four,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.label() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown theorem `{s}`, expected one of 1, 2, 3, 4, base-mono, base-poly"
                ))
            })
    }
}

impl Serialize for Theorem {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for Theorem {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Confirmed,
    Inconclusive,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Confirmed => "confirmed",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NotApplicable => "not_applicable",
        })
    }
}

/// How a reported value relates to the true one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Exact,
    Upper,
    Lower,
}

/// Permutation sorting `values` in descending order, ties kept in input
/// order: `values[perm[0]] ≥ values[perm[1]] ≥ …`.
pub fn order_subsystems(values: &[f64]) -> Result<Vec<usize>> {
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::Measurement(format!(
            "pairwise value {v} is not a finite nonnegative number"
        )));
    }
    let mut perm: Vec<usize> = (0..values.len()).collect();
    perm.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    Ok(perm)
}

/// `x` with noise-level values replaced by zero.
pub fn snap_zero(x: f64) -> f64 {
    if x <= ZERO_TERM_TOL {
        0.0
    } else {
        x
    }
}

/// `x^e` for `x ≥ 0`, with `x^0 = 1` for positive `x` and `0^e = 0` for
/// every `e`. Expects snapped values.
pub fn term_power(x: f64, e: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if e == 0.0 {
        1.0
    } else {
        x.powf(e)
    }
}

/// Pairwise values `E(A|B_j)` (or `Eᵃ`) for one state, mode and `(q, s)`.
#[derive(Debug, Clone)]
pub struct PairwiseTerms {
    pub mode: Mode,
    pub params: UnifiedParams,
    /// Qubit index of each party, in the caller's order.
    pub qubits: Vec<usize>,
    pub values: Vec<f64>,
    pub converged: Vec<bool>,
    pub at_ensemble_cap: Vec<bool>,
    /// Decompositions achieving `values`, when computed by roof search.
    pub witnesses: Option<Vec<Decomposition>>,
}

impl PairwiseTerms {
    /// Terms given directly, treated as exact.
    pub fn from_values(mode: Mode, params: UnifiedParams, values: Vec<f64>) -> Self {
        let n = values.len();
        PairwiseTerms {
            mode,
            params,
            qubits: (0..n).collect(),
            values,
            converged: vec![true; n],
            at_ensemble_cap: vec![false; n],
            witnesses: None,
        }
    }

    /// Bound type of the values, given that they came from roof searches.
    pub fn bound(&self) -> Bound {
        if self.witnesses.is_none() {
            Bound::Exact
        } else {
            match self.mode {
                Mode::Monogamy => Bound::Upper,
                Mode::Polygamy => Bound::Lower,
            }
        }
    }
}

/// The unraised left-hand value `E(A|B_0⋯B_{N−1})` (or `Eᵃ`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lhs {
    pub value: f64,
    pub bound: Bound,
    pub converged: bool,
    pub at_ensemble_cap: bool,
}

impl Lhs {
    pub fn exact(value: f64) -> Self {
        Lhs {
            value,
            bound: Bound::Exact,
            converged: true,
            at_ensemble_cap: false,
        }
    }
}

fn validate_parties(state: &QuantumState, focus: usize, parties: &[usize]) -> Result<()> {
    let n = state.n_qubits();
    if parties.is_empty() {
        return Err(Error::InvalidPartition("no parties given".into()));
    }
    let mut seen = vec![false; n];
    for &q in std::iter::once(&focus).chain(parties) {
        if q >= n {
            return Err(Error::InvalidPartition(format!(
                "qubit {q} out of range for a {n}-qubit state"
            )));
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(Error::InvalidPartition(format!("qubit {q} listed twice")));
        }
    }
    Ok(())
}

fn roof(
    state: &QuantumState,
    focus: usize,
    others: &[usize],
    params: &UnifiedParams,
    mode: Mode,
    budget: &OptBudget,
) -> Result<RoofResult> {
    let mut keep: Vec<usize> = others.to_vec();
    keep.push(focus);
    keep.sort_unstable();
    let pos = keep.iter().position(|&q| q == focus).expect("focus kept");
    let rho = state.marginal(&keep)?.density();
    let cut = Bipartition::new(keep.len(), &[pos])?;
    match mode {
        Mode::Monogamy => ue_mixed(&rho, &cut, params, budget),
        Mode::Polygamy => ueoa(&rho, &cut, params, budget),
    }
}

/// Roof values on the two-qubit marginals `{A, B_j}`. Party `j` searches
/// with seed stream `j` of `budget.seed`, so its value does not depend on
/// the other parties.
pub fn pairwise_terms(
    state: &QuantumState,
    focus: usize,
    parties: &[usize],
    params: &UnifiedParams,
    mode: Mode,
    budget: &OptBudget,
) -> Result<PairwiseTerms> {
    validate_parties(state, focus, parties)?;
    budget.validate()?;
    let results: Vec<RoofResult> = parties
        .par_iter()
        .enumerate()
        .map(|(j, &b)| {
            let seeded = budget.with_seed(derive_seed(budget.seed, j as u64));
            roof(state, focus, &[b], params, mode, &seeded)
        })
        .collect::<Result<_>>()?;
    Ok(PairwiseTerms {
        mode,
        params: *params,
        qubits: parties.to_vec(),
        values: results.iter().map(|r| r.value).collect(),
        converged: results.iter().map(|r| r.converged).collect(),
        at_ensemble_cap: results.iter().map(|r| r.at_ensemble_cap).collect(),
        witnesses: Some(results.into_iter().map(|r| r.witness).collect()),
    })
}

/// `E(A|B_0⋯B_{N−1})`. Exact when `{A, B_j}` carries a pure state,
/// otherwise a roof search whose value is an upper (monogamy) or lower
/// (polygamy) bound.
pub fn lhs_term(
    state: &QuantumState,
    focus: usize,
    parties: &[usize],
    params: &UnifiedParams,
    mode: Mode,
    budget: &OptBudget,
) -> Result<Lhs> {
    validate_parties(state, focus, parties)?;
    let n = state.n_qubits();
    if let QuantumState::Pure(psi) = state {
        if parties.len() + 1 == n {
            return Ok(Lhs::exact(ue_pure(
                psi,
                &Bipartition::new(n, &[focus])?,
                params,
            )?));
        }
    }
    let mut keep = parties.to_vec();
    keep.push(focus);
    if state.marginal(&keep)?.density().purity() > PURE_MARGINAL {
        let r = roof(state, focus, parties, params, mode, budget)?;
        return Ok(Lhs::exact(r.value));
    }
    let seeded = budget.with_seed(derive_seed(budget.seed, LHS_STREAM));
    let r = roof(state, focus, parties, params, mode, &seeded)?;
    Ok(Lhs {
        value: r.value,
        bound: match mode {
            Mode::Monogamy => Bound::Upper,
            Mode::Polygamy => Bound::Lower,
        },
        converged: r.converged,
        at_ensemble_cap: r.at_ensemble_cap,
    })
}

/// Knobs shared by every check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Allow `(q, s)` outside the proven region; such reports are always
    /// inconclusive.
    pub exploratory: bool,
    /// Confirmation threshold: confirmed iff `slack ≥ slack_gate`.
    pub slack_gate: f64,
    /// Attach the pairwise witness decompositions to the report.
    pub with_witnesses: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            exploratory: false,
            slack_gate: SLACK_GATE,
            with_witnesses: false,
        }
    }
}

/// One weighted pairwise term, listed in sorted order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Term {
    /// Position of the party in the caller's list.
    pub party: usize,
    pub qubit: usize,
    pub value: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessMember {
    pub probability: f64,
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub party: usize,
    pub members: Vec<WitnessMember>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub theorem: Theorem,
    pub mode: Mode,
    pub q: f64,
    pub s: f64,
    pub exponent: f64,
    /// Raised left-hand side.
    pub lhs: f64,
    pub lhs_bound: Bound,
    pub rhs_terms: Vec<Term>,
    pub rhs: f64,
    /// `lhs − rhs` for monogamy, `rhs − lhs` for polygamy.
    pub slack: f64,
    /// `permutation[k]` is the caller position of the `k`-th largest term.
    pub permutation: Vec<usize>,
    /// Ordering condition of the indexed weights, on the sorted terms.
    pub condition_met: Option<bool>,
    pub verdict: Verdict,
    pub in_region: bool,
    pub converged: bool,
    pub at_ensemble_cap: bool,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Witness>>,
}

/// `v_i ≥ Σ_{j>i} v_j` for every `i`, on already sorted values.
pub fn ordering_condition(sorted: &[f64]) -> bool {
    let mut tail = 0.0;
    for &v in sorted.iter().rev() {
        if v < tail - CONDITION_TOL {
            return false;
        }
        tail += v;
    }
    true
}

fn check_exponent(mode: Mode, e: f64) -> Result<()> {
    let ok = match mode {
        Mode::Monogamy => e >= 1.0 && e.is_finite(),
        Mode::Polygamy => (0.0..=1.0).contains(&e),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(match mode {
            Mode::Monogamy => format!("alpha = {e} must be ≥ 1"),
            Mode::Polygamy => format!("beta = {e} must lie in [0, 1]"),
        }))
    }
}

/// Checks that `(q, s)` and the exponent are admissible for `theorem`.
pub fn validate(
    theorem: Theorem,
    params: &UnifiedParams,
    exponent: f64,
    exploratory: bool,
) -> Result<bool> {
    check_exponent(theorem.mode(), exponent)?;
    let region = RegionSpec::new(theorem.mode(), params.q(), params.s());
    if !exploratory {
        region.require()?;
    }
    Ok(region.is_valid())
}

/// Builds the report of `theorem` from precomputed terms.
pub fn evaluate(
    theorem: Theorem,
    exponent: f64,
    lhs: &Lhs,
    terms: &PairwiseTerms,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    let mode = theorem.mode();
    if terms.mode != mode {
        return Err(Error::Mismatch(format!(
            "theorem {theorem} needs {mode} terms, got {}",
            terms.mode
        )));
    }
    let in_region = validate(theorem, &terms.params, exponent, opts.exploratory)?;
    let values: Vec<f64> = terms.values.iter().map(|&v| snap_zero(v)).collect();
    let permutation = order_subsystems(&values)?;
    let weighting = theorem.weighting();
    let rhs_terms: Vec<Term> = permutation
        .iter()
        .enumerate()
        .map(|(j, &k)| Term {
            party: k,
            qubit: terms.qubits[k],
            value: values[k],
            weight: weighting.weight(j, exponent),
        })
        .collect();
    let rhs: f64 = rhs_terms
        .iter()
        .map(|t| t.weight * term_power(t.value, exponent))
        .sum();
    let lhs_raised = term_power(snap_zero(lhs.value), exponent);
    let slack = match mode {
        Mode::Monogamy => lhs_raised - rhs,
        Mode::Polygamy => rhs - lhs_raised,
    };
    let condition_met = (weighting == Weighting::Indexed).then(|| {
        let sorted: Vec<f64> = rhs_terms.iter().map(|t| t.value).collect();
        ordering_condition(&sorted)
    });
    let converged = lhs.converged && terms.converged.iter().all(|&c| c);
    let at_ensemble_cap = lhs.at_ensemble_cap || terms.at_ensemble_cap.iter().any(|&c| c);

    let verdict = if !in_region {
        Verdict::Inconclusive
    } else if condition_met == Some(false) {
        Verdict::NotApplicable
    } else if converged && slack >= opts.slack_gate {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive
    };

    let mut notes = Vec::new();
    if !in_region {
        notes.push("outside the proven region (exploratory)".to_string());
    }
    match lhs.bound {
        Bound::Upper => notes.push("upper-bound LHS".to_string()),
        Bound::Lower => notes.push("lower-bound LHS".to_string()),
        Bound::Exact => {}
    }
    if condition_met.is_some() {
        notes.push("condition evaluated on the descending order".to_string());
    }
    if exponent == 0.0 {
        notes.push("exponent 0: 0^0 = 1 for weights, x^0 = 0 for zero terms".to_string());
    }
    if !converged {
        notes.push("optimizer not converged".to_string());
    }
    if at_ensemble_cap {
        notes.push("optimum at the ensemble-size cap".to_string());
    }

    let witnesses = match (&terms.witnesses, opts.with_witnesses) {
        (Some(ws), true) => Some(
            ws.iter()
                .enumerate()
                .map(|(party, d)| Witness {
                    party,
                    members: d
                        .members()
                        .iter()
                        .map(|(p, psi)| WitnessMember {
                            probability: *p,
                            amplitudes: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
                        })
                        .collect(),
                })
                .collect(),
        ),
        _ => None,
    };

    Ok(InequalityReport {
        theorem,
        mode,
        q: terms.params.q(),
        s: terms.params.s(),
        exponent,
        lhs: lhs_raised,
        lhs_bound: lhs.bound,
        rhs_terms,
        rhs,
        slack,
        permutation,
        condition_met,
        verdict,
        in_region,
        converged,
        at_ensemble_cap,
        notes,
        witnesses,
    })
}

/// Computes every roof `theorem` needs and evaluates it.
#[allow(clippy::too_many_arguments)]
pub fn check(
    state: &QuantumState,
    focus: usize,
    parties: &[usize],
    theorem: Theorem,
    params: &UnifiedParams,
    exponent: f64,
    budget: &OptBudget,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    validate(theorem, params, exponent, opts.exploratory)?;
    let mode = theorem.mode();
    let terms = pairwise_terms(state, focus, parties, params, mode, budget)?;
    let lhs = lhs_term(state, focus, parties, params, mode, budget)?;
    evaluate(theorem, exponent, &lhs, &terms, opts)
}

pub fn check_monogamy_hamming(
    state: &QuantumState,
    focus: usize,
    parties: &[usize],
    params: &UnifiedParams,
    alpha: f64,
    budget: &OptBudget,
) -> Result<InequalityReport> {
    check(
        state,
        focus,
        parties,
        Theorem::One,
        params,
        alpha,
        budget,
        &CheckOptions::default(),
    )
}

pub fn check_monogamy_indexed(
    state: &QuantumState,
    focus: usize,
    parties: &[usize],
    params: &UnifiedParams,
    alpha: f64,
    budget: &OptBudget,
) -> Result<InequalityReport> {
    check(
        state,
        focus,
        parties,
        Theorem::Two,
        params,
        alpha,
        budget,
        &CheckOptions::default(),
    )
}

pub fn check_polygamy_hamming(
    state: &QuantumState,
    focus: usize,
    parties: &[usize],
    params: &UnifiedParams,
    beta: f64,
    budget: &OptBudget,
) -> Result<InequalityReport> {
    check(
        state,
        focus,
        parties,
        Theorem::Three,
        params,
        beta,
        budget,
        &CheckOptions::default(),
    )
}

pub fn check_polygamy_indexed(
    state: &QuantumState,
    focus: usize,
    parties: &[usize],
    params: &UnifiedParams,
    beta: f64,
    budget: &OptBudget,
) -> Result<InequalityReport> {
    check(
        state,
        focus,
        parties,
        Theorem::Four,
        params,
        beta,
        budget,
        &CheckOptions::default(),
    )
}

/// Right-hand sides of the three weightings on the same terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TightnessChain {
    pub mode: Mode,
    pub exponent: f64,
    pub rhs_plain: f64,
    pub rhs_hamming: f64,
    pub rhs_indexed: Option<f64>,
    /// `indexed ≥ hamming ≥ plain` for monogamy, reversed for polygamy,
    /// within [`CHAIN_TOL`].
    pub holds: bool,
}

/// Certifies the ordering of the plain, Hamming and indexed right-hand
/// sides computed from the same terms.
pub fn tightness_chain(
    hamming: &InequalityReport,
    plain: &InequalityReport,
    indexed: Option<&InequalityReport>,
) -> Result<TightnessChain> {
    let expect = |r: &InequalityReport, w: Weighting| -> Result<()> {
        if r.theorem.weighting() != w {
            return Err(Error::Mismatch(format!(
                "report for theorem {} passed as {w:?} weighting",
                r.theorem
            )));
        }
        let same_terms = r.rhs_terms.len() == hamming.rhs_terms.len()
            && r.rhs_terms
                .iter()
                .zip(&hamming.rhs_terms)
                .all(|(a, b)| a.party == b.party && a.value == b.value);
        if r.mode != hamming.mode
            || r.exponent != hamming.exponent
            || r.q != hamming.q
            || r.s != hamming.s
            || !same_terms
        {
            return Err(Error::Mismatch(
                "reports differ in mode, parameters, exponent or terms".into(),
            ));
        }
        Ok(())
    };
    expect(hamming, Weighting::Hamming)?;
    expect(plain, Weighting::Plain)?;
    if let Some(ix) = indexed {
        expect(ix, Weighting::Indexed)?;
    }
    // Monogamy rhs grow with the weights, polygamy rhs shrink.
    let ge = |a: f64, b: f64| a >= b - CHAIN_TOL;
    let (h, p) = (hamming.rhs, plain.rhs);
    let i = indexed.map(|r| r.rhs);
    let holds = match hamming.mode {
        Mode::Monogamy => ge(h, p) && i.is_none_or(|i| ge(i, h)),
        Mode::Polygamy => ge(p, h) && i.is_none_or(|i| ge(h, i)),
    };
    Ok(TightnessChain {
        mode: hamming.mode,
        exponent: hamming.exponent,
        rhs_plain: p,
        rhs_hamming: h,
        rhs_indexed: i,
        holds,
    })
}

/// Appends `|0>` qubits as extra parties until the party count is a power
/// of two. Returns the padded state and party list.
pub fn pad_parties(state: &QuantumState, parties: &[usize]) -> Result<(QuantumState, Vec<usize>)> {
    let n = state.n_qubits();
    let target = parties.len().max(1).next_power_of_two();
    let extra = target - parties.len();
    let padded = state.append_zero_qubits(extra)?;
    let mut all = parties.to_vec();
    all.extend(n..n + extra);
    Ok((padded, all))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(q: f64, s: f64) -> UnifiedParams {
        UnifiedParams::new(q, s).unwrap()
    }

    #[test]
    fn ordering_examples() {
        assert_eq!(order_subsystems(&[0.1, 0.3, 0.2]).unwrap(), vec![1, 2, 0]);
        assert_eq!(order_subsystems(&[0.2; 4]).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(order_subsystems(&[0.0, 0.5]).unwrap(), vec![1, 0]);
        assert!(matches!(
            order_subsystems(&[0.1, -0.2]),
            Err(Error::Measurement(_))
        ));
    }

    #[test]
    fn regions() {
        assert!(monogamy_valid(2.0, 1.0));
        assert!(monogamy_valid(3.0, 1.0));
        assert!(!monogamy_valid(2.0, 1.6));
        assert!(!monogamy_valid(4.0, 1.0));
        assert!(!monogamy_valid(1.9, 0.5));
        assert!(polygamy_valid(1.0, 0.0));
        assert!(polygamy_valid(1.5, 0.75));
        assert!(!polygamy_valid(1.5, 0.7));
        assert!(!polygamy_valid(2.1, 1.0));
        assert!(matches!(
            RegionSpec::new(Mode::Monogamy, 2.0, 1.6).require(),
            Err(Error::Region { .. })
        ));
    }

    #[test]
    fn weights() {
        let h: Vec<f64> = (0..4).map(|j| Weighting::Hamming.weight(j, 2.0)).collect();
        assert_eq!(h, vec![1.0, 2.0, 2.0, 4.0]);
        let i: Vec<f64> = (0..4).map(|j| Weighting::Indexed.weight(j, 2.0)).collect();
        assert_eq!(i, vec![1.0, 2.0, 4.0, 8.0]);
        assert_eq!(Weighting::Hamming.weight(0, 0.0), 1.0);
        assert_eq!(Weighting::Hamming.weight(1, 0.0), 0.0);
    }

    #[test]
    fn zero_exponent_convention() {
        assert_eq!(term_power(0.3, 0.0), 1.0);
        assert_eq!(term_power(0.0, 0.0), 0.0);
        assert_eq!(term_power(0.25, 0.5), 0.5);
        assert_eq!(term_power(0.0, 0.5), 0.0);
        assert_eq!(snap_zero(1e-16), 0.0);
        assert_eq!(snap_zero(1e-9), 1e-9);
    }

    #[test]
    fn synthetic_indexed_condition_fails() {
        let t = PairwiseTerms::from_values(Mode::Polygamy, params(1.5, 1.0), vec![0.4, 0.3, 0.2]);
        let r = evaluate(
            Theorem::Four,
            0.5,
            &Lhs::exact(0.5),
            &t,
            &CheckOptions::default(),
        )
        .unwrap();
        assert_eq!(r.condition_met, Some(false));
        assert_eq!(r.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn evaluate_rhs_matches_terms() {
        let t = PairwiseTerms::from_values(Mode::Monogamy, params(2.0, 1.0), vec![0.1, 0.3, 0.2]);
        let r = evaluate(
            Theorem::One,
            2.0,
            &Lhs::exact(0.9),
            &t,
            &CheckOptions::default(),
        )
        .unwrap();
        assert_eq!(r.permutation, vec![1, 2, 0]);
        let expect = 0.09 + 2.0 * 0.04 + 2.0 * 0.01;
        assert!((r.rhs - expect).abs() < 1e-15);
        assert!((r.slack - (0.81 - expect)).abs() < 1e-15);
        assert_eq!(r.verdict, Verdict::Confirmed);
    }

    #[test]
    fn region_and_mode_errors() {
        let t = PairwiseTerms::from_values(Mode::Monogamy, params(2.0, 1.6), vec![0.1]);
        assert!(matches!(
            evaluate(
                Theorem::One,
                1.0,
                &Lhs::exact(0.2),
                &t,
                &CheckOptions::default()
            ),
            Err(Error::Region { .. })
        ));
        let exploratory = CheckOptions {
            exploratory: true,
            ..CheckOptions::default()
        };
        let r = evaluate(Theorem::One, 1.0, &Lhs::exact(0.2), &t, &exploratory).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(!r.in_region);
        assert!(matches!(
            evaluate(Theorem::Three, 0.5, &Lhs::exact(0.2), &t, &exploratory),
            Err(Error::Mismatch(_))
        ));
        let ok = PairwiseTerms::from_values(Mode::Monogamy, params(2.0, 1.0), vec![0.1]);
        assert!(matches!(
            evaluate(
                Theorem::One,
                0.5,
                &Lhs::exact(0.2),
                &ok,
                &CheckOptions::default()
            ),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn theorem_labels_round_trip() {
        for t in Theorem::ALL {
            assert_eq!(t.label().parse::<Theorem>().unwrap(), t);
            assert_eq!(Theorem::for_weighting(t.mode(), t.weighting()), t);
        }
        assert!("5".parse::<Theorem>().is_err());
    }

    #[test]
    fn pad_counts() {
        let s = QuantumState::Pure(crate::qstate::PureState::basis(4, 0).unwrap());
        let (p, parties) = pad_parties(&s, &[1, 2, 3]).unwrap();
        assert_eq!(p.n_qubits(), 5);
        assert_eq!(parties, vec![1, 2, 3, 4]);
        let (same, parties) = pad_parties(&p, &[1, 2, 3, 4]).unwrap();
        assert_eq!(same, p);
        assert_eq!(parties, vec![1, 2, 3, 4]);
    }
}
