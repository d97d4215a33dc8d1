use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::{hermitian_eigen, hermitian_eigenvalues};
use super::matrix::CMatrix;
use super::{HERMITICITY_TOL, NORM_TOL, PSD_TOL, SPECTRUM_SUM_TOL};
use crate::error::{Error, Result};

/// Normalized amplitude vector over `n_qubits` qubits. Qubit 0 is the most
/// significant bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_register(n_qubits, amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "squared norm {norm_sqr} differs from 1"
            )));
        }
        Ok(PureState {
            n_qubits,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes` first. Fails on the zero vector.
    pub fn normalized(n_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_register(n_qubits, amplitudes.len())?;
        let norm = amplitudes
            .iter()
            .map(Complex64::norm_sqr)
            .sum::<f64>()
            .sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(PureState {
            n_qubits,
            amplitudes,
        })
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidState(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        PureState::new(n_qubits, amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            n_qubits: self.n_qubits,
            entries: CMatrix::outer(&self.amplitudes),
        }
    }

    /// `self ⊗ other`, with `self` occupying the leading qubits.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amps.push(a * b);
            }
        }
        PureState {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes: amps,
        }
    }

    /// Reduced density matrix on `keep`, contracting the amplitude vector
    /// directly instead of forming `|ψ><ψ|`.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let layout = TraceLayout::new(self.n_qubits, keep)?;
        let k = layout.kept_dim();
        let mut out = CMatrix::zeros(k, k);
        for a in 0..k {
            for b in a..k {
                let mut acc = Complex64::new(0.0, 0.0);
                for env in 0..layout.env_dim() {
                    acc += self.amplitudes[layout.index(a, env)]
                        * self.amplitudes[layout.index(b, env)].conj();
                }
                out[(a, b)] = acc;
                out[(b, a)] = acc.conj();
            }
        }
        Ok(DensityMatrix {
            n_qubits: layout.kept_qubits(),
            entries: out,
        })
    }
}

fn check_register(n_qubits: usize, len: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > 20 {
        return Err(Error::InvalidState(format!(
            "unsupported register size {n_qubits}"
        )));
    }
    if len != 1usize << n_qubits {
        return Err(Error::InvalidState(format!(
            "expected {} amplitudes for {n_qubits} qubits, got {len}",
            1usize << n_qubits
        )));
    }
    Ok(())
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    entries: CMatrix,
}

impl DensityMatrix {
    pub fn new(n_qubits: usize, entries: CMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::InvalidState("density matrix must be square".into()));
        }
        check_register(n_qubits, entries.rows())?;
        let defect = entries.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {defect:e})"
            )));
        }
        let tr = entries.trace().re;
        if (tr - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let smallest = hermitian_eigenvalues(&entries)
            .last()
            .copied()
            .unwrap_or(0.0);
        if smallest < PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {smallest:e}"
            )));
        }
        Ok(DensityMatrix { n_qubits, entries })
    }

    /// `Σ p_i |ψ_i><ψ_i|`, validated.
    pub fn from_ensemble<'a>(
        members: impl IntoIterator<Item = (f64, &'a PureState)>,
    ) -> Result<Self> {
        let mut acc: Option<(usize, CMatrix)> = None;
        for (p, psi) in members {
            let (n, m) =
                acc.get_or_insert_with(|| (psi.n_qubits, CMatrix::zeros(psi.dim(), psi.dim())));
            if *n != psi.n_qubits {
                return Err(Error::InvalidState("ensemble mixes register sizes".into()));
            }
            m.add_scaled(&CMatrix::outer(&psi.amplitudes), p);
        }
        let (n, m) = acc.ok_or_else(|| Error::InvalidState("empty ensemble".into()))?;
        DensityMatrix::new(n, m)
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        DensityMatrix::new(
            n_qubits,
            CMatrix::from_diagonal(&vec![1.0 / dim as f64; dim]),
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += self.entries[(i, j)].norm_sqr();
            }
        }
        acc
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let (da, db) = (self.dim(), other.dim());
        let mut m = CMatrix::zeros(da * db, da * db);
        for i in 0..da {
            for j in 0..da {
                let a = self.entries[(i, j)];
                for k in 0..db {
                    for l in 0..db {
                        m[(i * db + k, j * db + l)] = a * other.entries[(k, l)];
                    }
                }
            }
        }
        DensityMatrix {
            n_qubits: self.n_qubits + other.n_qubits,
            entries: m,
        }
    }
}

/// Descending-sorted eigenvalues of a density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Sorts and validates `eigenvalues`.
    pub fn new(mut eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::InvalidState("empty spectrum".into()));
        }
        if let Some(bad) = eigenvalues
            .iter()
            .find(|&&x| !(PSD_TOL..=1.0 - PSD_TOL).contains(&x))
        {
            return Err(Error::InvalidState(format!(
                "eigenvalue {bad} outside [0, 1]"
            )));
        }
        let total: f64 = eigenvalues.iter().map(|x| x.clamp(0.0, 1.0)).sum();
        if (total - 1.0).abs() > SPECTRUM_SUM_TOL {
            return Err(Error::InvalidState(format!("eigenvalues sum to {total}")));
        }
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Ok(Spectrum { eigenvalues })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvalues with floating-point PSD drift clamped into `[0, 1]`.
    pub fn clamped(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|x| x.clamp(0.0, 1.0)).collect()
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Spectrum {
            eigenvalues: vec![1.0 / dim as f64; dim],
        }
    }
}

/// Split of the register into two nonempty complementary sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    n_qubits: usize,
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    /// `side_a` may be unsorted; duplicates are rejected.
    pub fn new(n_qubits: usize, side_a: &[usize]) -> Result<Self> {
        let set: BTreeSet<usize> = side_a.iter().copied().collect();
        if set.len() != side_a.len() {
            return Err(Error::InvalidPartition("duplicate qubit index".into()));
        }
        if set.is_empty() || set.len() >= n_qubits {
            return Err(Error::InvalidPartition(format!(
                "side A must be a nonempty proper subset of {n_qubits} qubits"
            )));
        }
        if let Some(&q) = set.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::InvalidPartition(format!(
                "qubit {q} out of range for {n_qubits} qubits"
            )));
        }
        let side_b = (0..n_qubits).filter(|q| !set.contains(q)).collect();
        Ok(Bipartition {
            n_qubits,
            side_a: set.into_iter().collect(),
            side_b,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    pub fn swapped(&self) -> Bipartition {
        Bipartition {
            n_qubits: self.n_qubits,
            side_a: self.side_b.clone(),
            side_b: self.side_a.clone(),
        }
    }

    /// The side with fewer qubits; its marginal is the cheaper one to
    /// diagonalize and has the same nonzero spectrum for pure states.
    pub fn smaller_side(&self) -> &[usize] {
        if self.side_a.len() <= self.side_b.len() {
            &self.side_a
        } else {
            &self.side_b
        }
    }
}

/// Either kind of state, as read from a state file or fed to the checkers.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn n_qubits(&self) -> usize {
        match self {
            QuantumState::Pure(p) => p.n_qubits(),
            QuantumState::Mixed(m) => m.n_qubits(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            QuantumState::Pure(p) => p.density(),
            QuantumState::Mixed(m) => m.clone(),
        }
    }

    /// Marginal on `keep` (ascending qubit order). Keeping every qubit
    /// returns the state itself.
    pub fn marginal(&self, keep: &[usize]) -> Result<QuantumState> {
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == self.n_qubits() && sorted.iter().enumerate().all(|(i, &q)| i == q) {
            return Ok(self.clone());
        }
        let reduced = match self {
            QuantumState::Pure(p) => p.reduced(&sorted)?,
            QuantumState::Mixed(m) => partial_trace(m, &sorted)?,
        };
        Ok(QuantumState::Mixed(reduced))
    }

    /// `self ⊗ |0…0>` on `extra` trailing qubits.
    pub fn append_zero_qubits(&self, extra: usize) -> Result<QuantumState> {
        if extra == 0 {
            return Ok(self.clone());
        }
        let zero = PureState::basis(extra, 0)?;
        Ok(match self {
            QuantumState::Pure(p) => QuantumState::Pure(p.tensor(&zero)),
            QuantumState::Mixed(m) => QuantumState::Mixed(m.tensor(&zero.density())),
        })
    }
}

/// Maps (kept index, environment index) pairs to full basis indices.
pub(crate) struct TraceLayout {
    kept: usize,
    env: usize,
    table: Vec<usize>,
}

impl TraceLayout {
    pub(crate) fn new(n_qubits: usize, keep: &[usize]) -> Result<Self> {
        let set: BTreeSet<usize> = keep.iter().copied().collect();
        if set.is_empty() || set.len() >= n_qubits || set.len() != keep.len() {
            return Err(Error::InvalidPartition(format!(
                "keep set {keep:?} must be a nonempty proper subset of {n_qubits} qubits without repeats"
            )));
        }
        if let Some(&q) = set.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::InvalidPartition(format!(
                "qubit {q} out of range for {n_qubits} qubits"
            )));
        }
        let kept: Vec<usize> = set.iter().copied().collect();
        let traced: Vec<usize> = (0..n_qubits).filter(|q| !set.contains(q)).collect();
        let bit = |q: usize| 1usize << (n_qubits - 1 - q);
        let scatter = |value: usize, qubits: &[usize]| {
            let width = qubits.len();
            qubits
                .iter()
                .enumerate()
                .filter(|(i, _)| value >> (width - 1 - i) & 1 == 1)
                .fold(0usize, |acc, (_, &q)| acc | bit(q))
        };
        let (kd, ed) = (1usize << kept.len(), 1usize << traced.len());
        let mut table = Vec::with_capacity(kd * ed);
        for a in 0..kd {
            let base = scatter(a, &kept);
            for e in 0..ed {
                table.push(base | scatter(e, &traced));
            }
        }
        Ok(TraceLayout {
            kept: kd,
            env: ed,
            table,
        })
    }

    pub(crate) fn kept_dim(&self) -> usize {
        self.kept
    }

    pub(crate) fn env_dim(&self) -> usize {
        self.env
    }

    pub(crate) fn kept_qubits(&self) -> usize {
        self.kept.trailing_zeros() as usize
    }

    #[inline]
    pub(crate) fn index(&self, kept: usize, env: usize) -> usize {
        self.table[kept * self.env + env]
    }
}

/// `tr_{complement of keep} ρ`, with the kept qubits in ascending order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    let layout = TraceLayout::new(rho.n_qubits, &sorted)?;
    let k = layout.kept_dim();
    let mut out = CMatrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            let mut acc = Complex64::new(0.0, 0.0);
            for env in 0..layout.env_dim() {
                acc += rho.entries[(layout.index(a, env), layout.index(b, env))];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(DensityMatrix {
        n_qubits: layout.kept_qubits(),
        entries: out,
    })
}

pub fn hermitian_spectrum(rho: &DensityMatrix) -> Result<Spectrum> {
    let defect = rho.entries.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::InvalidState(format!(
            "not Hermitian (defect {defect:e})"
        )));
    }
    Spectrum::new(hermitian_eigenvalues(&rho.entries))
}

/// Eigenvalues at or below this are treated as zero when counting rank.
pub const RANK_TOL: f64 = 1e-12;

/// Spectral purification `Σ_k √λ_k |e_k> ⊗ |k>`, using `⌈log2 r⌉` ancilla
/// qubits appended after the system register.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let eig = hermitian_eigen(&rho.entries);
    let support: Vec<usize> = (0..eig.values.len())
        .filter(|&k| eig.values[k] > RANK_TOL)
        .collect();
    let rank = support.len().max(1);
    let ancillas = rank.next_power_of_two().trailing_zeros() as usize;
    let anc_dim = 1usize << ancillas;
    let dim = rho.dim();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim * anc_dim];
    for (slot, &k) in support.iter().enumerate() {
        let weight = eig.values[k].sqrt();
        for (i, v) in eig.vectors[k].iter().enumerate() {
            amps[i * anc_dim + slot] = v * weight;
        }
    }
    PureState::normalized(rho.n_qubits + ancillas, amps)
}
