use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::CMatrix;
use super::state::{DensityMatrix, PureState};
use crate::error::{Error, Result};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Independent seed for substream `stream` of `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream))
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed pure state: a normalized vector of i.i.d. complex
/// Gaussians.
pub fn haar_random_pure_with<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<PureState> {
    let dim = 1usize << n_qubits;
    let amps = (0..dim).map(|_| complex_normal(rng)).collect();
    PureState::normalized(n_qubits, amps)
}

pub fn haar_random_pure(n_qubits: usize, seed: u64) -> Result<PureState> {
    haar_random_pure_with(n_qubits, &mut seeded_rng(seed))
}

/// Marginal of a Haar pure state on `C^(2^n) ⊗ C^rank`, i.e. `G G† / tr`
/// for a `2^n × rank` Ginibre matrix `G`. The result has rank exactly
/// `rank` with probability one.
pub fn random_mixed_with<R: Rng + ?Sized>(
    n_qubits: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let dim = 1usize << n_qubits;
    if rank == 0 || rank > dim {
        return Err(Error::Domain(format!(
            "rank {rank} must lie in 1..={dim} for {n_qubits} qubits"
        )));
    }
    let mut g = CMatrix::zeros(dim, rank);
    for i in 0..dim {
        for k in 0..rank {
            g[(i, k)] = complex_normal(rng);
        }
    }
    let mut rho = &g * &g.adjoint();
    let tr = rho.trace().re;
    rho.scale(1.0 / tr);
    // Symmetrize away rounding so the Hermiticity check is exact.
    let mut sym = rho.clone();
    for i in 0..dim {
        for j in 0..dim {
            sym[(i, j)] = (rho[(i, j)] + rho[(j, i)].conj()) * 0.5;
        }
    }
    DensityMatrix::new(n_qubits, sym)
}

pub fn random_mixed(n_qubits: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_mixed_with(n_qubits, rank, &mut seeded_rng(seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    Ghz,
    W,
    /// `|0…0>`
    Product,
    /// `(|00> + |11>)/√2`
    Bell,
}

impl FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ghz" => Ok(StateKind::Ghz),
            "w" => Ok(StateKind::W),
            "product" => Ok(StateKind::Product),
            "bell" => Ok(StateKind::Bell),
            other => Err(Error::UnknownState(other.to_string())),
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StateKind::Ghz => "ghz",
            StateKind::W => "w",
            StateKind::Product => "product",
            StateKind::Bell => "bell",
        })
    }
}

pub fn named_state(kind: StateKind, n_qubits: usize) -> Result<PureState> {
    let incompatible = || Error::UnknownState(format!("{kind} state on {n_qubits} qubits"));
    if n_qubits == 0 || n_qubits > 20 {
        return Err(incompatible());
    }
    let dim = 1usize << n_qubits;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    match kind {
        StateKind::Ghz => {
            if n_qubits < 2 {
                return Err(incompatible());
            }
            let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            amps[0] = a;
            amps[dim - 1] = a;
        }
        StateKind::W => {
            if n_qubits < 2 {
                return Err(incompatible());
            }
            let a = Complex64::new(1.0 / (n_qubits as f64).sqrt(), 0.0);
            for q in 0..n_qubits {
                amps[1 << q] = a;
            }
        }
        StateKind::Product => amps[0] = Complex64::new(1.0, 0.0),
        StateKind::Bell => {
            if n_qubits != 2 {
                return Err(incompatible());
            }
            let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            amps[0] = a;
            amps[3] = a;
        }
    }
    PureState::normalized(n_qubits, amps)
}
