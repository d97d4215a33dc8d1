//! Multi-qubit pure and mixed states and the linear algebra underneath them.

mod eigen;
mod io;
mod matrix;
mod random;
mod state;

pub use eigen::{
    eigenvalues_2x2, hermitian_eigen, hermitian_eigenvalues, Eigen, JACOBI_OFF_DIAGONAL_TOL,
};
pub use io::{load_state, parse_state, state_to_json, StateFile};
pub use matrix::CMatrix;
pub use random::{
    derive_seed, haar_random_pure, haar_random_pure_with, named_state, random_mixed,
    random_mixed_with, seeded_rng, StateKind,
};
pub(crate) use state::TraceLayout;
pub use state::{
    hermitian_spectrum, partial_trace, purify, Bipartition, DensityMatrix, PureState, QuantumState,
    Spectrum, RANK_TOL,
};

/// Allowed deviation of `‖ψ‖²` or `tr ρ` from 1.
pub const NORM_TOL: f64 = 1e-10;
/// Allowed entrywise deviation from `ρ = ρ†`.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-9;
/// Allowed deviation of a clamped spectrum's sum from 1.
pub const SPECTRUM_SUM_TOL: f64 = 1e-8;
