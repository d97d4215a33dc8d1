//! Two-qubit closed forms used as reference values for the roof search.

use crate::entropy::UnifiedParams;
use crate::error::{Error, Result};
use crate::qstate::{hermitian_eigen, hermitian_eigenvalues, CMatrix, DensityMatrix};

/// Wootters concurrence `max(0, μ_1 − μ_2 − μ_3 − μ_4)`, where `μ_i` are
/// the descending eigenvalues of `√(√ρ ρ̃ √ρ)` and
/// `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits() != 2 {
        return Err(Error::InvalidState(
            "concurrence needs a two-qubit state".into(),
        ));
    }
    let m = rho.entries();
    // σ_y⊗σ_y reverses the basis with signs (−1, 1, 1, −1).
    let sign = [-1.0, 1.0, 1.0, -1.0];
    let mut flipped = CMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            flipped[(i, j)] = m[(3 - i, 3 - j)].conj() * (sign[i] * sign[j]);
        }
    }
    let eig = hermitian_eigen(m);
    let mut root = CMatrix::zeros(4, 4);
    for (l, v) in eig.values.iter().zip(&eig.vectors) {
        root.add_scaled(&CMatrix::outer(v), l.max(0.0).sqrt());
    }
    let r = &(&root * &flipped) * &root;
    let mu: Vec<f64> = hermitian_eigenvalues(&r)
        .iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).max(0.0))
}

/// Unified entropy of the qubit spectrum `(1 ± √(1 − C²))/2`; for
/// `(q, s) = (2, 1)` this is `C²/2`.
pub fn unified_of_concurrence(c: f64, p: &UnifiedParams) -> f64 {
    let r = (1.0 - c * c).max(0.0).sqrt();
    let spectrum = crate::qstate::Spectrum::new(vec![(1.0 + r) / 2.0, (1.0 - r) / 2.0])
        .expect("valid qubit spectrum");
    crate::entropy::unified_entropy(&spectrum, p)
}
