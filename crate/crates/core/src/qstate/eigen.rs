//! Cyclic Jacobi diagonalization of complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` and then applies
//! an ordinary real Jacobi rotation, so the combined transform is unitary.
//! Sweeps stop once the off-diagonal Frobenius norm drops below
//! [`JACOBI_OFF_DIAGONAL_TOL`].

use num_complex::Complex64;

use super::matrix::CMatrix;

pub const JACOBI_OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenpairs sorted by descending eigenvalue; `vectors[k]` belongs to
/// `values[k]`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn diagonalize(mut a: CMatrix, want_vectors: bool) -> (Vec<f64>, Option<CMatrix>) {
    assert!(a.is_square(), "Jacobi needs a square matrix");
    let n = a.rows();
    let mut v = want_vectors.then(|| CMatrix::identity(n));

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < JACOBI_OFF_DIAGONAL_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                // J = diag(1, conj(phase)) * R, restricted to (p, q).
                let j_pp = Complex64::new(c, 0.0);
                let j_pq = Complex64::new(s, 0.0);
                let j_qp = -phase.conj() * s;
                let j_qq = phase.conj() * c;

                // A <- A J
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * j_pp + akq * j_qp;
                    a[(k, q)] = akp * j_pq + akq * j_qq;
                }
                // A <- J^H A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
                    a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * j_pp + vkq * j_qp;
                        v[(k, q)] = vkp * j_pq + vkq * j_qq;
                    }
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// Eigenvalues of a Hermitian matrix, descending. Only the upper triangle's
/// Hermitian part matters; callers validate Hermiticity beforehand.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let n = a.rows();
    let mut values = match n {
        0 => Vec::new(),
        1 => vec![a[(0, 0)].re],
        2 => eigenvalues_2x2(a[(0, 0)].re, a[(1, 1)].re, a[(0, 1)]).to_vec(),
        _ => diagonalize(a.clone(), false).0,
    };
    values.sort_by(|x, y| y.total_cmp(x));
    values
}

/// Full eigendecomposition, eigenvalues descending.
pub fn hermitian_eigen(a: &CMatrix) -> Eigen {
    let (values, v) = diagonalize(a.clone(), true);
    let v = v.expect("vectors requested");
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    Eigen {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: order.iter().map(|&i| v.column(i)).collect(),
    }
}

/// Closed-form eigenvalues of `[[a, b], [conj(b), d]]`, descending. This is
/// what a single Jacobi rotation produces; it is kept separate because the
/// roof optimizer evaluates millions of single-qubit marginals.
#[inline]
pub fn eigenvalues_2x2(a: f64, d: f64, b: Complex64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean + half_gap, mean - half_gap]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruct(e: &Eigen) -> CMatrix {
        let n = e.values.len();
        let mut m = CMatrix::zeros(n, n);
        for (val, vec) in e.values.iter().zip(&e.vectors) {
            m.add_scaled(&CMatrix::outer(vec), *val);
        }
        m
    }

    #[test]
    fn diagonal_input_is_returned_sorted() {
        let m = CMatrix::from_diagonal(&[0.1, 0.7, 0.2]);
        assert_eq!(hermitian_eigenvalues(&m), vec![0.7, 0.2, 0.1]);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let m = CMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            vec![c(1.0, 1.0), c(3.0, 0.0), c(-0.25, 0.0)],
            vec![c(0.0, -0.5), c(-0.25, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let e = hermitian_eigen(&m);
        assert!(reconstruct(&e).max_abs_diff(&m) < 1e-10);
        for w in e.values.windows(2) {
            assert!(w[0] >= w[1]);
        }
        let values = hermitian_eigenvalues(&m);
        for (a, b) in values.iter().zip(&e.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_2x2_matches_jacobi() {
        let b = c(0.3, -0.2);
        let m = CMatrix::from_rows(&[vec![c(0.6, 0.0), b], vec![b.conj(), c(0.4, 0.0)]]).unwrap();
        let closed = eigenvalues_2x2(0.6, 0.4, b);
        let jac = hermitian_eigen(&m).values;
        assert!((closed[0] - jac[0]).abs() < 1e-14);
        assert!((closed[1] - jac[1]).abs() < 1e-14);
    }
}
