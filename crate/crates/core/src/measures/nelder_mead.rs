//! Downhill simplex minimization.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Stop once `f(worst) − f(best)` falls to this.
    pub f_tol: f64,
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `f` from `x0` with an axis-aligned initial simplex whose edge
/// along coordinate `i` is `steps[i]`. The best vertex never gets worse
/// than `f(x0)`.
pub fn minimize<F>(mut f: F, x0: &[f64], steps: &[f64], opts: SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert_eq!(steps.len(), n, "one step per coordinate");
    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n + 1);
    simplex.push((f(x0), x0.to_vec()));
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += steps[i];
        simplex.push((f(&p), p));
    }

    let mut centroid = vec![0.0; n];
    let mut reflected = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;

    loop {
        // Best first; the stable sort keeps ties in insertion order.
        simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
        if simplex[n].0 - simplex[0].0 <= opts.f_tol {
            converged = true;
            break;
        }
        if iterations >= opts.max_iterations {
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (_, p) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / n as f64;
            }
        }
        let along = |coef: f64, worst: &[f64], out: &mut [f64]| {
            for i in 0..n {
                out[i] = centroid[i] + coef * (centroid[i] - worst[i]);
            }
        };

        along(REFLECT, &simplex[n].1, &mut reflected);
        let f_r = f(&reflected);
        if f_r < simplex[0].0 {
            along(EXPAND, &simplex[n].1, &mut trial);
            let f_e = f(&trial);
            let worst = &mut simplex[n];
            if f_e < f_r {
                worst.1.copy_from_slice(&trial);
                worst.0 = f_e;
            } else {
                worst.1.copy_from_slice(&reflected);
                worst.0 = f_r;
            }
            continue;
        }
        if f_r < simplex[n - 1].0 {
            simplex[n].1.copy_from_slice(&reflected);
            simplex[n].0 = f_r;
            continue;
        }
        // Contract toward the better of the reflected point and the worst.
        let (coef, f_ref) = if f_r < simplex[n].0 {
            (CONTRACT, f_r)
        } else {
            (-CONTRACT, simplex[n].0)
        };
        along(coef, &simplex[n].1, &mut trial);
        let f_c = f(&trial);
        if f_c < f_ref {
            simplex[n].1.copy_from_slice(&trial);
            simplex[n].0 = f_c;
            continue;
        }
        let (best, rest) = simplex.split_first_mut().expect("nonempty simplex");
        for (fx, p) in rest {
            for (x, b) in p.iter_mut().zip(&best.1) {
                *x = b + SHRINK * (*x - b);
            }
            *fx = f(p);
        }
    }

    let (fx, x) = simplex.swap_remove(0);
    SimplexResult {
        x,
        fx,
        iterations,
        converged,
    }
}
