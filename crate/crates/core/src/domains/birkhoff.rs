use super::ProjectionResult;
use crate::error::{check_dim, check_finite, Error, Result};

pub const BIRKHOFF_TOL: f64 = 1e-9;
pub const BIRKHOFF_MAX_ITERS: usize = 50_000;

/// Projection onto `{X : X 1 = 1, 1^T X = 1^T}` (row-major `n x n`).
pub(crate) fn project_affine(n: usize, y: &[f64]) -> Vec<f64> {
    let nf = n as f64;
    let mut r = vec![1.0; n];
    let mut c = vec![1.0; n];
    for i in 0..n {
        for j in 0..n {
            let v = y[i * n + j];
            r[i] -= v;
            c[j] -= v;
        }
    }
    let s: f64 = r.iter().sum();
    let mut x = y.to_vec();
    for i in 0..n {
        for j in 0..n {
            x[i * n + j] += (r[i] + c[j]) / nf - s / (nf * nf);
        }
    }
    x
}

/// Largest row or column sum deviation from 1.
pub(crate) fn sum_violation(n: usize, x: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let row: f64 = x[i * n..(i + 1) * n].iter().sum();
        let col: f64 = (0..n).map(|k| x[k * n + i]).sum();
        worst = worst.max((row - 1.0).abs()).max((col - 1.0).abs());
    }
    worst
}

fn violation(n: usize, x: &[f64]) -> f64 {
    let neg = x.iter().fold(0.0f64, |m, &v| m.max(-v));
    neg.max(sum_violation(n, x))
}

/// Euclidean projection onto the Birkhoff polytope by Dykstra's alternating
/// projections between the affine row/column-sum subspace and the
/// nonnegative orthant.
///
/// Iterates until successive iterates move less than `tol`, then applies a
/// rescue pass (affine re-projection followed by clipping) and reports the
/// remaining constraint violation as `residual`.
pub fn project_birkhoff(n: usize, y: &[f64], tol: f64, max_iters: usize) -> Result<ProjectionResult> {
    if n < 2 {
        return Err(Error::InvalidDomain(format!("Birkhoff{{{n}}}: n must be at least 2")));
    }
    check_dim(n * n, y.len())?;
    check_finite(y, "projection input")?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let d = n * n;
    let mut x = y.to_vec();
    // correction terms for the affine set and the orthant
    let mut p = vec![0.0; d];
    let mut q = vec![0.0; d];
    let mut iterations = 0;
    let mut converged = false;
    let mut buf = vec![0.0; d];
    while iterations < max_iters {
        iterations += 1;
        for k in 0..d {
            buf[k] = x[k] + p[k];
        }
        let a = project_affine(n, &buf);
        for k in 0..d {
            p[k] = buf[k] - a[k];
        }
        let mut moved: f64 = 0.0;
        for k in 0..d {
            let z = a[k] + q[k];
            let nx = z.max(0.0);
            q[k] = z - nx;
            moved += (nx - x[k]) * (nx - x[k]);
            x[k] = nx;
        }
        if moved.sqrt() < tol {
            converged = true;
            break;
        }
    }
    // rescue: one affine re-projection, then clip negatives
    let mut rescued = project_affine(n, &x);
    for v in rescued.iter_mut() {
        *v = v.max(0.0);
    }
    let residual = violation(n, &rescued);
    if !converged && residual > 10.0 * tol {
        return Err(Error::NotConverged {
            what: "Birkhoff projection",
            best: rescued,
            residual,
            iterations,
        });
    }
    Ok(ProjectionResult {
        point: rescued,
        residual,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_fixed() {
        let r = project_birkhoff(2, &[1.0, 0.0, 0.0, 1.0], 1e-9, 1000).unwrap();
        assert_eq!(r.point, vec![1.0, 0.0, 0.0, 1.0]);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn constant_matrix_goes_to_uniform() {
        for c in [-7.0, 0.0, 0.3, 12.5] {
            let r = project_birkhoff(2, &[c; 4], 1e-9, 1000).unwrap();
            for v in &r.point {
                assert!((v - 0.5).abs() < 1e-12, "c={c}: {:?}", r.point);
            }
        }
    }

    #[test]
    fn affine_projection_fixes_sums() {
        let y = [0.3, -1.0, 2.0, 0.1, 0.4, 0.0, 5.0, 1.0, -2.0];
        let x = project_affine(3, &y);
        assert!(sum_violation(3, &x) < 1e-14);
        // idempotent
        let xx = project_affine(3, &x);
        assert!(crate::vector::max_abs_diff(&x, &xx) < 1e-14);
    }

    #[test]
    fn non_convergence_reports_best_iterate() {
        let y = [3.0, -2.0, 0.5, -1.0, 4.0, 0.2, 0.0, 1.0, -3.0];
        match project_birkhoff(3, &y, 1e-15, 2) {
            Err(Error::NotConverged { best, iterations, .. }) => {
                assert_eq!(best.len(), 9);
                assert_eq!(iterations, 2);
            }
            Ok(r) => assert!(r.residual <= 1e-14),
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}
