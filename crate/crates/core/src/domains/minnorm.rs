use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ProjectionResult;
use crate::error::{check_dim, check_finite, Error, Result};
use crate::vector::{add, dot, sub};

/// Default Wolfe duality-gap tolerance (squared-distance units).
pub const MINNORM_TOL: f64 = 1e-13;

const MAX_RESTARTS: usize = 3;
const JITTER: f64 = 1e-12;
const WEIGHT_EPS: f64 = 1e-15;

/// Euclidean projection of `y` onto the convex hull of `vertices`, computed as
/// the minimum-norm point of `{v - y}` by Wolfe's algorithm.
///
/// Stops when the Wolfe duality gap `|x|^2 - min_j x . p_j` is at most `tol`;
/// this bounds the distance to the true projection by `sqrt(tol)`.
pub fn project_vpolytope_minnorm(
    vertices: &[Vec<f64>],
    y: &[f64],
    tol: f64,
) -> Result<ProjectionResult> {
    let Some(first) = vertices.first() else {
        return Err(Error::InvalidDomain("vertex list is empty".into()));
    };
    let d = first.len();
    for v in vertices {
        check_dim(d, v.len())?;
    }
    check_dim(d, y.len())?;
    check_finite(y, "projection input")?;
    let shifted: Vec<Vec<f64>> = vertices.iter().map(|v| sub(v, y)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut points = shifted.clone();
    for restart in 0..=MAX_RESTARTS {
        match wolfe(&points, tol) {
            Ok((x, iterations, gap)) => {
                return Ok(ProjectionResult {
                    point: add(&x, y),
                    residual: gap.max(0.0).sqrt(),
                    iterations,
                });
            }
            Err(WolfeFailure::Singular) if restart < MAX_RESTARTS => {
                points = shifted
                    .iter()
                    .map(|p| p.iter().map(|v| v + JITTER * rng.random_range(-1.0..1.0)).collect())
                    .collect();
            }
            Err(WolfeFailure::Singular) => break,
        }
    }
    Err(Error::Degenerate {
        restarts: MAX_RESTARTS,
    })
}

enum WolfeFailure {
    Singular,
}

/// Returns (min-norm point, major iterations, final gap).
fn wolfe(points: &[Vec<f64>], tol: f64) -> std::result::Result<(Vec<f64>, usize, f64), WolfeFailure> {
    let d = points[0].len();
    let start = (0..points.len())
        .min_by(|&i, &j| dot(&points[i], &points[i]).total_cmp(&dot(&points[j], &points[j])))
        .unwrap();
    let mut corral: Vec<usize> = vec![start];
    let mut weights: Vec<f64> = vec![1.0];
    let mut x = points[start].clone();
    let max_major = 50 * points.len() + 1000;

    for major in 1..=max_major {
        let (j, jval) = points
            .iter()
            .enumerate()
            .map(|(j, p)| (j, dot(&x, p)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let gap = dot(&x, &x) - jval;
        if gap <= tol || corral.contains(&j) {
            return Ok((x, major, gap));
        }
        corral.push(j);
        weights.push(0.0);

        // minor cycle
        loop {
            let alpha = affine_minimizer(points, &corral)?;
            if alpha.iter().all(|&a| a > WEIGHT_EPS) {
                weights = alpha;
                break;
            }
            let mut theta = 1.0f64;
            for (w, a) in weights.iter().zip(&alpha) {
                if *a <= WEIGHT_EPS {
                    let denom = w - a;
                    if denom > 0.0 {
                        theta = theta.min(w / denom);
                    }
                }
            }
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w = (1.0 - theta) * *w + theta * a;
            }
            let mut k = 0;
            while k < corral.len() {
                if weights[k] <= WEIGHT_EPS {
                    corral.remove(k);
                    weights.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = weights.iter().sum();
            for w in weights.iter_mut() {
                *w /= total;
            }
            if corral.len() == 1 {
                weights = vec![1.0];
                break;
            }
        }
        x = vec![0.0; d];
        for (&i, &w) in corral.iter().zip(&weights) {
            crate::vector::axpy(&mut x, w, &points[i]);
        }
    }
    let gap = dot(&x, &x)
        - points
            .iter()
            .map(|p| dot(&x, p))
            .fold(f64::INFINITY, f64::min);
    Ok((x, max_major, gap))
}

/// Weights of the minimum-norm point of the affine hull of the corral,
/// from the bordered Gram system `[G 1; 1^T 0] [w; mu] = [0; 1]`.
fn affine_minimizer(points: &[Vec<f64>], corral: &[usize]) -> std::result::Result<Vec<f64>, WolfeFailure> {
    let k = corral.len();
    let mut m = DMatrix::<f64>::zeros(k + 1, k + 1);
    for (a, &i) in corral.iter().enumerate() {
        for (b, &j) in corral.iter().enumerate().skip(a) {
            let g = dot(&points[i], &points[j]);
            m[(a, b)] = g;
            m[(b, a)] = g;
        }
        m[(a, k)] = 1.0;
        m[(k, a)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = m.lu().solve(&rhs).ok_or(WolfeFailure::Singular)?;
    let w: Vec<f64> = sol.iter().take(k).copied().collect();
    if w.iter().any(|v| !v.is_finite()) {
        return Err(WolfeFailure::Singular);
    }
    Ok(w)
}
