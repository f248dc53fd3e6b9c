use super::{
    project_birkhoff, project_permutahedron, project_vpolytope_minnorm, Domain, ProjectionResult,
    BIRKHOFF_MAX_ITERS, BIRKHOFF_TOL, MINNORM_TOL,
};
use crate::error::{check_dim, check_finite, Result};
use crate::vector::norm;

/// Euclidean projection onto the domain.
///
/// Ball, Box, Simplex and CurvedEpigraph use closed-form rules; the other
/// families dispatch to their specialized routines with default tolerances.
pub fn project(domain: &Domain, y: &[f64]) -> Result<ProjectionResult> {
    domain.validate()?;
    check_dim(domain.dim(), y.len())?;
    check_finite(y, "projection input")?;
    match domain {
        Domain::Ball { .. } => Ok(ProjectionResult::exact(project_ball(y))),
        Domain::Box { lower, upper, .. } => {
            Ok(ProjectionResult::exact(project_box(y, *lower, *upper)))
        }
        Domain::Simplex { .. } => Ok(ProjectionResult::exact(project_simplex(y))),
        Domain::CurvedEpigraph { alpha } => Ok(ProjectionResult::exact(project_curved_epigraph(
            *alpha, y[0], y[1],
        ))),
        Domain::Birkhoff { n } => project_birkhoff(*n, y, BIRKHOFF_TOL, BIRKHOFF_MAX_ITERS),
        Domain::Permutahedron { dim } => project_permutahedron(*dim, y, false),
        Domain::SignedPermutahedron { dim } => project_permutahedron(*dim, y, true),
        Domain::VPolytope { vertices } => project_vpolytope_minnorm(vertices, y, MINNORM_TOL),
    }
}

pub fn project_ball(y: &[f64]) -> Vec<f64> {
    let n = norm(y);
    if n > 1.0 {
        y.iter().map(|v| v / n).collect()
    } else {
        y.to_vec()
    }
}

pub fn project_box(y: &[f64], lower: f64, upper: f64) -> Vec<f64> {
    y.iter().map(|v| v.clamp(lower, upper)).collect()
}

/// Sort-and-threshold projection onto the probability simplex.
pub fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut u = y.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cumsum += uk;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    y.iter().map(|v| (v - theta).max(0.0)).collect()
}

/// Projection onto `{(x, y) : |x|^alpha <= y <= 1}`.
///
/// For fixed `x` the best height is `clamp(q, |x|^alpha, 1)`, so the squared
/// distance reduces to a convex function of `x` on `[-1, 1]`; its derivative is
/// bisected to 1e-12 and the result is compared against the two top corners.
pub fn project_curved_epigraph(alpha: f64, p: f64, q: f64) -> Vec<f64> {
    let inside = |x: f64, y: f64| x.abs() <= 1.0 && y <= 1.0 && y >= x.abs().powf(alpha);
    if inside(p, q) {
        return vec![p, q];
    }
    let cp = p.clamp(-1.0, 1.0);
    let cq = q.clamp(0.0, 1.0);
    // the box projection is optimal whenever it already lies in the set
    if inside(cp, cq) {
        return vec![cp, cq];
    }
    let height = |x: f64| q.clamp(x.abs().powf(alpha), 1.0);
    let slope = |x: f64| {
        let f = x.abs().powf(alpha);
        let t = q.clamp(f, 1.0);
        let dt = if t == f && q < f {
            alpha * x.abs().powf(alpha - 1.0) * x.signum()
        } else {
            0.0
        };
        (x - p) + (t - q) * dt
    };
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    if slope(lo) >= 0.0 {
        hi = lo;
    } else if slope(hi) <= 0.0 {
        lo = hi;
    } else {
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if slope(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let x = 0.5 * (lo + hi);
    let mut best = vec![x, height(x)];
    let d2 = |u: &[f64]| (u[0] - p).powi(2) + (u[1] - q).powi(2);
    for corner in [[-1.0, 1.0], [1.0, 1.0]] {
        if d2(&corner) < d2(&best) {
            best = corner.to_vec();
        }
    }
    best
}
