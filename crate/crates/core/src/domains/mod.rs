//! Action sets: membership, vertex enumeration, linear minimization,
//! affine hulls and Euclidean projection.

mod assignment;
mod birkhoff;
mod minnorm;
mod permutahedron;
mod projection;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::vector::{dot, norm, sub, unit, zero_sum_basis};

pub use assignment::min_cost_assignment;
pub use birkhoff::{project_birkhoff, BIRKHOFF_MAX_ITERS, BIRKHOFF_TOL};
pub use minnorm::{project_vpolytope_minnorm, MINNORM_TOL};
pub use permutahedron::{isotonic_nonincreasing, project_permutahedron};
pub use projection::{project, project_ball, project_box, project_curved_epigraph, project_simplex};

/// Default cap on explicit vertex enumeration.
pub const DEFAULT_VERTEX_CAP: usize = 10_000;

/// Tagged description of an action set.
///
/// Birkhoff points are `n x n` matrices flattened row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum Domain {
    Ball {
        dim: usize,
    },
    Simplex {
        dim: usize,
    },
    Box {
        dim: usize,
        #[serde(default = "neg_one")]
        lower: f64,
        #[serde(default = "pos_one")]
        upper: f64,
    },
    Birkhoff {
        n: usize,
    },
    Permutahedron {
        dim: usize,
    },
    SignedPermutahedron {
        dim: usize,
    },
    #[serde(rename = "vpolytope")]
    VPolytope {
        vertices: Vec<Vec<f64>>,
    },
    /// `{(x, y) : |x|^alpha <= y <= 1}`, a subset of `[-1,1] x [0,1]`.
    CurvedEpigraph {
        alpha: f64,
    },
}

fn neg_one() -> f64 {
    -1.0
}

fn pos_one() -> f64 {
    1.0
}

/// Orthonormal basis of the direction space `U` plus a translation `t`
/// with the domain contained in `U + t`. `t` is orthogonal to `U`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineHull {
    pub basis: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
}

impl AffineHull {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.translation.len()
    }

    /// Orthogonal projection of a vector onto the subspace `U`.
    pub fn project_direction(&self, p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; p.len()];
        for b in &self.basis {
            let c = dot(b, p);
            for (o, bi) in out.iter_mut().zip(b) {
                *o += c * bi;
            }
        }
        out
    }

    /// Coordinates of a direction with respect to the basis.
    pub fn coordinates(&self, p: &[f64]) -> Vec<f64> {
        self.basis.iter().map(|b| dot(b, p)).collect()
    }

    /// Inverse of [`AffineHull::coordinates`].
    pub fn embed(&self, coords: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ambient_dim()];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (o, bi) in out.iter_mut().zip(b) {
                *o += c * bi;
            }
        }
        out
    }
}

/// Result of a Euclidean projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub point: Vec<f64>,
    /// Largest constraint violation of `point`.
    pub residual: f64,
    pub iterations: usize,
}

impl ProjectionResult {
    pub(crate) fn exact(point: Vec<f64>) -> Self {
        ProjectionResult {
            point,
            residual: 0.0,
            iterations: 0,
        }
    }
}

impl Domain {
    pub fn ball(dim: usize) -> Self {
        Domain::Ball { dim }
    }

    pub fn simplex(dim: usize) -> Self {
        Domain::Simplex { dim }
    }

    /// The cube `[-1, 1]^dim`.
    pub fn cube(dim: usize) -> Self {
        Domain::Box {
            dim,
            lower: -1.0,
            upper: 1.0,
        }
    }

    pub fn birkhoff(n: usize) -> Self {
        Domain::Birkhoff { n }
    }

    pub fn permutahedron(dim: usize) -> Self {
        Domain::Permutahedron { dim }
    }

    pub fn signed_permutahedron(dim: usize) -> Self {
        Domain::SignedPermutahedron { dim }
    }

    pub fn curved_epigraph(alpha: f64) -> Self {
        Domain::CurvedEpigraph { alpha }
    }

    pub fn name(&self) -> String {
        match self {
            Domain::Ball { dim } => format!("Ball{{{dim}}}"),
            Domain::Simplex { dim } => format!("Simplex{{{dim}}}"),
            Domain::Box { dim, lower, upper } => format!("Box{{{dim},{lower},{upper}}}"),
            Domain::Birkhoff { n } => format!("Birkhoff{{{n}}}"),
            Domain::Permutahedron { dim } => format!("Permutahedron{{{dim}}}"),
            Domain::SignedPermutahedron { dim } => format!("SignedPermutahedron{{{dim}}}"),
            Domain::VPolytope { vertices } => format!("VPolytope{{{} vertices}}", vertices.len()),
            Domain::CurvedEpigraph { alpha } => format!("CurvedEpigraph{{{alpha}}}"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidDomain(format!("{}: {msg}", self.name())));
        match self {
            Domain::Ball { dim }
            | Domain::Simplex { dim }
            | Domain::Permutahedron { dim }
            | Domain::SignedPermutahedron { dim } => {
                if *dim == 0 {
                    return bad("dim must be at least 1");
                }
            }
            Domain::Box { dim, lower, upper } => {
                if *dim == 0 {
                    return bad("dim must be at least 1");
                }
                if !(lower.is_finite() && upper.is_finite() && lower < upper) {
                    return bad("requires finite lower < upper");
                }
            }
            Domain::Birkhoff { n } => {
                if *n < 2 {
                    return bad("n must be at least 2");
                }
            }
            Domain::VPolytope { vertices } => {
                let Some(first) = vertices.first() else {
                    return bad("vertex list is empty");
                };
                if first.is_empty() {
                    return bad("vertices must have dim >= 1");
                }
                if vertices.iter().any(|v| v.len() != first.len()) {
                    return bad("vertices have inconsistent dimensions");
                }
                if vertices.iter().flatten().any(|x| !x.is_finite()) {
                    return bad("non-finite vertex coordinate");
                }
            }
            Domain::CurvedEpigraph { alpha } => {
                if !(alpha.is_finite() && *alpha >= 1.0) {
                    return bad("alpha must be finite and >= 1");
                }
            }
        }
        Ok(())
    }

    /// Ambient dimension of points in the domain.
    pub fn dim(&self) -> usize {
        match self {
            Domain::Ball { dim }
            | Domain::Simplex { dim }
            | Domain::Box { dim, .. }
            | Domain::Permutahedron { dim }
            | Domain::SignedPermutahedron { dim } => *dim,
            Domain::Birkhoff { n } => n * n,
            Domain::VPolytope { vertices } => vertices.first().map_or(0, Vec::len),
            Domain::CurvedEpigraph { .. } => 2,
        }
    }

    pub fn is_polytope(&self) -> bool {
        !matches!(self, Domain::Ball { .. } | Domain::CurvedEpigraph { .. })
    }

    /// Number of vertices; saturates at `u128::MAX`. `None` for curved domains.
    pub fn vertex_count(&self) -> Option<u128> {
        let factorial = |k: usize| -> u128 {
            (1..=k as u128).try_fold(1u128, |acc, i| acc.checked_mul(i)).unwrap_or(u128::MAX)
        };
        let pow2 = |k: usize| -> u128 { 1u128.checked_shl(k as u32).unwrap_or(u128::MAX) };
        Some(match self {
            Domain::Ball { .. } | Domain::CurvedEpigraph { .. } => return None,
            Domain::Simplex { dim } => *dim as u128,
            Domain::Box { dim, .. } => {
                if *dim >= 128 {
                    u128::MAX
                } else {
                    pow2(*dim)
                }
            }
            Domain::Birkhoff { n } => factorial(*n),
            Domain::Permutahedron { dim } => factorial(*dim),
            Domain::SignedPermutahedron { dim } => {
                if *dim >= 128 {
                    u128::MAX
                } else {
                    factorial(*dim).saturating_mul(pow2(*dim))
                }
            }
            Domain::VPolytope { vertices } => vertices.len() as u128,
        })
    }

    /// Mean of the vertices for polytopes; area centroid for the curved epigraph.
    pub fn centroid(&self) -> Vec<f64> {
        let d = self.dim();
        match self {
            Domain::Ball { .. } | Domain::SignedPermutahedron { .. } => vec![0.0; d],
            Domain::Simplex { dim } => vec![1.0 / *dim as f64; d],
            Domain::Box { lower, upper, .. } => vec![0.5 * (lower + upper); d],
            Domain::Birkhoff { n } => vec![1.0 / *n as f64; d],
            Domain::Permutahedron { dim } => vec![0.5 * (*dim as f64 + 1.0); d],
            Domain::VPolytope { vertices } => {
                let mut c = vec![0.0; d];
                for v in vertices {
                    crate::vector::axpy(&mut c, 1.0, v);
                }
                crate::vector::scale(&c, 1.0 / vertices.len() as f64)
            }
            Domain::CurvedEpigraph { alpha } => vec![0.0, (alpha + 1.0) / (2.0 * alpha + 1.0)],
        }
    }
}

/// Membership test within tolerance `tol`.
pub fn contains(domain: &Domain, x: &[f64], tol: f64) -> Result<bool> {
    domain.validate()?;
    check_dim(domain.dim(), x.len())?;
    if x.iter().any(|v| !v.is_finite()) {
        return Ok(false);
    }
    Ok(match domain {
        Domain::Ball { .. } => norm(x) <= 1.0 + tol,
        Domain::Simplex { .. } => {
            x.iter().all(|&v| v >= -tol) && (x.iter().sum::<f64>() - 1.0).abs() <= tol
        }
        Domain::Box { lower, upper, .. } => x.iter().all(|&v| v >= lower - tol && v <= upper + tol),
        Domain::Birkhoff { n } => {
            let n = *n;
            x.iter().all(|&v| v >= -tol) && birkhoff::sum_violation(n, x) <= tol
        }
        Domain::Permutahedron { dim } => majorized(x, *dim, true, tol),
        Domain::SignedPermutahedron { dim } => {
            let abs: Vec<f64> = x.iter().map(|v| v.abs()).collect();
            majorized(&abs, *dim, false, tol)
        }
        Domain::VPolytope { vertices } => {
            let p = project_vpolytope_minnorm(vertices, x, MINNORM_TOL)?;
            crate::vector::dist(&p.point, x) <= tol
        }
        Domain::CurvedEpigraph { alpha } => {
            let (u, v) = (x[0], x[1]);
            u.abs() <= 1.0 + tol && v <= 1.0 + tol && v >= u.abs().powf(*alpha) - tol
        }
    })
}

/// `x` sorted descending has partial sums bounded by those of `(d, d-1, ..., 1)`;
/// with `total` the full sums must agree.
fn majorized(x: &[f64], d: usize, total: bool, tol: f64) -> bool {
    let mut s = x.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (k, v) in s.iter().enumerate() {
        lhs += v;
        rhs += (d - k) as f64;
        if lhs > rhs + tol {
            return false;
        }
    }
    !total || (lhs - rhs).abs() <= tol
}

/// Exact vertex list, refused when the count exceeds `cap`.
pub fn vertices(domain: &Domain, cap: usize) -> Result<Vec<Vec<f64>>> {
    domain.validate()?;
    let count = domain.vertex_count().ok_or_else(|| Error::Unsupported {
        domain: domain.name(),
        what: "vertex enumeration of a non-polytopal domain".into(),
    })?;
    if count > cap as u128 {
        let count = if count == u128::MAX {
            "more than 2^128".to_string()
        } else {
            count.to_string()
        };
        return Err(Error::TooManyVertices { count, cap });
    }
    let d = domain.dim();
    Ok(match domain {
        Domain::Simplex { .. } => (0..d).map(|j| unit(d, j)).collect(),
        Domain::Box { lower, upper, .. } => (0..1usize << d)
            .map(|mask| {
                (0..d)
                    .map(|j| if mask >> j & 1 == 1 { *upper } else { *lower })
                    .collect()
            })
            .collect(),
        Domain::Birkhoff { n } => permutations(*n)
            .into_iter()
            .map(|p| {
                let mut m = vec![0.0; n * n];
                for (i, &j) in p.iter().enumerate() {
                    m[i * n + j] = 1.0;
                }
                m
            })
            .collect(),
        Domain::Permutahedron { dim } => permutations(*dim)
            .into_iter()
            .map(|p| p.iter().map(|&j| (j + 1) as f64).collect())
            .collect(),
        Domain::SignedPermutahedron { dim } => {
            let mut out = Vec::new();
            for p in permutations(*dim) {
                for mask in 0..1usize << dim {
                    out.push(
                        p.iter()
                            .enumerate()
                            .map(|(i, &j)| {
                                let s = if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
                                s * (j + 1) as f64
                            })
                            .collect(),
                    );
                }
            }
            out
        }
        Domain::VPolytope { vertices } => vertices.clone(),
        Domain::Ball { .. } | Domain::CurvedEpigraph { .. } => unreachable!(),
    })
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

/// A point minimizing `a . x` over the domain. Ties go to the lowest index.
pub fn linear_minimizer(domain: &Domain, a: &[f64]) -> Result<Vec<f64>> {
    domain.validate()?;
    check_dim(domain.dim(), a.len())?;
    let d = domain.dim();
    Ok(match domain {
        Domain::Ball { .. } => {
            let na = norm(a);
            if na == 0.0 {
                vec![0.0; d]
            } else {
                a.iter().map(|v| -v / na).collect()
            }
        }
        Domain::Simplex { .. } => {
            let mut best = 0;
            for j in 1..d {
                if a[j] < a[best] {
                    best = j;
                }
            }
            unit(d, best)
        }
        Domain::Box { lower, upper, .. } => a
            .iter()
            .map(|&v| if v < 0.0 { *upper } else { *lower })
            .collect(),
        Domain::Birkhoff { n } => {
            let assignment = min_cost_assignment(*n, a);
            let mut m = vec![0.0; d];
            for (i, &j) in assignment.iter().enumerate() {
                m[i * n + j] = 1.0;
            }
            m
        }
        Domain::Permutahedron { .. } => rearrangement(a),
        Domain::SignedPermutahedron { .. } => {
            // largest magnitude goes to the largest |a(j)|, sign opposite to a(j)
            let neg_abs: Vec<f64> = a.iter().map(|v| -v.abs()).collect();
            let mut x = rearrangement(&neg_abs);
            for (xi, ai) in x.iter_mut().zip(a) {
                if *ai > 0.0 {
                    *xi = -*xi;
                }
            }
            x
        }
        Domain::VPolytope { vertices } => {
            let mut best = 0;
            let mut best_val = dot(&vertices[0], a);
            for (j, v) in vertices.iter().enumerate().skip(1) {
                let val = dot(v, a);
                if val < best_val {
                    best = j;
                    best_val = val;
                }
            }
            vertices[best].clone()
        }
        Domain::CurvedEpigraph { alpha } => curved_linear_minimizer(*alpha, a[0], a[1]),
    })
}

/// Value `d` on the cheapest coordinate down to `1` on the most expensive.
fn rearrangement(a: &[f64]) -> Vec<f64> {
    let d = a.len();
    let mut order: Vec<usize> = (0..d).collect();
    // stable: equal costs keep index order, lowest index gets the larger value
    order.sort_by(|&i, &j| a[i].total_cmp(&a[j]));
    let mut x = vec![0.0; d];
    for (rank, &j) in order.iter().enumerate() {
        x[j] = (d - rank) as f64;
    }
    x
}

fn curved_linear_minimizer(alpha: f64, a1: f64, a2: f64) -> Vec<f64> {
    let toward = |s: f64| if s > 0.0 { -1.0 } else if s < 0.0 { 1.0 } else { 0.0 };
    if a2 <= 0.0 {
        // top edge y = 1 is optimal
        let x = toward(a1);
        if a2 == 0.0 && a1 == 0.0 {
            return vec![0.0, 0.0];
        }
        return vec![x, 1.0];
    }
    // minimize a1 x + a2 |x|^alpha over [-1, 1]
    let x = if a1 == 0.0 {
        0.0
    } else if alpha == 1.0 {
        if a1.abs() > a2 {
            toward(a1)
        } else {
            0.0
        }
    } else {
        toward(a1) * (a1.abs() / (alpha * a2)).powf(1.0 / (alpha - 1.0)).min(1.0)
    };
    vec![x, x.abs().powf(alpha)]
}

/// Affine hull `U + t` of a polytope. Closed forms for the built-in families,
/// Gram-Schmidt on vertex differences for `VPolytope`.
pub fn affine_decomposition(domain: &Domain) -> Result<AffineHull> {
    domain.validate()?;
    let d = domain.dim();
    let full = || AffineHull {
        basis: (0..d).map(|j| unit(d, j)).collect(),
        translation: vec![0.0; d],
    };
    Ok(match domain {
        Domain::Ball { .. }
        | Domain::Box { .. }
        | Domain::SignedPermutahedron { .. }
        | Domain::CurvedEpigraph { .. } => full(),
        Domain::Simplex { dim } => AffineHull {
            basis: zero_sum_basis(*dim),
            translation: vec![1.0 / *dim as f64; d],
        },
        Domain::Permutahedron { dim } => AffineHull {
            basis: zero_sum_basis(*dim),
            translation: vec![0.5 * (*dim as f64 + 1.0); d],
        },
        Domain::Birkhoff { n } => {
            let h = zero_sum_basis(*n);
            let mut basis = Vec::with_capacity((n - 1) * (n - 1));
            for r in &h {
                for c in &h {
                    basis.push(
                        (0..d)
                            .map(|k| r[k / n] * c[k % n])
                            .collect::<Vec<f64>>(),
                    );
                }
            }
            AffineHull {
                basis,
                translation: vec![1.0 / *n as f64; d],
            }
        }
        Domain::VPolytope { vertices } => hull_from_points(vertices),
    })
}

/// Gram-Schmidt on `v_i - v_1`, dropping directions with residual norm below 1e-10.
pub fn hull_from_points(points: &[Vec<f64>]) -> AffineHull {
    let v1 = &points[0];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for p in &points[1..] {
        let mut r = sub(p, v1);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &r);
                crate::vector::axpy(&mut r, -c, b);
            }
        }
        let nr = norm(&r);
        if nr > 1e-10 {
            basis.push(r.iter().map(|x| x / nr).collect());
        }
    }
    let mut hull = AffineHull {
        basis,
        translation: Vec::new(),
    };
    let along = hull.project_direction(v1);
    hull.translation = sub(v1, &along);
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        assert!(contains(&Domain::simplex(3), &[1.0 / 3.0; 3], 1e-9).unwrap());
        assert!(!contains(&Domain::ball(2), &[1.0, 1.0], 1e-9).unwrap());
        assert!(contains(&Domain::birkhoff(2), &[0.5; 4], 1e-9).unwrap());
        assert!(matches!(
            contains(&Domain::ball(2), &[1.0], 1e-9),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn permutahedron_membership_uses_majorization() {
        let p = Domain::permutahedron(3);
        assert!(contains(&p, &[2.0, 2.0, 2.0], 1e-9).unwrap());
        assert!(contains(&p, &[1.0, 3.0, 2.0], 1e-9).unwrap());
        assert!(!contains(&p, &[3.5, 1.5, 1.0], 1e-9).unwrap());
        assert!(!contains(&p, &[2.0, 2.0, 2.1], 1e-9).unwrap());
        let s = Domain::signed_permutahedron(3);
        assert!(contains(&s, &[0.0, 0.0, 0.0], 1e-9).unwrap());
        assert!(contains(&s, &[-3.0, 1.0, -2.0], 1e-9).unwrap());
        assert!(!contains(&s, &[-3.0, 2.5, 0.0], 1e-9).unwrap());
    }

    #[test]
    fn vertex_examples() {
        let v = vertices(&Domain::simplex(3), 10).unwrap();
        assert_eq!(v, vec![unit(3, 0), unit(3, 1), unit(3, 2)]);
        let b = vertices(&Domain::birkhoff(3), 10).unwrap();
        assert_eq!(b.len(), 6);
        for m in &b {
            assert!(contains(&Domain::birkhoff(3), m, 0.0).unwrap());
        }
        match vertices(&Domain::cube(20), 1000) {
            Err(Error::TooManyVertices { count, cap }) => {
                assert_eq!(count, "1048576");
                assert_eq!(cap, 1000);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
        assert_eq!(vertices(&Domain::signed_permutahedron(3), 100).unwrap().len(), 48);
        assert!(vertices(&Domain::ball(2), 10).is_err());
    }

    #[test]
    fn lmo_examples() {
        assert_eq!(
            linear_minimizer(&Domain::cube(3), &[1.0, -2.0, 0.0]).unwrap(),
            vec![-1.0, 1.0, -1.0]
        );
        assert_eq!(
            linear_minimizer(&Domain::simplex(3), &[0.0, 0.5, 1.0]).unwrap(),
            unit(3, 0)
        );
        assert_eq!(
            linear_minimizer(&Domain::permutahedron(3), &[3.0, 1.0, 2.0]).unwrap(),
            vec![1.0, 3.0, 2.0]
        );
        assert_eq!(
            linear_minimizer(&Domain::simplex(3), &[1.0, 1.0, 1.0]).unwrap(),
            unit(3, 0)
        );
        assert_eq!(linear_minimizer(&Domain::ball(2), &[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(
            linear_minimizer(&Domain::signed_permutahedron(3), &[1.0, -3.0, 0.5]).unwrap(),
            vec![-2.0, 3.0, -1.0]
        );
    }

    #[test]
    fn lmo_matches_vertex_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let domains = [
            Domain::simplex(5),
            Domain::cube(4),
            Domain::birkhoff(4),
            Domain::permutahedron(4),
            Domain::signed_permutahedron(3),
        ];
        for dom in &domains {
            let verts = vertices(dom, 10_000).unwrap();
            for _ in 0..50 {
                let a: Vec<f64> = (0..dom.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let x = linear_minimizer(dom, &a).unwrap();
                let best = verts.iter().map(|v| dot(v, &a)).fold(f64::INFINITY, f64::min);
                assert!((dot(&x, &a) - best).abs() < 1e-12, "{}", dom.name());
            }
        }
    }

    #[test]
    fn curved_lmo() {
        let dom = Domain::curved_epigraph(4.0);
        assert_eq!(linear_minimizer(&dom, &[0.0, 1.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(linear_minimizer(&dom, &[1.0, -1.0]).unwrap(), vec![-1.0, 1.0]);
        // a1 x + a2 x^4 with a1 = -0.4, a2 = 1: x = (0.4/4)^(1/3)
        let x = linear_minimizer(&dom, &[-0.4, 1.0]).unwrap();
        assert!((x[0] - 0.1f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!((x[1] - x[0].powi(4)).abs() < 1e-15);
    }

    #[test]
    fn affine_hull_examples() {
        let h = affine_decomposition(&Domain::simplex(3)).unwrap();
        assert_eq!(h.dim(), 2);
        for b in &h.basis {
            assert!(b.iter().sum::<f64>().abs() < 1e-14);
        }
        assert_eq!(h.translation, vec![1.0 / 3.0; 3]);

        let h = affine_decomposition(&Domain::cube(2)).unwrap();
        assert_eq!(h.dim(), 2);
        assert_eq!(h.translation, vec![0.0, 0.0]);

        let h = affine_decomposition(&Domain::birkhoff(3)).unwrap();
        assert_eq!(h.dim(), 4);
    }

    #[test]
    fn closed_form_hulls_match_gram_schmidt() {
        for dom in [
            Domain::simplex(4),
            Domain::birkhoff(3),
            Domain::permutahedron(4),
            Domain::cube(3),
            Domain::signed_permutahedron(3),
        ] {
            let closed = affine_decomposition(&dom).unwrap();
            let generic = hull_from_points(&vertices(&dom, 10_000).unwrap());
            assert_eq!(closed.dim(), generic.dim(), "{}", dom.name());
            assert!(crate::vector::max_abs_diff(&closed.translation, &generic.translation) < 1e-9);
            // orthonormal, and every vertex lies in U + t
            for (i, u) in closed.basis.iter().enumerate() {
                for (j, v) in closed.basis.iter().enumerate() {
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((dot(u, v) - e).abs() < 1e-12);
                }
            }
            for v in vertices(&dom, 10_000).unwrap() {
                let rel = sub(&v, &closed.translation);
                let back = closed.project_direction(&rel);
                assert!(crate::vector::max_abs_diff(&rel, &back) < 1e-9);
            }
        }
    }

    #[test]
    fn config_format() {
        let d: Domain = serde_json::from_str(r#"{"tag": "birkhoff", "n": 3}"#).unwrap();
        assert_eq!(d, Domain::birkhoff(3));
        let d: Domain = serde_json::from_str(r#"{"tag": "box", "dim": 2}"#).unwrap();
        assert_eq!(d, Domain::cube(2));
        let d: Domain =
            serde_json::from_str(r#"{"tag": "vpolytope", "vertices": [[0,0],[1,0]]}"#).unwrap();
        assert_eq!(d.dim(), 2);
        let d: Domain = serde_json::from_str(r#"{"tag": "curved_epigraph", "alpha": 0.5}"#).unwrap();
        assert!(d.validate().is_err());
        assert!(Domain::Box { dim: 2, lower: 1.0, upper: 1.0 }.validate().is_err());
        assert!(Domain::birkhoff(1).validate().is_err());
    }
}
