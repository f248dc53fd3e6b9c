use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::domains::{affine_decomposition, linear_minimizer, vertices, AffineHull, Domain, DEFAULT_VERTEX_CAP};
use crate::error::{check_dim, check_finite, Error, Result};
use crate::vector::{dist, dot, norm, sub, unit};

/// Default number of random starts for the numeric width search.
pub const WIDTH_RESTARTS: usize = 64;
const WIDTH_STEPS: usize = 400;

/// `max |x - y|` over the domain; closed forms for the built-in families.
pub fn diameter(domain: &Domain) -> Result<f64> {
    domain.validate()?;
    Ok(match domain {
        Domain::Ball { .. } | Domain::CurvedEpigraph { .. } => 2.0,
        Domain::Simplex { dim } => {
            if *dim == 1 {
                0.0
            } else {
                2f64.sqrt()
            }
        }
        Domain::Box { dim, lower, upper } => (upper - lower) * (*dim as f64).sqrt(),
        Domain::Birkhoff { n } => (2.0 * *n as f64).sqrt(),
        Domain::Permutahedron { dim } => {
            let d = *dim as f64;
            (d * (d * d - 1.0) / 3.0).sqrt()
        }
        Domain::SignedPermutahedron { dim } => {
            let d = *dim as f64;
            (2.0 * d * (d + 1.0) * (2.0 * d + 1.0) / 3.0).sqrt()
        }
        Domain::VPolytope { vertices } => pair_scan(vertices),
    })
}

/// Largest vertex-pair distance by enumeration.
pub fn diameter_exhaustive(domain: &Domain, cap: usize) -> Result<f64> {
    Ok(pair_scan(&vertices(domain, cap)?))
}

fn pair_scan(points: &[Vec<f64>]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.max(dist(p, q));
        }
    }
    best
}

/// `|P| = max |x - y1|` over the domain.
///
/// The built-in vertex families other than general boxes have vertices of equal
/// norm, so the farthest vertex minimizes `v . y1` and one oracle call suffices.
pub fn norm_from(domain: &Domain, y1: &[f64]) -> Result<f64> {
    domain.validate()?;
    check_dim(domain.dim(), y1.len())?;
    check_finite(y1, "base point")?;
    let equal_norm = |r2: f64| -> Result<f64> {
        let v = linear_minimizer(domain, y1)?;
        Ok((r2 + dot(y1, y1) - 2.0 * dot(&v, y1)).max(0.0).sqrt())
    };
    match domain {
        Domain::Ball { .. } => Ok(norm(y1) + 1.0),
        Domain::Box { lower, upper, .. } => Ok(y1
            .iter()
            .map(|y| (y - lower).abs().max((upper - y).abs()).powi(2))
            .sum::<f64>()
            .sqrt()),
        Domain::Simplex { .. } => equal_norm(1.0),
        Domain::Birkhoff { n } => equal_norm(*n as f64),
        Domain::Permutahedron { dim } | Domain::SignedPermutahedron { dim } => {
            let d = *dim as f64;
            equal_norm(d * (d + 1.0) * (2.0 * d + 1.0) / 6.0)
        }
        Domain::VPolytope { vertices } => Ok(vertices.iter().map(|v| dist(v, y1)).fold(0.0, f64::max)),
        Domain::CurvedEpigraph { alpha } => {
            // extreme points are the lower curve and the two top corners
            let m = 20_000;
            let mut best = dist(&[-1.0, 1.0], y1).max(dist(&[1.0, 1.0], y1));
            for k in 0..=m {
                let x = -1.0 + 2.0 * k as f64 / m as f64;
                best = best.max(dist(&[x, x.abs().powf(*alpha)], y1));
            }
            Ok(best)
        }
    }
}

/// Extent of the domain along the unit direction `ell`.
pub fn width_along(domain: &Domain, ell: &[f64]) -> Result<f64> {
    domain.validate()?;
    check_dim(domain.dim(), ell.len())?;
    check_finite(ell, "direction")?;
    if (norm(ell) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "direction must be a unit vector (norm {})",
            norm(ell)
        )));
    }
    crate::streams::linear_range(domain, ell)
}

/// Minimum width over unit directions in the hull subspace, with the
/// minimizing direction.
///
/// Boxes and simplices use their closed forms; everything else goes through
/// [`width_numeric`].
pub fn width(domain: &Domain, restarts: usize, seed: u64) -> Result<(f64, Vec<f64>)> {
    domain.validate()?;
    let d = domain.dim();
    match domain {
        Domain::Box { lower, upper, .. } => Ok((upper - lower, unit(d, 0))),
        Domain::Simplex { dim } if *dim >= 2 => {
            let n = dim / 2;
            let m = dim - n;
            let mut ell: Vec<f64> = (0..d)
                .map(|j| if j < n { 1.0 / n as f64 } else { -1.0 / m as f64 })
                .collect();
            let s = norm(&ell);
            ell.iter_mut().for_each(|v| *v /= s);
            let w = (*dim as f64 / (n * m) as f64).sqrt();
            Ok((w, ell))
        }
        Domain::Ball { .. } => Ok((2.0, unit(d, 0))),
        _ => width_numeric(domain, restarts, seed),
    }
}

/// Numeric width search: subgradient descent on the unit sphere of `U` from
/// random starts, then a polish that solves for the direction equalizing the
/// near-active vertices at each end.
pub fn width_numeric(domain: &Domain, restarts: usize, seed: u64) -> Result<(f64, Vec<f64>)> {
    domain.validate()?;
    let hull = match domain {
        Domain::Ball { .. } | Domain::CurvedEpigraph { .. } => AffineHull {
            basis: (0..domain.dim()).map(|j| unit(domain.dim(), j)).collect(),
            translation: vec![0.0; domain.dim()],
        },
        _ => affine_decomposition(domain)?,
    };
    let k = hull.dim();
    if k == 0 {
        return Err(Error::InvalidArgument(format!(
            "{} is a single point; width is undefined",
            domain.name()
        )));
    }
    let verts = if domain.is_polytope() {
        vertices(domain, DEFAULT_VERTEX_CAP).ok()
    } else {
        None
    };
    let extremes = |ell: &[f64]| -> Result<(Vec<f64>, Vec<f64>)> {
        match &verts {
            Some(vs) => {
                let mut hi = (f64::NEG_INFINITY, 0);
                let mut lo = (f64::INFINITY, 0);
                for (j, v) in vs.iter().enumerate() {
                    let t = dot(ell, v);
                    if t > hi.0 {
                        hi = (t, j);
                    }
                    if t < lo.0 {
                        lo = (t, j);
                    }
                }
                Ok((vs[hi.1].clone(), vs[lo.1].clone()))
            }
            None => {
                let neg: Vec<f64> = ell.iter().map(|v| -v).collect();
                Ok((linear_minimizer(domain, &neg)?, linear_minimizer(domain, ell)?))
            }
        }
    };
    let spread = |ell: &[f64]| -> Result<f64> {
        let (hi, lo) = extremes(ell)?;
        Ok(dot(ell, &hi) - dot(ell, &lo))
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (f64::INFINITY, hull.embed(&unit(k, 0)));
    for _ in 0..restarts.max(1) {
        let coords: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut rng)).collect();
        let Some(mut ell) = normalized(&hull.embed(&coords)) else {
            continue;
        };
        for step in 1..=WIDTH_STEPS {
            let (hi, lo) = extremes(&ell)?;
            let w = dot(&ell, &hi) - dot(&ell, &lo);
            if w < best.0 {
                best = (w, ell.clone());
            }
            // tangent component of the subgradient hi - lo within U
            let mut g = hull.project_direction(&sub(&hi, &lo));
            let radial = dot(&g, &ell);
            crate::vector::axpy(&mut g, -radial, &ell);
            let gn = norm(&g);
            if gn < 1e-14 {
                break;
            }
            let theta = 0.3 / (step as f64).sqrt();
            crate::vector::axpy(&mut ell, -theta / gn, &g);
            match normalized(&hull.project_direction(&ell)) {
                Some(e) => ell = e,
                None => break,
            }
        }
    }
    if let Some(vs) = &verts {
        if let Some(polished) = polish(vs, &hull, &best.1) {
            let w = spread(&polished)?;
            if w <= best.0 {
                best = (w, polished);
            }
        }
    }
    Ok(best)
}

fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let n = norm(v);
    (n > 1e-300).then(|| v.iter().map(|x| x / n).collect())
}

/// Direction orthogonal (within `U`) to all differences among the near-maximal
/// and among the near-minimal vertices, when that pins down a single line.
/// Tries a ladder of activity tolerances and keeps the narrowest candidate.
fn polish(verts: &[Vec<f64>], hull: &AffineHull, ell: &[f64]) -> Option<Vec<f64>> {
    let t: Vec<f64> = verts.iter().map(|v| dot(ell, v)).collect();
    let hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = t.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = (hi - lo).max(1e-300);
    let k = hull.dim();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for e in (2..=12).rev() {
        let delta = scale * 10f64.powi(-e);
        let top: Vec<&Vec<f64>> = verts.iter().zip(&t).filter(|(_, &x)| x >= hi - delta).map(|(v, _)| v).collect();
        let bot: Vec<&Vec<f64>> = verts.iter().zip(&t).filter(|(_, &x)| x <= lo + delta).map(|(v, _)| v).collect();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for group in [&top, &bot] {
            for v in &group[1..] {
                rows.push(hull.coordinates(&sub(v, group[0])));
            }
        }
        let mut gram = DMatrix::<f64>::zeros(k, k);
        for r in &rows {
            for i in 0..k {
                for j in 0..k {
                    gram[(i, j)] += r[i] * r[j];
                }
            }
        }
        let eig = SymmetricEigen::new(gram);
        let top_ev = eig.eigenvalues.iter().copied().fold(0.0, f64::max).max(1.0);
        let null: Vec<usize> = (0..k).filter(|&i| eig.eigenvalues[i] <= 1e-10 * top_ev).collect();
        if null.len() != 1 {
            continue;
        }
        let coords: Vec<f64> = eig.eigenvectors.column(null[0]).iter().copied().collect();
        let Some(mut cand) = normalized(&hull.embed(&coords)) else {
            continue;
        };
        if dot(&cand, &sub(top[0], bot[0])) < 0.0 {
            cand.iter_mut().for_each(|v| *v = -*v);
        }
        let vals: Vec<f64> = verts.iter().map(|v| dot(&cand, v)).collect();
        let w = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max) - vals.iter().copied().fold(f64::INFINITY, f64::min);
        if best.as_ref().is_none_or(|b| w < b.0) {
            best = Some((w, cand));
        }
    }
    best.map(|b| b.1)
}

/// Lower bound on the width from the vertex-variance argument:
/// Birkhoff `2/sqrt(n-1)`, permutahedron `2 sqrt(d(d+1)/12)`, signed
/// permutahedron `2 sqrt((d+1)(2d+1)/6)`.
pub fn width_lower_bound_variance(domain: &Domain) -> Result<f64> {
    domain.validate()?;
    match domain {
        Domain::Birkhoff { n } => Ok(2.0 / ((*n - 1) as f64).sqrt()),
        Domain::Permutahedron { dim } => {
            let d = *dim as f64;
            Ok(2.0 * (d * (d + 1.0) / 12.0).sqrt())
        }
        Domain::SignedPermutahedron { dim } => {
            let d = *dim as f64;
            Ok(2.0 * ((d + 1.0) * (2.0 * d + 1.0) / 6.0).sqrt())
        }
        _ => Err(Error::Unsupported {
            domain: domain.name(),
            what: "variance width bound".into(),
        }),
    }
}

/// The permutahedron constant `sqrt((5d^2 + 8d + 4)/6)` as printed in the
/// literature; it overshoots the true width (d = 3 gives 3.49 > sqrt 6) and
/// is only reported for comparison.
pub fn width_lower_bound_variance_printed(domain: &Domain) -> Option<f64> {
    match domain {
        Domain::Permutahedron { dim } => {
            let d = *dim as f64;
            Some(((5.0 * d * d + 8.0 * d + 4.0) / 6.0).sqrt())
        }
        _ => None,
    }
}

/// Suboptimality gaps `a . (v - v*)` over the vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub gaps: Vec<(usize, f64)>,
    pub gap_min: f64,
    pub gap_max: f64,
    pub optimal_vertices: Vec<usize>,
}

pub fn suboptimality_gaps(domain: &Domain, a: &[f64]) -> Result<GapReport> {
    suboptimality_gaps_capped(domain, a, DEFAULT_VERTEX_CAP)
}

pub fn suboptimality_gaps_capped(domain: &Domain, a: &[f64], cap: usize) -> Result<GapReport> {
    check_dim(domain.dim(), a.len())?;
    check_finite(a, "cost mean")?;
    let verts = vertices(domain, cap)?;
    let vals: Vec<f64> = verts.iter().map(|v| dot(a, v)).collect();
    let best = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let tie = 1e-12 * vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let gaps: Vec<(usize, f64)> = vals
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let g = v - best;
            (j, if g <= tie { 0.0 } else { g })
        })
        .collect();
    let optimal_vertices: Vec<usize> = gaps.iter().filter(|g| g.1 == 0.0).map(|g| g.0).collect();
    let positive = gaps.iter().map(|g| g.1).filter(|g| *g > 0.0);
    let gap_min = positive.clone().fold(f64::INFINITY, f64::min);
    let gap_max = positive.fold(0.0, f64::max);
    if !gap_min.is_finite() {
        return Err(Error::DegenerateGap);
    }
    Ok(GapReport {
        gaps,
        gap_min,
        gap_max,
        optimal_vertices,
    })
}

/// `(1/2) / (1 + D^2 |a|^2 / gap^2) - 1`, a lower bound on the normal-cone
/// angle quantity `theta_v`; always in `(-1, -1/2)`.
pub fn theta_lower_bound(d: f64, norm_a: f64, gap_v: f64) -> Result<f64> {
    for (name, v) in [("D", d), ("norm_a", norm_a), ("gap_v", gap_v)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
        }
    }
    let ratio = d * norm_a / gap_v;
    Ok(0.5 / (1.0 + ratio * ratio) - 1.0)
}
