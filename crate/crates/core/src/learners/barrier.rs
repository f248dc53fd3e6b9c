use serde::{Deserialize, Serialize};

use super::{LearnerConfig, LearnerState};
use crate::domains::{project, Domain};
use crate::error::{check_dim, Error, Result};
use crate::vector::{axpy, dist, dot, sub};

/// Affine function `phi(x) = normal . x + offset`, nonnegative on the domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Facet {
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) + self.offset
    }
}

const PHI_FLOOR: f64 = 1e-12;

/// Facet functions for the domains with a short inequality description:
/// `x_j` on the simplex and Birkhoff, `x_j - lower` and `upper - x_j` on boxes.
pub fn default_facets(domain: &Domain) -> Result<Vec<Facet>> {
    let d = domain.dim();
    let unit = |j: usize, s: f64| {
        let mut e = vec![0.0; d];
        e[j] = s;
        e
    };
    match domain {
        Domain::Simplex { .. } | Domain::Birkhoff { .. } => Ok((0..d)
            .map(|j| Facet {
                normal: unit(j, 1.0),
                offset: 0.0,
            })
            .collect()),
        Domain::Box { lower, upper, .. } => {
            let mut f = Vec::with_capacity(2 * d);
            for j in 0..d {
                f.push(Facet {
                    normal: unit(j, 1.0),
                    offset: -lower,
                });
                f.push(Facet {
                    normal: unit(j, -1.0),
                    offset: *upper,
                });
            }
            Ok(f)
        }
        _ => Err(Error::Unsupported {
            domain: domain.name(),
            what: "no default facet list; pass facets explicitly".into(),
        }),
    }
}

struct Objective<'a> {
    facets: &'a [Facet],
    weights: Vec<f64>,
    linear: Vec<f64>,
}

impl Objective<'_> {
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.linear.clone();
        for (f, w) in self.facets.iter().zip(&self.weights) {
            let phi = f.eval(x).max(PHI_FLOOR);
            axpy(&mut g, w * (phi.ln() + 1.0), &f.normal);
        }
        g
    }
}

/// Approximate minimizer of `sum_i eta_i phi_i log phi_i + cost_sum . x / sqrt(n-1)`
/// over the domain (zero linear term at round 1).
///
/// Projected gradient with backtracking, warm-started at the previous action.
/// Experimental baseline.
pub fn barrier_next(
    state: &LearnerState,
    config: &LearnerConfig,
    domain: &Domain,
    facets: &[Facet],
) -> Result<Vec<f64>> {
    let d = domain.dim();
    check_dim(d, state.cost_sum.len())?;
    if facets.is_empty() {
        return Err(Error::Config("barrier needs at least one facet".into()));
    }
    let weights = match &config.barrier_weights {
        Some(w) => {
            check_dim(facets.len(), w.len())?;
            w.clone()
        }
        None => vec![1.0; facets.len()],
    };
    let linear = if state.round >= 2 {
        crate::vector::scale(&state.cost_sum, 1.0 / ((state.round - 1) as f64).sqrt())
    } else {
        vec![0.0; d]
    };
    let obj = Objective {
        facets,
        weights,
        linear,
    };

    let start = match &state.last_action {
        Some(x) => x.clone(),
        None => domain.centroid(),
    };
    let mut x = project(domain, &start)?.point;
    let mut step = 1.0f64;
    let mut pg_norm = f64::INFINITY;
    for _ in 0..config.inner_max_iters {
        let g = obj.gradient(&x);
        let mut probe = x.clone();
        axpy(&mut probe, -1.0, &g);
        pg_norm = dist(&x, &project(domain, &probe)?.point);
        if pg_norm <= config.inner_tol {
            return Ok(x);
        }
        step = (2.0 * step).min(1e6);
        loop {
            let mut y = x.clone();
            axpy(&mut y, -step, &g);
            let trial = project(domain, &y)?.point;
            let delta = sub(&trial, &x);
            // curvature test on gradients; function values lose precision near the optimum
            let gt = obj.gradient(&trial);
            let curvature = dot(&sub(&gt, &g), &delta);
            if curvature <= dot(&delta, &delta) / step {
                x = trial;
                break;
            }
            step *= 0.5;
            if step < 1e-20 {
                return Err(Error::NotConverged {
                    what: "barrier inner solver (line search)",
                    best: x,
                    residual: pg_norm,
                    iterations: config.inner_max_iters,
                });
            }
        }
    }
    Err(Error::NotConverged {
        what: "barrier inner solver",
        best: x,
        residual: pg_norm,
        iterations: config.inner_max_iters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{softmax, Learner};
    use crate::vector::max_abs_diff;

    #[test]
    fn zero_costs_give_uniform_on_simplex() {
        for d in [2, 3, 5] {
            let dom = Domain::simplex(d);
            let mut l = Learner::new(&dom, &LearnerConfig::barrier()).unwrap();
            let x = l.act().unwrap();
            assert!(max_abs_diff(&x, &vec![1.0 / d as f64; d]) < 1e-9);
        }
    }

    #[test]
    fn box_zero_costs_give_center() {
        let dom = Domain::cube(2);
        let mut l = Learner::new(&dom, &LearnerConfig::barrier()).unwrap();
        l.observe(&[0.0, 0.0]).unwrap();
        let x = l.act().unwrap();
        assert!(x.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn simplex_round_two_is_softmax() {
        let dom = Domain::simplex(3);
        let mut l = Learner::new(&dom, &LearnerConfig::barrier()).unwrap();
        let c = [0.4, -1.2, 2.0];
        l.observe(&c).unwrap();
        let x = l.act().unwrap();
        let target = softmax(&c.iter().map(|v| -v).collect::<Vec<_>>());
        assert!(max_abs_diff(&x, &target) < 1e-6);
    }

    #[test]
    fn unsupported_domains_need_explicit_facets() {
        assert!(default_facets(&Domain::ball(2)).is_err());
        assert_eq!(default_facets(&Domain::cube(3)).unwrap().len(), 6);
    }
}
