//! Online learners: lazy and greedy subgradient, lifted Hedge, barrier.

mod barrier;

use serde::{Deserialize, Serialize};

pub use barrier::{barrier_next, default_facets, Facet};

use crate::domains::{project, vertices, Domain, DEFAULT_VERTEX_CAP};
use crate::error::{check_dim, check_finite, Error, Result};
use crate::vector::{axpy, dot, scale};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    LazySubgradient,
    GreedySubgradient,
    LiftedHedge,
    Barrier,
}

/// How the harness picks `eta` when the config leaves it unset.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaRule {
    /// `D/2L` for i.i.d. streams on polytopes, `|X|/2L` otherwise.
    #[default]
    Auto,
    /// `|X|/2L`, with `|X|` the largest distance from the base point.
    Radius,
    /// `D/2L`.
    Diameter,
    /// `D W / 2 L_inf`.
    Intrinsic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub algorithm: Algorithm,
    /// Step parameter; `None` lets the harness choose per `eta_rule`.
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub eta_rule: EtaRule,
    /// `y_1`; defaults to the projection of the origin.
    #[serde(default)]
    pub base_point: Option<Vec<f64>>,
    #[serde(default = "one")]
    pub hedge_rate_scale: f64,
    /// Per-facet weights; all ones when unset.
    #[serde(default)]
    pub barrier_weights: Option<Vec<f64>>,
    /// Barrier facets; the domain's default facets when unset.
    #[serde(default)]
    pub facets: Option<Vec<Facet>>,
    #[serde(default = "default_inner_tol")]
    pub inner_tol: f64,
    #[serde(default = "default_inner_max_iters")]
    pub inner_max_iters: usize,
    #[serde(default = "default_cap")]
    pub vertex_cap: usize,
}

fn one() -> f64 {
    1.0
}

fn default_inner_tol() -> f64 {
    1e-8
}

fn default_inner_max_iters() -> usize {
    10_000
}

fn default_cap() -> usize {
    DEFAULT_VERTEX_CAP
}

impl LearnerConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        LearnerConfig {
            algorithm,
            eta: None,
            eta_rule: EtaRule::Auto,
            base_point: None,
            hedge_rate_scale: 1.0,
            barrier_weights: None,
            facets: None,
            inner_tol: default_inner_tol(),
            inner_max_iters: default_inner_max_iters(),
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }

    pub fn lazy(eta: f64) -> Self {
        Self::new(Algorithm::LazySubgradient).with_eta(eta)
    }

    pub fn greedy(eta: f64) -> Self {
        Self::new(Algorithm::GreedySubgradient).with_eta(eta)
    }

    pub fn hedge(rate_scale: f64) -> Self {
        LearnerConfig {
            hedge_rate_scale: rate_scale,
            ..Self::new(Algorithm::LiftedHedge)
        }
    }

    pub fn barrier() -> Self {
        Self::new(Algorithm::Barrier)
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = Some(eta);
        self
    }

    pub fn with_base_point(mut self, y1: Vec<f64>) -> Self {
        self.base_point = Some(y1);
        self
    }

    pub fn validate(&self, domain: &Domain) -> Result<()> {
        if let Some(eta) = self.eta {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(Error::Config(format!("eta must be positive and finite, got {eta}")));
            }
        }
        if let Some(y1) = &self.base_point {
            check_dim(domain.dim(), y1.len())?;
            check_finite(y1, "base point")?;
        }
        if !(self.hedge_rate_scale > 0.0 && self.hedge_rate_scale.is_finite()) {
            return Err(Error::Config("hedge_rate_scale must be positive".into()));
        }
        if let Some(w) = &self.barrier_weights {
            if w.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                return Err(Error::Config("barrier weights must be positive".into()));
            }
        }
        if !(self.inner_tol > 0.0) {
            return Err(Error::Config("inner_tol must be positive".into()));
        }
        Ok(())
    }

    fn eta(&self) -> Result<f64> {
        self.eta.ok_or(Error::MissingConstant("eta"))
    }
}

/// `y_1` from the config, or the projection of the origin.
pub fn base_point(config: &LearnerConfig, domain: &Domain) -> Result<Vec<f64>> {
    match &config.base_point {
        Some(y1) => {
            check_dim(domain.dim(), y1.len())?;
            Ok(y1.clone())
        }
        None => Ok(project(domain, &vec![0.0; domain.dim()])?.point),
    }
}

/// Evolving learner state. `round` is the index of the next action to play.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerState {
    pub round: usize,
    /// Sum of all costs observed so far.
    pub cost_sum: Vec<f64>,
    pub last_action: Option<Vec<f64>>,
    pub last_cost: Option<Vec<f64>>,
    /// Hedge only: vertices, cumulative auxiliary costs `sum_i a_i . v_j`, weights.
    pub lifted_vertices: Vec<Vec<f64>>,
    pub aux_cost_sum: Vec<f64>,
    pub hedge_weights: Vec<f64>,
}

impl LearnerState {
    pub fn new(domain: &Domain, config: &LearnerConfig) -> Result<Self> {
        domain.validate()?;
        config.validate(domain)?;
        let (lifted_vertices, aux_cost_sum, hedge_weights) =
            if config.algorithm == Algorithm::LiftedHedge {
                let verts = vertices(domain, config.vertex_cap)?;
                let v = verts.len();
                (verts, vec![0.0; v], vec![1.0 / v as f64; v])
            } else {
                (Vec::new(), Vec::new(), Vec::new())
            };
        Ok(LearnerState {
            round: 1,
            cost_sum: vec![0.0; domain.dim()],
            last_action: None,
            last_cost: None,
            lifted_vertices,
            aux_cost_sum,
            hedge_weights,
        })
    }

    /// Record the action played this round and the cost revealed after it.
    pub fn observe(&mut self, action: &[f64], cost: &[f64], config: &LearnerConfig) -> Result<()> {
        check_dim(self.cost_sum.len(), action.len())?;
        check_dim(self.cost_sum.len(), cost.len())?;
        check_finite(cost, "cost vector")?;
        axpy(&mut self.cost_sum, 1.0, cost);
        if !self.lifted_vertices.is_empty() {
            for (s, v) in self.aux_cost_sum.iter_mut().zip(&self.lifted_vertices) {
                *s += dot(cost, v);
            }
            let observed = self.round as f64;
            let v = self.lifted_vertices.len() as f64;
            let rate = config.hedge_rate_scale * (v.ln() / observed).sqrt();
            self.hedge_weights = softmax(&scale(&self.aux_cost_sum, -rate));
        }
        self.last_action = Some(action.to_vec());
        self.last_cost = Some(cost.to_vec());
        self.round += 1;
        Ok(())
    }
}

/// Numerically stable softmax.
pub fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|v| v / s).collect()
}

/// `P(y_1)` at round 1, else `P(y_1 - eta * cost_sum / sqrt(n - 1))`.
pub fn lazy_subgradient_next(
    state: &LearnerState,
    config: &LearnerConfig,
    domain: &Domain,
) -> Result<Vec<f64>> {
    check_dim(domain.dim(), state.cost_sum.len())?;
    let eta = config.eta()?;
    let mut y = base_point(config, domain)?;
    if state.round >= 2 {
        let s = eta / ((state.round - 1) as f64).sqrt();
        axpy(&mut y, -s, &state.cost_sum);
    }
    Ok(project(domain, &y)?.point)
}

/// `P(x_{n-1} - eta * a_{n-1} / sqrt(n - 1))`; `P(y_1)` at round 1.
pub fn greedy_subgradient_next(
    state: &LearnerState,
    config: &LearnerConfig,
    domain: &Domain,
) -> Result<Vec<f64>> {
    check_dim(domain.dim(), state.cost_sum.len())?;
    let eta = config.eta()?;
    match (&state.last_action, &state.last_cost) {
        (Some(x), Some(a)) if state.round >= 2 => {
            let mut y = x.clone();
            axpy(&mut y, -eta / ((state.round - 1) as f64).sqrt(), a);
            Ok(project(domain, &y)?.point)
        }
        _ => Ok(project(domain, &base_point(config, domain)?)?.point),
    }
}

/// Mixture `sum_j w_j v_j` of the lifted vertices under the current weights.
pub fn lifted_hedge_next(
    state: &LearnerState,
    _config: &LearnerConfig,
    domain: &Domain,
) -> Result<Vec<f64>> {
    if state.lifted_vertices.is_empty() {
        return Err(Error::Unsupported {
            domain: domain.name(),
            what: "lifted Hedge state was built without vertices".into(),
        });
    }
    let mut x = vec![0.0; domain.dim()];
    for (w, v) in state.hedge_weights.iter().zip(&state.lifted_vertices) {
        axpy(&mut x, *w, v);
    }
    Ok(x)
}

/// A learner bound to one domain: alternate [`Learner::act`] and
/// [`Learner::observe`].
#[derive(Debug, Clone)]
pub struct Learner {
    domain: Domain,
    config: LearnerConfig,
    facets: Vec<Facet>,
    state: LearnerState,
    pending: Option<Vec<f64>>,
}

impl Learner {
    /// Resolves the base point once; subgradient variants need `eta` set.
    pub fn new(domain: &Domain, config: &LearnerConfig) -> Result<Self> {
        let state = LearnerState::new(domain, config)?;
        let mut config = config.clone();
        config.base_point = Some(base_point(&config, domain)?);
        if matches!(
            config.algorithm,
            Algorithm::LazySubgradient | Algorithm::GreedySubgradient
        ) {
            config.eta()?;
        }
        let facets = if config.algorithm == Algorithm::Barrier {
            let facets = match &config.facets {
                Some(f) => f.clone(),
                None => default_facets(domain)?,
            };
            for f in &facets {
                check_dim(domain.dim(), f.normal.len())?;
            }
            if let Some(w) = &config.barrier_weights {
                check_dim(facets.len(), w.len())?;
            }
            facets
        } else {
            Vec::new()
        };
        Ok(Learner {
            domain: domain.clone(),
            config,
            facets,
            state,
            pending: None,
        })
    }

    pub fn state(&self) -> &LearnerState {
        &self.state
    }

    pub fn config(&self) -> &LearnerConfig {
        &self.config
    }

    /// Action for the current round; repeated calls return the same action.
    pub fn act(&mut self) -> Result<Vec<f64>> {
        if let Some(x) = &self.pending {
            return Ok(x.clone());
        }
        let x = match self.config.algorithm {
            Algorithm::LazySubgradient => lazy_subgradient_next(&self.state, &self.config, &self.domain)?,
            Algorithm::GreedySubgradient => greedy_subgradient_next(&self.state, &self.config, &self.domain)?,
            Algorithm::LiftedHedge => lifted_hedge_next(&self.state, &self.config, &self.domain)?,
            Algorithm::Barrier => barrier_next(&self.state, &self.config, &self.domain, &self.facets)?,
        };
        self.pending = Some(x.clone());
        Ok(x)
    }

    /// Reveal this round's cost and advance.
    pub fn observe(&mut self, cost: &[f64]) -> Result<()> {
        let x = match self.pending.take() {
            Some(x) => x,
            None => self.act()?,
        };
        self.state.observe(&x, cost, &self.config)?;
        self.pending = None;
        Ok(())
    }
}
