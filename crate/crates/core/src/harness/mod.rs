//! Experiment runner, regret accounting, sweeps and persistence.

mod export;

use serde::{Deserialize, Serialize};

pub use export::{export_costs, export_summaries, export_trace, load_summaries_json, ExportFormat, TRACE_CSV_HEADER};

use crate::analysis::{diameter, norm_from, suboptimality_gaps, width};
use crate::domains::{linear_minimizer, Domain};
use crate::error::{Error, Result};
use crate::learners::{base_point, Algorithm, EtaRule, Learner, LearnerConfig};
use crate::streams::{linear_range, next_cost, StreamSpec};
use crate::vector::{axpy, dist, dot, norm, sub};

/// Distance below which an action counts as sitting on the optimal vertex.
pub const SNAP_TOL: f64 = 1e-6;

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "POLYREGRET_THREADS";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub domain: Domain,
    pub learner: LearnerConfig,
    pub stream: StreamSpec,
    pub horizon: usize,
    /// Seeds for i.i.d. streams; empty means the stream's own seed.
    #[serde(default)]
    pub seeds: Vec<u64>,
    /// Keep per-round actions and costs in the trace.
    #[serde(default)]
    pub record_actions: bool,
    #[serde(default)]
    pub output_path: Option<String>,
}

impl ExperimentConfig {
    pub fn new(domain: Domain, learner: LearnerConfig, stream: StreamSpec, horizon: usize) -> Self {
        ExperimentConfig {
            domain,
            learner,
            stream,
            horizon,
            seeds: Vec::new(),
            record_actions: false,
            output_path: None,
        }
    }

    pub fn with_seeds(mut self, seeds: impl IntoIterator<Item = u64>) -> Self {
        self.seeds = seeds.into_iter().collect();
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        self.learner.validate(&self.domain)?;
        self.stream.validate(&self.domain)
    }

    /// `(seed or None)` per run: one run per listed seed, or a single run.
    fn runs(&self) -> Vec<Option<u64>> {
        if self.seeds.is_empty() {
            vec![None]
        } else {
            self.seeds.iter().map(|s| Some(*s)).collect()
        }
    }
}

/// Fill in `eta` when unset, per the config's rule:
/// `|X|/2L` (radius from the base point), `D/2L`, or `D W / 2 L_inf`.
/// `Auto` picks `D/2L` for i.i.d. streams on polytopes and `|X|/2L` otherwise.
/// A zero declared cost bound gives `eta = 1`.
pub fn resolve_learner(domain: &Domain, learner: &LearnerConfig, stream: &StreamSpec) -> Result<LearnerConfig> {
    let mut out = learner.clone();
    if out.eta.is_some()
        || !matches!(
            out.algorithm,
            Algorithm::LazySubgradient | Algorithm::GreedySubgradient
        )
    {
        return Ok(out);
    }
    let rule = match out.eta_rule {
        EtaRule::Auto if stream.is_iid() && domain.is_polytope() => EtaRule::Diameter,
        EtaRule::Auto => EtaRule::Radius,
        r => r,
    };
    let eta = match rule {
        EtaRule::Intrinsic => {
            let l_inf = declared_l_inf(domain, stream)?;
            if l_inf > 0.0 {
                diameter(domain)? * width(domain, crate::analysis::WIDTH_RESTARTS, 0)?.0 / (2.0 * l_inf)
            } else {
                1.0
            }
        }
        _ => {
            let l = stream.declared_bounds().l.unwrap_or(0.0);
            if l > 0.0 {
                let scale = if rule == EtaRule::Diameter {
                    diameter(domain)?
                } else {
                    norm_from(domain, &base_point(&out, domain)?)?
                };
                scale / (2.0 * l)
            } else {
                1.0
            }
        }
    };
    out.eta = Some(if eta > 0.0 && eta.is_finite() { eta } else { 1.0 });
    Ok(out)
}

/// Upper bound on `max_n max_{x,y} a_n.(x - y)` implied by the declared stream.
pub fn declared_l_inf(domain: &Domain, stream: &StreamSpec) -> Result<f64> {
    Ok(match stream {
        StreamSpec::Iid { mean, noise, .. } => linear_range(domain, mean)? + noise.radius() * diameter(domain)?,
        StreamSpec::Adversarial {
            mode: crate::streams::AdversarialMode::Alternating { base },
        } => linear_range(domain, base)?,
        StreamSpec::Adversarial {
            mode: crate::streams::AdversarialMode::BestResponse { l },
        } => l * diameter(domain)?,
        StreamSpec::Recorded { costs } => {
            let mut m: f64 = 0.0;
            for c in costs {
                m = m.max(linear_range(domain, c)?);
            }
            m
        }
    })
}

/// One round of a trace. Absent fields were not computable (no declared mean).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub n: usize,
    pub cost_dot_action: f64,
    pub cum_regret: f64,
    pub cum_pseudo_regret: Option<f64>,
    pub eps_n: Option<f64>,
    pub snapped: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretTrace {
    pub seed: Option<u64>,
    pub eta: Option<f64>,
    /// Minimizer of the declared mean cost, when there is one.
    pub x_star: Option<Vec<f64>>,
    pub rounds: Vec<RoundRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub costs: Option<Vec<Vec<f64>>>,
}

impl RegretTrace {
    pub fn final_regret(&self) -> f64 {
        self.rounds.last().map_or(0.0, |r| r.cum_regret)
    }

    pub fn final_pseudo_regret(&self) -> Option<f64> {
        self.rounds.last().and_then(|r| r.cum_pseudo_regret)
    }
}

/// Per-run summary produced by [`sweep`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub config_index: usize,
    pub seed: Option<u64>,
    pub horizon: usize,
    pub eta: Option<f64>,
    pub final_regret: Option<f64>,
    pub final_pseudo_regret: Option<f64>,
    /// Pseudo-regret accrued over rounds `(N/2, N]`.
    pub plateau_increment: Option<f64>,
    pub mean_eps: Option<f64>,
    pub max_eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Round-by-round view handed to observers of [`drive`].
pub struct RoundView<'a> {
    pub n: usize,
    pub action: &'a [f64],
    pub cost: &'a [f64],
    pub record: &'a RoundRecord,
}

/// Run the full-information loop for one seed, calling `observer` after each
/// round. Returns the resolved `eta` and the mean minimizer `x*`.
pub fn drive(
    config: &ExperimentConfig,
    seed: Option<u64>,
    mut observer: impl FnMut(RoundView<'_>),
) -> Result<(Option<f64>, Option<Vec<f64>>)> {
    config.validate()?;
    let domain = &config.domain;
    let stream = match seed {
        Some(s) => config.stream.with_seed(s),
        None => config.stream.clone(),
    };
    let learner_cfg = resolve_learner(domain, &config.learner, &stream)?;
    let mut learner = Learner::new(domain, &learner_cfg)?;
    let mean = stream.mean().map(|m| m.to_vec());
    let x_star = match &mean {
        Some(m) => Some(linear_minimizer(domain, m)?),
        None => None,
    };

    let d = domain.dim();
    let mut cost_sum = vec![0.0; d];
    let mut err_sum = vec![0.0; d];
    let mut cum_cost = 0.0;
    let mut cum_pseudo = 0.0;
    for n in 1..=config.horizon {
        let mut step = || -> Result<(Vec<f64>, Vec<f64>)> {
            let x = learner.act()?;
            let a = next_cost(&stream, domain, n, Some(&x))?;
            learner.observe(&a)?;
            Ok((x, a))
        };
        let (x, a) = step().map_err(|e| e.at_round(n))?;
        let c = dot(&a, &x);
        cum_cost += c;
        axpy(&mut cost_sum, 1.0, &a);
        let best = linear_minimizer(domain, &cost_sum).map_err(|e| e.at_round(n))?;
        let cum_regret = cum_cost - dot(&cost_sum, &best);
        let (pseudo, eps, snapped) = match (&mean, &x_star) {
            (Some(m), Some(xs)) => {
                cum_pseudo += dot(m, &sub(&x, xs));
                axpy(&mut err_sum, 1.0, &sub(m, &a));
                (
                    Some(cum_pseudo),
                    Some(norm(&err_sum) / (n as f64).sqrt()),
                    Some(dist(&x, xs) <= SNAP_TOL),
                )
            }
            _ => (None, None, None),
        };
        let record = RoundRecord {
            n,
            cost_dot_action: c,
            cum_regret,
            cum_pseudo_regret: pseudo,
            eps_n: eps,
            snapped,
        };
        observer(RoundView {
            n,
            action: &x,
            cost: &a,
            record: &record,
        });
    }
    Ok((learner_cfg.eta, x_star))
}

/// Single run; uses the first listed seed when there is one.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RegretTrace> {
    run_seed(config, config.seeds.first().copied())
}

pub fn run_seed(config: &ExperimentConfig, seed: Option<u64>) -> Result<RegretTrace> {
    let mut rounds = Vec::with_capacity(config.horizon);
    let mut actions = config.record_actions.then(Vec::new);
    let mut costs = config.record_actions.then(Vec::new);
    let (eta, x_star) = drive(config, seed, |v| {
        rounds.push(v.record.clone());
        if let Some(a) = actions.as_mut() {
            a.push(v.action.to_vec());
        }
        if let Some(c) = costs.as_mut() {
            c.push(v.cost.to_vec());
        }
    })?;
    Ok(RegretTrace {
        seed: seed.or(match &config.stream {
            StreamSpec::Iid { seed, .. } => Some(*seed),
            _ => None,
        }),
        eta,
        x_star,
        rounds,
        actions,
        costs,
    })
}

fn summarize(config: &ExperimentConfig, index: usize, seed: Option<u64>) -> RunSummary {
    let half = config.horizon / 2;
    let mut at_half: Option<f64> = None;
    let mut last: Option<RoundRecord> = None;
    let (mut eps_sum, mut eps_max, mut eps_count) = (0.0, 0.0f64, 0usize);
    let result = drive(config, seed, |v| {
        if let Some(e) = v.record.eps_n {
            eps_sum += e;
            eps_max = eps_max.max(e);
            eps_count += 1;
        }
        if v.n == half {
            at_half = v.record.cum_pseudo_regret;
        }
        last = Some(v.record.clone());
    });
    let mut s = RunSummary {
        config_index: index,
        seed,
        horizon: config.horizon,
        eta: None,
        final_regret: None,
        final_pseudo_regret: None,
        plateau_increment: None,
        mean_eps: None,
        max_eps: None,
        error: None,
    };
    match result {
        Ok((eta, _)) => {
            s.eta = eta;
            s.final_regret = Some(last.as_ref().map_or(0.0, |r| r.cum_regret));
            s.final_pseudo_regret = match &last {
                Some(r) => r.cum_pseudo_regret,
                None if config.stream.is_iid() => Some(0.0),
                None => None,
            };
            if let Some(end) = s.final_pseudo_regret {
                s.plateau_increment = Some(end - at_half.unwrap_or(0.0));
            }
            if eps_count > 0 {
                s.mean_eps = Some(eps_sum / eps_count as f64);
                s.max_eps = Some(eps_max);
            }
        }
        Err(e) => s.error = Some(e.to_string()),
    }
    s
}

/// Thread count from `POLYREGRET_THREADS`, if set.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(None),
    }
}

fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Config(format!("thread pool: {e}")))
}

/// Run every (config, seed) cell. Output follows grid order: configs in
/// order, seeds in listed order. Cell failures are recorded, not fatal.
pub fn sweep(configs: &[ExperimentConfig]) -> Result<Vec<RunSummary>> {
    sweep_with_threads(configs, thread_cap()?)
}

pub fn sweep_with_threads(configs: &[ExperimentConfig], threads: Option<usize>) -> Result<Vec<RunSummary>> {
    use rayon::prelude::*;
    if configs.is_empty() {
        return Err(Error::Config("sweep grid is empty".into()));
    }
    let cells: Vec<(usize, Option<u64>)> = configs
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.runs().into_iter().map(move |s| (i, s)))
        .collect();
    let pool = pool(threads)?;
    Ok(pool.install(|| {
        cells
            .par_iter()
            .map(|&(i, seed)| summarize(&configs[i], i, seed))
            .collect()
    }))
}

/// Fraction of seeds with `a.(x_n - v1) > 1e-9 Delta` at each checkpoint,
/// where `a` is the declared mean, `v1` its minimizer and `Delta` the
/// smallest positive gap.
pub fn snap_probability(config: &ExperimentConfig, checkpoints: &[usize]) -> Result<Vec<(usize, f64)>> {
    use rayon::prelude::*;
    if checkpoints.is_empty() {
        return Ok(Vec::new());
    }
    config.validate()?;
    let mean = config
        .stream
        .mean()
        .ok_or_else(|| Error::Config("snap probability needs an i.i.d. stream with a declared mean".into()))?
        .to_vec();
    let gaps = suboptimality_gaps(&config.domain, &mean)?;
    let tol = 1e-9 * gaps.gap_min;
    let v1 = linear_minimizer(&config.domain, &mean)?;
    let base = dot(&mean, &v1);
    let last = *checkpoints.iter().max().unwrap();
    let mut cfg = config.clone();
    cfg.horizon = last;
    let runs = cfg.runs();
    let pool = pool(thread_cap()?)?;
    let hits: Vec<Result<Vec<bool>>> = pool.install(|| {
        runs.par_iter()
            .map(|&seed| {
                let mut flags = vec![false; checkpoints.len()];
                drive(&cfg, seed, |v| {
                    for (k, &c) in checkpoints.iter().enumerate() {
                        if c == v.n {
                            flags[k] = dot(&mean, v.action) - base > tol;
                        }
                    }
                })?;
                Ok(flags)
            })
            .collect()
    });
    let mut counts = vec![0usize; checkpoints.len()];
    for h in hits {
        for (k, f) in h?.into_iter().enumerate() {
            counts[k] += f as usize;
        }
    }
    Ok(checkpoints
        .iter()
        .zip(counts)
        .map(|(&c, k)| (c, if c == 0 { 0.0 } else { k as f64 / runs.len() as f64 }))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::Noise;

    fn ball_cfg(horizon: usize) -> ExperimentConfig {
        ExperimentConfig::new(
            Domain::ball(2),
            LearnerConfig::lazy(1.0).with_base_point(vec![0.0, 0.0]),
            StreamSpec::iid(vec![0.5, 0.0], Noise::None, 0),
            horizon,
        )
    }

    #[test]
    fn empty_horizon() {
        let t = run_experiment(&ball_cfg(0)).unwrap();
        assert!(t.rounds.is_empty());
    }

    #[test]
    fn noiseless_ball_plateaus_once_snapped() {
        // y_n = -sqrt(n-1) (0.5, 0) leaves the unit ball at n = 5
        let t = run_experiment(&ball_cfg(40)).unwrap();
        assert_eq!(t.x_star, Some(vec![-1.0, 0.0]));
        let expected: f64 = (1..5).map(|n| 0.5 * (1.0 - 0.5 * ((n - 1) as f64).sqrt())).sum();
        for r in &t.rounds {
            assert_eq!(r.snapped, Some(r.n >= 5));
            assert_eq!(r.eps_n, Some(0.0));
        }
        for r in &t.rounds[4..] {
            assert!((r.cum_pseudo_regret.unwrap() - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_recorded_costs_have_zero_regret() {
        let cfg = ExperimentConfig::new(
            Domain::simplex(3),
            LearnerConfig::hedge(1.0),
            StreamSpec::Recorded {
                costs: vec![vec![0.0; 3]; 10],
            },
            10,
        );
        let t = run_experiment(&cfg).unwrap();
        assert!(t.rounds.iter().all(|r| r.cum_regret == 0.0 && r.cum_pseudo_regret.is_none()));
    }

    #[test]
    fn errors_carry_the_round() {
        let cfg = ExperimentConfig::new(
            Domain::simplex(2),
            LearnerConfig::lazy(1.0),
            StreamSpec::Recorded {
                costs: vec![vec![0.0; 2]; 3],
            },
            5,
        );
        match run_experiment(&cfg) {
            Err(Error::AtRound { round, .. }) => assert_eq!(round, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn auto_eta_rules() {
        let cube = Domain::cube(5);
        let l = resolve_learner(
            &cube,
            &LearnerConfig::new(Algorithm::LazySubgradient),
            &StreamSpec::best_response(1.0),
        )
        .unwrap();
        assert!((l.eta.unwrap() - 5f64.sqrt() / 2.0).abs() < 1e-15);
        let l = resolve_learner(
            &cube,
            &LearnerConfig::new(Algorithm::LazySubgradient),
            &StreamSpec::iid(vec![0.5, 0.0, 0.0, 0.0, 0.0], Noise::UniformBall { radius: 0.5 }, 0),
        )
        .unwrap();
        assert!((l.eta.unwrap() - 2.0 * 5f64.sqrt() / 2.0).abs() < 1e-15);
        let l = resolve_learner(
            &cube,
            &LearnerConfig::new(Algorithm::LazySubgradient),
            &StreamSpec::Recorded { costs: vec![] },
        )
        .unwrap();
        assert_eq!(l.eta, Some(1.0));
    }

    #[test]
    fn sweep_keeps_grid_order() {
        let cfg = ExperimentConfig::new(
            Domain::simplex(3),
            LearnerConfig::lazy(0.5),
            StreamSpec::iid(vec![0.0, 0.5, 1.0], Noise::UniformBall { radius: 0.3 }, 0),
            50,
        )
        .with_seeds([5, 1, 9]);
        let out = sweep_with_threads(&[cfg.clone(), cfg], Some(3)).unwrap();
        let order: Vec<_> = out.iter().map(|s| (s.config_index, s.seed)).collect();
        assert_eq!(
            order,
            vec![(0, Some(5)), (0, Some(1)), (0, Some(9)), (1, Some(5)), (1, Some(1)), (1, Some(9))]
        );
        assert_eq!(out[0].final_pseudo_regret, out[3].final_pseudo_regret);
    }

    #[test]
    fn snap_probability_edge_cases() {
        let cfg = ExperimentConfig::new(
            Domain::simplex(3),
            LearnerConfig::lazy(0.5),
            StreamSpec::iid(vec![0.0, 0.5, 1.0], Noise::None, 0),
            0,
        )
        .with_seeds([1, 2]);
        assert!(snap_probability(&cfg, &[]).unwrap().is_empty());
        let p = snap_probability(&cfg, &[50, 100]).unwrap();
        assert_eq!(p, vec![(50, 0.0), (100, 0.0)]);
        let mut flat = cfg.clone();
        flat.stream = StreamSpec::iid(vec![1.0; 3], Noise::None, 0);
        assert!(matches!(snap_probability(&flat, &[10]), Err(Error::DegenerateGap)));
    }
}
