//! Cost sequences (i.i.d., adversarial, recorded) and their bound constants.
//!
//! Random draws use ChaCha8 keyed by the 64-bit seed (`seed_from_u64`) with the
//! round index as the stream id, so the cost of round `n` depends only on
//! `(seed, n)` and can be regenerated in any order.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::domains::{linear_minimizer, Domain};
use crate::error::{check_dim, check_finite, Error, Result};
use crate::vector::{dot, norm, sub};

/// Safety margin keeping sampled noise strictly inside its declared radius.
const RADIUS_SHRINK: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Noise {
    #[default]
    None,
    /// Uniform in the Euclidean ball of radius `radius`.
    UniformBall { radius: f64 },
    /// Independent signs scaled so the noise norm is `radius`.
    RademacherScaled { radius: f64 },
}

impl Noise {
    pub fn radius(&self) -> f64 {
        match self {
            Noise::None => 0.0,
            Noise::UniformBall { radius } | Noise::RademacherScaled { radius } => *radius,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AdversarialMode {
    /// `(-1)^n base`.
    Alternating { base: Vec<f64> },
    /// `L (x_n - c) / |x_n - c|` with `c` the domain centroid.
    BestResponse {
        #[serde(rename = "L")]
        l: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum StreamSpec {
    Iid {
        mean: Vec<f64>,
        #[serde(default)]
        noise: Noise,
        #[serde(default)]
        seed: u64,
    },
    Adversarial {
        mode: AdversarialMode,
    },
    Recorded {
        costs: Vec<Vec<f64>>,
    },
}

impl StreamSpec {
    pub fn iid(mean: Vec<f64>, noise: Noise, seed: u64) -> Self {
        StreamSpec::Iid { mean, noise, seed }
    }

    pub fn alternating(base: Vec<f64>) -> Self {
        StreamSpec::Adversarial {
            mode: AdversarialMode::Alternating { base },
        }
    }

    pub fn best_response(l: f64) -> Self {
        StreamSpec::Adversarial {
            mode: AdversarialMode::BestResponse { l },
        }
    }

    /// Same stream with a different seed (no-op for non-random streams).
    pub fn with_seed(&self, seed: u64) -> Self {
        match self {
            StreamSpec::Iid { mean, noise, .. } => StreamSpec::Iid {
                mean: mean.clone(),
                noise: *noise,
                seed,
            },
            other => other.clone(),
        }
    }

    pub fn is_iid(&self) -> bool {
        matches!(self, StreamSpec::Iid { .. })
    }

    /// Declared true mean, when there is one.
    pub fn mean(&self) -> Option<&[f64]> {
        match self {
            StreamSpec::Iid { mean, .. } => Some(mean),
            _ => None,
        }
    }

    pub fn validate(&self, domain: &Domain) -> Result<()> {
        let d = domain.dim();
        match self {
            StreamSpec::Iid { mean, noise, .. } => {
                check_dim(d, mean.len())?;
                check_finite(mean, "stream mean")?;
                let r = noise.radius();
                if !(r >= 0.0 && r.is_finite()) {
                    return Err(Error::Config(format!("noise radius must be >= 0, got {r}")));
                }
            }
            StreamSpec::Adversarial {
                mode: AdversarialMode::Alternating { base },
            } => {
                check_dim(d, base.len())?;
                check_finite(base, "alternating base")?;
            }
            StreamSpec::Adversarial {
                mode: AdversarialMode::BestResponse { l },
            } => {
                if !(*l >= 0.0 && l.is_finite()) {
                    return Err(Error::Config(format!("best_response L must be >= 0, got {l}")));
                }
            }
            StreamSpec::Recorded { costs } => {
                for c in costs {
                    check_dim(d, c.len())?;
                    check_finite(c, "recorded cost")?;
                }
            }
        }
        Ok(())
    }

    /// Declared `(L, R)`: what the generator guarantees by construction.
    pub fn declared_bounds(&self) -> CostBounds {
        match self {
            StreamSpec::Iid { mean, noise, .. } => CostBounds {
                l: Some(norm(mean) + noise.radius()),
                r: Some(noise.radius()),
                ..CostBounds::default()
            },
            StreamSpec::Adversarial {
                mode: AdversarialMode::Alternating { base },
            } => CostBounds {
                l: Some(norm(base)),
                ..CostBounds::default()
            },
            StreamSpec::Adversarial {
                mode: AdversarialMode::BestResponse { l },
            } => CostBounds {
                l: Some(*l),
                ..CostBounds::default()
            },
            StreamSpec::Recorded { costs } => CostBounds {
                l: Some(costs.iter().map(|c| norm(c)).fold(0.0, f64::max)),
                ..CostBounds::default()
            },
        }
    }
}

/// Cost of round `round` (1-based). Best-response adversaries observe the
/// committed action.
pub fn next_cost(
    stream: &StreamSpec,
    domain: &Domain,
    round: usize,
    action: Option<&[f64]>,
) -> Result<Vec<f64>> {
    if round == 0 {
        return Err(Error::InvalidArgument("rounds are numbered from 1".into()));
    }
    match stream {
        StreamSpec::Iid { mean, noise, seed } => {
            let mut a = mean.clone();
            let eps = sample_noise(noise, mean.len(), *seed, round);
            for (ai, e) in a.iter_mut().zip(&eps) {
                *ai += e;
            }
            Ok(a)
        }
        StreamSpec::Adversarial {
            mode: AdversarialMode::Alternating { base },
        } => {
            let s = if round % 2 == 1 { -1.0 } else { 1.0 };
            Ok(base.iter().map(|v| s * v).collect())
        }
        StreamSpec::Adversarial {
            mode: AdversarialMode::BestResponse { l },
        } => {
            let x = action.ok_or_else(|| {
                Error::InvalidArgument("best_response stream needs the learner's action".into())
            })?;
            check_dim(domain.dim(), x.len())?;
            let dir = sub(x, &domain.centroid());
            let n = norm(&dir);
            if n == 0.0 {
                return Ok(vec![0.0; x.len()]);
            }
            // renormalize so rounding can never push the norm above L
            let mut a: Vec<f64> = dir.iter().map(|v| v / n).collect();
            let an = norm(&a);
            let s = if an > 1.0 { l / an } else { *l };
            for v in a.iter_mut() {
                *v *= s;
            }
            while norm(&a) > *l {
                for v in a.iter_mut() {
                    *v *= RADIUS_SHRINK;
                }
            }
            Ok(a)
        }
        StreamSpec::Recorded { costs } => costs.get(round - 1).cloned().ok_or_else(|| {
            Error::InvalidArgument(format!(
                "recorded stream has {} costs, round {round} requested",
                costs.len()
            ))
        }),
    }
}

fn sample_noise(noise: &Noise, d: usize, seed: u64, round: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(round as u64);
    match noise {
        Noise::None => vec![0.0; d],
        Noise::UniformBall { radius } => {
            if *radius == 0.0 {
                return vec![0.0; d];
            }
            let dir = loop {
                let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
                let n = norm(&g);
                if n > 0.0 {
                    break g.into_iter().map(|v| v / n).collect::<Vec<f64>>();
                }
            };
            let u: f64 = Uniform::new(0.0, 1.0).unwrap().sample(&mut rng);
            let r = radius * RADIUS_SHRINK * u.powf(1.0 / d as f64);
            dir.into_iter().map(|v| v * r).collect()
        }
        Noise::RademacherScaled { radius } => {
            let m = radius * RADIUS_SHRINK / (d as f64).sqrt();
            let coin = Uniform::new(0u8, 2).unwrap();
            (0..d)
                .map(|_| if coin.sample(&mut rng) == 0 { -m } else { m })
                .collect()
        }
    }
}

/// Euclidean and intrinsic cost bounds. Absent fields could not be computed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CostBounds {
    #[serde(rename = "L")]
    pub l: Option<f64>,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    #[serde(rename = "L_inf")]
    pub l_inf: Option<f64>,
    #[serde(rename = "R_inf")]
    pub r_inf: Option<f64>,
    /// Set when `R`/`R_inf` were measured against the empirical average.
    #[serde(default)]
    pub mean_estimated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// `max_{x,y} a.(x - y)` over the domain: the spread of a linear function.
pub fn linear_range(domain: &Domain, a: &[f64]) -> Result<f64> {
    let lo = dot(a, &linear_minimizer(domain, a)?);
    let neg: Vec<f64> = a.iter().map(|v| -v).collect();
    let hi = dot(a, &linear_minimizer(domain, &neg)?);
    Ok((hi - lo).max(0.0))
}

/// Measured `L = max |a_i|`, `R = max |a_i - mean|` and their intrinsic
/// counterparts `max_i max_{x,y} |a_i.(x - y)|` (resp. on `a_i - mean`).
///
/// The intrinsic spreads come from two linear-minimizer calls per cost, which
/// equals the vertex-pair maximum on polytopes and `2|a|` on the ball.
pub fn empirical_bounds(costs: &[Vec<f64>], mean: Option<&[f64]>, domain: &Domain) -> Result<CostBounds> {
    let Some(first) = costs.first() else {
        return Err(Error::InvalidArgument("empirical bounds need at least one cost".into()));
    };
    let d = first.len();
    check_dim(domain.dim(), d)?;
    for c in costs {
        check_dim(d, c.len())?;
        check_finite(c, "cost vector")?;
    }
    let (m, mean_estimated) = match mean {
        Some(m) => {
            check_dim(d, m.len())?;
            (m.to_vec(), false)
        }
        None => {
            let mut m = vec![0.0; d];
            for c in costs {
                crate::vector::axpy(&mut m, 1.0 / costs.len() as f64, c);
            }
            (m, true)
        }
    };
    let mut b = CostBounds {
        l: Some(0.0),
        r: Some(0.0),
        l_inf: Some(0.0),
        r_inf: Some(0.0),
        mean_estimated,
        warning: None,
    };
    let mut intrinsic_ok = true;
    for c in costs {
        let dev = sub(c, &m);
        b.l = b.l.map(|v| v.max(norm(c)));
        b.r = b.r.map(|v| v.max(norm(&dev)));
        if intrinsic_ok {
            match (linear_range(domain, c), linear_range(domain, &dev)) {
                (Ok(x), Ok(y)) => {
                    b.l_inf = b.l_inf.map(|v| v.max(x));
                    b.r_inf = b.r_inf.map(|v| v.max(y));
                }
                (Err(e), _) | (_, Err(e)) => {
                    intrinsic_ok = false;
                    b.l_inf = None;
                    b.r_inf = None;
                    b.warning = Some(format!("intrinsic bounds unavailable: {e}"));
                }
            }
        }
    }
    if mean_estimated {
        let note = "R measured against the empirical mean".to_string();
        b.warning = Some(match b.warning {
            Some(w) => format!("{w}; {note}"),
            None => note,
        });
    }
    Ok(b)
}

/// One cost vector per row; an optional non-numeric header row is skipped.
pub fn load_costs_csv(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let mut costs = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => {
                check_finite(&row, "recorded cost")?;
                costs.push(row);
            }
            Err(_) if k == 0 => continue,
            Err(e) => {
                return Err(Error::Config(format!(
                    "{}: row {}: {e}",
                    path.display(),
                    k + 1
                )))
            }
        }
    }
    if let Some(first) = costs.first() {
        let d = first.len();
        for c in &costs {
            check_dim(d, c.len())?;
        }
    }
    Ok(costs)
}

/// JSON array of arrays.
pub fn load_costs_json(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let costs: Vec<Vec<f64>> =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if let Some(first) = costs.first() {
        let d = first.len();
        for c in &costs {
            check_dim(d, c.len())?;
        }
    }
    Ok(costs)
}

/// Dispatch on the file extension (`.json`, anything else is CSV).
pub fn load_costs(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => load_costs_json(path),
        _ => load_costs_csv(path),
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            _ => unreachable!(),
        }
    } else {
        Error::Config(format!("{}: {e}", path.display()))
    }
}
