use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `L D + (|X|^2/(2 eta) + 2 eta L^2) sqrt(N)`.
    Thm1,
    /// `3 L D sqrt(N)`.
    Thm1Tuned,
    /// `3 L_inf D sqrt(N) / W`.
    Worstcase2,
    /// `L_inf sqrt(ln(V) N)`; order bound with unit constant, not certified.
    HedgeLifted,
    Ball,
    BallTuned,
    PolytopeGeneral,
    /// Trailing constant 11/20.
    PolytopeTuned,
    /// Same with the trailing constant 1/3.
    PolytopeTunedRestated,
    IntrinsicTuned,
}

impl BoundKind {
    pub const ALL: [BoundKind; 10] = [
        BoundKind::Thm1,
        BoundKind::Thm1Tuned,
        BoundKind::Worstcase2,
        BoundKind::HedgeLifted,
        BoundKind::Ball,
        BoundKind::BallTuned,
        BoundKind::PolytopeGeneral,
        BoundKind::PolytopeTuned,
        BoundKind::PolytopeTunedRestated,
        BoundKind::IntrinsicTuned,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Thm1 => "thm1",
            BoundKind::Thm1Tuned => "thm1_tuned",
            BoundKind::Worstcase2 => "worstcase2",
            BoundKind::HedgeLifted => "hedge_lifted",
            BoundKind::Ball => "ball",
            BoundKind::BallTuned => "ball_tuned",
            BoundKind::PolytopeGeneral => "polytope_general",
            BoundKind::PolytopeTuned => "polytope_tuned",
            BoundKind::PolytopeTunedRestated => "polytope_tuned_restated",
            BoundKind::IntrinsicTuned => "intrinsic_tuned",
        }
    }

    /// Regret bounds for arbitrary sequences (the rest bound i.i.d. pseudo-regret).
    pub fn is_adversarial(self) -> bool {
        matches!(
            self,
            BoundKind::Thm1 | BoundKind::Thm1Tuned | BoundKind::Worstcase2 | BoundKind::HedgeLifted
        )
    }

    /// False for order-of-magnitude bounds with an assumed unit constant.
    pub fn is_certified(self) -> bool {
        self != BoundKind::HedgeLifted
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown bound kind `{s}`")))
    }
}

/// Constants consumed by the bound formulas; each kind reads a subset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    #[serde(rename = "L", default)]
    pub l: Option<f64>,
    #[serde(rename = "R", default)]
    pub r: Option<f64>,
    #[serde(default)]
    pub norm_a: Option<f64>,
    #[serde(rename = "D", default)]
    pub d: Option<f64>,
    #[serde(default)]
    pub norm_x: Option<f64>,
    #[serde(default)]
    pub norm_p: Option<f64>,
    #[serde(default)]
    pub gap_min: Option<f64>,
    #[serde(default)]
    pub gap_max: Option<f64>,
    #[serde(rename = "W", default)]
    pub w: Option<f64>,
    #[serde(rename = "L_inf", default)]
    pub l_inf: Option<f64>,
    #[serde(rename = "R_inf", default)]
    pub r_inf: Option<f64>,
    /// Number of vertices.
    #[serde(rename = "V", default)]
    pub v: Option<f64>,
    /// Horizon.
    #[serde(rename = "N", default)]
    pub n: Option<f64>,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
}

/// `alpha >= 3` and `eta > 0`; `beta = 1/3 - 1/alpha` is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub alpha: f64,
    pub eta: f64,
}

impl BoundParams {
    pub fn new(alpha: f64, eta: f64) -> Result<Self> {
        if !(alpha >= 3.0) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("alpha must be >= 3, got {alpha}")));
        }
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::InvalidArgument(format!("eta must be positive, got {eta}")));
        }
        Ok(BoundParams { alpha, eta })
    }

    pub fn beta(&self) -> f64 {
        1.0 / 3.0 - 1.0 / self.alpha
    }
}

fn get(v: Option<f64>, name: &'static str) -> Result<f64> {
    let x = v.ok_or(Error::MissingConstant(name))?;
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidArgument(format!("{name} must be finite and >= 0, got {x}")));
    }
    Ok(x)
}

fn positive(v: Option<f64>, name: &'static str) -> Result<f64> {
    let x = get(v, name)?;
    if x == 0.0 {
        return Err(Error::InvalidArgument(format!("{name} must be positive")));
    }
    Ok(x)
}

fn gap(v: Option<f64>, name: &'static str) -> Result<f64> {
    let x = get(v, name)?;
    if x == 0.0 {
        return Err(Error::DegenerateGap);
    }
    Ok(x)
}

/// Adversarial regret bounds.
pub fn bound_adversarial(kind: BoundKind, c: &BoundConstants) -> Result<f64> {
    if !kind.is_adversarial() {
        return Err(Error::InvalidArgument(format!("{kind} is not an adversarial bound")));
    }
    bound(kind, c)
}

/// I.i.d. pseudo-regret bounds.
pub fn bound_iid(kind: BoundKind, c: &BoundConstants) -> Result<f64> {
    if kind.is_adversarial() {
        return Err(Error::InvalidArgument(format!("{kind} is not an i.i.d. bound")));
    }
    bound(kind, c)
}

/// Evaluate any bound kind.
pub fn bound(kind: BoundKind, c: &BoundConstants) -> Result<f64> {
    let sqrt_2pi = (2.0 * PI).sqrt();
    let sqrt_pi_2 = (PI / 2.0).sqrt();
    Ok(match kind {
        BoundKind::Thm1 => {
            let (l, d, x) = (get(c.l, "L")?, get(c.d, "D")?, get(c.norm_x, "norm_X")?);
            let eta = positive(c.eta, "eta")?;
            let n = get(c.n, "N")?;
            l * d + (x * x / (2.0 * eta) + 2.0 * eta * l * l) * n.sqrt()
        }
        BoundKind::Thm1Tuned => 3.0 * get(c.l, "L")? * get(c.d, "D")? * get(c.n, "N")?.sqrt(),
        BoundKind::Worstcase2 => {
            3.0 * get(c.l_inf, "L_inf")? * get(c.d, "D")? * get(c.n, "N")?.sqrt() / positive(c.w, "W")?
        }
        BoundKind::HedgeLifted => {
            let v = get(c.v, "V")?;
            if v < 1.0 {
                return Err(Error::InvalidArgument("V must be at least 1".into()));
            }
            get(c.l_inf, "L_inf")? * (v.ln() * get(c.n, "N")?).sqrt()
        }
        BoundKind::Ball => {
            let (l, r) = (get(c.l, "L")?, get(c.r, "R")?);
            let a = positive(c.norm_a, "norm_a")?;
            let eta = positive(c.eta, "eta")?;
            2.0 * l
                + (1.0 / (2.0 * eta) + 2.0 * eta * l * l + sqrt_2pi * r)
                    * (1.0 + 2.0 / (eta * a) + 2.0 * 2f64.sqrt() * r / a)
                + 10.0 * r * r / a
        }
        BoundKind::BallTuned => {
            let (l, r) = (get(c.l, "L")?, get(c.r, "R")?);
            let a = positive(c.norm_a, "norm_a")?;
            let k = 4.0 * l + 2.0 * 2f64.sqrt() * r;
            (4.0 * l + sqrt_2pi * r) + (k * k + 10.0 * r * r) / a
        }
        BoundKind::PolytopeGeneral => {
            let (l, r, d) = (get(c.l, "L")?, get(c.r, "R")?, get(c.d, "D")?);
            let p = get(c.norm_p, "norm_P")?;
            let (dmin, dmax) = (gap(c.gap_min, "gap_min")?, gap(c.gap_max, "gap_max")?);
            let params = BoundParams::new(
                c.alpha.ok_or(Error::MissingConstant("alpha"))?,
                c.eta.ok_or(Error::MissingConstant("eta"))?,
            )?;
            let (alpha, eta, beta) = (params.alpha, params.eta, params.beta());
            let first = l * d
                + (p * p / (2.0 * eta) + 2.0 * eta * l * l + sqrt_pi_2 * r * d)
                    * (3.0 * alpha * d * d / (2.0 * eta * dmin) + eta * dmin / (alpha * d * d));
            let tail = if r == 0.0 {
                0.0
            } else {
                let z = alpha * beta * p / (eta * r);
                (4.0 * r * r * d * d / (beta * beta)) * (1.0 / dmax + 2.0 / dmin) * (-0.5 * z * z).exp()
            };
            first + tail
        }
        BoundKind::PolytopeTuned | BoundKind::PolytopeTunedRestated => {
            let (l, r, d) = (get(c.l, "L")?, get(c.r, "R")?, get(c.d, "D")?);
            let dmin = gap(c.gap_min, "gap_min")?;
            let trailing = if kind == BoundKind::PolytopeTuned { 11.0 / 20.0 } else { 1.0 / 3.0 };
            (2.0 * l * d + sqrt_pi_2 * r * d) * (30.0 * l * d / dmin + trailing) + 15.0 * r * r * d * d / dmin
        }
        BoundKind::IntrinsicTuned => {
            let (li, ri, d) = (get(c.l_inf, "L_inf")?, get(c.r_inf, "R_inf")?, get(c.d, "D")?);
            let w = positive(c.w, "W")?;
            let dmin = gap(c.gap_min, "gap_min")?;
            (2.0 * li * d / w + sqrt_pi_2 * ri * d / w) * (30.0 * li * d / (w * dmin) + 1.0 / 3.0)
                + 15.0 * ri * ri * d * d / (w * w * dmin)
        }
    })
}
