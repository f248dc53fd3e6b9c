use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of decade cutoffs `eps 10^-k` examined.
const DECADES: usize = 14;
const RATIO_TOL: f64 = 1e-6;
const BLOWUP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CurvatureIntegral {
    Finite {
        value: f64,
        /// Ratio of successive per-decade contributions (below 1).
        decay_ratio: f64,
    },
    /// Contributions grow geometrically as the cutoff shrinks.
    Divergent { growth_ratio: f64 },
    /// Contributions per decade level off: logarithmic divergence.
    DivergentLogarithmic { per_decade: f64 },
}

impl CurvatureIntegral {
    pub fn is_finite(&self) -> bool {
        matches!(self, CurvatureIntegral::Finite { .. })
    }
}

/// `int_0^eps F F'' / F'^3 dx` for `F(x) = |x|^alpha`, whose integrand is
/// `((alpha - 1)/alpha^2) x^(1 - alpha)`. Finite iff `alpha < 2`.
pub fn curvature_integral_power(alpha: f64, epsilon: f64) -> Result<CurvatureIntegral> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("alpha must exceed 1, got {alpha}")));
    }
    let c = (alpha - 1.0) / (alpha * alpha);
    curvature_integral_with(move |x| c * x.powf(1.0 - alpha), epsilon)
}

/// Same integral for a general convex `F` with `F(0) = 0`, given `F`, `F'`, `F''`.
pub fn curvature_integral(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    d2f: impl Fn(f64) -> f64,
    epsilon: f64,
) -> Result<CurvatureIntegral> {
    curvature_integral_with(
        |x| {
            let g = df(x);
            f(x) * d2f(x) / (g * g * g)
        },
        epsilon,
    )
}

/// Integrate over `(0, eps]` as a sum of decades `[eps 10^-k, eps 10^-(k-1)]`,
/// each by adaptive Simpson, then classify the tail from the ratio of
/// successive decade contributions: geometric decay is summed in closed form
/// (Aitken), a ratio of 1 is logarithmic divergence, above 1 power divergence.
pub fn curvature_integral_with(g: impl Fn(f64) -> f64, epsilon: f64) -> Result<CurvatureIntegral> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    let mut pieces = Vec::with_capacity(DECADES);
    let mut total = 0.0f64;
    for k in 1..=DECADES {
        let hi = epsilon * 10f64.powi(1 - k as i32);
        let lo = epsilon * 10f64.powi(-(k as i32));
        let piece = adaptive_simpson(&g, lo, hi, 1e-13 * (1.0 + total.abs()));
        if !piece.is_finite() {
            return Err(Error::NonFinite("curvature integrand"));
        }
        total += piece;
        pieces.push(piece);
        if total.abs() > BLOWUP {
            let n = pieces.len();
            let ratio = if n >= 2 { pieces[n - 1] / pieces[n - 2] } else { f64::INFINITY };
            return Ok(CurvatureIntegral::Divergent { growth_ratio: ratio });
        }
    }
    let n = pieces.len();
    let (last, prev) = (pieces[n - 1], pieces[n - 2]);
    if last == 0.0 {
        return Ok(CurvatureIntegral::Finite {
            value: total,
            decay_ratio: 0.0,
        });
    }
    let ratio = last / prev;
    if (ratio - 1.0).abs() <= RATIO_TOL {
        Ok(CurvatureIntegral::DivergentLogarithmic { per_decade: last })
    } else if ratio > 1.0 {
        Ok(CurvatureIntegral::Divergent { growth_ratio: ratio })
    } else {
        Ok(CurvatureIntegral::Finite {
            value: total + last * ratio / (1.0 - ratio),
            decay_ratio: ratio,
        })
    }
}

fn adaptive_simpson(g: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (g(a), g(m), g(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(g, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(g: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (g(lm), g(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}
