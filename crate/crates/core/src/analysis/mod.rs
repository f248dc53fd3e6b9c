//! Geometric constants, closed-form regret bounds and the curvature integral.

mod bounds;
mod curvature;
mod geometry;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use bounds::{bound, bound_adversarial, bound_iid, BoundConstants, BoundKind, BoundParams};
pub use curvature::{curvature_integral, curvature_integral_power, curvature_integral_with, CurvatureIntegral};
pub use geometry::{
    diameter, diameter_exhaustive, norm_from, suboptimality_gaps, suboptimality_gaps_capped, theta_lower_bound,
    width, width_along, width_lower_bound_variance, width_lower_bound_variance_printed, width_numeric, GapReport,
    WIDTH_RESTARTS,
};

use crate::domains::{affine_decomposition, project, AffineHull, Domain};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub domain: String,
    pub dim: usize,
    pub diameter: f64,
    pub base_point: Vec<f64>,
    /// Largest distance from the base point.
    pub norm_p: f64,
    pub width: Option<f64>,
    pub width_direction: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width_lower_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width_lower_bound_printed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gaps: Option<GapReport>,
    pub hull: Option<AffineHull>,
}

/// Collect diameter, `|P|`, width, hull and (when `a` is given) gaps.
/// The base point defaults to the projection of the origin.
pub fn geometry_report(
    domain: &Domain,
    a: Option<&[f64]>,
    base_point: Option<&[f64]>,
    restarts: usize,
    seed: u64,
) -> Result<GeometryReport> {
    domain.validate()?;
    let y1 = match base_point {
        Some(y) => y.to_vec(),
        None => project(domain, &vec![0.0; domain.dim()])?.point,
    };
    let (width, width_direction) = match geometry::width(domain, restarts, seed) {
        Ok((w, ell)) => (Some(w), Some(ell)),
        Err(_) => (None, None),
    };
    let gaps = match a {
        Some(a) if domain.is_polytope() => Some(suboptimality_gaps(domain, a)?),
        _ => None,
    };
    Ok(GeometryReport {
        domain: domain.name(),
        dim: domain.dim(),
        diameter: diameter(domain)?,
        norm_p: norm_from(domain, &y1)?,
        base_point: y1,
        width,
        width_direction,
        width_lower_bound: width_lower_bound_variance(domain).ok(),
        width_lower_bound_printed: width_lower_bound_variance_printed(domain),
        gaps,
        hull: if domain.is_polytope() {
            Some(affine_decomposition(domain)?)
        } else {
            None
        },
    })
}

impl GeometryReport {
    /// Two aligned columns, one scalar per line.
    pub fn to_text(&self) -> String {
        let mut rows: Vec<(&str, String)> = vec![
            ("domain", self.domain.clone()),
            ("dim", self.dim.to_string()),
            ("diameter", fmt(self.diameter)),
            ("norm_P", fmt(self.norm_p)),
        ];
        if let Some(w) = self.width {
            rows.push(("width", fmt(w)));
        }
        if let Some(w) = self.width_lower_bound {
            rows.push(("width_lower_bound", fmt(w)));
        }
        if let Some(w) = self.width_lower_bound_printed {
            rows.push(("width_lower_bound_printed", fmt(w)));
        }
        if let Some(h) = &self.hull {
            rows.push(("hull_dim", h.dim().to_string()));
        }
        if let Some(g) = &self.gaps {
            rows.push(("gap_min", fmt(g.gap_min)));
            rows.push(("gap_max", fmt(g.gap_max)));
            rows.push(("optimal_vertices", format!("{:?}", g.optimal_vertices)));
        }
        let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.12}")
}
