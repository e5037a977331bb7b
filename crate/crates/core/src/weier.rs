//! Degrees of the limit Weierstrass divisor: ramification of the two limit
//! aspects plus multiples of the nodes.

use serde::{Deserialize, Serialize};

use crate::strata::StratumData;
use crate::CurveConfig;

pub const NOTE: &str = "degree data only; divisor supports need a concrete curve";

/// Plücker formula for a system of rank `g` and degree `d` on a curve of
/// genus `genus`.
pub fn pluecker_ramification_degree(g: i64, d: i64, genus: i64) -> i64 {
    g * (d + (g - 1) * (genus - 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeierstrassForm {
    pub deg_r_x: i64,
    pub deg_r_y: i64,
    pub node_coeffs: Vec<i64>,
    pub total: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeierstrassDegrees {
    pub deg_r_x: i64,
    pub deg_r_y: i64,
    pub node_coeffs: Vec<i64>,
    pub total: i64,
    /// Aspects viewed inside `ω_X((1+g_Y)Σx_p)` and `ω_Y((1+g_X)Σy_p)`.
    pub normalized: WeierstrassForm,
    pub warnings: Vec<String>,
    pub note: String,
}

fn form(deg_r_x: i64, deg_r_y: i64, node_coeffs: Vec<i64>) -> WeierstrassForm {
    let total = deg_r_x + deg_r_y + node_coeffs.iter().sum::<i64>();
    WeierstrassForm { deg_r_x, deg_r_y, node_coeffs, total }
}

pub fn weierstrass_degrees(config: &CurveConfig, s: &StratumData) -> WeierstrassDegrees {
    let g = config.genus();
    let d = config.delta as i64;
    let (gx, gy) = (config.g_x, config.g_y);
    let a = s.alpha_sum();
    let b = s.beta_sum();

    let deg_r_x = pluecker_ramification_degree(g, 2 * gx - 2 + d + a, gx);
    let deg_r_y = pluecker_ramification_degree(g, 2 * gy - 2 + d + b, gy);
    let node_coeffs: Vec<i64> =
        s.alpha.iter().zip(&s.beta).map(|(ap, bp)| g * (g - 1 - ap - bp)).collect();

    let nx = pluecker_ramification_degree(g, 2 * gx - 2 + d * (1 + gy), gx);
    let ny = pluecker_ramification_degree(g, 2 * gy - 2 + d * (1 + gx), gy);
    let normalized = form(nx, ny, vec![g * (d - 2); config.delta]);

    let warnings = node_coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c < 0)
        .map(|(p, c)| format!("negative coefficient {c} at node {}", config.labels[p]))
        .collect();
    let f = form(deg_r_x, deg_r_y, node_coeffs);
    WeierstrassDegrees {
        deg_r_x: f.deg_r_x,
        deg_r_y: f.deg_r_y,
        node_coeffs: f.node_coeffs,
        total: f.total,
        normalized,
        warnings,
        note: NOTE.into(),
    }
}

/// Per-node change of base: `g(g_Y − α_p) + g(g_X − β_p)`.
pub fn base_change_terms(config: &CurveConfig, s: &StratumData) -> Vec<i64> {
    let g = config.genus();
    s.alpha
        .iter()
        .zip(&s.beta)
        .map(|(ap, bp)| g * (config.g_y - ap) + g * (config.g_x - bp))
        .collect()
}
