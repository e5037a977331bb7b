//! Strata of the variety of limit canonical systems: classification of a
//! weight vector `μ`, realizability of candidate data, enumeration, and the
//! convex cones of weights giving the same stratum.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::feasibility::{satisfies_all, solve, Constraint, Relation};
use crate::numdata::{associated_data, check_positive};
use crate::rational::{q, serde_q, Rational};
use crate::{CurveConfig, DeltaSet, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumData {
    pub alpha: Vec<i64>,
    #[serde(rename = "I")]
    pub i: DeltaSet,
    pub beta: Vec<i64>,
    #[serde(rename = "J")]
    pub j: DeltaSet,
    #[serde(with = "serde_q")]
    pub gamma: Rational,
    #[serde(with = "serde_q")]
    pub epsilon: Rational,
    /// Present only when `g_X·g_Y > 0`.
    pub alpha_tilde: Option<i64>,
    pub beta_tilde: Option<i64>,
    #[serde(with = "serde_q::vec")]
    pub rho: Vec<Rational>,
    #[serde(with = "serde_q::vec")]
    pub sigma: Vec<Rational>,
    #[serde(with = "serde_q::vec")]
    pub witness_mu: Vec<Rational>,
}

impl StratumData {
    pub fn alpha_sum(&self) -> i64 {
        self.alpha.iter().sum()
    }

    pub fn beta_sum(&self) -> i64 {
        self.beta.iter().sum()
    }
}

/// Equality of keys is equality of strata. `None` stands for the sentinel
/// used when `|α| = g_Y` (resp. `|β| = g_X`), where `I` (resp. `J`) does
/// not matter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StratumKey {
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    #[serde(rename = "I_eff")]
    pub i_eff: Option<DeltaSet>,
    #[serde(rename = "J_eff")]
    pub j_eff: Option<DeltaSet>,
}

impl StratumKey {
    pub fn from_parts(config: &CurveConfig, alpha: Vec<i64>, i: DeltaSet, beta: Vec<i64>, j: DeltaSet) -> Self {
        let a: i64 = alpha.iter().sum();
        let b: i64 = beta.iter().sum();
        StratumKey {
            i_eff: (a > config.g_y).then_some(i),
            j_eff: (b > config.g_x).then_some(j),
            alpha,
            beta,
        }
    }
}

pub fn key(config: &CurveConfig, s: &StratumData) -> StratumKey {
    StratumKey::from_parts(config, s.alpha.clone(), s.i, s.beta.clone(), s.j)
}

fn check_mu(config: &CurveConfig, mu: &[Rational]) -> Result<()> {
    if mu.len() != config.delta {
        return Err(Error::DimensionMismatch(format!(
            "μ has {} entries, δ = {}",
            mu.len(),
            config.delta
        )));
    }
    check_positive(mu)
}

pub fn stratum_of(config: &CurveConfig, mu: &[Rational]) -> Result<StratumData> {
    check_mu(config, mu)?;
    let dy = associated_data(mu, config.g_y)?;
    let dx = associated_data(mu, config.g_x)?;
    let sigma: Vec<Rational> = mu.iter().zip(&dx.rho).map(|(m, r)| m - r).collect();
    let (alpha_tilde, beta_tilde) = if config.g_x * config.g_y > 0 {
        let r = &dy.level / &dx.level;
        (r.numer().to_i64(), r.denom().to_i64())
    } else {
        (None, None)
    };
    Ok(StratumData {
        alpha: dy.alpha,
        i: dy.i,
        beta: dx.alpha,
        j: dx.i,
        gamma: dy.level,
        epsilon: dx.level,
        alpha_tilde,
        beta_tilde,
        rho: dy.rho,
        sigma,
        witness_mu: mu.to_vec(),
    })
}

pub fn key_of(config: &CurveConfig, mu: &[Rational]) -> Result<StratumKey> {
    Ok(key(config, &stratum_of(config, mu)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumDim {
    pub dim: i64,
    pub dim_x: i64,
    pub dim_y: i64,
}

pub fn stratum_dim(config: &CurveConfig, s: &StratumData) -> StratumDim {
    let big_a = s.alpha_sum() > config.g_y;
    let big_b = s.beta_sum() > config.g_x;
    let ni = s.i.len() as i64;
    let nj = s.j.len() as i64;
    let nu = s.i.union(s.j).len() as i64;
    let dim_x = if big_a { ni - 1 } else { 0 };
    let dim_y = if big_b { nj - 1 } else { 0 };
    let dim = match (big_a, big_b) {
        (false, false) => 0,
        (true, false) => ni - 1,
        (false, true) => nj - 1,
        (true, true) if s.i.inter(s.j).is_empty() => nu - 2,
        (true, true) => nu - 1,
    };
    StratumDim { dim, dim_x, dim_y }
}

fn unit(n: usize, p: usize, a: i64) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[p] = q(a);
    v
}

fn homogeneous(coeffs: Vec<Rational>, rel: Relation) -> Constraint {
    Constraint::new(coeffs, Rational::zero(), rel)
}

/// Weights with numerical data `(a, s)` for one side: a level `c` with
/// `μ_p a_p = c` on `s` and `μ_p a_p < c < μ_p (a_p + 1)` off `s`.
pub fn side_constraints(a: &[i64], s: DeltaSet) -> Vec<Constraint> {
    let n = a.len();
    let q0 = s.first().expect("nonempty");
    let level = |p: usize, shift: i64| unit(n, p, a[p] + shift);
    let mut out = Vec::new();
    for p in 0..n {
        if p == q0 {
            continue;
        }
        let c0 = level(q0, 0);
        if s.contains(p) {
            let v = level(p, 0).iter().zip(&c0).map(|(x, y)| x - y).collect();
            out.push(homogeneous(v, Relation::Eq));
        } else {
            let below = c0.iter().zip(level(p, 0)).map(|(x, y)| x - y).collect();
            let above = level(p, 1).iter().zip(&c0).map(|(x, y)| x - y).collect();
            out.push(homogeneous(below, Relation::Gt));
            out.push(homogeneous(above, Relation::Gt));
        }
    }
    out
}

/// Union over all `I` when `|a| = g`: `μ_p a_p < μ_q (a_q + 1)` for all `p ≠ q`.
pub fn collapsed_side_constraints(a: &[i64]) -> Vec<Constraint> {
    let n = a.len();
    let mut out = Vec::new();
    for p in 0..n {
        for r in 0..n {
            if p != r {
                let mut v = unit(n, r, a[r] + 1);
                v[p] -= q(a[p]);
                out.push(homogeneous(v, Relation::Gt));
            }
        }
    }
    out
}

fn positivity(n: usize) -> Vec<Constraint> {
    (0..n).map(|p| homogeneous(unit(n, p, 1), Relation::Gt)).collect()
}

fn pin(config: &CurveConfig) -> Constraint {
    Constraint::new(unit(config.delta, config.base_point(), 1), q(-1), Relation::Eq)
}

fn check_side(name: &str, g: i64, a: &[i64], s: DeltaSet, n: usize) -> Result<()> {
    let bad = |m: String| Err(Error::Malformed(format!("{name}: {m}")));
    if a.len() != n {
        return bad(format!("length {} ≠ δ = {n}", a.len()));
    }
    if s.is_empty() {
        return bad("empty node subset".into());
    }
    if !s.is_subset(DeltaSet::full(n)) {
        return bad("subset outside Δ".into());
    }
    if a.iter().any(|&x| x < 0 || x > g) {
        return bad(format!("entries must lie in [0, {g}]"));
    }
    let sum: i64 = a.iter().sum();
    if !(g <= sum && sum < g + s.len() as i64) {
        return bad(format!("need {g} ≤ |a| < {g} + |subset|"));
    }
    if g > 0 && s.iter().any(|p| a[p] == 0) {
        return bad("entries must be positive on the subset".into());
    }
    Ok(())
}

/// A weight vector realizing `(α, I, β, J)` exactly, pinned to 1 at the base
/// point, or `None` when the joint system is infeasible.
pub fn realizable(
    config: &CurveConfig,
    alpha: &[i64],
    i: DeltaSet,
    beta: &[i64],
    j: DeltaSet,
) -> Result<Option<Vec<Rational>>> {
    let n = config.delta;
    check_side("(α, I)", config.g_y, alpha, i, n)?;
    check_side("(β, J)", config.g_x, beta, j, n)?;
    let mut cs = side_constraints(alpha, i);
    cs.extend(side_constraints(beta, j));
    cs.extend(positivity(n));
    cs.push(pin(config));
    Ok(solve(n, &cs))
}

/// Linear description of the cone of weights in one stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionDescription {
    pub equalities: Vec<Constraint>,
    pub strict_inequalities: Vec<Constraint>,
    pub note: String,
}

impl RegionDescription {
    pub fn constraints(&self) -> Vec<Constraint> {
        self.equalities.iter().chain(&self.strict_inequalities).cloned().collect()
    }

    pub fn contains(&self, mu: &[Rational]) -> bool {
        satisfies_all(&self.constraints(), mu)
    }
}

pub fn region(config: &CurveConfig, s: &StratumData) -> RegionDescription {
    let n = config.delta;
    let mut cs = if s.alpha_sum() > config.g_y {
        side_constraints(&s.alpha, s.i)
    } else {
        collapsed_side_constraints(&s.alpha)
    };
    cs.extend(if s.beta_sum() > config.g_x {
        side_constraints(&s.beta, s.j)
    } else {
        collapsed_side_constraints(&s.beta)
    });
    cs.extend(positivity(n));
    let mut equalities = Vec::new();
    let mut strict = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for c in cs {
        if !seen.insert(c.clone()) {
            continue;
        }
        match c.rel {
            Relation::Eq => equalities.push(c),
            _ => strict.push(c),
        }
    }
    RegionDescription {
        equalities,
        strict_inequalities: strict,
        note: "homogeneous: closed under positive scaling of μ".into(),
    }
}

/// Per-side candidates `(a, s)` within the a priori bounds, each feasible on
/// its own.
fn side_candidates(g: i64, n: usize) -> Vec<(Vec<i64>, DeltaSet)> {
    let mut out = Vec::new();
    let full = DeltaSet::full(n);
    let mut a = vec![0i64; n];
    loop {
        let sum: i64 = a.iter().sum();
        if sum >= g && sum < g + n as i64 {
            for s in full.subsets() {
                if s.is_empty() || sum >= g + s.len() as i64 {
                    continue;
                }
                if g > 0 && s.iter().any(|p| a[p] == 0) {
                    continue;
                }
                let mut cs = side_constraints(&a, s);
                cs.extend(positivity(n));
                if solve(n, &cs).is_some() {
                    out.push((a.clone(), s));
                }
            }
        }
        // odometer over [0, g]^n
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            if a[k] < g {
                a[k] += 1;
                break;
            }
            a[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    /// Maximal number of joint candidates to examine.
    pub cap: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { cap: 2_000_000 }
    }
}

fn lex_cmp(a: &[Rational], b: &[Rational]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// One representative per stratum, sorted by key.
pub fn enumerate_strata(config: &CurveConfig, opts: EnumerateOptions) -> Result<Vec<StratumData>> {
    let n = config.delta;
    let xs = side_candidates(config.g_y, n);
    let ys = side_candidates(config.g_x, n);
    let needed = xs.len() * ys.len();
    if needed > opts.cap {
        return Err(Error::CapExceeded { needed, cap: opts.cap });
    }
    let pairs: Vec<(&(Vec<i64>, DeltaSet), &(Vec<i64>, DeltaSet))> =
        xs.iter().flat_map(|x| ys.iter().map(move |y| (x, y))).collect();
    let found: Vec<StratumData> = pairs
        .par_iter()
        .filter_map(|((a, i), (b, j))| {
            let w = realizable(config, a, *i, b, *j).expect("candidates are well formed")?;
            let s = stratum_of(config, &w).expect("witness is positive");
            debug_assert!(s.alpha == *a && s.i == *i && s.beta == *b && s.j == *j);
            Some(s)
        })
        .collect();
    let mut by_key: BTreeMap<StratumKey, StratumData> = BTreeMap::new();
    for s in found {
        let k = key(config, &s);
        match by_key.get(&k) {
            Some(old) if lex_cmp(&old.witness_mu, &s.witness_mu) != Ordering::Greater => {}
            _ => {
                by_key.insert(k, s);
            }
        }
    }
    Ok(by_key.into_values().collect())
}

/// `α̃, β̃` from `(α_p, β_p)` for a node in `I ∩ J`.
pub fn tilde_from_node(a: i64, b: i64) -> (i64, i64) {
    let g = a.gcd(&b);
    (a / g, b / g)
}

/// Chart coordinates `μ_p / μ_base` for `p ≠ base`.
pub fn chart(config: &CurveConfig, mu: &[Rational]) -> Vec<Rational> {
    let base = config.base_point();
    (0..config.delta).filter(|&p| p != base).map(|p| &mu[p] / &mu[base]).collect()
}

/// Whether `mu` lies in the closure (`≥` instead of `>`) of a region.
pub fn closure_contains(region: &RegionDescription, mu: &[Rational]) -> bool {
    region.equalities.iter().all(|c| c.holds(mu))
        && region.strict_inequalities.iter().all(|c| !c.value(mu).is_negative())
}

/// Rescales `mu` so the base coordinate is one.
pub fn normalize(config: &CurveConfig, mu: &[Rational]) -> Vec<Rational> {
    let b = mu[config.base_point()].clone();
    mu.iter().map(|m| m / &b).collect()
}
