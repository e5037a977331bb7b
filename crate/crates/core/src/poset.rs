//! Closures of strata via ordered tripartitions, the containment poset,
//! irreducible components and the closed-form counts.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rational::{q, Rational};
use crate::strata::{enumerate_strata, key, stratum_dim, stratum_of, EnumerateOptions, StratumData, StratumKey};
use crate::{CurveConfig, DeltaSet, Error, Result};

/// Ordered tripartition `(first, middle, last)` of an ambient set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tripartition {
    pub first: DeltaSet,
    pub middle: DeltaSet,
    pub last: DeltaSet,
}

impl Tripartition {
    pub fn trivial(s: DeltaSet) -> Self {
        Tripartition { first: DeltaSet::EMPTY, middle: s, last: DeltaSet::EMPTY }
    }

    pub fn ambient(&self) -> DeltaSet {
        self.first.union(self.middle).union(self.last)
    }
}

/// All `3^|s|` ordered tripartitions of `s`.
pub fn tripartitions(s: DeltaSet) -> Vec<Tripartition> {
    let mut out = Vec::new();
    for first in s.subsets() {
        for middle in s.minus(first).subsets() {
            out.push(Tripartition { first, middle, last: s.minus(first).minus(middle) });
        }
    }
    out
}

/// `g + |last| ≤ sum < g + |s − first|`.
pub fn side_condition(g: i64, sum: i64, t: &Tripartition, s: DeltaSet) -> bool {
    g + t.last.len() as i64 <= sum && sum < g + s.minus(t.first).len() as i64
}

/// The two implications tying a tripartition of `i` to one of `j`.
pub fn compatible(ti: &Tripartition, i: DeltaSet, tj: &Tripartition, j: DeltaSet) -> bool {
    let g_premise = !ti.first.inter(j).is_subset(tj.first.inter(i))
        || !tj.last.inter(i).is_subset(ti.last.inter(j));
    let g_ok = !g_premise || j.inter(i.minus(ti.first)).is_subset(tj.last.inter(i));
    let h_premise = !tj.first.inter(i).is_subset(ti.first.inter(j))
        || !ti.last.inter(j).is_subset(tj.last.inter(i));
    let h_ok = !h_premise || i.inter(j.minus(tj.first)).is_subset(ti.last.inter(j));
    g_ok && h_ok
}

fn minus_indicator(a: &[i64], s: DeltaSet) -> Vec<i64> {
    a.iter().enumerate().map(|(p, &x)| if s.contains(p) { x - 1 } else { x }).collect()
}

/// Qualifying tripartition pairs of `(I, J)` for the closure of `s`.
pub fn closure_tripartitions(config: &CurveConfig, s: &StratumData) -> Vec<(Tripartition, Tripartition)> {
    let a = s.alpha_sum();
    let b = s.beta_sum();
    let coupled = config.g_x * config.g_y > 0;
    let tis: Vec<_> = tripartitions(s.i)
        .into_iter()
        .filter(|t| !t.middle.is_empty() && side_condition(config.g_y, a, t, s.i))
        .collect();
    let tjs: Vec<_> = tripartitions(s.j)
        .into_iter()
        .filter(|t| !t.middle.is_empty() && side_condition(config.g_x, b, t, s.j))
        .collect();
    let mut out = Vec::new();
    for ti in &tis {
        for tj in &tjs {
            if !coupled || compatible(ti, s.i, tj, s.j) {
                out.push((*ti, *tj));
            }
        }
    }
    out
}

pub fn target_key(config: &CurveConfig, s: &StratumData, ti: &Tripartition, tj: &Tripartition) -> StratumKey {
    StratumKey::from_parts(
        config,
        minus_indicator(&s.alpha, ti.last),
        ti.middle,
        minus_indicator(&s.beta, tj.last),
        tj.middle,
    )
}

/// Keys of all strata in the closure of `s`, including its own.
pub fn closure_of(config: &CurveConfig, s: &StratumData) -> BTreeSet<StratumKey> {
    closure_tripartitions(config, s)
        .iter()
        .map(|(ti, tj)| target_key(config, s, ti, tj))
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosurePoset {
    /// Representatives sorted by key.
    pub nodes: Vec<StratumData>,
    pub keys: Vec<StratumKey>,
    pub dims: Vec<i64>,
    /// `(a, b)`: stratum `b` lies in the closure of stratum `a`, `a ≠ b`.
    pub edges: Vec<(usize, usize)>,
    /// Covering pairs of the containment order.
    pub covers: Vec<(usize, usize)>,
}

impl ClosurePoset {
    pub fn index_of(&self, k: &StratumKey) -> Option<usize> {
        self.keys.binary_search(k).ok()
    }

    pub fn below(&self, a: usize) -> BTreeSet<usize> {
        self.edges.iter().filter(|e| e.0 == a).map(|e| e.1).collect()
    }

    /// Nodes not contained in the closure of another node.
    pub fn maximal(&self) -> Vec<usize> {
        let covered: BTreeSet<usize> = self.edges.iter().map(|e| e.1).collect();
        (0..self.nodes.len()).filter(|i| !covered.contains(i)).collect()
    }

    pub fn to_dot(&self, config: &CurveConfig) -> String {
        let mut s = String::from("digraph strata {\n  rankdir=TB;\n");
        for (i, k) in self.keys.iter().enumerate() {
            s.push_str(&format!(
                "  n{i} [label=\"{}\\ndim {}\"];\n",
                key_label(config, k),
                self.dims[i]
            ));
        }
        for (a, b) in &self.covers {
            s.push_str(&format!("  n{a} -> n{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

fn set_label(config: &CurveConfig, s: Option<DeltaSet>) -> String {
    match s {
        None => "*".into(),
        Some(s) => format!(
            "{{{}}}",
            s.iter().map(|p| config.labels[p].as_str()).collect::<Vec<_>>().join(",")
        ),
    }
}

pub fn key_label(config: &CurveConfig, k: &StratumKey) -> String {
    let v = |a: &[i64]| a.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    format!(
        "α=({}) I={} β=({}) J={}",
        v(&k.alpha),
        set_label(config, k.i_eff),
        v(&k.beta),
        set_label(config, k.j_eff)
    )
}

pub fn build_poset(config: &CurveConfig, opts: EnumerateOptions) -> Result<ClosurePoset> {
    let nodes = enumerate_strata(config, opts)?;
    let keys: Vec<StratumKey> = nodes.iter().map(|s| key(config, s)).collect();
    let dims = nodes.iter().map(|s| stratum_dim(config, s).dim).collect();
    let closures: Vec<BTreeSet<StratumKey>> = nodes.par_iter().map(|s| closure_of(config, s)).collect();
    let mut below: Vec<BTreeSet<usize>> = Vec::with_capacity(nodes.len());
    for (a, cl) in closures.iter().enumerate() {
        let mut set = BTreeSet::new();
        for k in cl {
            let b = keys.binary_search(k).map_err(|_| {
                Error::Infeasible(format!("closure target {k:?} is not an enumerated stratum"))
            })?;
            if b != a {
                set.insert(b);
            }
        }
        below.push(set);
    }
    let mut edges = Vec::new();
    let mut covers = Vec::new();
    for (a, set) in below.iter().enumerate() {
        for &b in set {
            edges.push((a, b));
            let via = set.iter().any(|&c| c != b && below[c].contains(&b));
            if !via {
                covers.push((a, b));
            }
        }
    }
    Ok(ClosurePoset { nodes, keys, dims, edges, covers })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Components {
    pub count: usize,
    pub maximal: Vec<StratumKey>,
}

pub fn components_of(poset: &ClosurePoset) -> Components {
    let maximal: Vec<StratumKey> = poset.maximal().into_iter().map(|i| poset.keys[i].clone()).collect();
    Components { count: maximal.len(), maximal }
}

pub fn components(config: &CurveConfig, opts: EnumerateOptions) -> Result<Components> {
    Ok(components_of(&build_poset(config, opts)?))
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::from(1);
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// `C(h+δ−1, δ) − C(h, δ)`.
pub fn n_delta(delta: i64, h: i64) -> BigInt {
    binomial(h + delta - 1, delta) - binomial(h, delta)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountFormulas {
    pub n_delta_gx: String,
    pub n_delta_gy: String,
    /// `gcd(g_X + i, g_Y + j)` for `1 ≤ i, j ≤ δ−1`.
    pub gcd_table: Vec<Vec<i64>>,
    pub lower_bound: Option<String>,
    pub closed_form_delta2: Option<String>,
    pub statement1_value: Option<String>,
    pub irreducible_predicted: bool,
}

pub fn count_formulas(config: &CurveConfig) -> Result<CountFormulas> {
    let d = config.delta as i64;
    if d < 2 {
        return Err(Error::Unsupported("count formulas need δ > 1".into()));
    }
    let (gx, gy) = (config.g_x, config.g_y);
    let gcd_table: Vec<Vec<i64>> =
        (1..d).map(|i| (1..d).map(|j| (gx + i).gcd(&(gy + j))).collect()).collect();
    let lower_bound = (gx * gy > 0).then(|| {
        let corr: BigInt = gcd_table.iter().flatten().map(|&g| binomial(g - 1, d - 1)).sum();
        (n_delta(d, gx) + n_delta(d, gy) - corr).to_string()
    });
    let statement1_value = (gx * gy == 0 || gx == gy).then(|| {
        if gx == 0 && gy == 0 {
            "1".to_string()
        } else {
            n_delta(d, gx.max(gy)).to_string()
        }
    });
    // The closed form for δ = 2 degenerates at g_X = g_Y = 0, where the
    // variety is a point.
    let closed_form_delta2 =
        (d == 2 && (gx, gy) != (0, 0)).then(|| (gx + gy - (gx + 1).gcd(&(gy + 1)) + 1).to_string());
    Ok(CountFormulas {
        n_delta_gx: n_delta(d, gx).to_string(),
        n_delta_gy: n_delta(d, gy).to_string(),
        gcd_table,
        lower_bound,
        closed_form_delta2,
        statement1_value,
        irreducible_predicted: gx <= 1 && gy <= 1,
    })
}

/// Radius of the box around the witness inside which every weight lands in
/// the closure of `s`.
pub fn neighborhood_radius(s: &StratumData) -> Rational {
    let mu = &s.witness_mu;
    let mut num: Option<Rational> = None;
    for p in 0..mu.len() {
        let four = [
            s.rho[p].clone(),
            &mu[p] - &s.rho[p],
            s.sigma[p].clone(),
            &mu[p] - &s.sigma[p],
        ];
        let m = four.into_iter().filter(|x| x.is_positive()).min().expect("ρ_p > 0");
        num = Some(match num {
            None => m,
            Some(n) => n.min(m),
        });
    }
    let top = s.alpha.iter().chain(&s.beta).copied().max().unwrap_or(0);
    num.unwrap() / q(3 * (1 + top))
}

/// Direction `υ` of the constructive approach to the stratum given by a
/// qualifying tripartition pair, in units of `μ`.
pub fn approach_direction(
    config: &CurveConfig,
    s: &StratumData,
    ti: &Tripartition,
    tj: &Tripartition,
) -> Option<Vec<i64>> {
    let n = config.delta;
    let (i, j) = (s.i, s.j);
    let x_side = |p: usize| -> i64 {
        if ti.middle.contains(p) {
            1
        } else if ti.last.contains(p) {
            2
        } else {
            0
        }
    };
    let y_side = |p: usize| -> i64 {
        if tj.middle.contains(p) {
            1
        } else if tj.last.contains(p) {
            2
        } else {
            0
        }
    };
    match (config.g_y > 0, config.g_x > 0) {
        (false, false) => return Some(vec![0; n]),
        (true, false) => return Some((0..n).map(x_side).collect()),
        (false, true) => return Some((0..n).map(y_side).collect()),
        (true, true) => {}
    }
    let ij = i.inter(j);
    let parts = |a: DeltaSet, b: DeltaSet| a.inter(b);
    let case1 = parts(ti.first, tj.first)
        .union(parts(ti.middle, tj.middle))
        .union(parts(ti.last, tj.last));
    if ij == case1 {
        return Some(
            (0..n)
                .map(|p| if i.contains(p) { x_side(p) } else if j.contains(p) { y_side(p) } else { 0 })
                .collect(),
        );
    }
    let case2 = parts(ti.first, tj.first)
        .union(parts(ti.middle, tj.first))
        .union(parts(ti.last, tj.first))
        .union(parts(ti.last, tj.middle))
        .union(parts(ti.last, tj.last));
    let staggered = |p: usize, lo: &Tripartition, lo_set: DeltaSet, hi: &Tripartition, hi_set: DeltaSet| -> i64 {
        if lo_set.contains(p) {
            if lo.first.contains(p) {
                0
            } else if lo.middle.contains(p) {
                1
            } else if !hi_set.contains(p) || hi.last.contains(p) {
                4
            } else if hi.first.contains(p) {
                2
            } else {
                3
            }
        } else if hi_set.contains(p) {
            if hi.first.contains(p) {
                0
            } else if hi.middle.contains(p) {
                3
            } else {
                4
            }
        } else {
            0
        }
    };
    if ij == case2 {
        return Some((0..n).map(|p| staggered(p, ti, i, tj, j)).collect());
    }
    let case3 = parts(tj.first, ti.first)
        .union(parts(tj.middle, ti.first))
        .union(parts(tj.last, ti.first))
        .union(parts(tj.last, ti.middle))
        .union(parts(tj.last, ti.last));
    if ij == case3 {
        return Some((0..n).map(|p| staggered(p, tj, j, ti, i)).collect());
    }
    None
}

/// `μ + tυ` with `t` chosen so the step stays within half the radius.
pub fn approach_point(s: &StratumData, upsilon: &[i64]) -> Vec<Rational> {
    let top = upsilon.iter().copied().max().unwrap_or(0);
    let mu = &s.witness_mu;
    if top == 0 {
        return mu.clone();
    }
    let max_mu = mu.iter().max().unwrap().clone();
    let t = neighborhood_radius(s) / (q(2 * top) * max_mu);
    mu.iter().zip(upsilon).map(|(m, &u)| m + &t * q(u) * m).collect()
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct NeighborhoodReport {
    pub samples: usize,
    pub predicted: BTreeSet<StratumKey>,
    pub reached: BTreeSet<StratumKey>,
    /// Sampled weights (as strings) whose stratum is outside the prediction.
    pub violations: Vec<(Vec<String>, StratumKey)>,
    /// Tripartition pairs whose constructive direction missed its target.
    pub constructive_misses: Vec<(Tripartition, Tripartition, Option<StratumKey>)>,
}

/// Random weights in the box of [`neighborhood_radius`] around the witness,
/// plus the constructive direction for every qualifying tripartition pair.
pub fn neighborhood_sample_check<R: Rng>(
    config: &CurveConfig,
    s: &StratumData,
    samples: usize,
    rng: &mut R,
) -> Result<NeighborhoodReport> {
    let predicted = closure_of(config, s);
    let r = neighborhood_radius(s);
    let mut report = NeighborhoodReport { samples, predicted, ..Default::default() };
    let grid = 997i64;
    for k in 0..samples {
        let mu_bar: Vec<Rational> = if k == 0 {
            s.witness_mu.clone()
        } else {
            s.witness_mu
                .iter()
                .map(|m| m + &r * Rational::new(rng.gen_range(1 - grid..grid).into(), grid.into()))
                .collect()
        };
        let kk = key(config, &stratum_of(config, &mu_bar)?);
        if !report.predicted.contains(&kk) {
            report.violations.push((mu_bar.iter().map(|x| x.to_string()).collect(), kk.clone()));
        }
        report.reached.insert(kk);
    }
    for (ti, tj) in closure_tripartitions(config, s) {
        let target = target_key(config, s, &ti, &tj);
        let got = approach_direction(config, s, &ti, &tj)
            .map(|u| approach_point(s, &u))
            .map(|m| stratum_of(config, &m).map(|d| key(config, &d)))
            .transpose()?;
        if got.as_ref() != Some(&target) {
            report.constructive_misses.push((ti, tj, got));
        }
    }
    Ok(report)
}

/// Maps each key to its dimension, for convenience in reports.
pub fn dims_by_key(config: &CurveConfig, strata: &[StratumData]) -> BTreeMap<StratumKey, i64> {
    strata.iter().map(|s| (key(config, s), stratum_dim(config, s).dim)).collect()
}
