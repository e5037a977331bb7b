//! Dual graph of the semistable model where each node `p` is replaced by a
//! chain of `μ_p − 1` rational curves, its intersection pairing, and the
//! twists of the dualizing sheaf with focus on `X` or on `Y`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::numdata::NumericalData;
use crate::rational::{to_i64, Rational};
use crate::strata::StratumData;
use crate::{CurveConfig, Error, Result};

/// `Z(p, j)` is the `j`-th curve of the chain at `p`, counted from `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Component {
    X,
    Z(usize, i64),
    Y,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::X => write!(f, "X"),
            Component::Y => write!(f, "Y"),
            Component::Z(p, j) => write!(f, "Z[{p},{j}]"),
        }
    }
}

/// A node `z_{p,j}` joining two components; `j` runs from 1 to `μ_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub p: usize,
    pub j: i64,
    pub ends: (Component, Component),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemistableModel {
    pub mu: Vec<i64>,
    pub components: Vec<Component>,
    pub nodes: Vec<Node>,
}

/// Chain component `Z_{p,j}` with the conventions `Z_{p,0} = X`, `Z_{p,μ_p} = Y`.
pub fn chain_component(mu: &[i64], p: usize, j: i64) -> Component {
    if j == 0 {
        Component::X
    } else if j == mu[p] {
        Component::Y
    } else {
        Component::Z(p, j)
    }
}

pub fn build_model(mu: &[i64]) -> Result<SemistableModel> {
    if mu.is_empty() {
        return Err(Error::EmptyDelta);
    }
    for (index, &m) in mu.iter().enumerate() {
        if m <= 0 {
            return Err(Error::NonPositive { index, value: m.to_string() });
        }
    }
    let mut components = vec![Component::X];
    let mut nodes = Vec::new();
    for (p, &m) in mu.iter().enumerate() {
        for j in 1..m {
            components.push(Component::Z(p, j));
        }
        for j in 1..=m {
            nodes.push(Node {
                p,
                j,
                ends: (chain_component(mu, p, j - 1), chain_component(mu, p, j)),
            });
        }
    }
    components.push(Component::Y);
    Ok(SemistableModel { mu: mu.to_vec(), components, nodes })
}

/// Integer weights from rational ones, if already integral.
pub fn integral_mu(mu: &[Rational]) -> Result<Vec<i64>> {
    mu.iter()
        .map(|m| to_i64(m).ok_or_else(|| Error::Malformed(format!("μ entry {m} is not an integer"))))
        .collect()
}

impl SemistableModel {
    pub fn has_component(&self, e: Component) -> bool {
        match e {
            Component::X | Component::Y => true,
            Component::Z(p, j) => p < self.mu.len() && 0 < j && j < self.mu[p],
        }
    }

    fn shared_nodes(&self, e: Component, f: Component) -> i64 {
        self.nodes
            .iter()
            .filter(|n| n.ends == (e, f) || n.ends == (f, e))
            .count() as i64
    }

    pub fn node_count(&self, e: Component) -> i64 {
        self.nodes.iter().filter(|n| n.ends.0 == e || n.ends.1 == e).count() as i64
    }

    /// Symmetric pairing; diagonal entries from the zero row sums of the fiber.
    pub fn intersection(&self, e: Component, f: Component) -> Result<i64> {
        for c in [e, f] {
            if !self.has_component(c) {
                return Err(Error::Malformed(format!("unknown component {c}")));
            }
        }
        if e != f {
            return Ok(self.shared_nodes(e, f));
        }
        Ok(-self
            .components
            .iter()
            .filter(|&&c| c != e)
            .map(|&c| self.shared_nodes(e, c))
            .sum::<i64>())
    }

    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        self.components
            .iter()
            .map(|&e| self.components.iter().map(|&f| self.intersection(e, f).unwrap()).collect())
            .collect()
    }

    /// The full fiber `X + Y + Σ Z_{p,j}`.
    pub fn total_fiber(&self) -> DivisorOnModel {
        DivisorOnModel { coefficients: self.components.iter().map(|&c| (c, 1)).collect() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorOnModel {
    pub coefficients: BTreeMap<Component, i64>,
}

impl DivisorOnModel {
    pub fn coeff(&self, c: Component) -> i64 {
        self.coefficients.get(&c).copied().unwrap_or(0)
    }

    pub fn dot(&self, model: &SemistableModel, e: Component) -> Result<i64> {
        let mut s = 0;
        for (&c, &k) in &self.coefficients {
            if k != 0 {
                s += k * model.intersection(c, e)?;
            }
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiDegree {
    pub degrees: BTreeMap<Component, i64>,
}

impl MultiDegree {
    pub fn total(&self) -> i64 {
        self.degrees.values().sum()
    }
}

fn integral(data: &NumericalData, mu: &[i64]) -> Result<(Vec<i64>, i64)> {
    if data.alpha.len() != mu.len() {
        return Err(Error::DimensionMismatch("data and model disagree on δ".into()));
    }
    let rho = integral_mu(&data.rho).map_err(|_| Error::Malformed("ρ is not integral".into()))?;
    let level = to_i64(&data.level).ok_or_else(|| Error::Malformed("level is not integral".into()))?;
    Ok((rho, level))
}

/// `Σ_p Z_p^{(α_p, ρ_p)} + γY`, with `data` computed from `(μ, g_Y)`.
pub fn twist_divisor_focus_x(model: &SemistableModel, data: &NumericalData) -> Result<DivisorOnModel> {
    let (rho, gamma) = integral(data, &model.mu)?;
    let mut d = DivisorOnModel::default();
    for (p, &m) in model.mu.iter().enumerate() {
        for i in 1..m {
            d.coefficients.insert(Component::Z(p, i), data.alpha[p] * i + (i - rho[p]).max(0));
        }
    }
    d.coefficients.insert(Component::X, 0);
    d.coefficients.insert(Component::Y, gamma);
    Ok(d)
}

/// `Σ_p Ẑ_p^{(β_p, σ_p)} + εX`, with `data_x = (β, σ′, J)` computed from
/// `(μ, g_X)` and `σ = μ − σ′`.
pub fn twist_divisor_focus_y(model: &SemistableModel, data_x: &NumericalData) -> Result<DivisorOnModel> {
    let (sigma_prime, eps) = integral(data_x, &model.mu)?;
    let mut d = DivisorOnModel::default();
    for (p, &m) in model.mu.iter().enumerate() {
        let sigma = m - sigma_prime[p];
        for i in 1..m {
            d.coefficients.insert(Component::Z(p, i), data_x.alpha[p] * (m - i) + (sigma - i).max(0));
        }
    }
    d.coefficients.insert(Component::X, eps);
    d.coefficients.insert(Component::Y, 0);
    Ok(d)
}

/// Degrees of `ω̃(D)` on every component: `2g_E − 2 + #nodes(E) + D·E`.
pub fn multidegree_of_twisted_dualizing(
    model: &SemistableModel,
    config: &CurveConfig,
    d: &DivisorOnModel,
) -> Result<MultiDegree> {
    let mut degrees = BTreeMap::new();
    for &e in &model.components {
        let genus = match e {
            Component::X => config.g_x,
            Component::Y => config.g_y,
            Component::Z(..) => 0,
        };
        degrees.insert(e, 2 * genus - 2 + model.node_count(e) + d.dot(model, e)?);
    }
    Ok(MultiDegree { degrees })
}

/// Correction numbers at the nodes: `α` for focus on `X`, `β` for focus on `Y`.
pub fn correction_numbers(s: &StratumData) -> (Vec<i64>, Vec<i64>) {
    (s.alpha.clone(), s.beta.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AspectDimensions {
    /// `h⁰` of the focus-`X` twist restricted to `X`.
    pub h0_x: i64,
    /// `h⁰` of the focus-`X` twist restricted to `Y`.
    pub h0_y: i64,
    pub codim_x: i64,
    /// Mirror values for the focus-`Y` twist.
    pub mirror_h0_y: i64,
    pub mirror_h0_x: i64,
    pub codim_y: i64,
}

pub fn aspect_dimensions(config: &CurveConfig, s: &StratumData) -> Result<AspectDimensions> {
    if !config.general_position {
        return Err(Error::GeneralPosition("dimension formulas need general position".into()));
    }
    let d = config.delta as i64;
    let a: i64 = s.alpha.iter().sum();
    let b: i64 = s.beta.iter().sum();
    let side = |g_here: i64, g_there: i64, sum: i64, card: i64| {
        let h0_here = g_here + sum + d - 1;
        let h0_there = if g_there > 0 { g_there + card - sum } else { d - 1 };
        (h0_here, h0_there, sum - g_there)
    };
    let (h0_x, h0_y, codim_x) = side(config.g_x, config.g_y, a, s.i.len() as i64);
    let (mirror_h0_y, mirror_h0_x, codim_y) = side(config.g_y, config.g_x, b, s.j.len() as i64);
    Ok(AspectDimensions { h0_x, h0_y, codim_x, mirror_h0_y, mirror_h0_x, codim_y })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numdata::associated_data;
    use crate::rational::qvec;
    use crate::strata::stratum_of;

    #[test]
    fn shapes() {
        let m = build_model(&[1, 1]).unwrap();
        assert_eq!(m.components.len(), 2);
        assert_eq!(m.intersection(Component::X, Component::Y).unwrap(), 2);
        assert_eq!(m.intersection(Component::X, Component::X).unwrap(), -2);

        let m = build_model(&[3]).unwrap();
        assert_eq!(
            m.components,
            vec![Component::X, Component::Z(0, 1), Component::Z(0, 2), Component::Y]
        );
        assert_eq!(m.intersection(Component::X, Component::Y).unwrap(), 0);
        assert_eq!(m.intersection(Component::Z(0, 1), Component::Z(0, 2)).unwrap(), 1);

        let m = build_model(&[1, 2, 4]).unwrap();
        assert_eq!(m.components.len(), 6);
        assert_eq!(m.intersection(Component::X, Component::Y).unwrap(), 1);
        assert_eq!(m.intersection(Component::Z(2, 2), Component::Z(2, 2)).unwrap(), -2);
        assert!(m.intersection(Component::Z(0, 1), Component::X).is_err());
        assert!(build_model(&[1, 0]).is_err());
    }

    #[test]
    fn fiber_is_numerically_trivial() {
        let m = build_model(&[1, 2, 4]).unwrap();
        let f = m.total_fiber();
        for &e in &m.components {
            assert_eq!(f.dot(&m, e).unwrap(), 0);
        }
    }

    #[test]
    fn zero_twist_has_zero_chain_degree() {
        let cfg = CurveConfig::new(2, 3, 3).unwrap();
        let m = build_model(&[2, 3, 1]).unwrap();
        let deg = multidegree_of_twisted_dualizing(&m, &cfg, &DivisorOnModel::default()).unwrap();
        for (c, d) in &deg.degrees {
            if let Component::Z(..) = c {
                assert_eq!(*d, 0);
            }
        }
        assert_eq!(deg.total(), 2 * cfg.genus() - 2);
    }

    #[test]
    fn unit_chains_twist_only_y() {
        let m = build_model(&[1, 1, 1]).unwrap();
        let data = associated_data(&qvec(&[1, 1, 1]), 4).unwrap();
        let d = twist_divisor_focus_x(&m, &data).unwrap();
        assert_eq!(d.coeff(Component::Y), 2);
        assert_eq!(d.coefficients.len(), 2);
    }

    #[test]
    fn twist_for_equal_weights_two() {
        // μ=(2,2), g_Y=1: level 2, α=(1,1), ρ=(2,2), I=Δ.
        let m = build_model(&[2, 2]).unwrap();
        let data = associated_data(&qvec(&[2, 2]), 1).unwrap();
        assert_eq!(data.alpha, vec![1, 1]);
        let d = twist_divisor_focus_x(&m, &data).unwrap();
        assert_eq!(d.coeff(Component::Z(0, 1)), 1);
        assert_eq!(d.coeff(Component::Z(1, 1)), 1);
        assert_eq!(d.coeff(Component::Y), 2);
        assert_eq!(d.coeff(Component::Y), crate::rational::to_i64(&data.level).unwrap());
    }

    #[test]
    fn twist_for_unequal_weights() {
        // μ=(1,2), g_Y=1: α=(1,0), ρ=(1,1), I={p1}, γ=1.
        let cfg = CurveConfig::new(1, 1, 2).unwrap();
        let m = build_model(&[1, 2]).unwrap();
        let data = associated_data(&qvec(&[1, 2]), 1).unwrap();
        let d = twist_divisor_focus_x(&m, &data).unwrap();
        assert_eq!(d.coeff(Component::Z(1, 1)), 0);
        assert_eq!(d.coeff(Component::Y), 1);
        let deg = multidegree_of_twisted_dualizing(&m, &cfg, &d).unwrap();
        assert_eq!(deg.degrees[&Component::Z(1, 1)], 1);
        assert_eq!(deg.degrees[&Component::X], 2 + 1);
        assert_eq!(deg.degrees[&Component::Y], 1 - 1);
    }

    #[test]
    fn focus_y_mirror() {
        // g_X=1, μ=(1,2): β data from υ=1 gives β=(1,0), σ′=(1,1), so σ=(0,1).
        let cfg = CurveConfig::new(1, 1, 2).unwrap();
        let m = build_model(&[1, 2]).unwrap();
        let dx = associated_data(&qvec(&[1, 2]), 1).unwrap();
        let d = twist_divisor_focus_y(&m, &dx).unwrap();
        assert_eq!(d.coeff(Component::X), 1);
        assert_eq!(d.coeff(Component::Z(1, 1)), 0);
        let deg = multidegree_of_twisted_dualizing(&m, &cfg, &d).unwrap();
        // J = {p1}; chain at p2 carries degree 1 at j = σ_2 = 1
        assert_eq!(deg.degrees[&Component::Z(1, 1)], 1);
        assert_eq!(deg.degrees[&Component::Y], 2 * 1 - 2 + 2 + 1);
        assert_eq!(deg.total(), 2 * cfg.genus() - 2);
    }

    #[test]
    fn correction_numbers_and_dimensions() {
        let cfg = CurveConfig::new(1, 1, 2).unwrap();
        let s = stratum_of(&cfg, &qvec(&[1, 2])).unwrap();
        let (a, b) = correction_numbers(&s);
        assert_eq!(a, vec![1, 0]);
        assert_eq!(b, vec![1, 0]);
        let dims = aspect_dimensions(&cfg, &s).unwrap();
        assert_eq!(dims.h0_x, 3);
        assert_eq!(dims.h0_x, cfg.genus());
        assert_eq!(dims.codim_x, 0);

        let s = stratum_of(&cfg, &qvec(&[1, 1])).unwrap();
        assert_eq!(correction_numbers(&s), (vec![1, 1], vec![1, 1]));

        let cfg0 = CurveConfig::new(2, 0, 3).unwrap();
        let s = stratum_of(&cfg0, &qvec(&[1, 2, 3])).unwrap();
        assert_eq!(correction_numbers(&s).0, vec![0, 0, 0]);
        let dims = aspect_dimensions(&cfg0, &s).unwrap();
        assert_eq!(dims.codim_x, 0);
        assert_eq!(dims.h0_y, 2);

        let mut cfg_np = cfg.clone();
        cfg_np.general_position = false;
        assert!(aspect_dimensions(&cfg_np, &s).is_err());
    }
}
