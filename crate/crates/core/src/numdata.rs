//! The numerical data `(α, ρ, I)` attached to a weight vector `μ` and an
//! integer `υ`.
//!
//! Everything is governed by one rational level `c`:
//! `α_p = ⌊c/μ_p⌋`, `ρ_p = μ_p(α_p+1) − c`, `I = {p : c ∈ μ_p·Z}`.
//! With `F(c) = Σ_p ⌊c/μ_p⌋`, the level is the least `c` with `F(c) ≥ υ`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{denominator_lcm, serde_q, Rational};
use crate::{DeltaSet, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericalData {
    pub alpha: Vec<i64>,
    #[serde(with = "serde_q::vec")]
    pub rho: Vec<Rational>,
    #[serde(rename = "I")]
    pub i: DeltaSet,
    #[serde(with = "serde_q")]
    pub level: Rational,
}

impl NumericalData {
    pub fn alpha_sum(&self) -> i64 {
        self.alpha.iter().sum()
    }
}

pub(crate) fn check_positive(mu: &[Rational]) -> Result<()> {
    if mu.is_empty() {
        return Err(Error::EmptyDelta);
    }
    if mu.len() > 64 {
        return Err(Error::InvalidConfig("more than 64 nodes".into()));
    }
    for (index, m) in mu.iter().enumerate() {
        if !m.is_positive() {
            return Err(Error::NonPositive { index, value: m.to_string() });
        }
    }
    Ok(())
}

/// Clears denominators: returns the integer vector `L·μ` and `L`.
pub fn integer_scaling(mu: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = denominator_lcm(mu);
    let m = mu
        .iter()
        .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
        .collect();
    (m, l)
}

fn step_count(m: &[BigInt], c: &BigInt) -> BigInt {
    m.iter().map(|mp| c.div_floor(mp)).sum()
}

fn data_at_level(m: &[BigInt], l: &BigInt, c: &BigInt) -> Result<NumericalData> {
    let mut alpha = Vec::with_capacity(m.len());
    let mut rho = Vec::with_capacity(m.len());
    let mut i = DeltaSet::EMPTY;
    for (p, mp) in m.iter().enumerate() {
        let (a, r) = c.div_mod_floor(mp);
        let a64 = a
            .to_i64()
            .ok_or_else(|| Error::InvalidConfig("correction number overflows i64".into()))?;
        if r.is_zero() {
            i.insert(p);
        }
        alpha.push(a64);
        let rp = mp * (a + BigInt::one()) - c;
        rho.push(Rational::new(rp, l.clone()));
    }
    Ok(NumericalData { alpha, rho, i, level: Rational::new(c.clone(), l.clone()) })
}

/// The unique numerical data for `(μ, υ)`.
pub fn associated_data(mu: &[Rational], upsilon: i64) -> Result<NumericalData> {
    check_positive(mu)?;
    let (m, l) = integer_scaling(mu);
    let target = BigInt::from(upsilon);
    let f = |c: &BigInt| step_count(&m, c);

    // Bracket lo < hi with F(lo) < υ ≤ F(hi) by galloping from 0.
    let (mut lo, mut hi) = if target.is_positive() {
        let mut step = BigInt::one();
        while f(&step) < target {
            step *= 2;
        }
        (BigInt::zero(), step)
    } else {
        let mut step = BigInt::one();
        while f(&-step.clone()) >= target {
            step *= 2;
        }
        (-step, BigInt::zero())
    };
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        if f(&mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Breakpoints of F are integers, so the least integer hi is a breakpoint.
    data_at_level(&m, &l, &hi)
}

/// Checks the four defining conditions exactly.
pub fn verify_conditions(mu: &[Rational], upsilon: i64, cand: &NumericalData) -> bool {
    let n = mu.len();
    if n == 0 || cand.alpha.len() != n || cand.rho.len() != n {
        return false;
    }
    if cand.i.0 >> n != 0 {
        return false;
    }
    let mut expected_i = DeltaSet::EMPTY;
    for p in 0..n {
        if !cand.rho[p].is_positive() || cand.rho[p] > mu[p] {
            return false;
        }
        if cand.rho[p] == mu[p] {
            expected_i.insert(p);
        }
    }
    if expected_i != cand.i || cand.i.is_empty() {
        return false;
    }
    let sum = cand.alpha_sum();
    let card = cand.i.len() as i64;
    if !(upsilon <= sum && sum < upsilon + card) {
        return false;
    }
    (0..n).all(|p| {
        &mu[p] * Rational::from_integer(BigInt::from(cand.alpha[p] + 1)) - &cand.rho[p]
            == cand.level
    })
}

fn scan_start(m: &[i128], upsilon: i64) -> i128 {
    let max = *m.iter().max().unwrap();
    (upsilon as i128 - 1).min(0) * max
}

fn scan_candidate(m: &[i128], c: i128) -> Option<(Vec<i64>, Vec<i128>, DeltaSet)> {
    if !m.iter().any(|&mp| c.rem_euclid(mp) == 0) {
        return None;
    }
    let mut alpha = Vec::with_capacity(m.len());
    let mut rho = Vec::with_capacity(m.len());
    let mut i = DeltaSet::EMPTY;
    for (p, &mp) in m.iter().enumerate() {
        let a = c.div_euclid(mp);
        let r = mp * (a + 1) - c;
        if r == mp {
            i.insert(p);
        }
        alpha.push(a as i64);
        rho.push(r);
    }
    Some((alpha, rho, i))
}

fn to_small(mu: &[Rational]) -> Result<(Vec<i128>, BigInt)> {
    let (m, l) = integer_scaling(mu);
    let m = m
        .iter()
        .map(|x| x.to_i128().ok_or_else(|| Error::InvalidConfig("weights too large for scan".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok((m, l))
}

/// Independent brute-force solver: walks the breakpoints upward and returns
/// the first one whose candidate passes the four conditions.
pub fn scan_oracle(mu: &[Rational], upsilon: i64) -> Result<NumericalData> {
    check_positive(mu)?;
    let (m, l) = to_small(mu)?;
    let mut c = scan_start(&m, upsilon);
    loop {
        if let Some((alpha, _, i)) = scan_candidate(&m, c) {
            let s: i64 = alpha.iter().sum();
            if upsilon <= s && s < upsilon + i.len() as i64 {
                let cand = data_at_level(
                    &m.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>(),
                    &l,
                    &BigInt::from(c),
                )?;
                if verify_conditions(mu, upsilon, &cand) {
                    return Ok(cand);
                }
            }
        }
        c += 1;
    }
}

/// Every breakpoint level in `[scan start, c_max]` (integer-scaled units)
/// whose data satisfies the conditions. Used to test uniqueness.
pub fn scan_all_solutions(mu: &[Rational], upsilon: i64, c_max: i128) -> Result<Vec<NumericalData>> {
    check_positive(mu)?;
    let (m, l) = to_small(mu)?;
    let big: Vec<BigInt> = m.iter().map(|&x| BigInt::from(x)).collect();
    let mut out = Vec::new();
    for c in scan_start(&m, upsilon)..=c_max {
        if scan_candidate(&m, c).is_some() {
            let cand = data_at_level(&big, &l, &BigInt::from(c))?;
            if verify_conditions(mu, upsilon, &cand) {
                out.push(cand);
            }
        }
    }
    Ok(out)
}
