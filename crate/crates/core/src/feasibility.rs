//! Exact feasibility of systems of linear equalities, weak and strict
//! inequalities over the rationals, by Gaussian substitution followed by
//! Fourier–Motzkin elimination. A witness is read back by substitution,
//! taking midpoints of open intervals.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{serde_q, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// `a·x + b = 0`
    Eq,
    /// `a·x + b > 0`
    Gt,
    /// `a·x + b ≥ 0`
    Ge,
}

/// `coeffs · x + constant  (rel)  0`
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraint {
    #[serde(with = "serde_q::vec")]
    pub coeffs: Vec<Rational>,
    #[serde(with = "serde_q")]
    pub constant: Rational,
    pub rel: Relation,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, constant: Rational, rel: Relation) -> Self {
        Constraint { coeffs, constant, rel }
    }

    pub fn value(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).fold(self.constant.clone(), |acc, (a, b)| acc + a * b)
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = self.value(x);
        match self.rel {
            Relation::Eq => v.is_zero(),
            Relation::Gt => v.is_positive(),
            Relation::Ge => !v.is_negative(),
        }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn constant_holds(&self) -> bool {
        match self.rel {
            Relation::Eq => self.constant.is_zero(),
            Relation::Gt => self.constant.is_positive(),
            Relation::Ge => !self.constant.is_negative(),
        }
    }

    /// Scales so the first nonzero coefficient has absolute value 1.
    fn normalized(mut self) -> Self {
        if let Some(a) = self.coeffs.iter().find(|a| !a.is_zero()).cloned() {
            let s = a.abs();
            let s = if self.rel == Relation::Eq && a.is_negative() { -s } else { s };
            for c in self.coeffs.iter_mut() {
                *c /= &s;
            }
            self.constant /= &s;
        }
        self
    }
}

pub fn satisfies_all(cs: &[Constraint], x: &[Rational]) -> bool {
    cs.iter().all(|c| c.holds(x))
}

struct Substitution {
    var: usize,
    /// x_var = coeffs·x + constant, with coeffs[var] = 0
    coeffs: Vec<Rational>,
    constant: Rational,
}

fn substitute(c: &Constraint, s: &Substitution) -> Constraint {
    let a = c.coeffs[s.var].clone();
    if a.is_zero() {
        return c.clone();
    }
    let mut coeffs = c.coeffs.clone();
    coeffs[s.var] = Rational::zero();
    for (k, sk) in s.coeffs.iter().enumerate() {
        coeffs[k] += &a * sk;
    }
    Constraint { coeffs, constant: &c.constant + &a * &s.constant, rel: c.rel }
}

fn dedup(cs: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in cs {
        if c.is_trivial() {
            if !c.constant_holds() {
                return None;
            }
            continue;
        }
        let c = c.normalized();
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    Some(out)
}

fn eliminate(cs: &[Constraint], var: usize) -> Option<Vec<Constraint>> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut rest = Vec::new();
    for c in cs {
        let a = &c.coeffs[var];
        if a.is_positive() {
            pos.push(c);
        } else if a.is_negative() {
            neg.push(c);
        } else {
            rest.push(c.clone());
        }
    }
    for p in &pos {
        for n in &neg {
            // p: a x + P ⋈ 0 with a>0, n: -b x + N ⋈ 0 with b>0; b·p + a·n kills x.
            let a = p.coeffs[var].clone();
            let b = -n.coeffs[var].clone();
            let coeffs: Vec<Rational> = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .map(|(pc, nc)| &b * pc + &a * nc)
                .collect();
            let constant = &b * &p.constant + &a * &n.constant;
            let rel = if p.rel == Relation::Gt || n.rel == Relation::Gt {
                Relation::Gt
            } else {
                Relation::Ge
            };
            rest.push(Constraint { coeffs, constant, rel });
        }
    }
    dedup(rest)
}

/// Bounds on `x_var` from constraints whose other variables are fixed in `x`.
fn pick_value(cs: &[Constraint], var: usize, x: &[Rational]) -> Option<Rational> {
    let mut lower: Option<(Rational, bool)> = None; // (bound, strict)
    let mut upper: Option<(Rational, bool)> = None;
    for c in cs {
        let a = &c.coeffs[var];
        if a.is_zero() {
            continue;
        }
        let mut rest = c.constant.clone();
        for (k, ck) in c.coeffs.iter().enumerate() {
            if k != var && !ck.is_zero() {
                rest += ck * &x[k];
            }
        }
        let bound = -rest / a;
        let strict = c.rel == Relation::Gt;
        let tighter_lower = |cur: &Option<(Rational, bool)>| match cur {
            None => true,
            Some((v, s)) => bound > *v || (bound == *v && strict && !s),
        };
        let tighter_upper = |cur: &Option<(Rational, bool)>| match cur {
            None => true,
            Some((v, s)) => bound < *v || (bound == *v && strict && !s),
        };
        if a.is_positive() {
            if tighter_lower(&lower) {
                lower = Some((bound, strict));
            }
        } else if tighter_upper(&upper) {
            upper = Some((bound, strict));
        }
    }
    let one = Rational::one();
    match (lower, upper) {
        (None, None) => Some(Rational::zero()),
        (Some((l, _)), None) => Some(l + one),
        (None, Some((u, _))) => Some(u - one),
        (Some((l, ls)), Some((u, us))) => {
            if l < u {
                Some((l + u) / Rational::from_integer(2.into()))
            } else if l == u && !ls && !us {
                Some(l)
            } else {
                None
            }
        }
    }
}

/// Returns a point satisfying every constraint in `n` variables, or `None`.
pub fn solve(n: usize, constraints: &[Constraint]) -> Option<Vec<Rational>> {
    assert!(constraints.iter().all(|c| c.coeffs.len() == n));
    let mut eqs: Vec<Constraint> = Vec::new();
    let mut ineqs: Vec<Constraint> = Vec::new();
    for c in constraints {
        if c.rel == Relation::Eq {
            eqs.push(c.clone());
        } else {
            ineqs.push(c.clone());
        }
    }

    let mut subs: Vec<Substitution> = Vec::new();
    while let Some(e) = eqs.pop() {
        if e.is_trivial() {
            if !e.constant_holds() {
                return None;
            }
            continue;
        }
        let var = (0..n).rev().find(|&k| !e.coeffs[k].is_zero()).unwrap();
        let a = e.coeffs[var].clone();
        let mut coeffs: Vec<Rational> = e.coeffs.iter().map(|c| -c / &a).collect();
        coeffs[var] = Rational::zero();
        let s = Substitution { var, coeffs, constant: -&e.constant / &a };
        eqs = eqs.iter().map(|c| substitute(c, &s)).collect();
        ineqs = ineqs.iter().map(|c| substitute(c, &s)).collect();
        subs.push(s);
    }

    let eliminated: HashSet<usize> = subs.iter().map(|s| s.var).collect();
    let free: Vec<usize> = (0..n).filter(|k| !eliminated.contains(k)).collect();

    let mut stages = vec![dedup(ineqs)?];
    for &var in free.iter().rev() {
        let next = eliminate(stages.last().unwrap(), var)?;
        stages.push(next);
    }

    let mut x = vec![Rational::zero(); n];
    for (i, &var) in free.iter().enumerate() {
        // stage index where `var` is the last free variable not yet eliminated
        let stage = &stages[free.len() - 1 - i];
        x[var] = pick_value(stage, var, &x)?;
    }
    for s in subs.iter().rev() {
        let v = s.coeffs.iter().zip(&x).fold(s.constant.clone(), |acc, (a, b)| acc + a * b);
        x[s.var] = v;
    }
    debug_assert!(satisfies_all(constraints, &x));
    Some(x)
}
