//! Torus orbit closures in Grassmannians of coordinate spaces `k_I`, for a
//! single torus `k*_I` and for the subtorus of `k*_I × k*_J` cut out by
//! `s_i^τ t_j^λ = s_j^τ t_i^λ` on `I ∩ J`.
//!
//! Coordinates are indexed by labels `< 64`; subsets of labels are
//! [`DeltaSet`]s. Existence questions over an algebraically closed field are
//! decided by integer-lattice tests on Plücker ratios.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lattice::{hermite_normal_form, integer_kernel, IVec};
use crate::poset::{compatible, tripartitions, Tripartition};
use crate::rational::{q, serde_q, Rational};
use crate::{DeltaSet, Error, Result};

pub const MAX_AMBIENT: usize = 6;
pub const MAX_DIM: usize = 4;

/// Row-reduced basis of a subspace of `k_I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    /// Strictly increasing labels of the coordinates.
    pub ambient: Vec<usize>,
    #[serde(with = "rows_serde")]
    pub basis: Vec<Vec<Rational>>,
}

mod rows_serde {
    use super::*;
    use crate::rational::parse_rational;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|r| r.iter().map(|x| parse_rational(x).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

/// Reduced row echelon form, zero rows dropped.
pub fn rref(rows: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, piv);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..n {
                    let v = &f * &m[r][k];
                    m[i][k] -= v;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m
}

/// Basis of `{c : c·M = 0}` for `M` with `rows` rows and `n` columns,
/// i.e. the left kernel.
fn left_kernel(m: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    let rows = m.len();
    // transpose then right kernel via rref
    let t: Vec<Vec<Rational>> = (0..n).map(|c| (0..rows).map(|r| m[r][c].clone()).collect()).collect();
    let red = rref(&t, rows);
    let pivots: Vec<usize> = red.iter().map(|row| row.iter().position(|x| !x.is_zero()).unwrap()).collect();
    let mut out = Vec::new();
    for free in (0..rows).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); rows];
        v[free] = Rational::one();
        for (row, &p) in red.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

impl Subspace {
    pub fn new(ambient: Vec<usize>, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        if ambient.windows(2).any(|w| w[0] >= w[1]) || ambient.iter().any(|&l| l >= 64) {
            return Err(Error::Malformed("ambient labels must be strictly increasing and < 64".into()));
        }
        let n = ambient.len();
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch("vector length differs from ambient size".into()));
        }
        Ok(Subspace { basis: rref(&vectors, n), ambient })
    }

    pub fn from_ints(ambient: Vec<usize>, vectors: &[&[i64]]) -> Result<Self> {
        Self::new(ambient, vectors.iter().map(|v| v.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn coordinate(ambient: Vec<usize>, b: DeltaSet) -> Result<Self> {
        let rows = b
            .iter()
            .map(|l| ambient.iter().map(|&a| if a == l { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Self::new(ambient, rows)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_set(&self) -> DeltaSet {
        DeltaSet::from_indices(self.ambient.iter().copied())
    }

    fn pos(&self, label: usize) -> usize {
        self.ambient.iter().position(|&a| a == label).expect("label in ambient")
    }

    /// Image under the diagonal torus element `s`, given per coordinate.
    pub fn act(&self, s: &[Rational]) -> Subspace {
        let rows = self
            .basis
            .iter()
            .map(|r| r.iter().zip(s).map(|(x, y)| x * y).collect())
            .collect();
        Subspace::new(self.ambient.clone(), rows).expect("same shape")
    }
}

/// Plücker coordinates in lexicographic order of `h`-subsets, normalized so
/// the first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlueckerVector {
    pub h: usize,
    pub coords: Vec<(DeltaSet, Coord)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coord(#[serde(with = "serde_q")] pub Rational);

/// `h`-subsets of `labels` in lexicographic order.
pub fn subsets_of_size(labels: &[usize], h: usize) -> Vec<DeltaSet> {
    fn rec(labels: &[usize], h: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<DeltaSet>) {
        if cur.len() == h {
            out.push(DeltaSet::from_indices(cur.iter().copied()));
            return;
        }
        for k in start..labels.len() {
            cur.push(labels[k]);
            rec(labels, h, k + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(labels, h, 0, &mut Vec::new(), &mut out);
    out
}

fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Rational::zero() };
        if piv != c {
            m.swap(piv, c);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            if !m[r][c].is_zero() {
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let v = &f * &m[c][k];
                    m[r][k] -= v;
                }
            }
        }
    }
    d
}

impl PlueckerVector {
    fn normalized(h: usize, mut coords: Vec<(DeltaSet, Rational)>) -> Self {
        if let Some(first) = coords.iter().map(|c| c.1.clone()).find(|x| !x.is_zero()) {
            for c in coords.iter_mut() {
                c.1 /= &first;
            }
        }
        PlueckerVector { h, coords: coords.into_iter().map(|(b, x)| (b, Coord(x))).collect() }
    }

    pub fn get(&self, b: DeltaSet) -> Rational {
        self.coords.iter().find(|c| c.0 == b).map(|c| c.1 .0.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> Vec<DeltaSet> {
        self.coords.iter().filter(|c| !c.1 .0.is_zero()).map(|c| c.0).collect()
    }

    pub fn is_general(&self) -> bool {
        self.coords.iter().all(|c| !c.1 .0.is_zero())
    }

    /// Coordinate with an unsorted index list, with the sign of sorting.
    fn signed(&self, idx: &[usize]) -> Rational {
        let mut v = idx.to_vec();
        let mut sign = 1;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] == v[j + 1] {
                    return Rational::zero();
                }
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Rational::zero();
        }
        let x = self.get(DeltaSet::from_indices(v));
        if sign < 0 {
            -x
        } else {
            x
        }
    }

    /// Grassmann–Plücker relations over `ambient`.
    pub fn satisfies_pluecker_relations(&self, ambient: &[usize]) -> bool {
        let h = self.h;
        if h == 0 || h >= ambient.len() {
            return true;
        }
        for s in subsets_of_size(ambient, h - 1) {
            for t in subsets_of_size(ambient, h + 1) {
                let sv = s.to_vec();
                let tv = t.to_vec();
                let mut acc = Rational::zero();
                for (k, &tk) in tv.iter().enumerate() {
                    let mut left = sv.clone();
                    left.push(tk);
                    let right: Vec<usize> = tv.iter().copied().filter(|&x| x != tk).collect();
                    let term = self.signed(&left) * self.signed(&right);
                    if k % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                if !acc.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Projective equality.
    pub fn same_point(&self, other: &PlueckerVector) -> bool {
        self == other
    }
}

pub fn pluecker(v: &Subspace) -> PlueckerVector {
    let h = v.dim();
    let coords = subsets_of_size(&v.ambient, h)
        .into_iter()
        .map(|b| {
            let cols: Vec<usize> = b.iter().map(|l| v.pos(l)).collect();
            let m = v.basis.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
            (b, det(m))
        })
        .collect();
    PlueckerVector::normalized(h, coords)
}

fn check_tripartition(v: &Subspace, t: &Tripartition) -> Result<()> {
    let all = v.ambient_set();
    let disjoint = t.first.inter(t.middle).is_empty()
        && t.first.inter(t.last).is_empty()
        && t.middle.inter(t.last).is_empty();
    if !disjoint || t.ambient() != all {
        return Err(Error::Malformed("not a tripartition of the ambient set".into()));
    }
    Ok(())
}

/// `k_{I′} + (k_{Ī} ∩ (V + k_{I″}))`.
pub fn tripartition_degenerate(v: &Subspace, t: &Tripartition) -> Result<Subspace> {
    check_tripartition(v, t)?;
    let n = v.ambient.len();
    let unit = |l: usize| -> Vec<Rational> {
        let mut e = vec![Rational::zero(); n];
        e[v.pos(l)] = Rational::one();
        e
    };
    let mut gens: Vec<Vec<Rational>> = v.basis.clone();
    gens.extend(t.last.iter().map(unit));
    let outside: Vec<usize> = v.ambient.iter().filter(|&&l| !t.middle.contains(l)).map(|&l| v.pos(l)).collect();
    let restricted: Vec<Vec<Rational>> =
        gens.iter().map(|g| outside.iter().map(|&c| g[c].clone()).collect()).collect();
    let mut rows: Vec<Vec<Rational>> = left_kernel(&restricted, outside.len())
        .into_iter()
        .map(|c| {
            let mut w = vec![Rational::zero(); n];
            for (ci, g) in c.iter().zip(&gens) {
                if !ci.is_zero() {
                    for k in 0..n {
                        w[k] += ci * &g[k];
                    }
                }
            }
            w
        })
        .collect();
    rows.extend(t.first.iter().map(unit));
    Subspace::new(v.ambient.clone(), rows)
}

/// `ζ(r)_i = s_i r^{u_i}`, indexed like the ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnePSG {
    pub exponents: Vec<i64>,
    #[serde(with = "serde_q::vec")]
    pub scalars: Vec<Rational>,
}

impl OnePSG {
    pub fn plain(exponents: Vec<i64>) -> Self {
        let n = exponents.len();
        OnePSG { exponents, scalars: vec![Rational::one(); n] }
    }

    /// `−1` on the first part, `0` on the middle, `+1` on the last.
    pub fn from_tripartition(ambient: &[usize], t: &Tripartition) -> Self {
        Self::plain(
            ambient
                .iter()
                .map(|&l| if t.first.contains(l) { -1 } else if t.last.contains(l) { 1 } else { 0 })
                .collect(),
        )
    }
}

/// Limit of the Plücker vector of `ζ(r)·V` as `r → 0`.
pub fn limit_from_pluecker(ambient: &[usize], p: &PlueckerVector, psg: &OnePSG) -> PlueckerVector {
    let idx: HashMap<usize, usize> = ambient.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let exp = |b: DeltaSet| -> i64 { b.iter().map(|l| psg.exponents[idx[&l]]).sum() };
    let min = p.coords.iter().filter(|c| !c.1 .0.is_zero()).map(|c| exp(c.0)).min();
    let coords = p
        .coords
        .iter()
        .map(|(b, x)| {
            if !x.0.is_zero() && Some(exp(*b)) == min {
                let s = b.iter().fold(Rational::one(), |acc, l| acc * &psg.scalars[idx[&l]]);
                (*b, s * &x.0)
            } else {
                (*b, Rational::zero())
            }
        })
        .collect();
    PlueckerVector::normalized(p.h, coords)
}

pub fn limit_pluecker(v: &Subspace, psg: &OnePSG) -> Result<PlueckerVector> {
    if psg.exponents.len() != v.ambient.len() || psg.scalars.len() != v.ambient.len() {
        return Err(Error::DimensionMismatch("one-parameter subgroup has the wrong length".into()));
    }
    if psg.scalars.iter().any(Zero::is_zero) {
        return Err(Error::Malformed("torus scalars must be nonzero".into()));
    }
    Ok(limit_from_pluecker(&v.ambient, &pluecker(v), psg))
}

/// Orbit invariant: support pattern of each factor plus the values of a
/// canonical basis of torus-invariant Laurent monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitFingerprint {
    pub supports: Vec<Vec<DeltaSet>>,
    #[serde(with = "serde_q::vec")]
    pub invariants: Vec<Rational>,
}

/// Torus acting on a product of Grassmannians: weight coordinates are the
/// concatenated ambients, `relations` are characters trivial on the torus.
struct TorusSpec<'a> {
    ambients: Vec<&'a [usize]>,
    relations: Vec<IVec>,
}

impl TorusSpec<'_> {
    fn offset(&self, k: usize) -> usize {
        self.ambients[..k].iter().map(|a| a.len()).sum()
    }

    fn weight_dim(&self) -> usize {
        self.offset(self.ambients.len())
    }

    /// Canonical basis of monomial exponents `n` on the given supports with
    /// zero degree in each factor and torus weight among the relations.
    fn invariant_lattice(&self, supports: &[Vec<DeltaSet>]) -> Vec<IVec> {
        let nvar: usize = supports.iter().map(Vec::len).sum();
        let nrel = self.relations.len();
        let wd = self.weight_dim();
        let cols = nvar + nrel;
        let mut a: Vec<IVec> = vec![vec![BigInt::zero(); cols]; wd + supports.len()];
        let mut col = 0;
        for (k, sup) in supports.iter().enumerate() {
            let off = self.offset(k);
            for b in sup {
                for l in b.iter() {
                    let pos = self.ambients[k].iter().position(|&x| x == l).unwrap();
                    a[off + pos][col] += 1;
                }
                a[wd + k][col] += 1;
                col += 1;
            }
        }
        for (r, g) in self.relations.iter().enumerate() {
            for w in 0..wd {
                a[w][nvar + r] -= &g[w];
            }
        }
        let ker = integer_kernel(&a, cols);
        let proj: Vec<IVec> = ker.into_iter().map(|v| v[..nvar].to_vec()).collect();
        hermite_normal_form(&proj, nvar)
    }
}

fn monomial(values: &[Rational], exps: &[BigInt]) -> Rational {
    let mut acc = Rational::one();
    for (x, e) in values.iter().zip(exps) {
        let e = e.to_i32().expect("small exponent");
        if e != 0 {
            acc *= x.pow(e);
        }
    }
    acc
}

/// Cached fingerprinting for one torus.
pub struct Fingerprinter<'a> {
    spec: TorusSpec<'a>,
    cache: HashMap<Vec<Vec<DeltaSet>>, Vec<IVec>>,
}

impl<'a> Fingerprinter<'a> {
    pub fn single(ambient: &'a [usize]) -> Self {
        Fingerprinter { spec: TorusSpec { ambients: vec![ambient], relations: vec![] }, cache: HashMap::new() }
    }

    /// Pair torus with relations `τ(e_i − e_j) − λ(f_i − f_j)` on `I ∩ J`.
    pub fn pair(amb_i: &'a [usize], amb_j: &'a [usize], lambda: i64, tau: i64) -> Self {
        let spec = TorusSpec { ambients: vec![amb_i, amb_j], relations: vec![] };
        let relations = pair_relations(&spec, lambda, tau);
        Fingerprinter { spec: TorusSpec { relations, ..spec }, cache: HashMap::new() }
    }

    pub fn fingerprint(&mut self, points: &[&PlueckerVector]) -> OrbitFingerprint {
        let supports: Vec<Vec<DeltaSet>> = points.iter().map(|p| p.support()).collect();
        let basis = self
            .cache
            .entry(supports.clone())
            .or_insert_with(|| self.spec.invariant_lattice(&supports))
            .clone();
        let values: Vec<Rational> = points
            .iter()
            .flat_map(|p| p.coords.iter().filter(|c| !c.1 .0.is_zero()).map(|c| c.1 .0.clone()))
            .collect();
        let invariants = basis.iter().map(|n| monomial(&values, n)).collect();
        OrbitFingerprint { supports, invariants }
    }
}

fn pair_relations(spec: &TorusSpec<'_>, lambda: i64, tau: i64) -> Vec<IVec> {
    let (ai, aj) = (spec.ambients[0], spec.ambients[1]);
    let common: Vec<usize> = ai.iter().copied().filter(|l| aj.contains(l)).collect();
    let wd = spec.weight_dim();
    let off = spec.offset(1);
    let mut rels = Vec::new();
    if let Some((&j0, rest)) = common.split_first() {
        for &i in rest {
            let mut g = vec![BigInt::zero(); wd];
            let pi = ai.iter().position(|&x| x == i).unwrap();
            let pj = ai.iter().position(|&x| x == j0).unwrap();
            let qi = aj.iter().position(|&x| x == i).unwrap();
            let qj = aj.iter().position(|&x| x == j0).unwrap();
            g[pi] += tau;
            g[pj] -= tau;
            g[off + qi] -= lambda;
            g[off + qj] += lambda;
            rels.push(g);
        }
    }
    rels
}

fn check_desk(v: &Subspace) -> Result<()> {
    if v.ambient.len() > MAX_AMBIENT || v.dim() > MAX_DIM {
        return Err(Error::Unsupported(format!(
            "desk-scale limits are |I| ≤ {MAX_AMBIENT}, h ≤ {MAX_DIM}; got |I| = {}, h = {}",
            v.ambient.len(),
            v.dim()
        )));
    }
    if v.dim() == 0 {
        return Err(Error::Malformed("subspace must be nonzero".into()));
    }
    Ok(())
}

fn check_general(v: &Subspace) -> Result<PlueckerVector> {
    check_desk(v)?;
    let p = pluecker(v);
    if !p.is_general() {
        return Err(Error::GeneralPosition("some Plücker coordinate vanishes".into()));
    }
    Ok(p)
}

/// `|first| < h ≤ |ambient − last|`.
pub fn qualifies(t: &Tripartition, h: usize, ambient: DeltaSet) -> bool {
    t.first.len() < h && h <= ambient.minus(t.last).len()
}

/// Tripartitions whose degenerations make up the orbit closure.
pub fn closure_tripartitions(v: &Subspace) -> Vec<Tripartition> {
    let all = v.ambient_set();
    tripartitions(all).into_iter().filter(|t| qualifies(t, v.dim(), all)).collect()
}

pub fn closure_orbit_set(v: &Subspace) -> Result<BTreeSet<OrbitFingerprint>> {
    check_general(v)?;
    let mut fp = Fingerprinter::single(&v.ambient);
    let mut out = BTreeSet::new();
    for t in closure_tripartitions(v) {
        let w = tripartition_degenerate(v, &t)?;
        debug_assert_eq!(w.dim(), v.dim());
        out.insert(fp.fingerprint(&[&pluecker(&w)]));
    }
    Ok(out)
}

/// Fingerprint of the orbit of `w` under the torus of its ambient.
pub fn orbit_fingerprint(w: &Subspace) -> OrbitFingerprint {
    Fingerprinter::single(&w.ambient).fingerprint(&[&pluecker(w)])
}

/// Interval pattern data `(first, last)` of a support, if it is one.
fn interval_pattern(ambient: &[usize], h: usize, support: &[DeltaSet]) -> Option<(DeltaSet, DeltaSet)> {
    let all = DeltaSet::from_indices(ambient.iter().copied());
    let first = support.iter().fold(all, |acc, b| acc.inter(*b));
    let union = support.iter().fold(DeltaSet::EMPTY, |acc, b| acc.union(*b));
    let last = all.minus(union);
    let expected: Vec<DeltaSet> = subsets_of_size(ambient, h)
        .into_iter()
        .filter(|b| first.is_subset(*b) && b.is_subset(all.minus(last)))
        .collect();
    (expected == support).then_some((first, last))
}

/// Whether `ratios[k] = c · s̄^{weights[k]}` has a solution over an
/// algebraically closed field, with `s̄` in the torus cut out by `relations`.
fn ratio_system_solvable(spec: &TorusSpec<'_>, supports: &[Vec<DeltaSet>], ratios: &[Rational]) -> bool {
    spec.invariant_lattice(supports).iter().all(|n| monomial(ratios, n).is_one())
}

/// Membership of `w` in the closure of the torus orbit of a general `v`.
pub fn in_closure(w: &Subspace, v: &Subspace) -> Result<bool> {
    let pv = check_general(v)?;
    if w.ambient != v.ambient || w.dim() != v.dim() {
        return Err(Error::DimensionMismatch("subspaces live in different Grassmannians".into()));
    }
    let pw = pluecker(w);
    let support = pw.support();
    let Some((first, last)) = interval_pattern(&w.ambient, w.dim(), &support) else {
        return Ok(false);
    };
    let middle: Vec<usize> = w
        .ambient
        .iter()
        .copied()
        .filter(|&l| !first.contains(l) && !last.contains(l))
        .collect();
    let ratios: Vec<Rational> = support.iter().map(|&b| pw.get(b) / pv.get(b)).collect();
    let restricted: Vec<DeltaSet> = support.iter().map(|b| b.minus(first)).collect();
    let spec = TorusSpec { ambients: vec![&middle], relations: vec![] };
    Ok(ratio_system_solvable(&spec, &[restricted], &ratios))
}

/// Pair analogue: qualifying tripartition pairs of `(I, J)`.
pub fn pair_closure_tripartitions(v: &Subspace, w: &Subspace) -> Vec<(Tripartition, Tripartition)> {
    let (i, j) = (v.ambient_set(), w.ambient_set());
    let tis = closure_tripartitions(v);
    let tjs = closure_tripartitions(w);
    let mut out = Vec::new();
    for ti in &tis {
        for tj in &tjs {
            if compatible(ti, i, tj, j) {
                out.push((*ti, *tj));
            }
        }
    }
    out
}

fn check_pair_params(lambda: i64, tau: i64) -> Result<()> {
    if lambda <= 0 || tau <= 0 {
        return Err(Error::Malformed("λ and τ must be positive".into()));
    }
    Ok(())
}

/// Orbit closure of `(V, W)` under the pair torus with exponents `(λ, τ)`;
/// the strata pipeline uses `λ = α̃`, `τ = β̃`.
pub fn pair_closure_orbit_set(
    v: &Subspace,
    w: &Subspace,
    lambda: i64,
    tau: i64,
) -> Result<BTreeSet<OrbitFingerprint>> {
    check_pair_params(lambda, tau)?;
    check_general(v)?;
    check_general(w)?;
    let mut fp = Fingerprinter::pair(&v.ambient, &w.ambient, lambda, tau);
    let mut out = BTreeSet::new();
    for (ti, tj) in pair_closure_tripartitions(v, w) {
        let a = pluecker(&tripartition_degenerate(v, &ti)?);
        let b = pluecker(&tripartition_degenerate(w, &tj)?);
        out.insert(fp.fingerprint(&[&a, &b]));
    }
    Ok(out)
}

pub fn pair_orbit_fingerprint(v: &Subspace, w: &Subspace, lambda: i64, tau: i64) -> OrbitFingerprint {
    Fingerprinter::pair(&v.ambient, &w.ambient, lambda, tau).fingerprint(&[&pluecker(v), &pluecker(w)])
}

/// Membership of `nu = (V′, W′)` in the closure of the orbit of `base = (V, W)`.
pub fn in_pair_closure(
    nu: (&Subspace, &Subspace),
    base: (&Subspace, &Subspace),
    lambda: i64,
    tau: i64,
) -> Result<bool> {
    check_pair_params(lambda, tau)?;
    let pv = check_general(base.0)?;
    let pw = check_general(base.1)?;
    let (v1, w1) = nu;
    if v1.ambient != base.0.ambient || v1.dim() != base.0.dim() || w1.ambient != base.1.ambient || w1.dim() != base.1.dim() {
        return Err(Error::DimensionMismatch("pairs live in different products of Grassmannians".into()));
    }
    let (i, j) = (v1.ambient_set(), w1.ambient_set());
    let p = pluecker(v1);
    let qq = pluecker(w1);
    let (sp, sq) = (p.support(), qq.support());
    let Some((i1, i2)) = interval_pattern(&v1.ambient, v1.dim(), &sp) else { return Ok(false) };
    let Some((j1, j2)) = interval_pattern(&w1.ambient, w1.dim(), &sq) else { return Ok(false) };
    let ti = Tripartition { first: i1, middle: i.minus(i1).minus(i2), last: i2 };
    let tj = Tripartition { first: j1, middle: j.minus(j1).minus(j2), last: j2 };
    if !compatible(&ti, i, &tj, j) {
        return Ok(false);
    }
    let mid_i = ti.middle.to_vec();
    let mid_j = tj.middle.to_vec();
    let base_spec = TorusSpec { ambients: vec![&mid_i, &mid_j], relations: vec![] };
    let spec = TorusSpec { relations: pair_relations(&base_spec, lambda, tau), ..base_spec };
    let mut ratios: Vec<Rational> = sp.iter().map(|&b| p.get(b) / pv.get(b)).collect();
    ratios.extend(sq.iter().map(|&c| qq.get(c) / pw.get(c)));
    let supports = vec![
        sp.iter().map(|b| b.minus(i1)).collect::<Vec<_>>(),
        sq.iter().map(|c| c.minus(j1)).collect::<Vec<_>>(),
    ];
    Ok(ratio_system_solvable(&spec, &supports, &ratios))
}

/// Every exponent vector in `[−bound, bound]^n`.
pub fn exponent_box(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (-bound..=bound).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Fingerprints of all limits `lim ζ(r)·V` over plain one-parameter
/// subgroups with exponents bounded by `bound`.
pub fn brute_force_closure(v: &Subspace, bound: i64) -> Result<BTreeSet<OrbitFingerprint>> {
    let p = check_general(v)?;
    let limits: BTreeSet<PlueckerVector> = exponent_box(v.ambient.len(), bound)
        .into_par_iter()
        .map(|u| limit_from_pluecker(&v.ambient, &p, &OnePSG::plain(u)))
        .collect();
    let mut fp = Fingerprinter::single(&v.ambient);
    Ok(limits.iter().map(|l| fp.fingerprint(&[l])).collect())
}

/// Exponent pairs `(u, v)` with `τu_i − λv_i` constant on `I ∩ J`, i.e.
/// one-parameter subgroups of the pair torus.
pub fn pair_exponents_compatible(
    amb_i: &[usize],
    amb_j: &[usize],
    u: &[i64],
    v: &[i64],
    lambda: i64,
    tau: i64,
) -> bool {
    let mut level: Option<i64> = None;
    for (a, &l) in amb_i.iter().enumerate() {
        if let Some(b) = amb_j.iter().position(|&x| x == l) {
            let c = tau * u[a] - lambda * v[b];
            match level {
                None => level = Some(c),
                Some(x) if x != c => return false,
                _ => {}
            }
        }
    }
    true
}

pub fn brute_force_pair_closure(
    v: &Subspace,
    w: &Subspace,
    lambda: i64,
    tau: i64,
    bound: i64,
) -> Result<BTreeSet<OrbitFingerprint>> {
    check_pair_params(lambda, tau)?;
    let pv = check_general(v)?;
    let pw = check_general(w)?;
    let us = exponent_box(v.ambient.len(), bound);
    let vs = exponent_box(w.ambient.len(), bound);
    let lim_v: Vec<PlueckerVector> =
        us.par_iter().map(|u| limit_from_pluecker(&v.ambient, &pv, &OnePSG::plain(u.clone()))).collect();
    let lim_w: Vec<PlueckerVector> =
        vs.par_iter().map(|x| limit_from_pluecker(&w.ambient, &pw, &OnePSG::plain(x.clone()))).collect();
    let pairs: BTreeSet<(PlueckerVector, PlueckerVector)> = us
        .par_iter()
        .enumerate()
        .flat_map_iter(|(a, u)| {
            let lim_v = &lim_v;
            let lim_w = &lim_w;
            vs.iter().enumerate().filter_map(move |(b, x)| {
                pair_exponents_compatible(&v.ambient, &w.ambient, u, x, lambda, tau)
                    .then(|| (lim_v[a].clone(), lim_w[b].clone()))
            })
        })
        .collect();
    let mut fp = Fingerprinter::pair(&v.ambient, &w.ambient, lambda, tau);
    Ok(pairs.iter().map(|(a, b)| fp.fingerprint(&[a, b])).collect())
}

/// A random element `(s, t)` of the torus `s_p^τ = t_p^λ` on `I ∩ J`
/// (with `τ = β̃`, `λ = α̃` this is `s_p^β̃ = t_p^α̃`).
pub fn sample_pair_torus<R: Rng>(
    amb_i: &[usize],
    amb_j: &[usize],
    lambda: i64,
    tau: i64,
    rng: &mut R,
) -> (Vec<Rational>, Vec<Rational>) {
    let draw = |rng: &mut R| {
        let n: i64 = rng.gen_range(1..6);
        let d: i64 = rng.gen_range(1..6);
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        Rational::new((sign * n).into(), d.into())
    };
    let mut s: Vec<Rational> = amb_i.iter().map(|_| draw(rng)).collect();
    let t: Vec<Rational> = amb_j
        .iter()
        .map(|&l| {
            let w = draw(rng);
            if let Some(a) = amb_i.iter().position(|&x| x == l) {
                s[a] = w.pow(lambda as i32);
                w.pow(tau as i32)
            } else {
                w
            }
        })
        .collect();
    (s, t)
}

/// Checks the quadratic equations satisfied by every point of the orbit
/// closure of a general `p0`: `p0_{b1} p0_{b2} p_{b3} p_{b4} = p0_{b3} p0_{b4} p_{b1} p_{b2}`
/// whenever `b1 + b2 = b3 + b4` as multisets.
pub fn satisfies_orbit_equations(p: &PlueckerVector, p0: &PlueckerVector) -> bool {
    let subs: Vec<DeltaSet> = p.coords.iter().map(|c| c.0).collect();
    let mut by_sum: BTreeMap<(u64, u64), Vec<(DeltaSet, DeltaSet)>> = BTreeMap::new();
    for (x, &b1) in subs.iter().enumerate() {
        for &b2 in &subs[x..] {
            // multiset sum encoded as (union, intersection)
            by_sum.entry((b1.union(b2).0, b1.inter(b2).0)).or_default().push((b1, b2));
        }
    }
    for group in by_sum.values() {
        for (b1, b2) in group {
            for (b3, b4) in group {
                let l = p0.get(*b1) * p0.get(*b2) * p.get(*b3) * p.get(*b4);
                let r = p0.get(*b3) * p0.get(*b4) * p.get(*b1) * p.get(*b2);
                if l != r {
                    return false;
                }
            }
        }
    }
    true
}

/// A subspace of `k_I` of dimension `h` with every Plücker coordinate
/// nonzero, drawn with small integer entries.
pub fn random_general_subspace<R: Rng>(ambient: &[usize], h: usize, rng: &mut R) -> Subspace {
    loop {
        let rows: Vec<Vec<Rational>> =
            (0..h).map(|_| ambient.iter().map(|_| q(rng.gen_range(-5..=5))).collect()).collect();
        let v = Subspace::new(ambient.to_vec(), rows).expect("valid");
        if v.dim() == h && pluecker(&v).is_general() {
            return v;
        }
    }
}

pub fn random_torus<R: Rng>(n: usize, rng: &mut R) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            let a: i64 = rng.gen_range(1..7);
            let b: i64 = rng.gen_range(1..7);
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            Rational::new((s * a).into(), b.into())
        })
        .collect()
}
