//! Curve configuration and subsets of the node set.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Subset of `Δ = {0, …, δ−1}` as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DeltaSet(pub u64);

impl DeltaSet {
    pub const EMPTY: DeltaSet = DeltaSet(0);

    pub fn full(n: usize) -> Self {
        assert!(n <= 64);
        if n == 64 {
            DeltaSet(u64::MAX)
        } else {
            DeltaSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        DeltaSet(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        DeltaSet(it.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, o: Self) -> Self {
        DeltaSet(self.0 | o.0)
    }

    pub fn inter(self, o: Self) -> Self {
        DeltaSet(self.0 & o.0)
    }

    pub fn minus(self, o: Self) -> Self {
        DeltaSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let m = self.0;
        (0..64).filter(move |&i| m >> i & 1 == 1)
    }

    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> Vec<DeltaSet> {
        let mut out = Vec::with_capacity(1 << self.len());
        let mut s = 0u64;
        loop {
            out.push(DeltaSet(s));
            if s == self.0 {
                break;
            }
            s = (s.wrapping_sub(self.0)) & self.0;
        }
        out
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for DeltaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for DeltaSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DeltaSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.iter().any(|&i| i >= 64) {
            return Err(serde::de::Error::custom("index out of range"));
        }
        Ok(DeltaSet::from_indices(v))
    }
}

/// Genera of the two components, the number of nodes and their labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveConfig {
    pub g_x: i64,
    pub g_y: i64,
    pub delta: usize,
    pub labels: Vec<String>,
    /// The general position hypothesis on the components; formulas for
    /// aspect dimensions assume it.
    pub general_position: bool,
}

impl CurveConfig {
    pub fn new(g_x: i64, g_y: i64, delta: usize) -> Result<Self> {
        let labels = (1..=delta).map(|i| format!("p{i}")).collect();
        Self::with_labels(g_x, g_y, labels)
    }

    pub fn with_labels(g_x: i64, g_y: i64, labels: Vec<String>) -> Result<Self> {
        let delta = labels.len();
        if g_x < 0 || g_y < 0 {
            return Err(Error::InvalidConfig("genera must be nonnegative".into()));
        }
        if delta == 0 {
            return Err(Error::EmptyDelta);
        }
        if delta > 16 {
            return Err(Error::InvalidConfig(format!("δ={delta} is too large")));
        }
        if !(delta > 1 || g_x * g_y > 0) {
            return Err(Error::InvalidConfig(
                "need δ>1 or g_X·g_Y>0".into(),
            ));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != delta {
            return Err(Error::InvalidConfig("labels must be distinct".into()));
        }
        Ok(CurveConfig { g_x, g_y, delta, labels, general_position: true })
    }

    /// Arithmetic genus `g_X + g_Y + δ − 1`.
    pub fn genus(&self) -> i64 {
        self.g_x + self.g_y + self.delta as i64 - 1
    }

    pub fn all(&self) -> DeltaSet {
        DeltaSet::full(self.delta)
    }

    /// Base point pinned to 1 when quotienting by scaling: the largest label.
    pub fn base_point(&self) -> usize {
        (0..self.delta).max_by(|&a, &b| self.labels[a].cmp(&self.labels[b])).unwrap()
    }
}
