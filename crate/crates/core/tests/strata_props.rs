use std::collections::{BTreeMap, BTreeSet};

use limcan::rational::{qf, Rational};
use limcan::strata::{
    enumerate_strata, key, key_of, realizable, region, stratum_of, tilde_from_node, EnumerateOptions, StratumData,
    StratumKey,
};
use limcan::CurveConfig;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn enumerated(cfg: &CurveConfig) -> BTreeMap<StratumKey, StratumData> {
    enumerate_strata(cfg, EnumerateOptions::default())
        .unwrap()
        .into_iter()
        .map(|s| (key(cfg, &s), s))
        .collect()
}

fn random_mu<R: Rng>(n: usize, rng: &mut R) -> Vec<Rational> {
    (0..n).map(|_| qf(rng.gen_range(1..40), rng.gen_range(1..8))).collect()
}

/// Weights on lattice points of small height hit lower-dimensional regions
/// far more often than uniform rationals.
fn special_mu<R: Rng>(n: usize, rng: &mut R) -> Vec<Rational> {
    (0..n).map(|_| qf(rng.gen_range(1..7), rng.gen_range(1..4))).collect()
}

const CONFIGS: [(i64, i64, usize); 8] =
    [(0, 0, 3), (0, 2, 2), (1, 1, 3), (2, 4, 2), (2, 4, 3), (3, 3, 3), (1, 2, 4), (2, 1, 4)];

#[test]
fn partition_and_region_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (gx, gy, d) in CONFIGS {
        let cfg = CurveConfig::new(gx, gy, d).unwrap();
        let all = enumerated(&cfg);
        let regions: Vec<(StratumKey, _)> = all.iter().map(|(k, s)| (k.clone(), region(&cfg, s))).collect();
        for k in 0..1250 {
            let mu = if k % 2 == 0 { random_mu(d, &mut rng) } else { special_mu(d, &mut rng) };
            let kk = key_of(&cfg, &mu).unwrap();
            assert!(all.contains_key(&kk), "{mu:?} lands outside the enumeration");
            let inside: Vec<&StratumKey> = regions.iter().filter(|(_, r)| r.contains(&mu)).map(|(k, _)| k).collect();
            assert_eq!(inside, vec![&kk], "region membership for {mu:?}");
        }
    }
}

#[test]
fn witnesses_reproduce_their_strata() {
    for (gx, gy, d) in CONFIGS {
        let cfg = CurveConfig::new(gx, gy, d).unwrap();
        for (k, s) in enumerated(&cfg) {
            let again = stratum_of(&cfg, &s.witness_mu).unwrap();
            assert_eq!(again, s);
            assert_eq!(key(&cfg, &again), k);
            assert!(region(&cfg, &s).contains(&s.witness_mu));
            let w = realizable(&cfg, &s.alpha, s.i, &s.beta, s.j).unwrap().expect("realizable");
            assert_eq!(key_of(&cfg, &w).unwrap(), k);
        }
    }
}

#[test]
fn invariants_of_stratum_data() {
    for (gx, gy, d) in CONFIGS {
        let cfg = CurveConfig::new(gx, gy, d).unwrap();
        for s in enumerated(&cfg).values() {
            let (a, b) = (s.alpha_sum(), s.beta_sum());
            assert!(s.alpha.iter().all(|&x| (0..=gy).contains(&x)));
            assert!(s.beta.iter().all(|&x| (0..=gx).contains(&x)));
            assert!(gy <= a && a < gy + s.i.len() as i64);
            assert!(gx <= b && b < gx + s.j.len() as i64);
            if gy > 0 {
                assert!(s.i.iter().all(|p| s.alpha[p] > 0));
                assert!(s.gamma > Rational::from_integer(0.into()));
            }
            if gx > 0 {
                assert!(s.j.iter().all(|p| s.beta[p] > 0));
            }
            assert_eq!(s.alpha_tilde.is_some(), gx * gy > 0);
            if let (Some(at), Some(bt)) = (s.alpha_tilde, s.beta_tilde) {
                assert_eq!(num_integer::gcd(at, bt), 1);
                for p in s.i.inter(s.j).iter() {
                    assert_eq!(tilde_from_node(s.alpha[p], s.beta[p]), (at, bt));
                }
            }
        }
    }
}

#[test]
fn regions_are_disjoint_on_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let cfg = CurveConfig::new(2, 4, 3).unwrap();
    let all = enumerated(&cfg);
    let regions: Vec<_> = all.values().map(|s| region(&cfg, s)).collect();
    for _ in 0..2000 {
        let mu = special_mu(3, &mut rng);
        assert_eq!(regions.iter().filter(|r| r.contains(&mu)).count(), 1);
    }
}

#[test]
fn every_dimension_occurs() {
    let cfg = CurveConfig::new(2, 4, 3).unwrap();
    let dims: BTreeSet<i64> =
        enumerated(&cfg).values().map(|s| limcan::strata::stratum_dim(&cfg, s).dim).collect();
    assert_eq!(dims, BTreeSet::from([0, 1, 2]));
}

fn config_strategy() -> impl Strategy<Value = (i64, i64, Vec<(i64, i64)>)> {
    (0i64..5, 0i64..5, proptest::collection::vec((1i64..30, 1i64..6), 2..=4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scaling_invariance((gx, gy, w) in config_strategy(), tn in 1i64..50, td in 1i64..50) {
        let cfg = CurveConfig::new(gx, gy, w.len()).unwrap();
        let mu: Vec<Rational> = w.iter().map(|&(a, b)| qf(a, b)).collect();
        let t = qf(tn, td);
        let scaled: Vec<Rational> = mu.iter().map(|x| x * &t).collect();
        prop_assert_eq!(key_of(&cfg, &mu).unwrap(), key_of(&cfg, &scaled).unwrap());
    }

    #[test]
    fn convexity((gx, gy, w) in config_strategy(), tn in 0i64..=10) {
        let cfg = CurveConfig::new(gx, gy, w.len()).unwrap();
        let mu: Vec<Rational> = w.iter().map(|&(a, b)| qf(a, b)).collect();
        let s = stratum_of(&cfg, &mu).unwrap();
        let k = key(&cfg, &s);
        // a second point of the same stratum
        let other = realizable(&cfg, &s.alpha, s.i, &s.beta, s.j).unwrap().unwrap();
        let t = qf(tn, 10);
        let one_minus = qf(10 - tn, 10);
        let mix: Vec<Rational> = mu.iter().zip(&other).map(|(a, b)| a * &t + b * &one_minus).collect();
        prop_assert_eq!(key_of(&cfg, &mix).unwrap(), k);
    }

    #[test]
    fn key_soundness((gx, gy, w) in config_strategy(), w2 in proptest::collection::vec((1i64..6, 1i64..3), 4)) {
        let n = w.len();
        let cfg = CurveConfig::new(gx, gy, n).unwrap();
        let mu: Vec<Rational> = w.iter().map(|&(a, b)| qf(a, b)).collect();
        let nu: Vec<Rational> = w2[..n].iter().map(|&(a, b)| qf(a, b)).collect();
        let (s, t) = (stratum_of(&cfg, &mu).unwrap(), stratum_of(&cfg, &nu).unwrap());
        let side = |a1: &[i64], i1, a2: &[i64], i2, g: i64| a1 == a2 && (i1 == i2 || a1.iter().sum::<i64>() == g);
        let same = side(&s.alpha, s.i, &t.alpha, t.i, gy) && side(&s.beta, s.j, &t.beta, t.j, gx);
        prop_assert_eq!(key(&cfg, &s) == key(&cfg, &t), same);
    }
}
