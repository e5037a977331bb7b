//! Acceptance suite. One line per criterion; run with
//! `cargo test -p limcan --test acceptance`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use limcan::grassmann::*;
use limcan::model::*;
use limcan::numdata::{associated_data, scan_oracle, verify_conditions};
use limcan::poset::{build_poset, components, count_formulas, neighborhood_sample_check, Tripartition};
use limcan::rational::{q, to_i64, Rational};
use limcan::strata::{enumerate_strata, key, stratum_dim, EnumerateOptions};
use limcan::weier::weierstrass_degrees;
use limcan::CurveConfig;
use num_integer::gcd;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const AC1_LIMIT: Duration = Duration::from_secs(5);
const AC2_LIMIT: Duration = Duration::from_secs(10);
const AC3_LIMIT: Duration = Duration::from_secs(60);
const AC8_LIMIT: Duration = Duration::from_secs(120);

/// Exponent bound for the brute-force one-parameter subgroups.
const BRUTE_BOUND: i64 = 3;
const QUERIES: usize = 500;
const NEIGHBOURHOOD_SAMPLES: usize = 200;

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when the only failure is the (0,0) degenerate case discussed in
    /// the README; such a failure is reported but does not fail the run.
    known: bool,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, detail, known: false }
    }
}

fn cfg(gx: i64, gy: i64, d: usize) -> CurveConfig {
    CurveConfig::new(gx, gy, d).unwrap()
}

fn opts() -> EnumerateOptions {
    EnumerateOptions::default()
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn n_delta(d: i64, h: i64) -> i64 {
    binom(h + d - 1, d) - binom(h, d)
}

fn ac1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let cases: Vec<(Vec<Rational>, i64)> = (0..10_000)
        .map(|_| {
            let d = rng.gen_range(1..=6);
            ((0..d).map(|_| q(rng.gen_range(1..=50))).collect(), rng.gen_range(-30..=50))
        })
        .collect();
    let bad: Vec<_> = cases
        .par_iter()
        .filter(|(mu, u)| {
            let d = associated_data(mu, *u).unwrap();
            !verify_conditions(mu, *u, &d) || scan_oracle(mu, *u).unwrap() != d
        })
        .collect();
    Outcome::new(bad.is_empty(), format!("{} cases, {} mismatches", cases.len(), bad.len()))
}

fn ac2() -> Outcome {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for gx in 0..=8i64 {
        for gy in gx..=8 {
            let n = components(&cfg(gx, gy, 2), opts()).unwrap().count as i64;
            let closed = gx + gy - gcd(gx + 1, gy + 1) + 1;
            checked += 1;
            if n != closed {
                mismatches.push(format!("({gx},{gy}): closed form {closed}, enumerated {n}"));
            }
        }
    }
    let known = mismatches.len() == 1
        && mismatches[0].starts_with("(0,0)")
        && components(&cfg(0, 0, 2), opts()).unwrap().count == 1;
    let detail = if mismatches.is_empty() {
        format!("{checked} genus pairs")
    } else {
        format!("{checked} genus pairs; {}", mismatches.join("; "))
    };
    Outcome { pass: mismatches.is_empty(), detail, known }
}

fn ac3() -> Outcome {
    let a = components(&cfg(3, 3, 3), opts()).unwrap().count;
    let b = components(&cfg(2, 4, 3), opts()).unwrap().count;
    let lb = count_formulas(&cfg(2, 4, 3)).unwrap().lower_bound;
    // independent evaluation of the lower bound
    let corr: i64 = (1..3).flat_map(|i| (1..3).map(move |j| binom(gcd(2 + i, 4 + j) - 1, 2))).sum();
    let oracle = n_delta(3, 2) + n_delta(3, 4) - corr;
    let pass = a == 9 && b == 25 && lb.as_deref() == Some("19") && oracle == 19;
    Outcome::new(pass, format!("N(3,3)={a}, N(2,4)={b}, lower bound {lb:?} (oracle {oracle})"))
}

fn ac4() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for d in [2usize, 3] {
        for gx in 0..=6i64 {
            for gy in 0..=6i64 {
                if gx * gy != 0 && gx != gy {
                    continue;
                }
                let n = components(&cfg(gx, gy, d), opts()).unwrap().count as i64;
                let expected = if gx == 0 && gy == 0 { 1 } else { n_delta(d as i64, gx.max(gy)) };
                checked += 1;
                if n != expected {
                    bad.push(format!("({gx},{gy},{d}): {n} vs {expected}"));
                }
            }
        }
    }
    Outcome::new(bad.is_empty(), format!("{checked} configurations {}", bad.join("; ")))
}

fn ac5() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for d in [2usize, 3] {
        for gx in 0..=5i64 {
            for gy in 0..=5i64 {
                let p = build_poset(&cfg(gx, gy, d), opts()).unwrap();
                // the variety is a point when both genera vanish
                let top = if gx == 0 && gy == 0 { 0 } else { d as i64 - 1 };
                let maximal = p.maximal();
                let tops: BTreeSet<usize> = (0..p.nodes.len()).filter(|&a| p.dims[a] == top).collect();
                let covered = (0..p.nodes.len()).all(|a| tops.contains(&a) || tops.iter().any(|&m| p.below(m).contains(&a)));
                checked += 1;
                if !covered || maximal.iter().any(|&m| p.dims[m] != top) {
                    bad.push(format!("({gx},{gy},{d})"));
                }
            }
        }
    }
    Outcome::new(bad.is_empty(), format!("{checked} configurations {}", bad.join(" ")))
}

fn ac6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut bad = Vec::new();
    let mut done = 0;
    while done < 1000 {
        let d = rng.gen_range(1..=5usize);
        let (gx, gy) = (rng.gen_range(0..=6i64), rng.gen_range(0..=6i64));
        let Ok(c) = CurveConfig::new(gx, gy, d) else { continue };
        let m: Vec<i64> = (0..d).map(|_| rng.gen_range(1..=8)).collect();
        let mu: Vec<Rational> = m.iter().map(|&x| q(x)).collect();
        let model = build_model(&m).unwrap();
        let g2 = 2 * c.genus() - 2;
        let n = d as i64;
        let mut ok = true;

        let dy = associated_data(&mu, gy).unwrap();
        let tx = twist_divisor_focus_x(&model, &dy).unwrap();
        let deg = multidegree_of_twisted_dualizing(&model, &c, &tx).unwrap();
        ok &= deg.total() == g2;
        ok &= deg.degrees[&Component::X] == 2 * gx - 2 + n + dy.alpha_sum();
        ok &= deg.degrees[&Component::Y] == 2 * gy - 2 + dy.i.len() as i64 - dy.alpha_sum();
        for (p, &mp) in m.iter().enumerate() {
            let rho = to_i64(&dy.rho[p]).unwrap();
            for j in 1..mp {
                ok &= deg.degrees[&Component::Z(p, j)] == i64::from(!dy.i.contains(p) && j == rho);
            }
        }

        let dx = associated_data(&mu, gx).unwrap();
        let ty = twist_divisor_focus_y(&model, &dx).unwrap();
        let deg = multidegree_of_twisted_dualizing(&model, &c, &ty).unwrap();
        ok &= deg.total() == g2;
        ok &= deg.degrees[&Component::Y] == 2 * gy - 2 + n + dx.alpha_sum();
        ok &= deg.degrees[&Component::X] == 2 * gx - 2 + dx.i.len() as i64 - dx.alpha_sum();
        for (p, &mp) in m.iter().enumerate() {
            let sigma = mp - to_i64(&dx.rho[p]).unwrap();
            for j in 1..mp {
                ok &= deg.degrees[&Component::Z(p, j)] == i64::from(!dx.i.contains(p) && j == sigma);
            }
        }
        if !ok {
            bad.push(format!("({gx},{gy}) μ={m:?}"));
        }
        done += 1;
    }
    Outcome::new(bad.is_empty(), format!("{done} cases {}", bad.join("; ")))
}

fn ac7() -> Outcome {
    let mut bad = Vec::new();
    let (mut configs, mut strata) = (0, 0);
    for d in 1..=3usize {
        for gx in 0..=8i64 {
            for gy in 0..=8i64 {
                let g = gx + gy + d as i64 - 1;
                let Ok(c) = CurveConfig::new(gx, gy, d) else { continue };
                if g > 8 {
                    continue;
                }
                configs += 1;
                for s in enumerate_strata(&c, opts()).unwrap() {
                    strata += 1;
                    let w = weierstrass_degrees(&c, &s);
                    let mut ok = w.total == g * g * g - g && w.normalized.total == w.total;
                    for p in 0..d {
                        let shift = g * (gy - s.alpha[p]) + g * (gx - s.beta[p]);
                        ok &= w.node_coeffs[p] - w.normalized.node_coeffs[p] == shift;
                        ok &= w.normalized.node_coeffs[p] == g * (d as i64 - 2);
                    }
                    if !ok {
                        bad.push(format!("({gx},{gy},{d}) {:?}", key(&c, &s)));
                    }
                }
            }
        }
    }
    Outcome::new(bad.is_empty(), format!("{configs} configurations, {strata} strata {}", bad.join("; ")))
}

fn pick<'a, T, R: Rng>(v: &'a [T], rng: &mut R) -> &'a T {
    &v[rng.gen_range(0..v.len())]
}

/// A subspace of the given dimension with many zero entries.
fn sparse_subspace<R: Rng>(ambient: &[usize], h: usize, rng: &mut R) -> Subspace {
    loop {
        let rows: Vec<Vec<Rational>> = (0..h)
            .map(|_| ambient.iter().map(|_| if rng.gen_bool(0.55) { q(0) } else { q(rng.gen_range(-2..=2)) }).collect())
            .collect();
        let w = Subspace::new(ambient.to_vec(), rows).unwrap();
        if w.dim() == h {
            return w;
        }
    }
}

fn degenerate_at_random<R: Rng>(v: &Subspace, rng: &mut R) -> Subspace {
    let ts: Vec<Tripartition> = closure_tripartitions(v);
    tripartition_degenerate(v, pick(&ts, rng)).unwrap()
}

#[derive(Default)]
struct Tally {
    agree: usize,
    disagree: Vec<String>,
    inside: usize,
}

impl Tally {
    fn record(&mut self, expected: bool, got: bool, what: String) {
        if expected == got {
            self.agree += 1;
        } else {
            self.disagree.push(what);
        }
        self.inside += usize::from(expected);
    }
}

fn ac8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    // h = 1 and h = n − 1 have a single open orbit, so most shapes carry invariants
    let shapes = [(3, 1), (4, 2), (4, 2), (4, 3), (5, 2), (5, 2), (5, 3), (5, 3)];
    let mut cases = Vec::new();
    let mut set_errors = Vec::new();
    for (n, h) in shapes {
        let amb: Vec<usize> = (0..n).collect();
        let v = random_general_subspace(&amb, h, &mut rng);
        let predicted = closure_orbit_set(&v).unwrap();
        let brute = brute_force_closure(&v, BRUTE_BOUND).unwrap();
        if !brute.is_subset(&predicted) {
            set_errors.push(format!("n={n} h={h}: limit outside prediction"));
        }
        if !predicted.is_subset(&brute) {
            set_errors.push(format!("n={n} h={h}: predicted orbit not realized"));
        }
        cases.push((amb, h, v, brute));
    }
    let mut tally = Tally::default();
    for k in 0..QUERIES {
        let (amb, h, v, brute) = &cases[k % cases.len()];
        let w = match (k / cases.len()) % 4 {
            0 => degenerate_at_random(v, &mut rng).act(&random_torus(amb.len(), &mut rng)),
            1 => {
                let other = random_general_subspace(amb, *h, &mut rng);
                degenerate_at_random(&other, &mut rng)
            }
            2 => random_general_subspace(amb, *h, &mut rng),
            _ => sparse_subspace(amb, *h, &mut rng),
        };
        let expected = brute.contains(&orbit_fingerprint(&w));
        let got = in_closure(&w, v).unwrap();
        tally.record(expected, got, format!("{:?}", w.basis));
    }
    let pass = set_errors.is_empty() && tally.disagree.is_empty();
    Outcome::new(
        pass,
        format!(
            "{} subspaces, {}/{QUERIES} queries agree ({} inside) {}",
            cases.len(),
            tally.agree,
            tally.inside,
            set_errors.join("; ")
        ),
    )
}

fn ac9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let shapes: [(Vec<usize>, Vec<usize>, usize, usize); 6] = [
        (vec![0, 1, 2], vec![1, 2, 3], 1, 2),
        (vec![0, 1, 2], vec![0, 1, 2], 2, 1),
        (vec![0, 1, 2], vec![0, 1, 2], 2, 2),
        (vec![0, 1], vec![0, 1, 2], 1, 1),
        (vec![0, 1, 2], vec![0, 1, 2], 1, 1),
        (vec![0, 1, 2], vec![2, 3], 2, 1),
    ];
    let mut cases = Vec::new();
    let mut set_errors = Vec::new();
    for (lambda, tau) in [(1, 1), (1, 2), (2, 3)] {
        for (ai, aj, h1, h2) in &shapes {
            let v = random_general_subspace(ai, *h1, &mut rng);
            let w = random_general_subspace(aj, *h2, &mut rng);
            let predicted = pair_closure_orbit_set(&v, &w, lambda, tau).unwrap();
            let brute = brute_force_pair_closure(&v, &w, lambda, tau, BRUTE_BOUND).unwrap();
            if predicted != brute {
                set_errors.push(format!("λ={lambda} τ={tau} I={ai:?} J={aj:?}"));
            }
            cases.push((lambda, tau, v, w, brute));
        }
    }
    let mut tally = Tally::default();
    for k in 0..QUERIES {
        let (lambda, tau, v, w, brute) = &cases[k % cases.len()];
        let (ai, aj) = (&v.ambient, &w.ambient);
        let (h1, h2) = (v.dim(), w.dim());
        let degenerate_pair = |v: &Subspace, w: &Subspace, rng: &mut ChaCha8Rng| {
            let ts = pair_closure_tripartitions(v, w);
            let (ti, tj) = pick(&ts, rng);
            (tripartition_degenerate(v, ti).unwrap(), tripartition_degenerate(w, tj).unwrap())
        };
        let (v1, w1) = match (k / cases.len()) % 5 {
            0 => {
                let (a, b) = degenerate_pair(v, w, &mut rng);
                let (s, t) = sample_pair_torus(ai, aj, *lambda, *tau, &mut rng);
                (a.act(&s), b.act(&t))
            }
            1 => {
                // a torus element that need not lie in the pair torus
                let (a, b) = degenerate_pair(v, w, &mut rng);
                (a.act(&random_torus(ai.len(), &mut rng)), b.act(&random_torus(aj.len(), &mut rng)))
            }
            2 => {
                let v2 = random_general_subspace(ai, h1, &mut rng);
                let w2 = random_general_subspace(aj, h2, &mut rng);
                degenerate_pair(&v2, &w2, &mut rng)
            }
            3 => {
                let (s, t) = sample_pair_torus(ai, aj, *lambda, *tau, &mut rng);
                (v.act(&s), random_general_subspace(aj, h2, &mut rng).act(&t))
            }
            _ => (sparse_subspace(ai, h1, &mut rng), sparse_subspace(aj, h2, &mut rng)),
        };
        let expected = brute.contains(&pair_orbit_fingerprint(&v1, &w1, *lambda, *tau));
        let got = in_pair_closure((&v1, &w1), (v, w), *lambda, *tau).unwrap();
        tally.record(expected, got, format!("λ={lambda} τ={tau} {:?} {:?}", v1.basis, w1.basis));
    }
    let pass = set_errors.is_empty() && tally.disagree.is_empty();
    Outcome::new(
        pass,
        format!(
            "{} pairs, {}/{QUERIES} queries agree ({} inside) {}",
            cases.len(),
            tally.agree,
            tally.inside,
            set_errors.join("; ")
        ),
    )
}

fn ac10() -> Outcome {
    let configs = [(0, 0), (1, 1), (0, 3), (2, 4), (3, 3)];
    let mut bad = Vec::new();
    let mut strata = 0;
    for (gx, gy) in configs {
        let c = cfg(gx, gy, 3);
        let all = enumerate_strata(&c, opts()).unwrap();
        strata += all.len();
        let reports: Vec<_> = all
            .par_iter()
            .enumerate()
            .map(|(k, s)| {
                let mut rng = ChaCha8Rng::seed_from_u64(110 + k as u64);
                neighborhood_sample_check(&c, s, NEIGHBOURHOOD_SAMPLES, &mut rng).unwrap()
            })
            .collect();
        for (s, r) in all.iter().zip(&reports) {
            if !r.violations.is_empty() || !r.constructive_misses.is_empty() {
                bad.push(format!("({gx},{gy}) {:?} dim {}", key(&c, s), stratum_dim(&c, s).dim));
            }
        }
    }
    Outcome::new(bad.is_empty(), format!("{strata} strata × {NEIGHBOURHOOD_SAMPLES} samples {}", bad.join("; ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 10] = [
        ("AC1 numerical data vs scan oracle", ac1, Some(AC1_LIMIT)),
        ("AC2 δ=2 closed form", ac2, Some(AC2_LIMIT)),
        ("AC3 δ=3 component counts", ac3, Some(AC3_LIMIT)),
        ("AC4 counts when g_X g_Y = 0 or g_X = g_Y", ac4, None),
        ("AC5 pure dimension", ac5, None),
        ("AC6 multidegree pattern", ac6, None),
        ("AC7 Weierstrass degrees", ac7, None),
        ("AC8 orbit closure", ac8, Some(AC8_LIMIT)),
        ("AC9 pair orbit closure", ac9, None),
        ("AC10 neighbourhood sampling", ac10, None),
    ];
    let mut unexpected = 0;
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let mut out = f();
        let took = start.elapsed();
        if let Some(l) = limit {
            if took > l {
                out.pass = false;
                out.known = false;
                out.detail.push_str(&format!("; over the {} s limit", l.as_secs()));
            }
        }
        let status = if out.pass { "PASS" } else { "FAIL" };
        println!("{status} {name} [{:.2} s] {}", took.as_secs_f64(), out.detail.trim_end());
        if !out.pass && out.known {
            println!("     known: at g_X = g_Y = 0 the variety is a single point, so N = 1 while the closed form gives 0");
        } else if !out.pass {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
