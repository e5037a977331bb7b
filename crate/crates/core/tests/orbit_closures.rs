use limcan::grassmann::*;
use limcan::poset::closure_of;
use limcan::rational::qvec;
use limcan::strata::stratum_of;
use limcan::CurveConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn single_closure_equals_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (n, h) in [(3, 1), (4, 1), (4, 2), (5, 2), (5, 3)] {
        let amb: Vec<usize> = (0..n).collect();
        let v = random_general_subspace(&amb, h, &mut rng);
        let predicted = closure_orbit_set(&v).unwrap();
        let brute = brute_force_closure(&v, 2).unwrap();
        assert_eq!(predicted, brute, "n={n} h={h}");
    }
}

#[test]
fn pair_closure_equals_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (lambda, tau) in [(1, 1), (1, 2), (2, 3)] {
        for (ai, aj, h1, h2) in [
            (vec![0, 1, 2], vec![1, 2, 3], 1, 2),
            (vec![0, 1, 2], vec![0, 1, 2], 2, 1),
            (vec![0, 1], vec![0, 1, 2], 1, 1),
        ] {
            let v = random_general_subspace(&ai, h1, &mut rng);
            let w = random_general_subspace(&aj, h2, &mut rng);
            let predicted = pair_closure_orbit_set(&v, &w, lambda, tau).unwrap();
            let brute = brute_force_pair_closure(&v, &w, lambda, tau, 3).unwrap();
            assert_eq!(predicted, brute, "λ={lambda} τ={tau} I={ai:?} J={aj:?}");
        }
    }
}

#[test]
fn pair_torus_orientation() {
    // the stratum torus is s_p^β̃ = t_p^α̃, which is λ = α̃, τ = β̃
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (at, bt) = (2, 3);
    let ai = vec![0, 1, 2];
    let aj = vec![0, 1, 2];
    let v = random_general_subspace(&ai, 1, &mut rng);
    let w = random_general_subspace(&aj, 2, &mut rng);
    let mut swapped_rejects = 0;
    for _ in 0..10 {
        let (s, t) = sample_pair_torus(&ai, &aj, at, bt, &mut rng);
        for (x, y) in s.iter().zip(&t) {
            assert_eq!(x.pow(bt as i32), y.pow(at as i32));
        }
        let (v1, w1) = (v.act(&s), w.act(&t));
        assert!(in_pair_closure((&v1, &w1), (&v, &w), at, bt).unwrap());
        if !in_pair_closure((&v1, &w1), (&v, &w), bt, at).unwrap() {
            swapped_rejects += 1;
        }
    }
    assert!(swapped_rejects > 0);
}

#[test]
fn pair_closure_matches_stratum_closure() {
    // one orbit of degenerate pairs per stratum in the closure
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = CurveConfig::new(2, 4, 3).unwrap();
    for mu in [[1, 1, 1], [2, 3, 5], [1, 2, 2], [3, 2, 1]] {
        let s = stratum_of(&cfg, &qvec(&mu)).unwrap();
        let i = s.i.to_vec();
        let j = s.j.to_vec();
        let h1 = (cfg.g_y + s.i.len() as i64 - s.alpha_sum()) as usize;
        let h2 = (cfg.g_x + s.j.len() as i64 - s.beta_sum()) as usize;
        let v = random_general_subspace(&i, h1, &mut rng);
        let w = random_general_subspace(&j, h2, &mut rng);
        let (at, bt) = (s.alpha_tilde.unwrap(), s.beta_tilde.unwrap());
        let orbits = pair_closure_orbit_set(&v, &w, at, bt).unwrap();
        assert_eq!(orbits.len(), closure_of(&cfg, &s).len(), "μ={mu:?}");
    }
}
