use circlift::complex::{build_rips, kronecker_pairing, Cochain, FilteredComplex};
use circlift::finite_field::Prime;
use circlift::fixtures;
use circlift::linalg::{integer_kernel, solve_integer};
use circlift::ring::{Integers, PrimeField};
use circlift::winding::{
    candidate_primes, class_vanishes_mod, divide_step, divide_step_snf, reduce_winding, Route, WindingOptions,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn prime(q: u64) -> Prime {
    Prime::new(q).unwrap()
}

fn random_coboundary(rng: &mut ChaCha8Rng, k: &FilteredComplex, m: usize, r: i64) -> Cochain<BigInt> {
    let h: Vec<BigInt> = (0..k.count(m - 1)).map(|_| BigInt::from(rng.random_range(-r..=r))).collect();
    k.coboundary(&Integers, &Cochain::from_dense(&Integers, m - 1, &h)).unwrap()
}

/// `a` is an integer coboundary, certified by an exact integer solve.
fn is_integer_coboundary(k: &FilteredComplex, a: &Cochain<BigInt>) -> bool {
    let d = k.coboundary_matrix(&Integers, a.dim() - 1).unwrap();
    solve_integer(&d, &a.to_dense(&Integers, k.count(a.dim()))).is_some()
}

fn circle_complex(n: usize, threshold: f64) -> FilteredComplex {
    build_rips(&fixtures::circle_points(n), threshold, 2).unwrap()
}

#[test]
fn winding_divides_pairing() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (k, n) in [(fixtures::hexagon(), 6), (circle_complex(24, 0.6), 24)] {
        let g = fixtures::wrap_cocycle(&k, n);
        let beta = fixtures::loop_cycle(&k, n);
        assert_eq!(kronecker_pairing(&Integers, &g, &beta).unwrap(), BigInt::one());
        for w in [1i64, 2, 3, 5, 10] {
            for _ in 0..100 {
                let alpha = g.scale(&Integers, &BigInt::from(w)).add(&Integers, &random_coboundary(&mut rng, &k, 1, 5));
                let pairing = kronecker_pairing(&Integers, &alpha, &beta).unwrap();
                assert_eq!(pairing, BigInt::from(w));
            }
        }
    }
}

#[test]
fn reduce_winding_ten() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (k, n) in [(fixtures::hexagon(), 6), (circle_complex(30, 0.5), 30)] {
        let g = fixtures::wrap_cocycle(&k, n);
        let beta = fixtures::loop_cycle(&k, n);
        for _ in 0..10 {
            let alpha = g.scale(&Integers, &BigInt::from(10)).add(&Integers, &random_coboundary(&mut rng, &k, 1, 5));
            let report = reduce_winding(&k, &alpha, &beta, &WindingOptions::default()).unwrap();
            assert_eq!(report.omega, BigInt::from(10));
            assert_eq!(report.candidate_primes, vec![2, 5]);
            assert_eq!(report.division_trace.iter().map(|r| (r.prime, r.times_divided)).collect::<Vec<_>>(), vec![(2, 1), (5, 1)]);
            assert_eq!(report.reduced_pairing.abs(), BigInt::one());
            for &q in &report.candidate_primes {
                assert!(!class_vanishes_mod(&k, &report.reduced_cocycle, prime(q)).unwrap());
            }
            let diff = alpha.sub(&Integers, &report.reduced_cocycle.scale(&Integers, &report.omega));
            assert!(is_integer_coboundary(&k, &diff));
        }
    }
}

#[test]
fn hexagon_two_g_matches_enumeration_mod_two() {
    // enumerate δh for all 2^6 vertex cochains h over F_2
    let k = fixtures::hexagon();
    let f2 = PrimeField::new(prime(2));
    let mut coboundaries = std::collections::BTreeSet::new();
    for code in 0..64u64 {
        let h: Vec<u64> = (0..6).map(|i| code >> i & 1).collect();
        let dh = k.coboundary(&f2, &Cochain::from_dense(&f2, 0, &h)).unwrap();
        coboundaries.insert(dh.to_dense(&f2, 6));
    }
    assert_eq!(coboundaries.len(), 32);
    let g = fixtures::wrap_cocycle(&k, 6);
    let beta = fixtures::loop_cycle(&k, 6);
    let alpha = g.scale(&Integers, &BigInt::from(2));
    let report = reduce_winding(&k, &alpha, &beta, &WindingOptions::default()).unwrap();
    assert_eq!(report.omega, BigInt::from(2));
    let parity = |c: &Cochain<BigInt>| -> Vec<u64> {
        c.to_dense(&Integers, 6).iter().map(|a| u64::from(!(a % 2i32).is_zero())).collect()
    };
    assert!(coboundaries.contains(&parity(&alpha)));
    assert!(!coboundaries.contains(&parity(&report.reduced_cocycle)));
}

#[test]
fn circle_sample_divides_to_generator() {
    let k = circle_complex(60, 0.3);
    let g = fixtures::wrap_cocycle(&k, 60);
    let beta = fixtures::loop_cycle(&k, 60);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..5 {
        let alpha = g.scale(&Integers, &BigInt::from(2)).add(&Integers, &random_coboundary(&mut rng, &k, 1, 4));
        let d = divide_step(&k, &alpha, prime(2), &WindingOptions::default()).unwrap();
        assert_eq!(kronecker_pairing(&Integers, &d.gamma, &beta).unwrap().abs(), BigInt::one());
        let df = k.coboundary(&Integers, d.f.as_ref().unwrap()).unwrap();
        assert_eq!(d.gamma.scale(&Integers, &BigInt::from(2)).add(&Integers, &df), alpha);
        assert!(!class_vanishes_mod(&k, &d.gamma, prime(2)).unwrap());
    }
}

#[test]
fn mod_route_agrees_with_integer_route() {
    let mut trials = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 4 + seed as usize % 7;
        let k = fixtures::random_flag(&mut rng, n, 0.5, 2);
        if k.count(1) == 0 {
            continue;
        }
        let kernel = integer_kernel(&k.coboundary_matrix(&Integers, 1).unwrap());
        let mut gamma0 = Cochain::zero(1);
        for v in &kernel {
            let c = BigInt::from(rng.random_range(-3..=3));
            gamma0 = gamma0.add(&Integers, &Cochain::from_dense(&Integers, 1, v).scale(&Integers, &c));
        }
        let q = prime([2, 3, 5, 7][seed as usize % 4]);
        let qz = BigInt::from(q.get());
        let alpha = gamma0.scale(&Integers, &qz).add(&Integers, &random_coboundary(&mut rng, &k, 1, 5));
        let modp = divide_step(&k, &alpha, q, &WindingOptions::default()).unwrap();
        assert_eq!(modp.route, Route::ModPSolve);
        let df = k.coboundary(&Integers, modp.f.as_ref().unwrap()).unwrap();
        assert_eq!(modp.gamma.scale(&Integers, &qz).add(&Integers, &df), alpha);
        let snf = divide_step_snf(&k, &alpha, q, 1500).unwrap();
        assert_eq!(snf.route, Route::IntegerSnf);
        // both quotients represent the same integer class
        let diff = modp.gamma.sub(&Integers, &snf.gamma);
        assert!(diff.is_zero() || is_integer_coboundary(&k, &diff));
        trials += 1;
    }
    assert!(trials >= 190);
}

#[test]
fn pairings_drop_by_q() {
    let k = fixtures::hexagon();
    let g = fixtures::wrap_cocycle(&k, 6);
    let beta = fixtures::loop_cycle(&k, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for q in [2u64, 3, 5, 7] {
        let alpha = g.scale(&Integers, &BigInt::from(q * 3)).add(&Integers, &random_coboundary(&mut rng, &k, 1, 5));
        let d = divide_step(&k, &alpha, prime(q), &WindingOptions::default()).unwrap();
        let before = kronecker_pairing(&Integers, &alpha, &beta).unwrap();
        let after = kronecker_pairing(&Integers, &d.gamma, &beta).unwrap();
        assert_eq!(after * BigInt::from(q), before);
    }
    assert_eq!(candidate_primes(&BigInt::from(-60)).unwrap().iter().map(|p| p.get()).collect::<Vec<_>>(), vec![2, 3, 5]);
}
