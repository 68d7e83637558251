//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always reach the terminal.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use circlift::complex::{kronecker_pairing, Chain, Cochain, FilteredComplex};
use circlift::experiments::{sample_circle, sample_trefoil, sparsity_sweep, trend_slope};
use circlift::finite_field::{abs_p, is_prime, lift_coeff, range_bound, FpElement, OddPrime, Prime};
use circlift::fixtures;
use circlift::lifting::{cycle_index_system, lift_closed, naive_lift, scaling_search, scaling_search_graded, Certificate, LiftOptions};
use circlift::linalg::{integer_kernel, solve_integer};
use circlift::pipeline::{coordinates_from, lift_class, rips_for, PipelineConfig, Threshold};
use circlift::ring::{Integers, PrimeField};
use circlift::smoothing::{circular_correlation, components, harmonic_smooth};
use circlift::winding::{candidate_primes, class_vanishes_mod, divide_step, divide_step_snf, reduce_winding, Route, WindingOptions};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn odd(p: u64) -> OddPrime {
    OddPrime::new(p).unwrap()
}

fn ints(k: &FilteredComplex, dim: usize, entries: &[(&[usize], i64)]) -> Vec<BigInt> {
    let c: Cochain<BigInt> = k
        .graded_from_vertices(&Integers, dim, entries.iter().map(|(v, a)| (v.to_vec(), BigInt::from(*a))))
        .unwrap();
    c.to_dense(&Integers, k.count(dim))
}

fn reduces_to(lift: &[BigInt], target: &[u64], p: u64) -> bool {
    lift.iter().zip(target).all(|(a, &t)| a.mod_floor(&BigInt::from(p)) == BigInt::from(t))
}

/// `δα` on a triangle `[a, b, c]`: `α(bc) − α(ac) + α(ab)`.
fn triangle_coboundary(bc: &BigInt, ac: &BigInt, ab: &BigInt) -> BigInt {
    bc - ac + ab
}

fn criterion_1() -> Check {
    let k = fixtures::filled_triangle();
    let p = odd(7);
    let f = PrimeField::odd(p);
    let c: Cochain<u64> = k.graded_from_vertices(&f, 1, [(vec![1, 2], 3), (vec![0, 2], 4), (vec![0, 1], 1)]).unwrap();
    let at = |v: &[BigInt], s: &[usize]| v[k.index_of(s).unwrap()].clone();
    let naive = naive_lift(&c, p).to_dense(&Integers, 3);
    ensure!(naive == ints(&k, 1, &[(&[1, 2], 3), (&[0, 2], -3), (&[0, 1], 1)]), "naive lift {naive:?}");
    let d = triangle_coboundary(&at(&naive, &[1, 2]), &at(&naive, &[0, 2]), &at(&naive, &[0, 1]));
    ensure!(d == BigInt::from(7), "naive coboundary {d}");
    let report = lift_closed(&k, &c, p, LiftOptions::default()).map_err(|e| e.to_string())?;
    ensure!(report.r.value() == 2, "r = {}", report.r.value());
    let w = report.working_lift.to_dense(&Integers, 3);
    ensure!(w == ints(&k, 1, &[(&[1, 2], -1), (&[0, 2], 1), (&[0, 1], 2)]), "working lift {w:?}");
    ensure!(triangle_coboundary(&at(&w, &[1, 2]), &at(&w, &[0, 2]), &at(&w, &[0, 1])).is_zero(), "working lift not closed");
    let e = report.exact_preimage.to_dense(&Integers, 3);
    ensure!(e == ints(&k, 1, &[(&[1, 2], -4), (&[0, 2], 4), (&[0, 1], 8)]), "exact preimage {e:?}");
    ensure!(triangle_coboundary(&at(&e, &[1, 2]), &at(&e, &[0, 2]), &at(&e, &[0, 1])).is_zero(), "preimage not closed");
    ensure!(reduces_to(&e, &c.to_dense(&f, 3), 7), "preimage does not reduce to the input");
    Ok("r=2, working (-1,1,2), preimage (-4,4,8)".into())
}

fn criterion_2() -> Check {
    let k = fixtures::square_with_diagonals();
    let p = odd(7);
    let f = PrimeField::odd(p);
    let edges: [(&[usize], i64); 6] = [(&[0, 1], 3), (&[1, 2], 2), (&[2, 3], 3), (&[0, 3], 3), (&[0, 2], 1), (&[1, 3], 1)];
    let c: Chain<u64> = k.graded_from_vertices(&f, 1, edges.map(|(v, a)| (v.to_vec(), a as u64))).unwrap();
    // ∂ of the naive lift, by hand: each edge [u, v] contributes −a at u and +a at v
    let naive = naive_lift(&c, p);
    let mut bd = [0i64; 4];
    for (v, a) in edges {
        bd[v[0]] -= a;
        bd[v[1]] += a;
    }
    ensure!(bd == [-7, 0, 0, 7], "hand boundary {bd:?}");
    let computed = k.boundary(&Integers, &naive).unwrap().to_dense(&Integers, 4);
    ensure!(computed == bd.map(BigInt::from).to_vec(), "library boundary {computed:?}");
    let sys = cycle_index_system(&k, &c, p).map_err(|e| e.to_string())?;
    ensure!(scaling_search_graded(&c, &sys, p).is_none(), "scaling search found a scalar");
    let report = lift_closed(&k, &c, p, LiftOptions::default()).map_err(|e| e.to_string())?;
    ensure!(report.certificate == Certificate::VerifiedOnly, "certificate {:?}", report.certificate);
    ensure!(report.r.value() == 2, "r = {}", report.r.value());
    ensure!(k.boundary(&Integers, &report.exact_preimage).unwrap().is_zero(), "preimage is not a cycle");
    let e = report.exact_preimage.to_dense(&Integers, 6);
    ensure!(reduces_to(&e, &c.to_dense(&f, 6), 7), "preimage does not reduce to the input");
    Ok("boundary -7a+7d, search exhausted, verify-only at r=2".into())
}

fn criterion_3() -> Check {
    let mut total = 0u64;
    for n in 1..=3u32 {
        let kn = 3u64.pow(n);
        let p = (kn + 2..).find(|&p| is_prime(p)).unwrap();
        let q = odd(p);
        let bounds = vec![range_bound(q, 3); n as usize];
        for code in 0..p.pow(n) {
            let v: Vec<u64> = (0..n).map(|i| code / p.pow(i) % p).collect();
            ensure!(scaling_search(&v, &bounds, q).is_some(), "{v:?} over F_{p} has no scalar");
            total += 1;
        }
    }
    Ok(format!("{total} vectors over F_5, F_11, F_29"))
}

fn criterion_4() -> Check {
    let mut slopes = Vec::new();
    for seed in 0..5 {
        let rows = sparsity_sweep(6, 13, 293, 10_000, 3, seed).map_err(|e| e.to_string())?;
        let s = trend_slope(&rows);
        ensure!(s <= 0.0, "seed {seed}: slope {s}");
        slopes.push(s);
    }
    let spot = sparsity_sweep(6, 739, 739, 10_000, 3, 0).map_err(|e| e.to_string())?;
    ensure!(spot.len() == 1 && spot[0].proportion == 0.0, "p=739 proportion {:?}", spot.first().map(|r| r.proportion));
    Ok(format!("slopes {:?}, p=739 proportion 0", slopes.iter().map(|s| format!("{s:.2e}")).collect::<Vec<_>>()))
}

fn random_coboundary(rng: &mut ChaCha8Rng, k: &FilteredComplex, m: usize, r: i64) -> Cochain<BigInt> {
    let h: Vec<BigInt> = (0..k.count(m - 1)).map(|_| BigInt::from(rng.random_range(-r..=r))).collect();
    k.coboundary(&Integers, &Cochain::from_dense(&Integers, m - 1, &h)).unwrap()
}

fn is_integer_coboundary(k: &FilteredComplex, a: &Cochain<BigInt>) -> bool {
    let d = k.coboundary_matrix(&Integers, a.dim() - 1).unwrap();
    solve_integer(&d, &a.to_dense(&Integers, k.count(a.dim()))).is_some()
}

fn criterion_5() -> Check {
    let k = fixtures::hexagon();
    let g = fixtures::wrap_cocycle(&k, 6);
    let beta = fixtures::loop_cycle(&k, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for w in [1i64, 2, 5, 10] {
        for _ in 0..20 {
            let alpha = g.scale(&Integers, &BigInt::from(w)).add(&Integers, &random_coboundary(&mut rng, &k, 1, 5));
            let pairing = kronecker_pairing(&Integers, &alpha, &beta).unwrap();
            ensure!(pairing.abs() == BigInt::from(w), "pairing {pairing} for w={w}");
            let report = reduce_winding(&k, &alpha, &beta, &WindingOptions::default()).map_err(|e| e.to_string())?;
            ensure!(report.omega == BigInt::from(w), "omega {} for w={w}", report.omega);
            ensure!(report.reduced_pairing.abs().is_one(), "reduced pairing {}", report.reduced_pairing);
            for q in candidate_primes(&BigInt::from(w)).unwrap() {
                ensure!(!class_vanishes_mod(&k, &report.reduced_cocycle, q).unwrap(), "vanishes mod {}", q.get());
            }
        }
    }
    Ok("80 representatives, omega = w".into())
}

fn criterion_6() -> Check {
    let mut done = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(600 + seed);
        let n = 4 + seed as usize % 7;
        let k = fixtures::random_flag(&mut rng, n, 0.5, 2);
        let mut gamma0 = Cochain::zero(1);
        for v in integer_kernel(&k.coboundary_matrix(&Integers, 1).unwrap()) {
            let c = BigInt::from(rng.random_range(-3..=3));
            gamma0 = gamma0.add(&Integers, &Cochain::from_dense(&Integers, 1, &v).scale(&Integers, &c));
        }
        let q = Prime::new([2, 3, 5, 7][seed as usize % 4]).unwrap();
        let qz = BigInt::from(q.get());
        let alpha = gamma0.scale(&Integers, &qz).add(&Integers, &random_coboundary(&mut rng, &k, 1, 5));
        let modp = divide_step(&k, &alpha, q, &WindingOptions::default()).map_err(|e| e.to_string())?;
        ensure!(modp.route == Route::ModPSolve, "seed {seed}: route {:?}", modp.route);
        let f = modp.f.as_ref().ok_or("mod-p route without f")?;
        let df = k.coboundary(&Integers, f).unwrap();
        ensure!(modp.gamma.scale(&Integers, &qz).add(&Integers, &df) == alpha, "seed {seed}: α ≠ qγ + δf");
        let snf = divide_step_snf(&k, &alpha, q, 1500).map_err(|e| e.to_string())?;
        let diff = modp.gamma.sub(&Integers, &snf.gamma);
        ensure!(diff.is_zero() || is_integer_coboundary(&k, &diff), "seed {seed}: classes differ");
        done += 1;
    }
    Ok(format!("{done} complexes"))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 100 {
        let k = fixtures::random_rips(&mut rng, 6 + done % 10, 2);
        if components(&k).iter().any(|&c| c != 0) {
            continue;
        }
        let mut alpha = Cochain::zero(1);
        for v in integer_kernel(&k.coboundary_matrix(&Integers, 1).unwrap()) {
            let c = BigInt::from(rng.random_range(-4..=4));
            alpha = alpha.add(&Integers, &Cochain::from_dense(&Integers, 1, &v).scale(&Integers, &c));
        }
        let s = harmonic_smooth(&k, &alpha).map_err(|e| e.to_string())?;
        let d0 = k.coboundary_matrix(&Integers, 0).unwrap().to_dense();
        let d0: Vec<Vec<f64>> = d0.iter().map(|row| row.iter().map(|x| x.to_f64().unwrap()).collect()).collect();
        let (nv, ne) = (k.count(0), k.count(1));
        let a: Vec<f64> = alpha.to_dense(&Integers, ne).iter().map(|x| x.to_f64().unwrap()).collect();
        let adjoint = |x: &[f64]| -> Vec<f64> { (0..nv).map(|v| (0..ne).map(|e| d0[e][v] * x[e]).sum()).collect() };
        let apply = |f: &[f64]| -> Vec<f64> { (0..ne).map(|e| (0..nv).map(|v| d0[e][v] * f[v]).sum()).collect() };
        let norm = |x: &[f64]| x.iter().map(|y| y * y).sum::<f64>().sqrt();
        let rel = norm(&adjoint(&s.alpha_tilde)) / norm(&adjoint(&a)).max(f64::MIN_POSITIVE);
        ensure!(rel <= 1e-9 || norm(&adjoint(&s.alpha_tilde)) <= 1e-12, "relative residual {rel}");
        let df = apply(&s.potential);
        ensure!((0..ne).all(|e| (s.alpha_tilde[e] - a[e] - df[e]).abs() < 1e-9), "α̃ − α is not δ₀f");
        let best = norm(&s.alpha_tilde);
        for _ in 0..100 {
            let f: Vec<f64> = (0..nv).map(|_| rng.random_range(-3..=3) as f64).collect();
            let moved: Vec<f64> = a.iter().zip(apply(&f)).map(|(x, y)| x + y).collect();
            ensure!(best <= norm(&moved) + 1e-9, "perturbation beats the harmonic representative");
        }
        done += 1;
    }
    Ok("100 complexes, 10000 perturbations".into())
}

fn truth_map(turns: &[f64]) -> BTreeMap<usize, f64> {
    turns.iter().copied().enumerate().collect()
}

fn criterion_8() -> Check {
    let (points, turns) = sample_circle(60, 0.0, 300, 8).map_err(|e| e.to_string())?;
    let truth = truth_map(&turns);
    let config = PipelineConfig { prime: odd(47), ..PipelineConfig::default() };
    let complex = rips_for(&points, &config).map_err(|e| e.to_string())?;
    let lifted = lift_class(&complex, &config).map_err(|e| e.to_string())?;
    let beta = &lifted.cycle_lift.exact_preimage;
    let full = coordinates_from(&lifted.complex, &lifted.cocycle_lift.exact_preimage, beta, &config).map_err(|e| e.to_string())?;
    let c1 = circular_correlation(&full.coords, &truth).unwrap();
    ensure!(c1 >= 0.99, "pipeline correlation {c1}");

    let g = &full.winding.as_ref().unwrap().reduced_cocycle;
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let three = g.scale(&Integers, &BigInt::from(3)).add(&Integers, &random_coboundary(&mut rng, &lifted.complex, 1, 5));
    let skip = PipelineConfig { reduce_winding: false, ..config.clone() };
    let raw = coordinates_from(&lifted.complex, &three, beta, &skip).map_err(|e| e.to_string())?;
    let c3 = circular_correlation(&raw.coords, &truth).unwrap();
    ensure!(c3 < 0.9, "winding-3 correlation without reduction {c3}");
    let fixed = coordinates_from(&lifted.complex, &three, beta, &config).map_err(|e| e.to_string())?;
    let omega = &fixed.winding.as_ref().unwrap().omega;
    let cr = circular_correlation(&fixed.coords, &truth).unwrap();
    ensure!(cr >= 0.99, "winding-3 correlation after reduction {cr} (omega {omega})");
    Ok(format!("correlation {c1:.4}; winding 3 unreduced {c3:.4}, reduced {cr:.4}"))
}

fn criterion_9() -> Check {
    let points = sample_trefoil(200, 0.0, 9).map_err(|e| e.to_string())?;
    let config = PipelineConfig { threshold: Threshold::Value(1.0), ..PipelineConfig::default() };
    let complex = rips_for(&points, &config).map_err(|e| e.to_string())?;
    let lifted = lift_class(&complex, &config).map_err(|e| e.to_string())?;
    let pairs = lifted.diagram.pairs(1);
    let top = pairs[0].persistence();
    let runner_up = pairs.get(1).map_or(0.0, |p| p.persistence());
    ensure!(top > 2.0 * runner_up, "no dominant interval: {top} vs {runner_up}");
    let sub = &lifted.complex;
    let beta = &lifted.cycle_lift.exact_preimage;
    let report = reduce_winding(sub, &lifted.cocycle_lift.exact_preimage, beta, &WindingOptions::default()).map_err(|e| e.to_string())?;
    for &q in &report.candidate_primes {
        let vanishes = class_vanishes_mod(sub, &report.reduced_cocycle, Prime::new(q).unwrap()).unwrap();
        ensure!(!vanishes, "reduced class vanishes mod {q}");
    }
    let again = reduce_winding(sub, &report.reduced_cocycle, beta, &WindingOptions::default()).map_err(|e| e.to_string())?;
    ensure!(again.omega.is_one(), "final cocycle has omega {}", again.omega);
    Ok(format!("dominant interval [{:.3}, {}), omega {} -> 1", pairs[0].birth, pairs[0].death, report.omega))
}

fn criterion_10() -> Check {
    let mut count = 0;
    for p in (3..=101u64).filter(|&p| is_prime(p)) {
        for x in 0..p {
            let e = FpElement::new(x, odd(p));
            let oracle = x.min(p - x);
            ensure!(lift_coeff(e).unsigned_abs() == abs_p(e) && abs_p(e) == oracle, "x={x} p={p}");
            count += 1;
        }
    }
    Ok(format!("{count} elements"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 10] = [
        ("1 triangle regression", Duration::from_secs(1), criterion_1),
        ("2 square-with-diagonals regression", Duration::from_secs(1), criterion_2),
        ("3 pigeonhole exhaustiveness", Duration::from_secs(120), criterion_3),
        ("4 sparsity sweep", Duration::from_secs(300), criterion_4),
        ("5 winding divisibility and reduction", Duration::from_secs(10), criterion_5),
        ("6 mod-q division vs SNF", Duration::from_secs(120), criterion_6),
        ("7 smoothing characterization", Duration::from_secs(60), criterion_7),
        ("8 end-to-end circle", Duration::from_secs(60), criterion_8),
        ("9 trefoil", Duration::from_secs(120), criterion_9),
        ("10 norm preservation", Duration::from_secs(1), criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, limit, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  criterion {name} ({elapsed:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
