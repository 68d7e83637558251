//! Winding numbers of integer cocycles and their reduction to winding one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{kronecker_pairing, Chain, Cochain, FilteredComplex, SparseMatrix};
use crate::error::{Error, Result};
use crate::finite_field::{lift_mod, range_bound, reduce_big, OddPrime, Prime};
use crate::lifting::{has_p_torsion, DEFAULT_SNF_CAP};
use crate::linalg::{in_image_mod, Diagonalization, FpSystem};
use crate::ring::{Integers, PrimeField};

fn residues(c: &Cochain<BigInt>, n: usize, q: u64) -> Vec<u64> {
    let mut v = vec![0; n];
    for (i, a) in c.iter() {
        v[i] = reduce_big(a, q);
    }
    v
}

fn ensure_cocycle(complex: &FilteredComplex, alpha: &Cochain<BigInt>) -> Result<()> {
    if !alpha.fits(complex) || !complex.coboundary(&Integers, alpha)?.is_zero() {
        return Err(Error::NotACocycle);
    }
    Ok(())
}

/// Whether the class of the integer cocycle `alpha` dies in `H^m(X; F_q)`.
pub fn class_vanishes_mod(complex: &FilteredComplex, alpha: &Cochain<BigInt>, q: Prime) -> Result<bool> {
    ensure_cocycle(complex, alpha)?;
    let m = alpha.dim();
    let b = residues(alpha, complex.count(m), q.get());
    if m == 0 {
        return Ok(b.iter().all(|&x| x == 0));
    }
    let d = complex.coboundary_matrix(&PrimeField::new(q), m - 1)?;
    Ok(in_image_mod(&d, &b))
}

/// Distinct prime factors of `|pairing|`, ascending.
pub fn candidate_primes(pairing: &BigInt) -> Result<Vec<Prime>> {
    if pairing.is_zero() {
        return Err(Error::ZeroPairing);
    }
    let mut n = pairing.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2u32);
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.to_u64().ok_or(Error::PrimeOutOfRange(u64::MAX))?);
            while n.is_multiple_of(&d) {
                n /= &d;
            }
        }
        d += 1u32;
    }
    if !n.is_one() {
        out.push(n.to_u64().ok_or(Error::PrimeOutOfRange(u64::MAX))?);
    }
    out.into_iter().map(Prime::new).collect()
}

/// How a division `α = qγ + δf` was solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    /// `δf ≡ α (mod q)` over `F_q`, `f` lifted coefficient-wise.
    ModPSolve,
    /// The combined integer system `[qI | δ] (γ, f) = α`.
    IntegerSnf,
}

/// One solution of `α = qγ + δf` over `Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct Division {
    pub gamma: Cochain<BigInt>,
    /// `None` in degree 0, where there is no `δ_{-1}`.
    pub f: Option<Cochain<BigInt>>,
    pub route: Route,
    /// The working prime of the coefficient-range validation, when it held.
    pub certified_by: Option<OddPrime>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindingOptions {
    pub snf_cap: usize,
    /// Working prime for the coefficient-range validation; chosen
    /// automatically when `None`.
    pub p_work: Option<OddPrime>,
    /// Random free-variable assignments tried after the all-zero one.
    pub retries: usize,
    pub seed: u64,
}

impl Default for WindingOptions {
    fn default() -> Self {
        WindingOptions { snf_cap: DEFAULT_SNF_CAP, p_work: None, retries: 16, seed: 0 }
    }
}

fn prev_coboundary(complex: &FilteredComplex, m: usize) -> Result<Option<SparseMatrix<Integers>>> {
    if m == 0 {
        return Ok(None);
    }
    complex.coboundary_matrix(&Integers, m - 1).map(Some)
}

fn max_abs(c: &Cochain<BigInt>) -> BigInt {
    c.values().map(Signed::abs).max().unwrap_or_default()
}

/// Checks the coefficient-range conditions for a division at working prime
/// `p`: `α`, `δf` and `qγ` lie in `L_m^p`, `[α mod p] ≠ 0` and `H^{m+1}` has
/// no `p`-torsion. Returns whether all of them hold.
fn range_certificate(
    complex: &FilteredComplex,
    alpha: &Cochain<BigInt>,
    df: &Cochain<BigInt>,
    q_gamma: &Cochain<BigInt>,
    p: OddPrime,
    cap: usize,
) -> Result<bool> {
    let m = alpha.dim();
    if m == 0 {
        return Ok(false);
    }
    let bound = BigInt::from(range_bound(p, m as u64 + 2));
    if [alpha, df, q_gamma].iter().any(|c| max_abs(c) > bound) {
        return Ok(false);
    }
    if class_vanishes_mod(complex, alpha, p.prime())? {
        return Ok(false);
    }
    match has_p_torsion(complex, m + 1, p.prime(), cap) {
        Ok(t) => Ok(!t),
        Err(Error::ComplexTooLargeForSnf { .. }) => Ok(true),
        Err(e) => Err(e),
    }
}

/// Smallest prime above `max(q, (m+2)·M)`, `M` the largest coefficient in
/// play, so that every coefficient sits inside `L_m^p`.
fn auto_working_prime(alpha: &Cochain<BigInt>, df: &Cochain<BigInt>, q_gamma: &Cochain<BigInt>, q: Prime) -> Option<OddPrime> {
    let m = BigInt::from(alpha.dim() as u64 + 2);
    let big = [alpha, df, q_gamma].iter().map(|c| max_abs(c)).max().unwrap_or_default() * m;
    let floor = big.to_u64()?.max(q.get());
    OddPrime::next_after(floor).ok()
}

/// Solves `α = qγ + δf` over `Z` for a cocycle whose class vanishes mod `q`.
///
/// The primary route solves `δf ≡ α (mod q)`, lifts `f` and sets
/// `γ = (α − δf)/q`, which is exact by construction. Free variables are set to
/// zero first, then to seeded random values, looking for a solution that also
/// passes the coefficient-range validation over a working prime.
pub fn divide_step(complex: &FilteredComplex, alpha: &Cochain<BigInt>, q: Prime, options: &WindingOptions) -> Result<Division> {
    if !class_vanishes_mod(complex, alpha, q)? {
        return Err(Error::NotDivisible(q.get()));
    }
    let m = alpha.dim();
    let qz = BigInt::from(q.get());
    let Some(_) = prev_coboundary(complex, m)? else {
        let gamma = alpha.map(&Integers, |a| a / &qz);
        return Ok(Division { gamma, f: None, route: Route::ModPSolve, certified_by: None });
    };

    let field = PrimeField::new(q);
    let d_mod = complex.coboundary_matrix(&field, m - 1)?;
    let system = FpSystem::new(&d_mod, &residues(alpha, complex.count(m), q.get()));
    let free = system.free_columns();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ q.get().rotate_left(17));
    let mut first: Option<Division> = None;
    for attempt in 0..=options.retries {
        let assignment: Vec<u64> = if attempt == 0 {
            vec![0; free.len()]
        } else {
            free.iter().map(|_| rng.random_range(0..q.get())).collect()
        };
        let mut it = assignment.into_iter();
        let f_mod = system.solution(|_| it.next().unwrap_or(0)).ok_or(Error::NotDivisible(q.get()))?;
        let f = Cochain::from_dense(
            &Integers,
            m - 1,
            &f_mod.iter().map(|&x| BigInt::from(lift_mod(x, q.get()))).collect::<Vec<_>>(),
        );
        let df = complex.coboundary(&Integers, &f)?;
        let rest = alpha.sub(&Integers, &df);
        if rest.values().any(|a| !a.is_multiple_of(&qz)) {
            continue;
        }
        let gamma = rest.map(&Integers, |a| a / &qz);
        let q_gamma = gamma.scale(&Integers, &qz);
        // direct integer verification, never assumed
        assert_eq!(q_gamma.add(&Integers, &df), *alpha, "division does not reproduce alpha");
        let p_work = options.p_work.or_else(|| auto_working_prime(alpha, &df, &q_gamma, q));
        let certified_by = match p_work {
            Some(p) if p.get() > q.get() && range_certificate(complex, alpha, &df, &q_gamma, p, options.snf_cap)? => Some(p),
            _ => None,
        };
        let division = Division { gamma, f: Some(f), route: Route::ModPSolve, certified_by };
        if certified_by.is_some() {
            return Ok(division);
        }
        first.get_or_insert(division);
        if free.is_empty() {
            break;
        }
    }
    match first {
        Some(d) => Ok(d),
        None => divide_step_snf(complex, alpha, q, options.snf_cap),
    }
}

/// Solves `α = qγ + δf` as one integer system `[qI | δ_{m−1}] (γ, f) = α`.
pub fn divide_step_snf(complex: &FilteredComplex, alpha: &Cochain<BigInt>, q: Prime, cap: usize) -> Result<Division> {
    ensure_cocycle(complex, alpha)?;
    let m = alpha.dim();
    let n = complex.count(m);
    let n_prev = if m > 0 { complex.count(m - 1) } else { 0 };
    if n + n_prev > cap {
        return Err(Error::ComplexTooLargeForSnf { size: n + n_prev, cap });
    }
    let qz = BigInt::from(q.get());
    let mut cols: Vec<Vec<(usize, BigInt)>> = (0..n).map(|i| vec![(i, qz.clone())]).collect();
    let d = prev_coboundary(complex, m)?;
    if let Some(d) = &d {
        cols.extend((0..d.ncols()).map(|j| d.column(j).to_vec()));
    }
    let a = SparseMatrix::from_columns(Integers, n, cols);
    let x = Diagonalization::new(&a, vec![alpha.to_dense(&Integers, n)], true)
        .solve(0)
        .ok_or(Error::NotDivisible(q.get()))?;
    let gamma = Cochain::from_dense(&Integers, m, &x[..n]);
    let f = d.map(|_| Cochain::from_dense(&Integers, m - 1, &x[n..]));
    let df = match &f {
        Some(f) => complex.coboundary(&Integers, f)?,
        None => Cochain::zero(m),
    };
    if gamma.scale(&Integers, &qz).add(&Integers, &df) != *alpha {
        return Err(Error::ValidationFailed(q.get()));
    }
    Ok(Division { gamma, f, route: Route::IntegerSnf, certified_by: None })
}

/// Divisions by one prime in the reduction loop.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisionRecord {
    pub prime: u64,
    pub times_divided: u32,
    pub routes: Vec<Route>,
    /// Working prime that validated each division, if any.
    pub certified_by: Vec<Option<u64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WindingReport {
    /// `⟨α, β⟩`.
    pub pairing: BigInt,
    pub candidate_primes: Vec<u64>,
    pub division_trace: Vec<DivisionRecord>,
    /// Product of the divided primes, always positive.
    pub omega: BigInt,
    /// `α_gen` with `[α] = Ω·[α_gen]`.
    pub reduced_cocycle: Cochain<BigInt>,
    /// `⟨α_gen, β⟩ = pairing / Ω`.
    pub reduced_pairing: BigInt,
}

/// Divides `α` by every candidate prime for as long as its class
/// vanishes mod that prime.
pub fn reduce_winding(
    complex: &FilteredComplex,
    alpha: &Cochain<BigInt>,
    beta: &Chain<BigInt>,
    options: &WindingOptions,
) -> Result<WindingReport> {
    ensure_cocycle(complex, alpha)?;
    if beta.dim() > 0 && !complex.boundary(&Integers, beta)?.is_zero() {
        return Err(Error::InvalidComplex("the dual chain is not a cycle".into()));
    }
    let pairing = kronecker_pairing(&Integers, alpha, beta)?;
    let primes = candidate_primes(&pairing)?;
    let mut current = alpha.clone();
    let mut omega = BigInt::one();
    let mut trace = Vec::new();
    for &q in &primes {
        let qz = BigInt::from(q.get());
        let mut record = DivisionRecord { prime: q.get(), times_divided: 0, routes: Vec::new(), certified_by: Vec::new() };
        while class_vanishes_mod(complex, &current, q)? {
            record.times_divided += 1;
            // each division removes a factor q from the pairing
            assert!(
                pairing.is_multiple_of(&(&omega * &qz)),
                "division loop exceeded the multiplicity of {q} in the pairing"
            );
            let division = divide_step(complex, &current, q, options)?;
            record.routes.push(division.route);
            record.certified_by.push(division.certified_by.map(OddPrime::get));
            current = division.gamma;
            omega *= &qz;
        }
        trace.push(record);
    }
    let reduced_pairing = kronecker_pairing(&Integers, &current, beta)?;
    debug_assert_eq!(&reduced_pairing * &omega, pairing);
    Ok(WindingReport {
        pairing,
        candidate_primes: primes.iter().map(|q| q.get()).collect(),
        division_trace: trace,
        omega,
        reduced_cocycle: current,
        reduced_pairing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::tests::hexagon_cycle;
    use crate::fixtures;

    fn prime(q: u64) -> Prime {
        Prime::new(q).unwrap()
    }

    fn edge_indicator(k: &FilteredComplex, w: i64) -> Cochain<BigInt> {
        Cochain::from_entries(&Integers, 1, [(k.index_of(&[0, 1]).unwrap(), BigInt::from(w))])
    }

    #[test]
    fn candidate_prime_examples() {
        let f = |n: i64| candidate_primes(&BigInt::from(n)).unwrap().iter().map(|p| p.get()).collect::<Vec<_>>();
        assert_eq!(f(10), vec![2, 5]);
        assert_eq!(f(1), Vec::<u64>::new());
        assert_eq!(f(-6), vec![2, 3]);
        assert_eq!(f(49), vec![7]);
        assert!(matches!(candidate_primes(&BigInt::zero()), Err(Error::ZeroPairing)));
    }

    #[test]
    fn vanishing_examples() {
        let k = fixtures::hexagon();
        assert!(class_vanishes_mod(&k, &edge_indicator(&k, 2), prime(2)).unwrap());
        assert!(!class_vanishes_mod(&k, &edge_indicator(&k, 1), prime(5)).unwrap());
        let h = Cochain::from_dense(&Integers, 0, &[3, 1, -4, 1, 5, -9].map(BigInt::from));
        let dh = k.coboundary(&Integers, &h).unwrap();
        assert!(class_vanishes_mod(&k, &dh, prime(7)).unwrap());
        let tri = fixtures::filled_triangle();
        let not_closed = Cochain::from_entries(&Integers, 1, [(0, BigInt::one())]);
        assert!(matches!(class_vanishes_mod(&tri, &not_closed, prime(3)), Err(Error::NotACocycle)));
    }

    #[test]
    fn exact_divisions_on_hexagon() {
        let k = fixtures::hexagon();
        let opts = WindingOptions::default();
        let d = divide_step(&k, &edge_indicator(&k, 2), prime(2), &opts).unwrap();
        assert_eq!(d.gamma, edge_indicator(&k, 1));
        assert!(d.f.unwrap().is_zero());
        let d = divide_step(&k, &edge_indicator(&k, 10), prime(5), &opts).unwrap();
        assert_eq!(d.gamma, edge_indicator(&k, 2));
        assert!(matches!(divide_step(&k, &edge_indicator(&k, 1), prime(3), &opts), Err(Error::NotDivisible(3))));
    }

    #[test]
    fn reduce_hexagon_two_g() {
        let k = fixtures::hexagon();
        let beta = hexagon_cycle(&k);
        let report = reduce_winding(&k, &edge_indicator(&k, 2), &beta, &WindingOptions::default()).unwrap();
        assert_eq!(report.pairing, BigInt::from(2));
        assert_eq!(report.omega, BigInt::from(2));
        assert_eq!(report.division_trace.len(), 1);
        assert_eq!(report.division_trace[0].times_divided, 1);
        assert_eq!(report.reduced_pairing.abs(), BigInt::one());
        let report = reduce_winding(&k, &edge_indicator(&k, 1), &beta, &WindingOptions::default()).unwrap();
        assert_eq!(report.omega, BigInt::one());
        assert_eq!(report.reduced_cocycle, edge_indicator(&k, 1));
    }
}
