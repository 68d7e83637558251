//! Lifting closed (co)chains from `F_p` to the integers.
//!
//! The main route scales the input by some `r ∈ F_p^*` until every
//! coefficient sits inside the range certified by the relations it takes
//! part in; a coefficient-wise lift of the scaled vector is then closed over
//! `Z`. Inputs that fail the certificate are swept for a lift that happens to
//! close, and as a last resort repaired with an integer linear solve.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{FilteredComplex, Graded, Grading, SparseMatrix};
use crate::error::{Error, Result};
use crate::finite_field::{abs_mod, inv_mod, lift_mod, mul_mod, reduce_big, range_bound, FpElement, OddPrime, Prime};
use crate::linalg::{elementary_divisors, Diagonalization};
use crate::ring::{Integers, PrimeField};

/// Default bound on the number of simplices an integer solve may touch.
pub const DEFAULT_SNF_CAP: usize = 1500;

/// Coefficient-wise symmetric lift of a mod-`p` (co)chain.
pub fn naive_lift<G: Grading>(c: &Graded<u64, G>, p: OddPrime) -> Graded<BigInt, G> {
    c.map(&Integers, |&a| BigInt::from(lift_mod(a, p.get())))
}

/// `r · c` over `F_p`.
pub fn scale_mod<G: Grading>(c: &Graded<u64, G>, r: u64, p: OddPrime) -> Graded<u64, G> {
    c.map(&PrimeField::odd(p), |&a| mul_mod(a, r, p.get()))
}

/// One linear relation `Σ sign_j c_j ≡ 0 (mod p)` among support positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    /// Dimension and index of the simplex the relation comes from: the coface
    /// for a cocycle, the face for a cycle.
    pub anchor: (usize, usize),
    /// `(simplex index, sign)` of every support position in the relation.
    pub members: Vec<(usize, i8)>,
}

/// The relations imposed by closedness on a (co)chain's support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSystem {
    pub sets: Vec<IndexSet>,
}

impl IndexSystem {
    /// Per-position bound: the minimum of `⌊(p−1)/|I|⌋` over the sets
    /// containing the position, `(p−1)/2` if it lies in none.
    pub fn bounds(&self, support: impl IntoIterator<Item = usize>, p: OddPrime) -> BTreeMap<usize, u64> {
        let mut out: BTreeMap<usize, u64> = support.into_iter().map(|j| (j, p.half())).collect();
        for set in &self.sets {
            let b = range_bound(p, set.members.len() as u64);
            for &(j, _) in &set.members {
                if let Some(x) = out.get_mut(&j) {
                    *x = (*x).min(b);
                }
            }
        }
        out
    }
}

fn relation_sum(members: &[(usize, i8)], values: &BTreeMap<usize, u64>, p: u64) -> u64 {
    members.iter().fold(0, |acc, &(j, s)| {
        let v = values[&j];
        if s > 0 {
            (acc + v) % p
        } else {
            (acc + p - v) % p
        }
    })
}

/// The relations `Σ_σ [σ:τ] c(σ) = 0` of a mod-`p` cocycle (one per coface
/// `τ` touching the support) or cycle (one per face `τ`).
pub fn index_system<G: Grading>(complex: &FilteredComplex, c: &Graded<u64, G>, p: OddPrime) -> Result<IndexSystem> {
    let m = c.dim();
    if m > complex.top_dim() || !c.fits(complex) {
        return Err(Error::DimensionOutOfRange { dim: m, max: complex.top_dim() });
    }
    let mut groups: BTreeMap<usize, Vec<(usize, i8)>> = BTreeMap::new();
    for j in c.support() {
        if G::IS_COCHAIN {
            if m < complex.top_dim() {
                for &(t, pos) in complex.cofaces_of(m, j) {
                    groups.entry(t).or_default().push((j, if pos % 2 == 0 { 1 } else { -1 }));
                }
            }
        } else {
            for (pos, &t) in complex.faces_of(m, j).iter().enumerate() {
                groups.entry(t).or_default().push((j, if pos % 2 == 0 { 1 } else { -1 }));
            }
        }
    }
    let anchor_dim = if G::IS_COCHAIN { m + 1 } else { m.wrapping_sub(1) };
    let values: BTreeMap<usize, u64> = c.iter().map(|(j, &a)| (j, a)).collect();
    let mut sets = Vec::with_capacity(groups.len());
    for (t, members) in groups {
        let s = relation_sum(&members, &values, p.get());
        if s != 0 {
            return Err(Error::NotClosed(complex.simplex(anchor_dim, t).vertices().to_vec(), s));
        }
        sets.push(IndexSet { anchor: (anchor_dim, t), members });
    }
    Ok(IndexSystem { sets })
}

pub fn cocycle_index_system(complex: &FilteredComplex, c: &crate::complex::Cochain<u64>, p: OddPrime) -> Result<IndexSystem> {
    index_system(complex, c, p)
}

pub fn cycle_index_system(complex: &FilteredComplex, c: &crate::complex::Chain<u64>, p: OddPrime) -> Result<IndexSystem> {
    index_system(complex, c, p)
}

/// Smallest `r ∈ {1, …, p−1}` with `|r·c_j|_p <= bounds_j` for every `j`.
pub fn scaling_search(values: &[u64], bounds: &[u64], p: OddPrime) -> Option<FpElement> {
    assert_eq!(values.len(), bounds.len(), "one bound per coefficient");
    let q = p.get();
    (1..q)
        .find(|&r| values.iter().zip(bounds).all(|(&a, &b)| abs_mod(mul_mod(a, r, q), q) <= b))
        .map(|r| FpElement::new(r, p))
}

/// [`scaling_search`] on a (co)chain with bounds from its index system.
pub fn scaling_search_graded<G: Grading>(c: &Graded<u64, G>, system: &IndexSystem, p: OddPrime) -> Option<FpElement> {
    let bounds = system.bounds(c.support(), p);
    let (values, bounds): (Vec<u64>, Vec<u64>) = c.iter().map(|(j, &a)| (a, bounds[&j])).unzip();
    scaling_search(&values, &bounds, p)
}

/// How a lift was obtained, strongest guarantee first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    /// Every scaled coefficient lies in `L_m^p`, closedness guaranteed.
    InRange,
    /// Per-position bounds from the coface relations, closedness guaranteed.
    IndexSets,
    /// Per-face bounds for a cycle, closedness guaranteed.
    PerFaceRange,
    /// No certificate; the lift was checked to be closed.
    VerifiedOnly,
    /// Repaired by an integer solve.
    SnfRepaired,
}

impl Certificate {
    pub fn is_guaranteed(self) -> bool {
        matches!(self, Certificate::InRange | Certificate::IndexSets | Certificate::PerFaceRange)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftReport<G> {
    pub prime: OddPrime,
    pub input: Graded<u64, G>,
    pub r: FpElement,
    /// Lift of `r · input`.
    pub working_lift: Graded<BigInt, G>,
    /// `r^{-1}` (as an integer in `[1, p)`) times `working_lift`.
    pub exact_preimage: Graded<BigInt, G>,
    pub certificate: Certificate,
    pub is_closed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftOptions {
    pub snf_cap: usize,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions { snf_cap: DEFAULT_SNF_CAP }
    }
}

fn is_closed_over_z<G: Grading>(complex: &FilteredComplex, c: &Graded<BigInt, G>) -> Result<bool> {
    Ok(G::differential(complex, &Integers, c)?.is_zero())
}

/// Lifts a closed mod-`p` (co)chain to a closed integer one: certified
/// scaling, then a verify-only sweep over `r`, then an integer repair.
pub fn lift_closed<G: Grading>(
    complex: &FilteredComplex,
    c: &Graded<u64, G>,
    p: OddPrime,
    options: LiftOptions,
) -> Result<LiftReport<G>> {
    let system = index_system(complex, c, p)?;
    let q = p.get();
    let report = |r: u64, working: Graded<BigInt, G>, certificate, is_closed| {
        let inv = BigInt::from(inv_mod(r, q).expect("r is a unit"));
        LiftReport {
            prime: p,
            input: c.clone(),
            r: FpElement::new(r, p),
            exact_preimage: working.scale(&Integers, &inv),
            working_lift: working,
            certificate,
            is_closed,
        }
    };

    if let Some(r) = scaling_search_graded(c, &system, p) {
        let working = naive_lift(&scale_mod(c, r.value(), p), p);
        let certificate = if !G::IS_COCHAIN {
            Certificate::PerFaceRange
        } else {
            let range = range_bound(p, c.dim() as u64 + 2);
            if working.values().all(|a| a.magnitude() <= &BigUint::from(range)) {
                Certificate::InRange
            } else {
                Certificate::IndexSets
            }
        };
        let closed = is_closed_over_z(complex, &working)?;
        assert!(closed, "certified lift is not closed");
        return Ok(report(r.value(), working, certificate, true));
    }

    for r in 1..q {
        let working = naive_lift(&scale_mod(c, r, p), p);
        if is_closed_over_z(complex, &working)? {
            return Ok(report(r, working, Certificate::VerifiedOnly, true));
        }
    }

    let repaired = repair(complex, &naive_lift(c, p), p, options.snf_cap)?;
    Ok(report(1, repaired, Certificate::SnfRepaired, true))
}

/// Integer matrix of the differential acting on dimension-`m` elements.
pub(crate) fn differential_matrix<G: Grading>(complex: &FilteredComplex, m: usize) -> Result<SparseMatrix<Integers>> {
    if G::IS_COCHAIN {
        complex.coboundary_matrix(&Integers, m)
    } else if m == 0 {
        Ok(SparseMatrix::from_columns(Integers, 0, vec![Vec::new(); complex.count(0)]))
    } else {
        complex.boundary_matrix(&Integers, m)
    }
}

/// Number of simplices an integer solve for the differential on dimension `m` involves.
pub(crate) fn solve_size<G: Grading>(complex: &FilteredComplex, m: usize) -> usize {
    let other = if G::IS_COCHAIN {
        if m < complex.top_dim() {
            complex.count(m + 1)
        } else {
            0
        }
    } else if m > 0 {
        complex.count(m - 1)
    } else {
        0
    };
    complex.count(m) + other
}

/// `α − pξ` with `dξ = η` where `dα = pη`, for the differential `d` of `G`.
fn repair<G: Grading>(complex: &FilteredComplex, alpha: &Graded<BigInt, G>, p: OddPrime, cap: usize) -> Result<Graded<BigInt, G>> {
    let m = alpha.dim();
    let size = solve_size::<G>(complex, m);
    if size > cap {
        return Err(Error::ComplexTooLargeForSnf { size, cap });
    }
    let q = BigInt::from(p.get());
    let d_alpha = G::differential(complex, &Integers, alpha)?;
    if d_alpha.is_zero() {
        return Ok(alpha.clone());
    }
    let a = differential_matrix::<G>(complex, m)?;
    let mut eta = vec![BigInt::zero(); a.nrows()];
    for (i, v) in d_alpha.iter() {
        let (quot, rem) = v.div_mod_floor(&q);
        if !rem.is_zero() {
            let dim = if G::IS_COCHAIN { m + 1 } else { m - 1 };
            let r = rem.to_u64().expect("residue fits");
            return Err(Error::NotClosed(complex.simplex(dim, i).vertices().to_vec(), r));
        }
        eta[i] = quot;
    }
    let xi = Diagonalization::new(&a, vec![eta], true).solve(0).ok_or(Error::TorsionObstruction(p.get()))?;
    let xi = Graded::from_dense(&Integers, m, &xi);
    let out = alpha.sub(&Integers, &xi.scale(&Integers, &q));
    debug_assert!(G::differential(complex, &Integers, &out)?.is_zero());
    Ok(out)
}

/// Turns an integer cochain that is a cocycle mod `p` into an integer
/// cocycle congruent to it mod `p`.
pub fn snf_repair(
    complex: &FilteredComplex,
    alpha: &crate::complex::Cochain<BigInt>,
    p: OddPrime,
    cap: usize,
) -> Result<crate::complex::Cochain<BigInt>> {
    repair(complex, alpha, p, cap)
}

/// [`snf_repair`] for chains: an integer cycle congruent to `alpha` mod `p`.
pub fn snf_repair_cycle(
    complex: &FilteredComplex,
    alpha: &crate::complex::Chain<BigInt>,
    p: OddPrime,
    cap: usize,
) -> Result<crate::complex::Chain<BigInt>> {
    repair(complex, alpha, p, cap)
}

/// `k^n + 1`: every prime `p` with `p − 1 > k^n` makes every vector of
/// support size `n` liftable under relations of size `k`.
pub fn pigeonhole_bound(n: u32, k: u32) -> BigUint {
    assert!(n >= 1 && k >= 2, "pigeonhole_bound needs n >= 1 and k >= 2");
    BigUint::from(k).pow(n) + 1u32
}

/// Whether `p` divides an elementary divisor of `∂_degree`, i.e. whether
/// `H^degree(X; Z)` (equivalently the torsion of `H_{degree−1}`) has `p`-torsion.
pub fn has_p_torsion(complex: &FilteredComplex, degree: usize, p: Prime, cap: usize) -> Result<bool> {
    if degree == 0 || degree > complex.top_dim() {
        return Ok(false);
    }
    let size = complex.count(degree) + complex.count(degree - 1);
    if size > cap {
        return Err(Error::ComplexTooLargeForSnf { size, cap });
    }
    let a = complex.boundary_matrix(&Integers, degree)?;
    Ok(elementary_divisors(&a).iter().any(|d| reduce_big(d, p.get()) == 0))
}
