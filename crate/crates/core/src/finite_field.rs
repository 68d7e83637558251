//! Arithmetic in prime fields `F_p`, the field absolute value `|x|_p`, and the
//! coefficient-wise lift/reduce maps between `F_p` and `Z`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted. Products of two residues must fit in a `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// A checked prime, including 2.
///
/// The winding-number machinery factors arbitrary integers and has to work
/// modulo 2 as well; everything that lifts coefficients uses [`OddPrime`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_PRIME {
            return Err(Error::PrimeOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// Smallest prime strictly greater than `n`.
    pub fn next_after(n: u64) -> Result<Self> {
        let mut c = n + 1;
        while !is_prime(c) {
            c += 1;
        }
        Prime::new(c)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A prime `p >= 3`. All lifting statements assume an odd characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct OddPrime(Prime);

impl OddPrime {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        Prime::new(p).map(OddPrime)
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0 .0
    }

    #[inline]
    pub fn prime(self) -> Prime {
        self.0
    }

    /// `(p - 1) / 2`, the largest absolute value in `F_p`.
    #[inline]
    pub fn half(self) -> u64 {
        (self.get() - 1) / 2
    }

    /// Smallest odd prime strictly greater than `n`.
    pub fn next_after(n: u64) -> Result<Self> {
        let p = Prime::next_after(n.max(2))?;
        OddPrime::new(p.get())
    }
}

impl TryFrom<u64> for OddPrime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        OddPrime::new(p)
    }
}

impl From<OddPrime> for u64 {
    fn from(p: OddPrime) -> u64 {
        p.get()
    }
}

impl From<OddPrime> for Prime {
    fn from(p: OddPrime) -> Prime {
        p.0
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// Trial division. Primes here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of `F_p` stored as its canonical representative in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpElement {
    value: u64,
    prime: OddPrime,
}

impl FpElement {
    pub fn new(value: u64, prime: OddPrime) -> Self {
        FpElement { value: value % prime.get(), prime }
    }

    pub fn from_i64(value: i64, prime: OddPrime) -> Self {
        FpElement { value: reduce_i64(value, prime.get()), prime }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn prime(self) -> OddPrime {
        self.prime
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn mul(self, other: FpElement) -> FpElement {
        debug_assert_eq!(self.prime, other.prime);
        FpElement { value: mul_mod(self.value, other.value, self.prime.get()), prime: self.prime }
    }

    pub fn abs_p(self) -> u64 {
        abs_p(self)
    }

    pub fn inverse(self) -> Result<FpElement> {
        inverse(self)
    }

    pub fn lift(self) -> i64 {
        lift_coeff(self)
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.prime)
    }
}

/// `|x|_p = min(i(x), p - i(x))`.
pub fn abs_p(x: FpElement) -> u64 {
    abs_mod(x.value, x.prime.get())
}

/// Multiplicative inverse by the extended Euclidean algorithm.
pub fn inverse(x: FpElement) -> Result<FpElement> {
    inv_mod(x.value, x.prime.get())
        .map(|value| FpElement { value, prime: x.prime })
        .ok_or(Error::ZeroInverse)
}

/// The symmetric representative: `x` if `x <= (p-1)/2`, otherwise `x - p`.
///
/// The tie `x = (p-1)/2` lifts to the positive side.
pub fn lift_coeff(x: FpElement) -> i64 {
    lift_mod(x.value, x.prime.get())
}

/// `z mod p` normalized to `[0, p)`.
pub fn reduce_coeff(z: &BigInt, p: OddPrime) -> FpElement {
    FpElement { value: reduce_big(z, p.get()), prime: p }
}

/// `floor((p - 1) / k)`, the half-width of the coefficient range that
/// certifies a relation with `k` terms.
pub fn range_bound(p: OddPrime, k: u64) -> u64 {
    assert!(k >= 1, "range_bound needs k >= 1");
    (p.get() - 1) / k
}

// Raw-modulus helpers used in hot loops. `x` is always a canonical residue.

#[inline]
pub(crate) fn abs_mod(x: u64, p: u64) -> u64 {
    x.min(p - x) % p
}

#[inline]
pub(crate) fn lift_mod(x: u64, p: u64) -> i64 {
    if x <= (p - 1) / 2 {
        x as i64
    } else {
        x as i64 - p as i64
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a * b) % p
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn neg_mod(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub(crate) fn reduce_i64(z: i64, p: u64) -> u64 {
    z.rem_euclid(p as i64) as u64
}

pub(crate) fn reduce_big(z: &BigInt, p: u64) -> u64 {
    z.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits in u64")
}

pub(crate) fn inv_mod(x: u64, p: u64) -> Option<u64> {
    if x % p == 0 {
        return None;
    }
    let (mut old_r, mut r) = (x as i64, p as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    Some(old_s.rem_euclid(p as i64) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(v: u64, p: u64) -> FpElement {
        FpElement::new(v, OddPrime::new(p).unwrap())
    }

    #[test]
    fn prime_construction() {
        assert!(OddPrime::new(7).is_ok());
        assert!(matches!(OddPrime::new(2), Err(Error::EvenPrime)));
        assert!(matches!(OddPrime::new(9), Err(Error::NotPrime(9))));
        assert!(matches!(OddPrime::new(1), Err(Error::NotPrime(1))));
        assert!(Prime::new(2).is_ok());
        assert_eq!(OddPrime::next_after(729).unwrap().get(), 733);
        assert_eq!(OddPrime::next_after(1).unwrap().get(), 3);
    }

    #[test]
    fn abs_examples() {
        assert_eq!(abs_p(fp(3, 7)), 3);
        assert_eq!(abs_p(fp(4, 7)), 3);
        assert_eq!(abs_p(fp(0, 13)), 0);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse(fp(2, 7)).unwrap().value(), 4);
        assert_eq!(inverse(fp(1, 13)).unwrap().value(), 1);
        assert_eq!(inverse(fp(6, 7)).unwrap().value(), 6);
        assert!(matches!(inverse(fp(0, 7)), Err(Error::ZeroInverse)));
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_coeff(fp(4, 7)), -3);
        assert_eq!(lift_coeff(fp(3, 7)), 3);
        for p in [3u64, 5, 7, 11, 101] {
            assert_eq!(lift_coeff(fp((p - 1) / 2, p)), ((p - 1) / 2) as i64);
        }
    }

    #[test]
    fn reduce_examples() {
        let p = OddPrime::new(7).unwrap();
        assert_eq!(reduce_coeff(&BigInt::from(-3), p).value(), 4);
        assert_eq!(reduce_coeff(&BigInt::from(8), p).value(), 1);
        assert_eq!(reduce_coeff(&BigInt::from(0), p).value(), 0);
    }

    #[test]
    fn range_bound_examples() {
        let p7 = OddPrime::new(7).unwrap();
        assert_eq!(range_bound(p7, 3), 2);
        assert_eq!(range_bound(OddPrime::new(47).unwrap(), 3), 15);
        assert_eq!(range_bound(p7, 7), 0);
    }

    fn odd_primes_upto(n: u64) -> impl Iterator<Item = OddPrime> {
        (3..=n).filter(|&p| is_prime(p)).map(|p| OddPrime::new(p).unwrap())
    }

    #[test]
    fn exhaustive_norm_preservation_and_round_trip() {
        for p in odd_primes_upto(101) {
            for x in 0..p.get() {
                let e = FpElement::new(x, p);
                let z = lift_coeff(e);
                assert_eq!(z.unsigned_abs(), abs_p(e));
                assert!(z.unsigned_abs() <= p.half());
                assert_eq!(reduce_coeff(&BigInt::from(z), p), e);
            }
            let h = p.half() as i64;
            for z in -h..=h {
                assert_eq!(lift_coeff(reduce_coeff(&BigInt::from(z), p)), z);
            }
        }
    }

    #[test]
    fn exhaustive_double_inverse() {
        for p in odd_primes_upto(101) {
            for x in 1..p.get() {
                let e = FpElement::new(x, p);
                let inv = inverse(e).unwrap();
                assert_eq!(e.mul(inv).value(), 1);
                assert_eq!(inverse(inv).unwrap(), e);
            }
        }
    }

    #[test]
    fn mod_two_helpers() {
        assert_eq!(inv_mod(1, 2), Some(1));
        assert_eq!(lift_mod(1, 2), -1);
        assert_eq!(lift_mod(0, 2), 0);
    }
}
