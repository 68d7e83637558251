//! Coefficient rings for chains, cochains and sparse operators.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::finite_field::{add_mod, mul_mod, neg_mod, reduce_i64, OddPrime, Prime};

/// A commutative ring given as a value. `F_p` carries its modulus.
pub trait Ring: Clone + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// `a` if `negate` is false, `-a` otherwise.
    fn signed(&self, a: &Self::Elem, negate: bool) -> Self::Elem {
        if negate {
            self.neg(a)
        } else {
            a.clone()
        }
    }
}

/// `F_p`, elements are canonical residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: Prime) -> Self {
        PrimeField { p: p.get() }
    }

    pub fn odd(p: OddPrime) -> Self {
        PrimeField { p: p.get() }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        add_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        neg_mod(*a, self.p)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn from_i64(&self, n: i64) -> u64 {
        reduce_i64(n, self.p)
    }
}

/// Arbitrary-precision integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
}

/// Binary64 reals. Only exact zeros are treated as zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Reals;

impl Ring for Reals {
    type Elem = f64;

    fn zero(&self) -> f64 {
        0.0
    }
    fn is_zero(&self, a: &f64) -> bool {
        *a == 0.0
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn neg(&self, a: &f64) -> f64 {
        -a
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn from_i64(&self, n: i64) -> f64 {
        n as f64
    }
}
