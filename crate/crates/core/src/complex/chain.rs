use std::collections::BTreeMap;
use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::ring::Ring;

use super::FilteredComplex;

/// Marker for cochains (coefficients on simplices, acted on by `δ`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Upper;

/// Marker for chains (formal sums of simplices, acted on by `∂`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lower;

/// Distinguishes chains from cochains at the type level and supplies the
/// differential that defines "closed" for each.
pub trait Grading: Sized + Clone + std::fmt::Debug + PartialEq {
    const IS_COCHAIN: bool;

    fn differential<R: Ring>(
        complex: &FilteredComplex,
        ring: &R,
        v: &Graded<R::Elem, Self>,
    ) -> Result<Graded<R::Elem, Self>>;
}

impl Grading for Upper {
    const IS_COCHAIN: bool = true;

    fn differential<R: Ring>(
        complex: &FilteredComplex,
        ring: &R,
        v: &Cochain<R::Elem>,
    ) -> Result<Cochain<R::Elem>> {
        complex.coboundary(ring, v)
    }
}

impl Grading for Lower {
    const IS_COCHAIN: bool = false;

    fn differential<R: Ring>(
        complex: &FilteredComplex,
        ring: &R,
        v: &Chain<R::Elem>,
    ) -> Result<Chain<R::Elem>> {
        complex.boundary(ring, v)
    }
}

/// A sparse map from simplex index (in a fixed dimension) to a coefficient.
/// Zero coefficients are never stored.
#[derive(Debug)]
pub struct Graded<E, G> {
    dim: usize,
    entries: BTreeMap<usize, E>,
    _grading: PhantomData<G>,
}

impl<E: Clone, G> Clone for Graded<E, G> {
    fn clone(&self) -> Self {
        Graded { dim: self.dim, entries: self.entries.clone(), _grading: PhantomData }
    }
}

impl<E: PartialEq, G> PartialEq for Graded<E, G> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.entries == other.entries
    }
}

pub type Cochain<E> = Graded<E, Upper>;
pub type Chain<E> = Graded<E, Lower>;

impl<E: Clone, G> Graded<E, G> {
    pub fn zero(dim: usize) -> Self {
        Graded { dim, entries: BTreeMap::new(), _grading: PhantomData }
    }

    pub fn from_entries<R: Ring<Elem = E>>(
        ring: &R,
        dim: usize,
        entries: impl IntoIterator<Item = (usize, E)>,
    ) -> Self {
        let mut out = Self::zero(dim);
        for (i, a) in entries {
            out.add_at(ring, i, &a);
        }
        out
    }

    /// Dense constructor: `values[i]` is the coefficient on simplex `i`.
    pub fn from_dense<R: Ring<Elem = E>>(ring: &R, dim: usize, values: &[E]) -> Self {
        Self::from_entries(ring, dim, values.iter().cloned().enumerate())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, index: usize) -> Option<&E> {
        self.entries.get(&index)
    }

    /// Coefficient at `index`, or the ring's zero.
    pub fn coeff<R: Ring<Elem = E>>(&self, ring: &R, index: usize) -> E {
        self.entries.get(&index).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &E)> + '_ {
        self.entries.iter().map(|(&i, a)| (i, a))
    }

    pub fn values(&self) -> impl Iterator<Item = &E> + '_ {
        self.entries.values()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Adds `a` to the coefficient at `index`, dropping the entry if it cancels.
    pub fn add_at<R: Ring<Elem = E>>(&mut self, ring: &R, index: usize, a: &E) {
        if ring.is_zero(a) {
            return;
        }
        match self.entries.get_mut(&index) {
            Some(b) => {
                let s = ring.add(b, a);
                if ring.is_zero(&s) {
                    self.entries.remove(&index);
                } else {
                    *b = s;
                }
            }
            None => {
                self.entries.insert(index, a.clone());
            }
        }
    }

    /// Coefficient-wise image under `f` in another ring.
    pub fn map<R: Ring>(&self, ring: &R, mut f: impl FnMut(&E) -> R::Elem) -> Graded<R::Elem, G> {
        let mut out = Graded::zero(self.dim);
        for (&i, a) in &self.entries {
            let b = f(a);
            if !ring.is_zero(&b) {
                out.entries.insert(i, b);
            }
        }
        out
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        self.map(ring, |a| ring.mul(c, a))
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "adding graded vectors of different dimension");
        let mut out = self.clone();
        for (i, a) in other.iter() {
            out.add_at(ring, i, a);
        }
        out
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        self.add(ring, &other.map(ring, |a| ring.neg(a)))
    }

    /// Drops every entry with index `>= len` (restriction to a sublevel prefix).
    pub fn truncate(&self, len: usize) -> Self {
        Graded {
            dim: self.dim,
            entries: self.entries.range(..len).map(|(&i, a)| (i, a.clone())).collect(),
            _grading: PhantomData,
        }
    }

    /// Dense vector of length `n`.
    pub fn to_dense<R: Ring<Elem = E>>(&self, ring: &R, n: usize) -> Vec<E> {
        let mut v = vec![ring.zero(); n];
        for (&i, a) in &self.entries {
            v[i] = a.clone();
        }
        v
    }

    /// True if every index refers to an existing simplex of the right dimension.
    pub fn fits(&self, complex: &FilteredComplex) -> bool {
        self.entries.keys().next_back().is_none_or(|&i| i < complex.count(self.dim))
    }
}

/// `⟨α, β⟩ = Σ_σ α(σ) β_σ`.
pub fn kronecker_pairing<R: Ring>(ring: &R, alpha: &Cochain<R::Elem>, beta: &Chain<R::Elem>) -> Result<R::Elem> {
    if alpha.dim() != beta.dim() {
        return Err(Error::DimensionMismatch(alpha.dim(), beta.dim()));
    }
    // iterate over the sparser side
    let (small, large): (Vec<_>, _) = if alpha.support_len() <= beta.support_len() {
        (alpha.iter().collect(), &beta.entries)
    } else {
        (beta.iter().collect(), &alpha.entries)
    };
    let mut acc = ring.zero();
    for (i, a) in small {
        if let Some(b) = large.get(&i) {
            acc = ring.add(&acc, &ring.mul(a, b));
        }
    }
    Ok(acc)
}
