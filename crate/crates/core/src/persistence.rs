//! Persistent cohomology over `F_p` with representative cocycles, and dual
//! homology cycles for a chosen interval.

use std::collections::HashMap;

use crate::complex::{kronecker_pairing, Chain, Cochain, FilteredComplex};
use crate::error::{Error, Result};
use crate::finite_field::{add_mod, inv_mod, mul_mod, neg_mod, OddPrime};
use crate::ring::PrimeField;

/// Sparse column over `F_p`, sorted by row index.
type Column = Vec<(usize, u64)>;

/// `a + f·b` over `F_p`.
fn axpy(a: &Column, f: u64, b: &Column, p: u64) -> Column {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(ra, va)), Some(&(rb, _))) if ra < rb => {
                out.push((ra, va));
                i += 1;
            }
            (Some(&(ra, va)), Some(&(rb, vb))) if ra == rb => {
                let v = add_mod(va, mul_mod(f, vb, p), p);
                if v != 0 {
                    out.push((ra, v));
                }
                i += 1;
                j += 1;
            }
            (Some(&(ra, va)), None) => {
                out.push((ra, va));
                i += 1;
            }
            (_, Some(&(rb, vb))) => {
                out.push((rb, mul_mod(f, vb, p)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Standard left-to-right reduction (pivot = largest row index).
/// Columns flagged in `skip` are treated as zero and get no `V` column.
struct Reduction {
    reduced: Vec<Column>,
    v: Vec<Column>,
}

fn reduce(columns: Vec<Column>, skip: &[bool], p: u64) -> Reduction {
    let n = columns.len();
    let mut pivot_of: HashMap<usize, usize> = HashMap::new();
    let mut reduced: Vec<Column> = Vec::with_capacity(n);
    let mut v: Vec<Column> = Vec::with_capacity(n);
    for (j, mut col) in columns.into_iter().enumerate() {
        if skip[j] {
            reduced.push(Vec::new());
            v.push(Vec::new());
            continue;
        }
        let mut vj: Column = vec![(j, 1)];
        while let Some(&(low, a)) = col.last() {
            let Some(&k) = pivot_of.get(&low) else { break };
            let b = reduced[k].last().expect("pivot column is nonzero").1;
            let f = neg_mod(mul_mod(a, inv_mod(b, p).expect("nonzero pivot"), p), p);
            col = axpy(&col, f, &reduced[k], p);
            vj = axpy(&vj, f, &v[k], p);
        }
        if let Some(&(low, _)) = col.last() {
            pivot_of.insert(low, j);
        }
        reduced.push(col);
        v.push(vj);
    }
    Reduction { reduced, v }
}

/// A persistence interval with its representative cocycle.
#[derive(Clone, Debug, PartialEq)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: f64,
    /// `f64::INFINITY` for essential classes.
    pub death: f64,
    /// Index of the `dim`-simplex whose entry creates the class.
    pub birth_simplex: usize,
    /// Index of the `(dim+1)`-simplex that kills it.
    pub death_simplex: Option<usize>,
    /// Scale at which `cocycle` (and `cycle`) are representatives.
    pub scale: f64,
    /// Cocycle of the `scale`-sublevel complex over `F_p`.
    pub cocycle: Cochain<u64>,
    pub cycle: Option<Chain<u64>>,
    generator: Cochain<u64>,
}

impl PersistencePair {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    /// The same class represented at another scale in `[birth, death)`.
    pub fn at_scale(&self, complex: &FilteredComplex, scale: f64) -> Result<PersistencePair> {
        if !(scale >= self.birth && scale < self.death) {
            return Err(Error::InvalidComplex(format!(
                "scale {scale} outside the interval [{}, {})",
                self.birth, self.death
            )));
        }
        Ok(PersistencePair {
            scale,
            cocycle: self.generator.truncate(complex.prefix_len(self.dim, scale)),
            cycle: None,
            ..self.clone()
        })
    }
}

/// Persistence pairs per dimension, each list sorted by persistence descending.
#[derive(Clone, Debug)]
pub struct Diagram {
    prime: OddPrime,
    dims: Vec<Vec<PersistencePair>>,
}

impl Diagram {
    pub fn prime(&self) -> OddPrime {
        self.prime
    }

    pub fn max_dim(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn pairs(&self, dim: usize) -> &[PersistencePair] {
        self.dims.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn pairs_mut(&mut self, dim: usize) -> &mut [PersistencePair] {
        &mut self.dims[dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &PersistencePair> + '_ {
        self.dims.iter().flatten()
    }
}

fn default_scale(complex: &FilteredComplex, birth: f64, death: f64) -> f64 {
    if death.is_finite() {
        (birth + death) / 2.0
    } else {
        complex.max_filtration().max(birth)
    }
}

/// Persistent cohomology in dimensions `0..=max_dim` by reducing coboundary
/// columns in reverse filtration order. Only intervals of positive length
/// are kept; each carries a representative cocycle at the midpoint scale
/// (the final scale for essential classes).
pub fn persistent_cohomology(complex: &FilteredComplex, p: OddPrime, max_dim: usize) -> Result<Diagram> {
    if max_dim > complex.top_dim() {
        return Err(Error::DimensionOutOfRange { dim: max_dim, max: complex.top_dim() });
    }
    let q = p.get();
    let mut dims = Vec::with_capacity(max_dim + 1);
    // m-simplices that are deaths of (m-1)-classes: their columns reduce to zero
    let mut killed = vec![false; complex.count(0)];
    for m in 0..=max_dim {
        let n = complex.count(m);
        let n_up = if m < complex.top_dim() { complex.count(m + 1) } else { 0 };
        // reversed indices: column k is simplex n-1-k, row r is coface n_up-1-r
        let columns: Vec<Column> = (0..n)
            .map(|k| {
                let j = n - 1 - k;
                if m == complex.top_dim() {
                    return Vec::new();
                }
                let mut col: Column = complex
                    .cofaces_of(m, j)
                    .iter()
                    .map(|&(t, pos)| (n_up - 1 - t, if pos % 2 == 0 { 1 } else { q - 1 }))
                    .collect();
                col.sort_unstable();
                col
            })
            .collect();
        let skip: Vec<bool> = (0..n).map(|k| killed[n - 1 - k]).collect();
        let red = reduce(columns, &skip, q);

        let mut next_killed = vec![false; n_up];
        let mut pairs = Vec::new();
        for k in 0..n {
            if skip[k] {
                continue;
            }
            let j = n - 1 - k;
            let birth = complex.filtration(m, j);
            let (death, death_simplex) = match red.reduced[k].last() {
                Some(&(low, _)) => {
                    let t = n_up - 1 - low;
                    next_killed[t] = true;
                    (complex.filtration(m + 1, t), Some(t))
                }
                None => (f64::INFINITY, None),
            };
            if death <= birth {
                continue;
            }
            let generator = Cochain::from_entries(
                &PrimeField::odd(p),
                m,
                red.v[k].iter().map(|&(kk, a)| (n - 1 - kk, a)),
            );
            let scale = default_scale(complex, birth, death);
            pairs.push(PersistencePair {
                dim: m,
                birth,
                death,
                birth_simplex: j,
                death_simplex,
                scale,
                cocycle: generator.truncate(complex.prefix_len(m, scale)),
                cycle: None,
                generator,
            });
        }
        pairs.sort_by(|a, b| {
            b.persistence()
                .total_cmp(&a.persistence())
                .then(a.birth.total_cmp(&b.birth))
                .then(a.birth_simplex.cmp(&b.birth_simplex))
        });
        dims.push(pairs);
        killed = next_killed;
    }
    Ok(Diagram { prime: p, dims })
}

fn boundary_columns(complex: &FilteredComplex, m: usize, n: usize, q: u64) -> Vec<Column> {
    (0..n)
        .map(|j| {
            let mut col: Column = complex
                .faces_of(m, j)
                .iter()
                .enumerate()
                .map(|(pos, &f)| (f, if pos % 2 == 0 { 1 } else { q - 1 }))
                .collect();
            col.sort_unstable();
            col
        })
        .collect()
}

/// Cycles representing a basis of `H_m` of the `pair.scale`-sublevel complex
/// that pair nonzero with `pair.cocycle` mod `p`, the cycle created by the
/// pair's birth simplex first.
pub fn dual_cycles(complex: &FilteredComplex, p: OddPrime, pair: &PersistencePair) -> Result<Vec<Chain<u64>>> {
    let m = pair.dim;
    let q = p.get();
    let field = PrimeField::odd(p);
    let n = complex.prefix_len(m, pair.scale);
    if !pair.cocycle.fits(complex) || pair.cocycle.support().any(|i| i >= n) {
        return Err(Error::NoDualCycle);
    }
    let red = reduce(boundary_columns(complex, m, n, q), &vec![false; n], q);
    let mut bounded = vec![false; n];
    if m < complex.top_dim() {
        let n_up = complex.prefix_len(m + 1, pair.scale);
        let up = reduce(boundary_columns(complex, m + 1, n_up, q), &vec![false; n_up], q);
        for col in &up.reduced {
            if let Some(&(low, _)) = col.last() {
                bounded[low] = true;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&j| red.reduced[j].is_empty() && !bounded[j]).collect();
    if let Some(pos) = order.iter().position(|&j| j == pair.birth_simplex) {
        order.remove(pos);
        order.insert(0, pair.birth_simplex);
    }
    let mut out = Vec::new();
    for j in order {
        let cycle = Chain::from_entries(&field, m, red.v[j].iter().copied());
        if kronecker_pairing(&field, &pair.cocycle, &cycle)? != 0 {
            out.push(cycle);
        }
    }
    Ok(out)
}

/// A cycle at the pair's scale whose mod-`p` pairing with the cocycle is nonzero.
pub fn cycle_representative(complex: &FilteredComplex, p: OddPrime, pair: &PersistencePair) -> Result<Chain<u64>> {
    dual_cycles(complex, p, pair)?.into_iter().next().ok_or(Error::NoDualCycle)
}

/// Rule for choosing the class to turn into circular coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassStrategy {
    MaxPersistence,
    Index(usize),
}

impl std::str::FromStr for ClassStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "max-persistence" {
            return Ok(ClassStrategy::MaxPersistence);
        }
        s.strip_prefix("index:")
            .and_then(|k| k.parse().ok())
            .map(ClassStrategy::Index)
            .ok_or_else(|| Error::Format(format!("unknown class strategy {s:?}")))
    }
}

pub fn select_class(diagram: &Diagram, dim: usize, strategy: ClassStrategy) -> Result<&PersistencePair> {
    let pairs = diagram.pairs(dim);
    if pairs.is_empty() {
        return Err(Error::EmptyDiagram(dim));
    }
    let index = match strategy {
        ClassStrategy::MaxPersistence => 0,
        ClassStrategy::Index(k) => k,
    };
    pairs.get(index).ok_or(Error::ClassIndexOutOfRange { index, len: pairs.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn p(q: u64) -> OddPrime {
        OddPrime::new(q).unwrap()
    }

    #[test]
    fn hexagon_has_one_essential_class() {
        let k = fixtures::hexagon();
        let d = persistent_cohomology(&k, p(7), 1).unwrap();
        assert_eq!(d.pairs(1).len(), 1);
        let pair = &d.pairs(1)[0];
        assert!(pair.is_essential());
        let cycle = cycle_representative(&k, p(7), pair).unwrap();
        assert_eq!(cycle.support_len(), 6);
        // five components merge at scale 1, one survives
        assert_eq!(d.pairs(0).len(), 6);
        assert_eq!(d.pairs(0).iter().filter(|p| p.is_essential()).count(), 1);
    }

    #[test]
    fn filled_triangle_has_no_h1() {
        let k = fixtures::filled_triangle();
        let d = persistent_cohomology(&k, p(5), 1).unwrap();
        assert!(d.pairs(1).is_empty());
        assert!(matches!(select_class(&d, 1, ClassStrategy::MaxPersistence), Err(Error::EmptyDiagram(1))));
    }

    #[test]
    fn fabricated_pair_has_no_dual_cycle() {
        let k = fixtures::filled_triangle();
        let field = PrimeField::odd(p(5));
        let c = Cochain::from_entries(&field, 1, [(0, 1)]);
        let pair = PersistencePair {
            dim: 1,
            birth: 1.0,
            death: f64::INFINITY,
            birth_simplex: 0,
            death_simplex: None,
            scale: 1.0,
            cocycle: c.clone(),
            cycle: None,
            generator: c,
        };
        assert!(matches!(cycle_representative(&k, p(5), &pair), Err(Error::NoDualCycle)));
    }

    #[test]
    fn strategy_parsing() {
        assert_eq!("max-persistence".parse::<ClassStrategy>().unwrap(), ClassStrategy::MaxPersistence);
        assert_eq!("index:2".parse::<ClassStrategy>().unwrap(), ClassStrategy::Index(2));
        assert!("index:x".parse::<ClassStrategy>().is_err());
    }
}
