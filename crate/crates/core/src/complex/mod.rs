//! Filtered simplicial complexes and their (co)boundary operators.
//!
//! Simplices are stored with strictly ascending vertex ids. The `i`-th face of
//! a simplex omits its `i`-th vertex and carries the sign `(-1)^i`, so the
//! coboundary `δ_m` is the transpose of the boundary `∂_{m+1}`.
//!
//! Within each dimension simplices are sorted by `(filtration, vertices)` and
//! indexed densely. A sublevel complex is therefore a prefix in every
//! dimension and shares indices with the complex it came from.

mod chain;
mod matrix;
mod rips;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

pub use chain::{kronecker_pairing, Chain, Cochain, Graded, Grading, Lower, Upper};
pub use matrix::SparseMatrix;
pub use rips::{build_rips, enclosing_radius, euclidean};

use crate::error::{Error, Result};
use crate::ring::Ring;

/// A simplex given by its strictly ascending vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sorts the vertices; fails on repeated or missing vertices.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidComplex("simplex without vertices".into()));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidComplex(format!("repeated vertex in {vertices:?}")));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The face omitting the `i`-th vertex.
    pub fn face(&self, i: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(i);
        Simplex(v)
    }

    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.0.len()).map(move |i| self.face(i))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A finite simplicial complex with a monotone filtration.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    simplices: Vec<Vec<Simplex>>,
    values: Vec<Vec<f64>>,
    lookup: Vec<HashMap<Simplex, usize>>,
    /// `faces[d][i][k]` is the index of the face of simplex `(d, i)` omitting vertex `k`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `cofaces[d][i]` lists `(coface index, position of this face)` in ascending order.
    cofaces: Vec<Vec<Vec<(usize, usize)>>>,
}

impl FilteredComplex {
    /// Builds a complex from a face-closed list of simplices with filtration values.
    pub fn new(simplices: impl IntoIterator<Item = (Vec<usize>, f64)>) -> Result<Self> {
        Self::with_dim(simplices, None)
    }

    /// Like [`FilteredComplex::new`] but pads the dimension list up to `top_dim`,
    /// so that e.g. a Rips complex asked for triangles keeps an empty dimension 2.
    pub fn with_dim(
        simplices: impl IntoIterator<Item = (Vec<usize>, f64)>,
        top_dim: Option<usize>,
    ) -> Result<Self> {
        let mut by_dim: Vec<Vec<(Simplex, f64)>> = Vec::new();
        for (vertices, value) in simplices {
            if !value.is_finite() {
                return Err(Error::InvalidComplex(format!("non-finite filtration {value}")));
            }
            let s = Simplex::new(vertices)?;
            let d = s.dim();
            if by_dim.len() <= d {
                by_dim.resize_with(d + 1, Vec::new);
            }
            by_dim[d].push((s, value));
        }
        if by_dim.is_empty() || by_dim[0].is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(top) = top_dim {
            if by_dim.len() <= top {
                by_dim.resize_with(top + 1, Vec::new);
            }
        }

        let mut simplices = Vec::with_capacity(by_dim.len());
        let mut values = Vec::with_capacity(by_dim.len());
        let mut lookup = Vec::with_capacity(by_dim.len());
        for mut level in by_dim {
            level.sort_by(|a, b| cmp_filtered(a.1, &a.0, b.1, &b.0));
            let mut map = HashMap::with_capacity(level.len());
            for (i, (s, _)) in level.iter().enumerate() {
                if map.insert(s.clone(), i).is_some() {
                    return Err(Error::InvalidComplex(format!("duplicate simplex {s}")));
                }
            }
            let (s, v): (Vec<_>, Vec<_>) = level.into_iter().unzip();
            simplices.push(s);
            values.push(v);
            lookup.push(map);
        }

        let mut faces = vec![Vec::new()];
        let mut cofaces: Vec<Vec<Vec<(usize, usize)>>> =
            simplices.iter().map(|level| vec![Vec::new(); level.len()]).collect();
        for d in 1..simplices.len() {
            let mut level_faces = Vec::with_capacity(simplices[d].len());
            for (i, s) in simplices[d].iter().enumerate() {
                let mut fs = Vec::with_capacity(d + 1);
                for (k, face) in s.faces().enumerate() {
                    let Some(&j) = lookup[d - 1].get(&face) else {
                        return Err(Error::InvalidComplex(format!("face {face} of {s} missing")));
                    };
                    if values[d - 1][j] > values[d][i] {
                        return Err(Error::InvalidComplex(format!(
                            "filtration not monotone: {face} enters after {s}"
                        )));
                    }
                    cofaces[d - 1][j].push((i, k));
                    fs.push(j);
                }
                level_faces.push(fs);
            }
            faces.push(level_faces);
        }

        Ok(FilteredComplex { simplices, values, lookup, faces, cofaces })
    }

    /// Builds the downward closure of the given simplices. A face absent from
    /// the input gets the smallest filtration value among its cofaces.
    pub fn from_maximal(simplices: impl IntoIterator<Item = (Vec<usize>, f64)>) -> Result<Self> {
        let mut all: HashMap<Simplex, f64> = HashMap::new();
        let mut stack = Vec::new();
        for (v, value) in simplices {
            stack.push((Simplex::new(v)?, value));
        }
        while let Some((s, value)) = stack.pop() {
            let entry = all.entry(s.clone()).or_insert(f64::INFINITY);
            if value < *entry {
                *entry = value;
                if s.dim() > 0 {
                    stack.extend(s.faces().map(|f| (f, value)));
                }
            }
        }
        Self::new(all.into_iter().map(|(s, v)| (s.0, v)))
    }

    /// Highest dimension, counting padded empty dimensions.
    pub fn top_dim(&self) -> usize {
        self.simplices.len() - 1
    }

    /// Number of `dim`-simplices; zero for dimensions beyond the top.
    pub fn count(&self, dim: usize) -> usize {
        self.simplices.get(dim).map_or(0, Vec::len)
    }

    pub fn total_count(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn simplices(&self, dim: usize) -> &[Simplex] {
        self.simplices.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn simplex(&self, dim: usize, index: usize) -> &Simplex {
        &self.simplices[dim][index]
    }

    pub fn filtration(&self, dim: usize, index: usize) -> f64 {
        self.values[dim][index]
    }

    pub fn filtrations(&self, dim: usize) -> &[f64] {
        self.values.get(dim).map_or(&[], Vec::as_slice)
    }

    /// Largest filtration value present.
    pub fn max_filtration(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn index_of(&self, vertices: &[usize]) -> Result<usize> {
        let s = Simplex::new(vertices.to_vec())?;
        self.lookup
            .get(s.dim())
            .and_then(|m| m.get(&s))
            .copied()
            .ok_or_else(|| Error::UnknownSimplex(s.0))
    }

    /// Vertex ids in index order.
    pub fn vertex_ids(&self) -> Vec<usize> {
        self.simplices[0].iter().map(|s| s.0[0]).collect()
    }

    /// Face indices of `(dim, index)` in position order; position `k` has sign `(-1)^k`.
    pub fn faces_of(&self, dim: usize, index: usize) -> &[usize] {
        if dim == 0 {
            return &[];
        }
        &self.faces[dim][index]
    }

    /// `(coface index, position)` pairs of `(dim, index)`.
    pub fn cofaces_of(&self, dim: usize, index: usize) -> &[(usize, usize)] {
        &self.cofaces[dim][index]
    }

    /// Number of `dim`-simplices with filtration `<= eps`.
    pub fn prefix_len(&self, dim: usize, eps: f64) -> usize {
        self.filtrations(dim).partition_point(|&v| v <= eps)
    }

    /// The subcomplex of simplices with filtration `<= eps`. Indices agree
    /// with `self` on every simplex that survives.
    pub fn sublevel(&self, eps: f64) -> FilteredComplex {
        let keep = (0..=self.top_dim()).flat_map(|d| {
            let n = self.prefix_len(d, eps);
            self.simplices[d][..n]
                .iter()
                .zip(&self.values[d][..n])
                .map(|(s, &v)| (s.0.clone(), v))
        });
        FilteredComplex::with_dim(keep.collect::<Vec<_>>(), Some(self.top_dim()))
            .expect("sublevel of a valid complex is valid")
    }

    /// Matrix of `∂_m : C_m -> C_{m-1}`, columns indexed by `m`-simplices.
    pub fn boundary_matrix<R: Ring>(&self, ring: &R, m: usize) -> Result<SparseMatrix<R>> {
        if m == 0 || m > self.top_dim() {
            return Err(Error::DimensionOutOfRange { dim: m, max: self.top_dim() });
        }
        let cols = (0..self.count(m))
            .map(|i| {
                let mut col: Vec<_> = self.faces[m][i]
                    .iter()
                    .enumerate()
                    .map(|(k, &j)| (j, ring.from_i64(sign(k))))
                    .collect();
                col.sort_by_key(|e| e.0);
                col
            })
            .collect();
        Ok(SparseMatrix::from_columns(ring.clone(), self.count(m - 1), cols))
    }

    /// Matrix of `δ_m : C^m -> C^{m+1}`: rows are `(m+1)`-simplices, columns `m`-simplices.
    pub fn coboundary_matrix<R: Ring>(&self, ring: &R, m: usize) -> Result<SparseMatrix<R>> {
        if m > self.top_dim() {
            return Err(Error::DimensionOutOfRange { dim: m, max: self.top_dim() });
        }
        let cols = (0..self.count(m))
            .map(|i| {
                self.cofaces[m][i]
                    .iter()
                    .map(|&(t, k)| (t, ring.from_i64(sign(k))))
                    .collect()
            })
            .collect();
        Ok(SparseMatrix::from_columns(ring.clone(), self.count(m + 1), cols))
    }

    /// `δ c` for an `m`-cochain `c`.
    pub fn coboundary<R: Ring>(&self, ring: &R, c: &Cochain<R::Elem>) -> Result<Cochain<R::Elem>> {
        let m = c.dim();
        if m > self.top_dim() {
            return Err(Error::DimensionOutOfRange { dim: m, max: self.top_dim() });
        }
        let mut out = Cochain::zero(m + 1);
        for (i, a) in c.iter() {
            for &(t, k) in &self.cofaces[m][i] {
                out.add_at(ring, t, &ring.signed(a, k % 2 == 1));
            }
        }
        Ok(out)
    }

    /// `∂ c` for an `m`-chain `c`, `m >= 1`.
    pub fn boundary<R: Ring>(&self, ring: &R, c: &Chain<R::Elem>) -> Result<Chain<R::Elem>> {
        let m = c.dim();
        if m == 0 || m > self.top_dim() {
            return Err(Error::DimensionOutOfRange { dim: m, max: self.top_dim() });
        }
        let mut out = Chain::zero(m - 1);
        for (i, a) in c.iter() {
            for (k, &j) in self.faces[m][i].iter().enumerate() {
                out.add_at(ring, j, &ring.signed(a, k % 2 == 1));
            }
        }
        Ok(out)
    }

    /// Looks up simplices by vertex list; coefficients are combined if repeated.
    pub fn graded_from_vertices<R: Ring, G>(
        &self,
        ring: &R,
        dim: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, R::Elem)>,
    ) -> Result<Graded<R::Elem, G>> {
        let mut out = Graded::zero(dim);
        for (v, a) in entries {
            if v.len() != dim + 1 {
                return Err(Error::DimensionMismatch(v.len().saturating_sub(1), dim));
            }
            let i = self.index_of(&v)?;
            out.add_at(ring, i, &a);
        }
        Ok(out)
    }
}

#[inline]
pub(crate) fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn cmp_filtered(va: f64, a: &Simplex, vb: f64, b: &Simplex) -> Ordering {
    va.total_cmp(&vb).then_with(|| a.cmp(b))
}
