use crate::ring::Ring;

/// Column-sparse matrix over a ring. Columns hold `(row, value)` pairs sorted
/// by row with no explicit zeros.
#[derive(Clone, Debug)]
pub struct SparseMatrix<R: Ring> {
    ring: R,
    nrows: usize,
    cols: Vec<Vec<(usize, R::Elem)>>,
}

impl<R: Ring> SparseMatrix<R> {
    pub fn from_columns(ring: R, nrows: usize, mut cols: Vec<Vec<(usize, R::Elem)>>) -> Self {
        for col in &mut cols {
            col.sort_by_key(|e| e.0);
            col.retain(|(_, a)| !ring.is_zero(a));
            debug_assert!(col.iter().all(|&(r, _)| r < nrows));
        }
        SparseMatrix { ring, nrows, cols }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, R::Elem)] {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> R::Elem {
        self.cols[col]
            .binary_search_by_key(&row, |e| e.0)
            .map(|k| self.cols[col][k].1.clone())
            .unwrap_or_else(|_| self.ring.zero())
    }

    pub fn transpose(&self) -> Self {
        let mut cols = vec![Vec::new(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, a) in col {
                cols[*i].push((j, a.clone()));
            }
        }
        SparseMatrix { ring: self.ring.clone(), nrows: self.cols.len(), cols }
    }

    /// `A x` for a dense `x`.
    pub fn mul_dense(&self, x: &[R::Elem]) -> Vec<R::Elem> {
        assert_eq!(x.len(), self.ncols());
        let mut y = vec![self.ring.zero(); self.nrows];
        for (col, xj) in self.cols.iter().zip(x) {
            if self.ring.is_zero(xj) {
                continue;
            }
            for (i, a) in col {
                y[*i] = self.ring.add(&y[*i], &self.ring.mul(a, xj));
            }
        }
        y
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<R::Elem>> {
        let mut m = vec![vec![self.ring.zero(); self.ncols()]; self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, a) in col {
                m[*i][j] = a.clone();
            }
        }
        m
    }
}
