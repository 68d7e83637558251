//! Dense Gauss–Jordan elimination over `F_p`.

use crate::complex::SparseMatrix;
use crate::finite_field::{inv_mod, mul_mod};
use crate::ring::{PrimeField, Ring};

/// Reduced row-echelon form of an augmented system `A x = b` over `F_p`.
#[derive(Clone, Debug)]
pub struct FpSystem {
    p: u64,
    ncols: usize,
    rows: Vec<Vec<u64>>,
    rhs: Vec<u64>,
    pivots: Vec<usize>,
}

impl FpSystem {
    pub fn new(a: &SparseMatrix<PrimeField>, b: &[u64]) -> Self {
        assert_eq!(a.nrows(), b.len(), "right-hand side length");
        let p = a.ring().modulus();
        let mut rows = a.to_dense();
        let mut rhs = b.to_vec();
        let ncols = a.ncols();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == rows.len() {
                break;
            }
            let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
            rows.swap(r, i);
            rhs.swap(r, i);
            let inv = inv_mod(rows[r][c], p).expect("nonzero pivot");
            if inv != 1 {
                for x in rows[r][c..].iter_mut() {
                    *x = mul_mod(*x, inv, p);
                }
                rhs[r] = mul_mod(rhs[r], inv, p);
            }
            let (pivot_row, pivot_rhs) = (rows[r].clone(), rhs[r]);
            for i in 0..rows.len() {
                if i == r || rows[i][c] == 0 {
                    continue;
                }
                let f = p - rows[i][c];
                let row = &mut rows[i];
                for (x, &y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    if y != 0 {
                        *x = (*x + f * y) % p;
                    }
                }
                rhs[i] = (rhs[i] + f * pivot_rhs) % p;
            }
            pivots.push(c);
            r += 1;
        }
        FpSystem { p, ncols, rows, rhs, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        self.rhs[self.pivots.len()..].iter().all(|&x| x == 0)
    }

    /// Columns without a pivot; their values are free in [`FpSystem::solution`].
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.ncols).filter(|&c| !is_pivot[c]).collect()
    }

    /// The solution with free column `j` set to `free(j)`; `None` if inconsistent.
    pub fn solution(&self, mut free: impl FnMut(usize) -> u64) -> Option<Vec<u64>> {
        if !self.is_consistent() {
            return None;
        }
        let p = self.p;
        let mut x = vec![0u64; self.ncols];
        let free_cols = self.free_columns();
        for &j in &free_cols {
            x[j] = free(j) % p;
        }
        for (k, &c) in self.pivots.iter().enumerate() {
            let mut v = self.rhs[k];
            for &j in &free_cols {
                if x[j] != 0 && self.rows[k][j] != 0 {
                    v = (v + (p - self.rows[k][j]) * x[j]) % p;
                }
            }
            x[c] = v;
        }
        Some(x)
    }
}

/// Rank of a matrix over `F_p`.
pub fn rank_mod(a: &SparseMatrix<PrimeField>) -> usize {
    FpSystem::new(a, &vec![0; a.nrows()]).rank()
}

/// Whether `b` lies in the column span of `a` over `F_p`.
pub fn in_image_mod(a: &SparseMatrix<PrimeField>, b: &[u64]) -> bool {
    FpSystem::new(a, b).is_consistent()
}

/// `A x` over `F_p`.
pub fn apply_mod(a: &SparseMatrix<PrimeField>, x: &[u64]) -> Vec<u64> {
    let ring = *a.ring();
    let mut y = vec![0u64; a.nrows()];
    for (j, &xj) in x.iter().enumerate() {
        if xj == 0 {
            continue;
        }
        for (i, v) in a.column(j) {
            y[*i] = ring.add(&y[*i], &ring.mul(v, &xj));
        }
    }
    y
}
