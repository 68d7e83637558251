//! Sparse integer diagonalization by unimodular row and column operations.
//!
//! The result is a diagonal form `U A V = D` (not necessarily with the
//! divisibility chain of the Smith normal form; [`elementary_divisors`]
//! normalizes it). Row operations are replayed on right-hand sides and column
//! operations are accumulated into `V`, which is enough to solve `A x = b`
//! over `Z`, read off a kernel basis and detect torsion.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::complex::SparseMatrix;
use crate::ring::Integers;

#[derive(Clone, Debug)]
struct Work {
    rows: Vec<BTreeMap<usize, BigInt>>,
    col_rows: Vec<BTreeSet<usize>>,
    rhs: Vec<Vec<BigInt>>,
    v: Option<Vec<BTreeMap<usize, BigInt>>>,
}

impl Work {
    /// `row_i -= q * row_r`, replayed on every right-hand side.
    fn row_axpy(&mut self, i: usize, r: usize, q: &BigInt) {
        let src: Vec<(usize, BigInt)> = self.rows[r].iter().map(|(&j, a)| (j, a.clone())).collect();
        for (j, a) in src {
            let entry = self.rows[i].entry(j).or_insert_with(BigInt::zero);
            *entry -= q * a;
            if entry.is_zero() {
                self.rows[i].remove(&j);
                self.col_rows[j].remove(&i);
            } else {
                self.col_rows[j].insert(i);
            }
        }
        for b in &mut self.rhs {
            let t = q * &b[r];
            b[i] -= t;
        }
    }

    /// `col_j -= q * col_c` where column `c` is already cleared except at row `r`.
    fn col_axpy(&mut self, j: usize, c: usize, r: usize, q: &BigInt) {
        let a = q * &self.rows[r][&c];
        let entry = self.rows[r].entry(j).or_insert_with(BigInt::zero);
        *entry -= a;
        if entry.is_zero() {
            self.rows[r].remove(&j);
            self.col_rows[j].remove(&r);
        }
        if let Some(v) = &mut self.v {
            let src: Vec<(usize, BigInt)> = v[c].iter().map(|(&k, x)| (k, x.clone())).collect();
            for (k, x) in src {
                let e = v[j].entry(k).or_insert_with(BigInt::zero);
                *e -= q * x;
                if e.is_zero() {
                    v[j].remove(&k);
                }
            }
        }
    }

    fn select_pivot(&self, active_cols: &BTreeSet<usize>) -> Option<(usize, usize)> {
        let mut best: Option<((bool, BigInt, usize), (usize, usize))> = None;
        for &c in active_cols {
            for &r in &self.col_rows[c] {
                let a = self.rows[r][&c].abs();
                let fill = (self.rows[r].len() - 1) * (self.col_rows[c].len() - 1);
                let key = (!a.is_one(), a, fill);
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    let unit_no_fill = !key.0 && key.2 == 0;
                    best = Some((key, (r, c)));
                    if unit_no_fill {
                        return best.map(|b| b.1);
                    }
                }
            }
        }
        best.map(|b| b.1)
    }
}

/// A diagonalized integer matrix with its transformed right-hand sides.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    nrows: usize,
    ncols: usize,
    /// `(row, column, diagonal entry)` of every pivot.
    pivots: Vec<(usize, usize, BigInt)>,
    rhs: Vec<Vec<BigInt>>,
    v: Option<Vec<BTreeMap<usize, BigInt>>>,
}

impl Diagonalization {
    /// Diagonalizes `a`, transforming every vector in `rhs` by the row operations.
    /// `V` is accumulated only when `track_columns` is set.
    pub fn new(a: &SparseMatrix<Integers>, rhs: Vec<Vec<BigInt>>, track_columns: bool) -> Self {
        let (nrows, ncols) = (a.nrows(), a.ncols());
        let mut rows = vec![BTreeMap::new(); nrows];
        let mut col_rows = vec![BTreeSet::new(); ncols];
        for j in 0..ncols {
            for (i, x) in a.column(j) {
                rows[*i].insert(j, x.clone());
                col_rows[j].insert(*i);
            }
        }
        for b in &rhs {
            assert_eq!(b.len(), nrows, "right-hand side length");
        }
        let v = track_columns
            .then(|| (0..ncols).map(|j| BTreeMap::from([(j, BigInt::one())])).collect());
        let mut w = Work { rows, col_rows, rhs, v };
        let mut active_cols: BTreeSet<usize> = (0..ncols).filter(|&j| !w.col_rows[j].is_empty()).collect();
        let mut pivots = Vec::new();

        while let Some((mut r, mut c)) = w.select_pivot(&active_cols) {
            loop {
                // clear column c below/above the pivot by row operations
                let others: Vec<usize> = w.col_rows[c].iter().copied().filter(|&i| i != r).collect();
                let piv = w.rows[r][&c].clone();
                for &i in &others {
                    let q = &w.rows[i][&c] / &piv;
                    if !q.is_zero() {
                        w.row_axpy(i, r, &q);
                    }
                }
                let smaller = w.col_rows[c]
                    .iter()
                    .copied()
                    .filter(|&i| i != r)
                    .min_by_key(|&i| w.rows[i][&c].abs());
                if let Some(i) = smaller {
                    r = i;
                    continue;
                }
                // clear row r by column operations
                let others: Vec<usize> = w.rows[r].keys().copied().filter(|&j| j != c).collect();
                for &j in &others {
                    let q = &w.rows[r][&j] / &piv;
                    if !q.is_zero() {
                        w.col_axpy(j, c, r, &q);
                    }
                }
                let smaller = w.rows[r].iter().filter(|(&j, _)| j != c).min_by_key(|(_, a)| a.abs()).map(|(&j, _)| j);
                if let Some(j) = smaller {
                    c = j;
                    continue;
                }
                break;
            }
            let d = w.rows[r].remove(&c).expect("pivot entry");
            debug_assert!(w.rows[r].is_empty());
            w.col_rows[c].remove(&r);
            debug_assert!(w.col_rows[c].is_empty());
            active_cols.remove(&c);
            pivots.push((r, c, d));
        }
        debug_assert!(w.rows.iter().all(BTreeMap::is_empty));
        Diagonalization { nrows, ncols, pivots, rhs: w.rhs, v: w.v }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Absolute values of the diagonal entries, unordered.
    pub fn diagonal(&self) -> Vec<BigInt> {
        self.pivots.iter().map(|(_, _, d)| d.abs()).collect()
    }

    /// Solves `A x = b_k` for the `k`-th right-hand side. Needs tracked columns.
    pub fn solve(&self, k: usize) -> Option<Vec<BigInt>> {
        let v = self.v.as_ref().expect("solve needs tracked column operations");
        let b = &self.rhs[k];
        let mut on_pivot_row = vec![false; self.nrows];
        let mut x = vec![BigInt::zero(); self.ncols];
        for (r, c, d) in &self.pivots {
            on_pivot_row[*r] = true;
            let (y, rem) = b[*r].div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            if y.is_zero() {
                continue;
            }
            for (i, a) in &v[*c] {
                x[*i] += a * &y;
            }
        }
        if (0..self.nrows).any(|i| !on_pivot_row[i] && !b[i].is_zero()) {
            return None;
        }
        Some(x)
    }

    /// A basis of the integer kernel of `A`. Needs tracked columns.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let v = self.v.as_ref().expect("kernel needs tracked column operations");
        let mut is_pivot = vec![false; self.ncols];
        for (_, c, _) in &self.pivots {
            is_pivot[*c] = true;
        }
        (0..self.ncols)
            .filter(|&j| !is_pivot[j])
            .map(|j| {
                let mut x = vec![BigInt::zero(); self.ncols];
                for (i, a) in &v[j] {
                    x[*i] = a.clone();
                }
                x
            })
            .collect()
    }
}

/// Solves `A x = b` over `Z`; `None` if no integer solution exists.
pub fn solve_integer(a: &SparseMatrix<Integers>, b: &[BigInt]) -> Option<Vec<BigInt>> {
    Diagonalization::new(a, vec![b.to_vec()], true).solve(0)
}

/// Nonzero elementary divisors `d_1 | d_2 | ...` of `A`.
pub fn elementary_divisors(a: &SparseMatrix<Integers>) -> Vec<BigInt> {
    let mut d = Diagonalization::new(a, Vec::new(), false).diagonal();
    // (x, y) -> (gcd, lcm) until the chain divides
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = d[i].lcm(&d[j]);
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d.sort();
    d
}

/// Integer kernel basis of `A`.
pub fn integer_kernel(a: &SparseMatrix<Integers>) -> Vec<Vec<BigInt>> {
    Diagonalization::new(a, Vec::new(), true).kernel_basis()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn matrix(rows: &[Vec<i64>]) -> SparseMatrix<Integers> {
        let ncols = rows.first().map_or(0, Vec::len);
        let cols = (0..ncols)
            .map(|j| rows.iter().enumerate().map(|(i, r)| (i, BigInt::from(r[j]))).collect())
            .collect();
        SparseMatrix::from_columns(Integers, rows.len(), cols)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn divisors_of_known_matrices() {
        assert_eq!(elementary_divisors(&matrix(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]])), big(&[2, 6, 12]));
        assert_eq!(elementary_divisors(&matrix(&[vec![6, 0], vec![0, 4]])), big(&[2, 12]));
        assert_eq!(elementary_divisors(&matrix(&[vec![0, 0], vec![0, 0]])), big(&[]));
    }

    #[test]
    fn solve_detects_non_integral() {
        let a = matrix(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(solve_integer(&a, &big(&[4, 9])), Some(big(&[2, 3])));
        assert_eq!(solve_integer(&a, &big(&[1, 3])), None);
        let a = matrix(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(solve_integer(&a, &big(&[1, 2])), None);
    }

    fn mul(a: &[Vec<i64>], x: &[BigInt]) -> Vec<BigInt> {
        a.iter().map(|r| r.iter().zip(x).map(|(&u, v)| BigInt::from(u) * v).sum()).collect()
    }

    proptest! {
        #[test]
        fn solves_consistent_systems(
            rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..6),
            x in prop::collection::vec(-4i64..=4, 5),
        ) {
            let a = matrix(&rows);
            let b = mul(&rows, &big(&x));
            let sol = solve_integer(&a, &b).expect("b is in the integer image");
            prop_assert_eq!(mul(&rows, &sol), b);
            for k in integer_kernel(&a) {
                prop_assert!(mul(&rows, &k).iter().all(Zero::is_zero));
            }
            let d = Diagonalization::new(&a, Vec::new(), false);
            prop_assert_eq!(integer_kernel(&a).len(), 5 - d.rank());
        }
    }
}
