//! Harmonic smoothing of integer 1-cocycles and the circle-valued maps they
//! integrate to.

use std::collections::{BTreeMap, VecDeque};

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::complex::{Cochain, FilteredComplex};
use crate::error::{Error, Result};
use crate::ring::Integers;

/// Relative residual accepted for the normal equations.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Mod-1 defect accepted on an edge of a circular map.
pub const EDGE_TOLERANCE: f64 = 1e-6;
/// Graphs with fewer vertices are solved by dense Cholesky.
const DENSE_LIMIT: usize = 500;

/// `α̃ = ι(α) + δ₀f` with `δ₀*α̃ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothedCocycle {
    /// Indexed by edge index.
    pub alpha_tilde: Vec<f64>,
    /// Indexed by vertex index.
    pub potential: Vec<f64>,
    /// `‖δ₀*α̃‖`.
    pub residual_norm: f64,
    /// `‖δ₀*α̃‖ / ‖δ₀*ι(α)‖` (or the absolute residual when the latter vanishes).
    pub relative_residual: f64,
}

/// `(tail, head)` vertex indices of every edge `[a, b]`, `δ₀f(ab) = f(b) − f(a)`.
fn edge_ends(complex: &FilteredComplex) -> Vec<(usize, usize)> {
    (0..complex.count(1))
        .map(|e| {
            let f = complex.faces_of(1, e);
            // face 0 omits the first vertex, so it is the head
            (f[1], f[0])
        })
        .collect()
}

/// `δ₀* a`: at every vertex, incoming minus outgoing edge values.
fn codifferential(n: usize, ends: &[(usize, usize)], a: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for (&(u, v), &x) in ends.iter().zip(a) {
        out[v] += x;
        out[u] -= x;
    }
    out
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Connected component label of every vertex, labels in order of lowest vertex.
pub fn components(complex: &FilteredComplex) -> Vec<usize> {
    let n = complex.count(0);
    let adj = adjacency(n, &edge_ends(complex));
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &(u, _, _) in &adj[v] {
                if label[u] == usize::MAX {
                    label[u] = next;
                    queue.push_back(u);
                }
            }
        }
        next += 1;
    }
    label
}

/// Neighbours of every vertex as `(neighbour, edge, sign)`, where `sign` is
/// `+1` when the edge points from the vertex to the neighbour.
fn adjacency(n: usize, ends: &[(usize, usize)]) -> Vec<Vec<(usize, usize, f64)>> {
    let mut adj = vec![Vec::new(); n];
    for (e, &(u, v)) in ends.iter().enumerate() {
        adj[u].push((v, e, 1.0));
        adj[v].push((u, e, -1.0));
    }
    adj
}

/// Solves `L f = b` for the graph Laplacian with `f = 0` on `anchored` vertices.
fn solve_laplacian(adj: &[Vec<(usize, usize, f64)>], anchored: &[bool], b: &[f64]) -> Result<Vec<f64>> {
    let n = adj.len();
    let free: Vec<usize> = (0..n).filter(|&v| !anchored[v]).collect();
    let mut slot = vec![usize::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        slot[v] = i;
    }
    let k = free.len();
    let mut f = vec![0.0; n];
    if k == 0 {
        return Ok(f);
    }
    let rhs: Vec<f64> = free.iter().map(|&v| b[v]).collect();
    let x = if n < DENSE_LIMIT {
        let mut a = DMatrix::<f64>::zeros(k, k);
        for (i, &v) in free.iter().enumerate() {
            a[(i, i)] = adj[v].len() as f64;
            for &(u, _, _) in &adj[v] {
                if slot[u] != usize::MAX {
                    a[(i, slot[u])] -= 1.0;
                }
            }
        }
        let chol = a.cholesky().ok_or(Error::SolverDiverged(f64::NAN))?;
        chol.solve(&DVector::from_vec(rhs)).as_slice().to_vec()
    } else {
        conjugate_gradient(adj, &free, &slot, &rhs)?
    };
    for (i, &v) in free.iter().enumerate() {
        f[v] = x[i];
    }
    Ok(f)
}

/// Jacobi-preconditioned conjugate gradient on the anchored Laplacian.
fn conjugate_gradient(adj: &[Vec<(usize, usize, f64)>], free: &[usize], slot: &[usize], b: &[f64]) -> Result<Vec<f64>> {
    let k = free.len();
    let apply = |x: &[f64]| -> Vec<f64> {
        free.iter()
            .map(|&v| {
                let mut s = adj[v].len() as f64 * x[slot[v]];
                for &(u, _, _) in &adj[v] {
                    if slot[u] != usize::MAX {
                        s -= x[slot[u]];
                    }
                }
                s
            })
            .collect()
    };
    let diag: Vec<f64> = free.iter().map(|&v| adj[v].len() as f64).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok(vec![0.0; k]);
    }
    let mut x = vec![0.0; k];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for _ in 0..(10 * k + 1000) {
        let ap = apply(&p);
        let step = rz / dot(&p, &ap);
        for i in 0..k {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        if norm(&r) <= 1e-13 * b_norm {
            return Ok(x);
        }
        z = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..k {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::SolverDiverged(norm(&r) / b_norm))
}

/// The harmonic representative of an integer 1-cocycle: solves
/// `δ₀*δ₀ f = −δ₀*ι(α)` with the lowest vertex of every component anchored.
pub fn harmonic_smooth(complex: &FilteredComplex, alpha: &Cochain<BigInt>) -> Result<SmoothedCocycle> {
    if alpha.dim() != 1 {
        return Err(Error::DimensionMismatch(alpha.dim(), 1));
    }
    if !alpha.fits(complex) || !complex.coboundary(&Integers, alpha)?.is_zero() {
        return Err(Error::NotACocycle);
    }
    let n = complex.count(0);
    let ends = edge_ends(complex);
    let a: Vec<f64> = alpha
        .to_dense(&Integers, complex.count(1))
        .iter()
        .map(|x| x.to_f64().expect("finite coefficient"))
        .collect();
    let b: Vec<f64> = codifferential(n, &ends, &a).iter().map(|x| -x).collect();
    let label = components(complex);
    let mut anchored = vec![false; n];
    let mut seen = vec![false; label.iter().max().map_or(0, |m| m + 1)];
    for v in 0..n {
        if !seen[label[v]] {
            seen[label[v]] = true;
            anchored[v] = true;
        }
    }
    let f = solve_laplacian(&adjacency(n, &ends), &anchored, &b)?;
    let alpha_tilde: Vec<f64> = ends.iter().zip(&a).map(|(&(u, v), x)| x + f[v] - f[u]).collect();
    let residual_norm = norm(&codifferential(n, &ends, &alpha_tilde));
    let b_norm = norm(&b);
    let relative_residual = if b_norm > 0.0 { residual_norm / b_norm } else { residual_norm };
    if !(relative_residual <= RESIDUAL_TOLERANCE) {
        return Err(Error::SolverDiverged(relative_residual));
    }
    Ok(SmoothedCocycle { alpha_tilde, potential: f, residual_norm, relative_residual })
}

/// Circle-valued vertex map, values in `[0, 1)` (fractions of a turn), keyed
/// by vertex id.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CircularCoords {
    pub values: BTreeMap<usize, f64>,
}

impl CircularCoords {
    pub fn get(&self, vertex: usize) -> Option<f64> {
        self.values.get(&vertex).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(1.0);
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

/// Distance between two points of `R/Z`, in `[0, 1/2]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = wrap(a - b);
    d.min(1.0 - d)
}

/// Every vertex at zero.
pub fn naive_circular_map(_alpha: &Cochain<BigInt>, complex: &FilteredComplex) -> CircularCoords {
    CircularCoords { values: complex.vertex_ids().into_iter().map(|v| (v, 0.0)).collect() }
}

/// Integrates `α̃` along a BFS spanning tree from `base_vertex` (and from the
/// lowest vertex of every other component), then checks every edge.
pub fn circular_map(smoothed: &SmoothedCocycle, complex: &FilteredComplex, base_vertex: Option<usize>) -> Result<CircularCoords> {
    let n = complex.count(0);
    let ends = edge_ends(complex);
    if smoothed.alpha_tilde.len() != ends.len() {
        return Err(Error::DimensionMismatch(smoothed.alpha_tilde.len(), ends.len()));
    }
    let adj = adjacency(n, &ends);
    let mut theta = vec![f64::NAN; n];
    let mut roots: Vec<usize> = Vec::new();
    if let Some(b) = base_vertex {
        roots.push(complex.index_of(&[b])?);
    }
    roots.extend(0..n);
    for s in roots {
        if !theta[s].is_nan() {
            continue;
        }
        theta[s] = 0.0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &(u, e, sign) in &adj[v] {
                if theta[u].is_nan() {
                    theta[u] = wrap(theta[v] + sign * smoothed.alpha_tilde[e]);
                    queue.push_back(u);
                }
            }
        }
    }
    for (e, &(u, v)) in ends.iter().enumerate() {
        let defect = circular_distance(theta[v] - theta[u], smoothed.alpha_tilde[e]);
        if defect > EDGE_TOLERANCE {
            return Err(Error::InconsistentCocycle(complex.simplex(1, e).vertices().to_vec(), defect));
        }
    }
    let ids = complex.simplices(0).iter().map(|s| s.vertices()[0]);
    Ok(CircularCoords { values: ids.zip(theta).collect() })
}

/// Agreement of two circle-valued maps up to rotation and reflection:
/// `max_{s = ±1, φ} 1 − 2·mean_v d(computed_v, s·truth_v + φ)`.
pub fn circular_correlation(computed: &CircularCoords, truth: &BTreeMap<usize, f64>) -> Result<f64> {
    if computed.values.len() != truth.len() || !computed.values.keys().eq(truth.keys()) {
        return Err(Error::VertexSetMismatch);
    }
    if truth.is_empty() {
        return Ok(1.0);
    }
    let pairs: Vec<(f64, f64)> = computed.values.values().copied().zip(truth.values().copied()).collect();
    let count = pairs.len() as f64;
    let mut best: f64 = 0.0;
    for s in [1.0, -1.0] {
        // the optimal offset aligns at least one vertex exactly
        for &(c0, t0) in &pairs {
            let phi = c0 - s * t0;
            let total: f64 = pairs.iter().map(|&(c, t)| circular_distance(c, s * t + phi)).sum();
            best = best.max(1.0 - 2.0 * total / count);
        }
    }
    Ok(best)
}
