//! Small named complexes used by tests, the acceptance suite and the CLI
//! demos, plus a seeded random complex generator.

use std::f64::consts::PI;

use num_bigint::BigInt;
use rand::Rng;

use crate::complex::{build_rips, Chain, Cochain, FilteredComplex};
use crate::ring::Integers;

/// Vertices `a = 0, b = 1, c = 2` with the 2-simplex `abc`, all at filtration 1.
pub fn filled_triangle() -> FilteredComplex {
    FilteredComplex::from_maximal([(vec![0, 1, 2], 1.0)]).unwrap()
}

/// Six points evenly spaced on the unit circle; adjacent points at distance 1.
pub fn hexagon_points() -> Vec<Vec<f64>> {
    circle_points(6)
}

/// The hexagon graph: Rips of [`hexagon_points`] at threshold 1.05.
pub fn hexagon() -> FilteredComplex {
    build_rips(&hexagon_points(), 1.05, 1).unwrap()
}

/// `n` points evenly spaced on the unit circle, point `i` at angle `2πi/n`.
pub fn circle_points(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// On a complex whose vertices `0..n` go once around a circle in order and
/// whose edges are short arcs: `−1` on every edge `[i, j]` with `j − i > n/2`
/// (the edges crossing angle zero). An integer cocycle pairing to `1` with
/// [`loop_cycle`].
pub fn wrap_cocycle(k: &FilteredComplex, n: usize) -> Cochain<BigInt> {
    let entries = k
        .simplices(1)
        .iter()
        .enumerate()
        .filter(|(_, s)| 2 * (s.vertices()[1] - s.vertices()[0]) > n)
        .map(|(i, _)| (i, BigInt::from(-1)));
    Cochain::from_entries(&Integers, 1, entries)
}

/// `Σ_i [i, i+1] − [0, n−1]`, the loop through the vertices in order.
pub fn loop_cycle(k: &FilteredComplex, n: usize) -> Chain<BigInt> {
    let mut c = Chain::zero(1);
    for i in 0..n {
        let j = (i + 1) % n;
        let idx = k.index_of(&[i.min(j), i.max(j)]).expect("consecutive vertices are joined");
        c.add_at(&Integers, idx, &BigInt::from(if i < j { 1 } else { -1 }));
    }
    c
}

/// Vertices `a, b, c, d = 0, 1, 2, 3` with all six edges and no triangles.
pub fn square_with_diagonals() -> FilteredComplex {
    let edges = [[0, 1], [1, 2], [2, 3], [0, 3], [0, 2], [1, 3]];
    FilteredComplex::from_maximal(edges.iter().map(|e| (e.to_vec(), 1.0))).unwrap()
}

/// Two disjoint triangles' boundaries: vertices 0..3 and 3..6.
pub fn two_circles() -> FilteredComplex {
    let edges = [[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5]];
    FilteredComplex::from_maximal(edges.iter().map(|e| (e.to_vec(), 1.0))).unwrap()
}

/// The 6-vertex triangulation of the real projective plane (`H_1 = Z/2`).
pub fn projective_plane() -> FilteredComplex {
    let tris = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 1, 5],
        [1, 2, 4],
        [2, 3, 5],
        [1, 3, 4],
        [2, 4, 5],
        [1, 3, 5],
    ];
    FilteredComplex::from_maximal(tris.iter().map(|t| (t.to_vec(), 1.0))).unwrap()
}

/// A disk whose boundary 9-gon wraps three times around a triangle
/// `a0 a1 a2`; the result has `H_1 = Z/3` and `H^2 = Z/3`.
///
/// Vertices: `a_j = j` (0..3), inner ring `u_i = 3 + i` (0..9), centre 12.
pub fn mod3_moore_space() -> FilteredComplex {
    let a = |i: usize| i % 3;
    let u = |i: usize| 3 + i % 9;
    let centre = 12;
    let mut tris = Vec::new();
    for i in 0..9 {
        tris.push(vec![a(i), a(i + 1), u(i)]);
        tris.push(vec![a(i + 1), u(i), u(i + 1)]);
        tris.push(vec![centre, u(i), u(i + 1)]);
    }
    FilteredComplex::from_maximal(tris.into_iter().map(|t| (t, 1.0))).unwrap()
}

/// Rips complex of `n` uniform points in the unit square at a random scale,
/// up to dimension `max_dim`.
pub fn random_rips<R: Rng + ?Sized>(rng: &mut R, n: usize, max_dim: usize) -> FilteredComplex {
    let points: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.random::<f64>(), rng.random::<f64>()]).collect();
    let threshold = rng.random_range(0.2..0.7);
    build_rips(&points, threshold, max_dim).unwrap()
}

/// A random flag complex on `n` vertices with edge probability `density` and
/// random filtration values, up to dimension `max_dim`.
pub fn random_flag<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64, max_dim: usize) -> FilteredComplex {
    // a random symmetric "distance" matrix; entries above 1 are non-edges
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let x = if rng.random_bool(density) { rng.random::<f64>() } else { 2.0 };
            d[i][j] = x;
            d[j][i] = x;
        }
    }
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, f64)> = (0..n).map(|v| (vec![v], 0.0)).collect();
    while let Some((s, val)) = stack.pop() {
        if s.len() <= max_dim {
            let last = *s.last().unwrap();
            for u in last + 1..n {
                if s.iter().all(|&w| d[w][u] <= 1.0) {
                    let v = s.iter().map(|&w| d[w][u]).fold(val, f64::max);
                    let mut t = s.clone();
                    t.push(u);
                    stack.push((t, v));
                }
            }
        }
        out.push((s, val));
    }
    FilteredComplex::with_dim(out, Some(max_dim)).unwrap()
}
