use crate::error::{Error, Result};

use super::FilteredComplex;

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn distance_matrix(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let x = euclidean(&points[i], &points[j]);
            d[i][j] = x;
            d[j][i] = x;
        }
    }
    d
}

/// `min_i max_j d(i, j)`. Above this scale the Rips complex is a cone.
pub fn enclosing_radius(points: &[Vec<f64>]) -> f64 {
    distance_matrix(points)
        .iter()
        .map(|row| row.iter().copied().fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

/// Vietoris–Rips complex: every simplex on at most `max_dim + 1` points with
/// all pairwise distances `<= threshold`, filtered by its diameter.
pub fn build_rips(points: &[Vec<f64>], threshold: f64, max_dim: usize) -> Result<FilteredComplex> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(threshold >= 0.0) {
        return Err(Error::InvalidComplex(format!("negative threshold {threshold}")));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::Format("points have differing dimensions".into()));
    }
    let n = points.len();
    let dist = distance_matrix(points);
    let upper: Vec<Vec<usize>> =
        (0..n).map(|i| (i + 1..n).filter(|&j| dist[i][j] <= threshold).collect()).collect();

    let mut out: Vec<(Vec<usize>, f64)> = Vec::new();
    let mut clique = Vec::with_capacity(max_dim + 1);
    for v in 0..n {
        clique.clear();
        clique.push(v);
        out.push((vec![v], 0.0));
        expand(&dist, &upper, max_dim, &mut clique, &upper[v], 0.0, &mut out);
    }
    FilteredComplex::with_dim(out, Some(max_dim))
}

fn expand(
    dist: &[Vec<f64>],
    upper: &[Vec<usize>],
    max_dim: usize,
    clique: &mut Vec<usize>,
    candidates: &[usize],
    diameter: f64,
    out: &mut Vec<(Vec<usize>, f64)>,
) {
    if clique.len() > max_dim {
        return;
    }
    for (k, &u) in candidates.iter().enumerate() {
        let d = clique.iter().map(|&w| dist[w][u]).fold(diameter, f64::max);
        clique.push(u);
        out.push((clique.clone(), d));
        // candidates are ascending, so the common upper neighbourhood is a filter of the tail
        let next: Vec<usize> =
            candidates[k + 1..].iter().copied().filter(|c| upper[u].binary_search(c).is_ok()).collect();
        expand(dist, upper, max_dim, clique, &next, d, out);
        clique.pop();
    }
}
