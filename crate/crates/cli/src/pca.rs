use circlift::{Error, Result};
use nalgebra::DMatrix;

/// Projection onto the top two principal components. Axes are ordered by
/// variance and each is signed so its largest-magnitude coordinate is
/// positive. A rank-one cloud gets a zero second axis.
pub fn pca_project(points: &[Vec<f64>]) -> Result<Vec<[f64; 2]>> {
    let n = points.len();
    if n < 2 {
        return Err(Error::DegenerateData);
    }
    let d = points[0].len();
    if d == 0 || points.iter().any(|p| p.len() != d) {
        return Err(Error::DegenerateData);
    }
    let mean: Vec<f64> = (0..d).map(|j| points.iter().map(|p| p[j]).sum::<f64>() / n as f64).collect();
    let x = DMatrix::from_fn(n, d, |i, j| points[i][j] - mean[j]);
    let scale = x.amax();
    if scale == 0.0 {
        return Err(Error::DegenerateData);
    }
    let svd = x.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let tiny = 1e-12 * scale * (n.max(d) as f64);
    let axis = |k: usize| -> Vec<f64> {
        match order.get(k) {
            Some(&c) if svd.singular_values[c] > tiny => {
                let s = svd.singular_values[c];
                let col: Vec<f64> = (0..n).map(|i| u[(i, c)] * s).collect();
                let pivot = col.iter().copied().fold(0.0, |m: f64, v| if v.abs() > m.abs() { v } else { m });
                if pivot < 0.0 {
                    col.into_iter().map(|v| -v).collect()
                } else {
                    col
                }
            }
            _ => vec![0.0; n],
        }
    };
    let (a, b) = (axis(0), axis(1));
    if a.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateData);
    }
    Ok(a.into_iter().zip(b).map(|(x, y)| [x, y]).collect())
}
