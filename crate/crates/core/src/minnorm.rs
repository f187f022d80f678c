//! Wolfe's algorithm for the minimum-norm point of a convex hull.

use nalgebra::{DMatrix, DVector};

use crate::linalg::pinv_solve;

/// Minimum-norm point of `co{points}` with its convex weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MinNormPoint {
    pub weights: Vec<f64>,
    pub point: DVector<f64>,
    pub norm: f64,
}

const MAX_MAJOR: usize = 1000;

/// Affine minimizer of `|sum a_i p_i|` subject to `sum a_i = 1` over the
/// active set, via the bordered normal equations.
fn affine_min(points: &[DVector<f64>], active: &[usize]) -> Vec<f64> {
    let s = active.len();
    let mut m = DMatrix::zeros(s + 1, s + 1);
    for (a, &i) in active.iter().enumerate() {
        for (b, &j) in active.iter().enumerate() {
            m[(a, b)] = points[i].dot(&points[j]);
        }
        m[(a, s)] = 1.0;
        m[(s, a)] = 1.0;
    }
    let mut rhs = DVector::zeros(s + 1);
    rhs[s] = 1.0;
    let sol = m
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|x| x.iter().all(|v| v.is_finite()))
        .unwrap_or_else(|| pinv_solve(&m, &rhs, 1e-14));
    sol.rows(0, s).iter().copied().collect()
}

fn combine(points: &[DVector<f64>], active: &[usize], lambda: &[f64]) -> DVector<f64> {
    let mut x = DVector::zeros(points[0].len());
    for (&i, &l) in active.iter().zip(lambda) {
        x.axpy(l, &points[i], 1.0);
    }
    x
}

/// Runs Wolfe's algorithm. `tol` is relative to the largest squared norm of
/// the input points. Panics on an empty point set.
pub fn min_norm_point(points: &[DVector<f64>], tol: f64) -> MinNormPoint {
    assert!(!points.is_empty(), "empty point set");
    let scale = points.iter().map(|p| p.norm_squared()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let start = (0..points.len())
        .min_by(|&a, &b| points[a].norm_squared().partial_cmp(&points[b].norm_squared()).unwrap())
        .unwrap();
    let mut active = vec![start];
    let mut lambda = vec![1.0];
    let mut x = points[start].clone();

    for _ in 0..MAX_MAJOR {
        let (j, best) = (0..points.len())
            .map(|i| (i, x.dot(&points[i])))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if x.norm_squared() - best <= tol * scale || active.contains(&j) {
            break;
        }
        active.push(j);
        lambda.push(0.0);
        loop {
            let alpha = affine_min(points, &active);
            if alpha.iter().all(|&a| a > 1e-14) {
                lambda = alpha;
                break;
            }
            let mut theta = 1.0f64;
            for (l, a) in lambda.iter().zip(&alpha) {
                if *a <= 1e-14 {
                    theta = theta.min(l / (l - a));
                }
            }
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l += theta * (a - *l);
            }
            let keep: Vec<bool> = lambda.iter().map(|&l| l > 1e-14).collect();
            active = active.iter().zip(&keep).filter(|(_, &k)| k).map(|(&i, _)| i).collect();
            lambda = lambda.iter().zip(&keep).filter(|(_, &k)| k).map(|(&l, _)| l).collect();
            let total: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= total);
        }
        x = combine(points, &active, &lambda);
    }

    let mut weights = vec![0.0; points.len()];
    for (&i, &l) in active.iter().zip(&lambda) {
        weights[i] = l;
    }
    let norm = x.norm();
    MinNormPoint { weights, point: x, norm }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    #[test]
    fn symmetric_pair() {
        let r = min_norm_point(&[v(&[1.0]), v(&[-1.0])], 1e-12);
        assert!(r.norm < 1e-15);
        assert!((r.weights[0] - 0.5).abs() < 1e-15 && (r.weights[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn segment_away_from_origin() {
        let r = min_norm_point(&[v(&[1.0, 1.0]), v(&[1.0, -1.0]), v(&[3.0, 0.0])], 1e-12);
        assert!((r.norm - 1.0).abs() < 1e-12);
        assert!(r.weights[2].abs() < 1e-12);
    }

    #[test]
    fn triangle_containing_origin() {
        let r = min_norm_point(&[v(&[1.0, 0.0]), v(&[-1.0, 1.0]), v(&[-1.0, -1.0]), v(&[2.0, 2.0])], 1e-12);
        assert!(r.norm < 1e-12);
        let total: f64 = r.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(r.weights.iter().all(|&w| w >= 0.0));
    }
}
