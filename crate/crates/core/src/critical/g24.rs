//! The slice family of the oriented Grassmannian `G~(2,4) = S^2 x S^2` whose
//! critical-point system involves `arccos`, so it is not semialgebraic.

use nalgebra::DMatrix;

use crate::error::{GrassError, Result};

const UNIT_TOL: f64 = 1e-10;

fn check_unit(v: &[f64; 3]) -> Result<()> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(GrassError::NotUnit { norm });
    }
    Ok(())
}

fn angle(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    dot.clamp(-1.0, 1.0).acos()
}

/// Product-sphere distance `sqrt(angle(x, z)^2 + angle(y, w)^2)`.
pub fn g24_distance(x: &[f64; 3], y: &[f64; 3], z: &[f64; 3], w: &[f64; 3]) -> Result<f64> {
    for v in [x, y, z, w] {
        check_unit(v)?;
    }
    Ok(angle(x, z).hypot(angle(y, w)))
}

/// `arccos(w) / sqrt(1 - w^2)` on `(-1, 1)`.
pub fn alpha(w: f64) -> Result<f64> {
    if w.is_nan() || w.abs() >= 1.0 {
        return Err(GrassError::DomainError { value: w });
    }
    Ok(w.acos() / (1.0 - w * w).sqrt())
}

/// `alpha(y1) + beta * alpha(beta * y1)`.
pub fn g24_critical_residual(y1: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(GrassError::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    Ok(alpha(y1)? + beta * alpha(beta * y1)?)
}

/// Both sides of the determinant factorization for the `6 x 4` matrix of the slice family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetIdentity {
    /// `det(M^T M)` evaluated numerically.
    pub lhs: f64,
    /// `(x2^2 + x3^2)(y2^2 + y3^2)(alpha(y1) + beta alpha(x1))^2`.
    pub rhs: f64,
    pub relative: f64,
}

/// The `6 x 4` matrix whose rank drop characterizes critical points.
pub fn g24_matrix(x: &[f64; 3], y: &[f64; 3], beta: f64) -> Result<DMatrix<f64>> {
    let (ax, ay) = (alpha(x[0])?, alpha(y[0])?);
    #[rustfmt::skip]
    let rows = [
        x[0], 0.0, ax, 1.0,
        x[1], 0.0, 0.0, 0.0,
        x[2], 0.0, 0.0, 0.0,
        0.0, y[0], ay, -beta,
        0.0, y[1], 0.0, 0.0,
        0.0, y[2], 0.0, 0.0,
    ];
    Ok(DMatrix::from_row_slice(6, 4, &rows))
}

pub fn g24_det_identity_check(x: &[f64; 3], y: &[f64; 3], beta: f64) -> Result<DetIdentity> {
    check_unit(x)?;
    check_unit(y)?;
    let m = g24_matrix(x, y, beta)?;
    let lhs = (m.transpose() * &m).determinant();
    let factor = alpha(y[0])? + beta * alpha(x[0])?;
    let rhs = (x[1] * x[1] + x[2] * x[2]) * (y[1] * y[1] + y[2] * y[2]) * factor * factor;
    let scale = lhs.abs().max(rhs.abs());
    let relative = if scale > 0.0 { (lhs - rhs).abs() / scale } else { 0.0 };
    Ok(DetIdentity { lhs, rhs, relative })
}

/// Sign information of the residual for one `beta` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub beta: f64,
    /// Grid points inside the domain `|y1| < 1, |beta y1| < 1`.
    pub samples: usize,
    pub min: f64,
    pub max: f64,
    /// Bisected roots between sign changes (empty when the residual keeps its sign).
    pub roots: Vec<f64>,
}

/// Scans `y1` over `points` equally spaced values in `[-limit, limit]`.
pub fn g24_scan(betas: &[f64], limit: f64, points: usize) -> Result<Vec<ScanRow>> {
    if !(limit > 0.0 && limit < 1.0) || points < 2 {
        return Err(GrassError::InvalidArgument("need 0 < limit < 1 and at least two grid points".into()));
    }
    betas
        .iter()
        .map(|&beta| {
            let mut grid = Vec::new();
            for i in 0..points {
                let y1 = -limit + 2.0 * limit * i as f64 / (points - 1) as f64;
                if (beta * y1).abs() < 1.0 {
                    grid.push((y1, g24_critical_residual(y1, beta)?));
                }
            }
            let min = grid.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
            let max = grid.iter().map(|g| g.1).fold(f64::NEG_INFINITY, f64::max);
            let mut roots = Vec::new();
            for pair in grid.windows(2) {
                let ((mut a, fa), (mut b, _)) = (pair[0], pair[1]);
                if fa.signum() == pair[1].1.signum() {
                    continue;
                }
                for _ in 0..100 {
                    let mid = 0.5 * (a + b);
                    if g24_critical_residual(mid, beta)?.signum() == fa.signum() {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            Ok(ScanRow { beta, samples: grid.len(), min, max, roots })
        })
        .collect()
}
