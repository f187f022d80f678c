//! Principal angles and principal vectors.
//!
//! Cosines come from the SVD of `E1^T E2` in nonincreasing order, so the
//! angles come out nondecreasing. Each angle is evaluated as
//! `atan2(|q_i - cos_i p_i|, cos_i)`, which keeps full absolute accuracy near
//! both 0 and pi/2 where a plain `arccos` of the cosine loses half the digits.

use nalgebra::DMatrix;

use super::plane::Plane;
use crate::error::{GrassError, Result};
use crate::linalg::sorted_svd;

/// Paired principal vectors and angles between two planes of equal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalDecomposition {
    /// Nondecreasing angles in `[0, pi/2]`.
    pub angles: Vec<f64>,
    /// Cosines, the singular values of `E1^T E2` (nonincreasing).
    pub cosines: Vec<f64>,
    /// Principal vectors of the first plane, `E1 * U`.
    pub p_vectors: DMatrix<f64>,
    /// Principal vectors of the second plane, `E2 * V`.
    pub q_vectors: DMatrix<f64>,
    /// `U` from the SVD `E1^T E2 = U diag(cos) V^T`.
    pub u: DMatrix<f64>,
    /// `V` from the same SVD.
    pub v: DMatrix<f64>,
}

fn same_ambient(a: &Plane, b: &Plane) -> Result<()> {
    if a.n() != b.n() {
        return Err(GrassError::DimensionError(format!("ambient dimensions differ: {} vs {}", a.n(), b.n())));
    }
    Ok(())
}

/// Angles from cosines and the second-plane vectors, using the residual of
/// `q_i` against the first plane for the sine.
fn stable_angles(e1: &DMatrix<f64>, q: &DMatrix<f64>, cosines: &[f64]) -> Vec<f64> {
    let resid = q - e1 * (e1.transpose() * q);
    let mut out = Vec::with_capacity(cosines.len());
    let mut running = 0.0f64;
    for (i, &c) in cosines.iter().enumerate() {
        let s = resid.column(i).norm();
        let theta = s.atan2(c.max(0.0)).clamp(0.0, std::f64::consts::FRAC_PI_2);
        running = running.max(theta);
        out.push(running);
    }
    out
}

/// Principal decomposition of two planes in the same `G(k, n)`.
pub fn principal_decomposition(e1: &Plane, e2: &Plane) -> Result<PrincipalDecomposition> {
    same_ambient(e1, e2)?;
    if e1.k() != e2.k() {
        return Err(GrassError::DimensionError(format!("plane dimensions differ: {} vs {}", e1.k(), e2.k())));
    }
    let m = e1.basis().transpose() * e2.basis();
    let (u, cosines, v) = sorted_svd(&m);
    let p_vectors = e1.basis() * &u;
    let q_vectors = e2.basis() * &v;
    let angles = stable_angles(e1.basis(), &q_vectors, &cosines);
    Ok(PrincipalDecomposition { angles, cosines, p_vectors, q_vectors, u, v })
}

/// Principal angles between planes of possibly different dimensions.
///
/// Returns `min(k, k')` nondecreasing angles.
pub fn principal_angles_rect(e: &Plane, f: &Plane) -> Result<Vec<f64>> {
    same_ambient(e, f)?;
    let (big, small) = if e.k() >= f.k() { (e, f) } else { (f, e) };
    let m = big.basis().transpose() * small.basis();
    let (_, cosines, v) = sorted_svd(&m);
    let q = small.basis() * v;
    Ok(stable_angles(big.basis(), &q, &cosines))
}

/// Principal angles between two planes of the same dimension.
pub fn principal_angles(e1: &Plane, e2: &Plane) -> Result<Vec<f64>> {
    Ok(principal_decomposition(e1, e2)?.angles)
}

/// Grassmann distance `sqrt(sum theta_i^2)`.
pub fn grassmann_distance(e1: &Plane, e2: &Plane) -> Result<f64> {
    let angles = principal_angles(e1, e2)?;
    Ok(angles.iter().map(|t| t * t).sum::<f64>().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::plane::make_plane;
    use std::f64::consts::FRAC_PI_2;

    fn coord_plane(n: usize, idx: &[usize]) -> Plane {
        let mut m = DMatrix::zeros(n, idx.len());
        for (j, &i) in idx.iter().enumerate() {
            m[(i, j)] = 1.0;
        }
        make_plane(&m, 1e-12).unwrap()
    }

    fn line(t: f64) -> Plane {
        make_plane(&DMatrix::from_column_slice(2, 1, &[t.cos(), t.sin()]), 1e-12).unwrap()
    }

    #[test]
    fn shared_and_orthogonal_vectors() {
        let a = principal_angles(&coord_plane(4, &[0, 1]), &coord_plane(4, &[0, 2])).unwrap();
        assert!(a[0].abs() < 1e-15);
        assert!((a[1] - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn lines_in_the_plane() {
        for &t in &[1e-9, 0.3, 1.2, FRAC_PI_2 - 1e-9] {
            let a = principal_angles(&line(0.0), &line(t)).unwrap();
            assert!((a[0] - t).abs() < 1e-15, "t = {t}");
            assert!((grassmann_distance(&line(0.0), &line(t)).unwrap() - t).abs() < 1e-15);
        }
    }

    #[test]
    fn orthogonal_planes_distance() {
        let d = grassmann_distance(&coord_plane(4, &[0, 1]), &coord_plane(4, &[2, 3])).unwrap();
        assert!((d - FRAC_PI_2 * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn decomposition_invariants() {
        let raw1 = DMatrix::from_row_slice(5, 2, &[1.0, 0.2, 0.3, 1.0, -0.5, 0.1, 0.2, 0.7, 0.0, -0.4]);
        let raw2 = DMatrix::from_row_slice(5, 2, &[0.1, -1.0, 0.9, 0.3, 0.2, 0.2, -0.6, 0.1, 0.4, 0.5]);
        let e1 = make_plane(&raw1, 1e-12).unwrap();
        let e2 = make_plane(&raw2, 1e-12).unwrap();
        let d = principal_decomposition(&e1, &e2).unwrap();
        assert!(d.angles[0] <= d.angles[1]);
        let pq = d.p_vectors.transpose() * &d.q_vectors;
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { d.angles[i].cos() } else { 0.0 };
                assert!((pq[(i, j)] - target).abs() < 1e-12);
            }
        }
        let span0 = DMatrix::from_columns(&[d.p_vectors.column(0), d.q_vectors.column(0)]);
        let span1 = DMatrix::from_columns(&[d.p_vectors.column(1), d.q_vectors.column(1)]);
        assert!((span0.transpose() * span1).norm() < 1e-12);
    }

    #[test]
    fn rect_subspace_and_orthogonal_line() {
        let e = coord_plane(4, &[0, 1]);
        let f = coord_plane(4, &[1]);
        assert!(principal_angles_rect(&e, &f).unwrap()[0].abs() < 1e-15);
        let g = coord_plane(4, &[2]);
        assert!((principal_angles_rect(&e, &g).unwrap()[0] - FRAC_PI_2).abs() < 1e-15);
        let other = make_plane(&DMatrix::identity(5, 1), 1e-12).unwrap();
        assert!(principal_angles_rect(&e, &other).is_err());
    }
}
