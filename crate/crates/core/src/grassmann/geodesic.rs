use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};

use super::angles::principal_decomposition;
use super::plane::{FramedPlane, Plane, TangentMatrix};
use crate::error::{GrassError, Result};
use crate::linalg::{frobenius_inner, orthonormalize, sorted_svd};

/// Default absolute tolerance (radians) for "angle equals pi/2".
pub const DEFAULT_TOL_CUT: f64 = 1e-9;

fn check_frame(at: &FramedPlane, v: &TangentMatrix) -> Result<()> {
    if v.attached_to != at.id() {
        return Err(GrassError::FrameMismatch);
    }
    Ok(())
}

/// The invariant metric: Frobenius inner product of tangent matrices.
pub fn metric(at: &FramedPlane, v1: &TangentMatrix, v2: &TangentMatrix) -> Result<f64> {
    check_frame(at, v1)?;
    check_frame(at, v2)?;
    Ok(frobenius_inner(&v1.a, &v2.a))
}

/// Unchecked exponential on a raw `(n-k) x k` matrix expressed in `frame`.
pub(crate) fn exp_raw(frame: &DMatrix<f64>, k: usize, a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = frame.nrows();
    let e1 = frame.columns(0, k);
    let e2 = frame.columns(k, n - k);
    let (u, mu, v) = sorted_svd(a);
    let cos = DMatrix::from_diagonal(&DVector::from_iterator(k, mu.iter().map(|m| m.cos())));
    let sin = DMatrix::from_diagonal(&DVector::from_iterator(k, mu.iter().map(|m| m.sin())));
    let y = e1 * &v * cos * v.transpose() + e2 * u * sin * v.transpose();
    orthonormalize(&y)
}

/// Riemannian exponential `exp_E(v_A)`.
///
/// With `A = U diag(mu) V^T` the result is spanned by
/// `E1 V cos(mu) + E2 U sin(mu)`, where `[E1 | E2]` is the frame.
pub fn exp(at: &FramedPlane, a: &TangentMatrix) -> Result<Plane> {
    check_frame(at, a)?;
    Plane::from_orthonormal(exp_raw(at.frame(), at.k(), &a.a))
}

/// Point `gamma_A(t) = exp_E(t v_A)` on the geodesic with initial velocity `v_A`.
pub fn geodesic_point(at: &FramedPlane, a: &TangentMatrix, t: f64) -> Result<Plane> {
    check_frame(at, a)?;
    Plane::from_orthonormal(exp_raw(at.frame(), at.k(), &(&a.a * t)))
}

/// `theta / sin(theta)`, with the Taylor form near zero.
pub(crate) fn theta_over_sin(theta: f64) -> f64 {
    if theta < 1e-4 {
        1.0 + theta * theta / 6.0
    } else {
        theta / theta.sin()
    }
}

/// Tangent matrix of the rotation carrying `at` to `target` along principal
/// angles, with no cut-locus check. On the cut locus this is one of the
/// minimizing preimages.
pub(crate) fn connecting_matrix(at: &FramedPlane, target: &Plane) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let d = principal_decomposition(at.plane(), target)?;
    let k = at.k();
    let scale = DMatrix::from_diagonal(&DVector::from_iterator(k, d.angles.iter().map(|&t| theta_over_sin(t))));
    let a = at.complement().transpose() * &d.q_vectors * scale * d.u.transpose();
    Ok((a, d.angles))
}

/// Riemannian logarithm with the default cut tolerance.
pub fn log(at: &FramedPlane, target: &Plane) -> Result<TangentMatrix> {
    log_with_tol(at, target, DEFAULT_TOL_CUT)
}

/// Riemannian logarithm: the unique `A` with singular values below pi/2 and
/// `exp_E(v_A) = target`. Fails with `OnCutLocus` when the largest principal
/// angle is within `tol_cut` of pi/2.
pub fn log_with_tol(at: &FramedPlane, target: &Plane, tol_cut: f64) -> Result<TangentMatrix> {
    let (a, angles) = connecting_matrix(at, target)?;
    let largest = angles.last().copied().unwrap_or(0.0);
    if largest >= FRAC_PI_2 - tol_cut {
        return Err(GrassError::OnCutLocus { largest, tol: tol_cut });
    }
    at.tangent(a)
}
