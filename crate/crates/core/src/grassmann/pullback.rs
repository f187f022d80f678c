//! Convergence of the rescaled pulled-back metric near a base point.
//!
//! With `phi_eps(A) = exp_W(eps A)`, the rescaled metric
//! `g_eps = eps^-2 phi_eps^* g` at `A` is `<D_{eps A} exp B1, D_{eps A} exp B2>`.
//! The differential is taken by central differences, read off in the log chart
//! of a frame at `exp_W(eps A)`.

use std::f64::consts::FRAC_PI_4;

use nalgebra::DMatrix;
use rand::Rng;

use super::geodesic::{exp_raw, log};
use super::plane::{complete_frame, FramedPlane, Plane};
use super::sampling::{gaussian_matrix, rng_from_seed};
use crate::error::{GrassError, Result};
use crate::linalg::frobenius_inner;

/// Central-difference step for a point of size `scale`.
pub fn fd_step(scale: f64) -> f64 {
    f64::EPSILON.cbrt() * scale.max(1.0)
}

/// Central-difference differential of `exp_W` at `a` applied to `b`, expressed
/// in the log chart of `at_e`.
pub(crate) fn dexp_in_chart(w: &FramedPlane, a: &DMatrix<f64>, b: &DMatrix<f64>, at_e: &FramedPlane) -> Result<DMatrix<f64>> {
    let h = fd_step(a.norm());
    let plus = Plane::from_orthonormal(exp_raw(w.frame(), w.k(), &(a + b * h)))?;
    let minus = Plane::from_orthonormal(exp_raw(w.frame(), w.k(), &(a - b * h)))?;
    let lp = log(at_e, &plus)?;
    let lm = log(at_e, &minus)?;
    Ok((lp.a - lm.a) / (2.0 * h))
}

/// Largest relative deviation `|g_eps(B1, B2) - <B1, B2>| / (|B1| |B2|)` over
/// `n_samples` random base points `A` in the unit ball and random pairs.
pub fn pullback_metric_error(w: &FramedPlane, eps: f64, n_samples: usize, seed: u64) -> Result<f64> {
    if !(eps > 0.0 && eps < FRAC_PI_4) {
        return Err(GrassError::InvalidArgument(format!("eps must lie in (0, pi/4), got {eps}")));
    }
    let (rows, cols) = (w.n() - w.k(), w.k());
    let mut rng = rng_from_seed(seed);
    let mut worst = 0.0f64;
    for _ in 0..n_samples {
        let dir = gaussian_matrix(&mut rng, rows, cols);
        let radius: f64 = rng.random::<f64>();
        let a = &dir * (radius / dir.norm().max(f64::MIN_POSITIVE));
        worst = worst.max(sample_error(w, &a, eps, &mut rng)?);
    }
    Ok(worst)
}

/// Relative deviation of the rescaled metric at a single base matrix `a`.
pub fn pullback_error_at<R: Rng + ?Sized>(w: &FramedPlane, a: &DMatrix<f64>, eps: f64, rng: &mut R) -> Result<f64> {
    sample_error(w, a, eps, rng)
}

fn sample_error<R: Rng + ?Sized>(w: &FramedPlane, a: &DMatrix<f64>, eps: f64, rng: &mut R) -> Result<f64> {
    let (rows, cols) = (w.n() - w.k(), w.k());
    let base = a * eps;
    let h = fd_step(base.norm());
    if eps <= 10.0 * h {
        return Err(GrassError::StepTooSmall { step: h, scale: eps });
    }
    let e = Plane::from_orthonormal(exp_raw(w.frame(), w.k(), &base))?;
    let at_e = complete_frame(&e);
    let b1 = gaussian_matrix(rng, rows, cols);
    let b2 = gaussian_matrix(rng, rows, cols);
    let d1 = dexp_in_chart(w, &base, &b1, &at_e)?;
    let d2 = dexp_in_chart(w, &base, &b2, &at_e)?;
    let mut worst = 0.0f64;
    for (x, y, dx, dy) in [(&b1, &b2, &d1, &d2), (&b1, &b1, &d1, &d1), (&b2, &b2, &d2, &d2)] {
        let err = (frobenius_inner(dx, dy) - frobenius_inner(x, y)).abs() / (x.norm() * y.norm());
        worst = worst.max(err);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::plane::make_plane;

    fn coord_frame(n: usize, k: usize) -> FramedPlane {
        complete_frame(&make_plane(&DMatrix::identity(n, k), 1e-12).unwrap())
    }

    #[test]
    fn error_shrinks_with_eps() {
        let w = coord_frame(5, 2);
        let big = pullback_metric_error(&w, 1e-1, 20, 3).unwrap();
        let small = pullback_metric_error(&w, 1e-3, 20, 3).unwrap();
        assert!(small < big);
    }

    #[test]
    fn zero_base_point_is_isometric() {
        let w = coord_frame(5, 2);
        let err = pullback_error_at(&w, &DMatrix::zeros(3, 2), 0.1, &mut rng_from_seed(1)).unwrap();
        assert!(err < 1e-8);
    }

    #[test]
    fn circle_is_flat() {
        let w = coord_frame(2, 1);
        assert!(pullback_metric_error(&w, 0.1, 50, 9).unwrap() < 0.02);
    }

    #[test]
    fn rejects_bad_eps() {
        let w = coord_frame(4, 2);
        assert!(matches!(pullback_metric_error(&w, 1e-6, 1, 0), Err(GrassError::StepTooSmall { .. })));
        assert!(pullback_metric_error(&w, 1.0, 1, 0).is_err());
    }
}
