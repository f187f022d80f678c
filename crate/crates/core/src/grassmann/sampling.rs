//! Seeded random planes, matrices and orthogonal matrices.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::plane::{make_plane, Plane};
use crate::error::Result;
use crate::linalg::orthonormalize;

/// Deterministic generator for a seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for `(seed, stream)`; streams never overlap.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `rows x cols` matrix of independent standard normals.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Haar-distributed orthogonal `n x n` matrix.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    orthonormalize(&gaussian_matrix(rng, n, n))
}

/// Uniformly distributed plane drawn from `rng`.
pub fn random_plane_with<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Result<Plane> {
    loop {
        match make_plane(&gaussian_matrix(rng, n, k), 1e-12) {
            Err(crate::GrassError::RankDeficient { .. }) => continue,
            other => return other,
        }
    }
}

/// Uniformly distributed plane in `G(k, n)`, reproducible from `seed`.
pub fn random_plane(n: usize, k: usize, seed: u64) -> Result<Plane> {
    random_plane_with(&mut rng_from_seed(seed), n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::angles::principal_angles;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn same_seed_same_plane() {
        assert_eq!(random_plane(6, 2, 42).unwrap(), random_plane(6, 2, 42).unwrap());
        assert_ne!(random_plane(6, 2, 42).unwrap(), random_plane(6, 2, 43).unwrap());
        assert!(random_plane(4, 3, 1).is_err());
    }

    #[test]
    fn samples_are_generic_against_fixed_plane() {
        let w = make_plane(&DMatrix::identity(5, 2), 1e-12).unwrap();
        let mut rng = rng_from_seed(7);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for _ in 0..1000 {
            let e = random_plane_with(&mut rng, 5, 2).unwrap();
            let a = principal_angles(&w, &e).unwrap();
            lo = lo.min(a[0]);
            hi = hi.max(a[1]);
        }
        assert!(lo > 1e-6);
        assert!(hi < FRAC_PI_2 - 1e-6);
    }

    #[test]
    fn uniform_lines_have_mean_cos_squared_half() {
        let mut rng = rng_from_seed(11);
        let mut acc = 0.0;
        let samples = 4000;
        for _ in 0..samples {
            let e = random_plane_with(&mut rng, 2, 1).unwrap();
            acc += e.basis()[(0, 0)].powi(2);
        }
        assert!((acc / samples as f64 - 0.5).abs() < 0.05);
    }

    #[test]
    fn streams_differ() {
        let a = gaussian_matrix(&mut stream_rng(1, 0), 2, 2);
        let b = gaussian_matrix(&mut stream_rng(1, 1), 2, 2);
        assert_ne!(a, b);
        assert_eq!(a, gaussian_matrix(&mut stream_rng(1, 0), 2, 2));
    }
}
