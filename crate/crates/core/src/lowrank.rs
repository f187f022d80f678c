//! Fixed-rank matrix sets, Eckart–Young critical points and the region of
//! matrices with singular values at most pi/2.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{GrassError, Result};
use crate::grassmann::sampling::{gaussian_matrix, rng_from_seed};
use crate::linalg::{k_subsets, sorted_svd};

/// Compact SVD `A = u diag(sigma) v^T`, `sigma` nonincreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdTriple {
    pub u: DMatrix<f64>,
    pub sigma: Vec<f64>,
    pub v: DMatrix<f64>,
}

impl SvdTriple {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.u * DMatrix::from_diagonal(&DVector::from_column_slice(&self.sigma)) * self.v.transpose()
    }
}

/// The set of `m x n` matrices of rank at most `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankRegion {
    pub r: usize,
    pub m: usize,
    pub n: usize,
}

impl RankRegion {
    pub fn new(r: usize, m: usize, n: usize) -> Result<RankRegion> {
        if r > m.min(n) {
            return Err(GrassError::DimensionError(format!("rank {r} exceeds min({m}, {n})")));
        }
        Ok(RankRegion { r, m, n })
    }

    /// Dimension `r (m + n - r)` of the fixed-rank manifold.
    pub fn manifold_dim(&self) -> usize {
        self.r * (self.m + self.n - self.r)
    }
}

/// Compact SVD with the sign convention of [`sorted_svd`].
pub fn svd(a: &DMatrix<f64>) -> SvdTriple {
    let (u, sigma, v) = sorted_svd(a);
    SvdTriple { u, sigma, v }
}

/// `A_I = U diag(sigma_I) V^T`, keeping the singular values whose 0-based
/// positions (in nonincreasing order) are listed in `index_set`.
pub fn truncate(a: &DMatrix<f64>, index_set: &[usize]) -> Result<DMatrix<f64>> {
    let t = svd(a);
    truncate_svd(&t, index_set)
}

pub(crate) fn truncate_svd(t: &SvdTriple, index_set: &[usize]) -> Result<DMatrix<f64>> {
    let p = t.sigma.len();
    let mut kept = vec![0.0; p];
    for &i in index_set {
        if i >= p {
            return Err(GrassError::IndexOutOfRange { index: i, len: p });
        }
        kept[i] = t.sigma[i];
    }
    Ok(&t.u * DMatrix::from_diagonal(&DVector::from_vec(kept)) * t.v.transpose())
}

/// One critical point of the distance to the rank-`r` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct EyPoint {
    /// 0-based positions of the kept singular values.
    pub index_set: Vec<usize>,
    pub matrix: DMatrix<f64>,
    /// `|A - A_I|_F`, equal to the norm of the discarded singular values.
    pub distance: f64,
}

/// Fails with `DegenerateSpectrum` unless the singular values are distinct
/// and positive at relative tolerance `tol_sv`.
pub fn check_distinct_spectrum(sigma: &[f64], tol_sv: f64) -> Result<()> {
    let scale = sigma.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    for i in 0..sigma.len() {
        if i + 1 < sigma.len() && sigma[i] - sigma[i + 1] <= tol_sv * scale {
            return Err(GrassError::DegenerateSpectrum { i, j: i + 1, tol: tol_sv });
        }
        if sigma[i] <= tol_sv * scale {
            return Err(GrassError::DegenerateSpectrum { i, j: i, tol: tol_sv });
        }
    }
    Ok(())
}

/// All `binomial(p, r)` critical points of the Frobenius distance from `A` to
/// the rank-`r` matrices, `p = min(m, n)`. The first entry (`I = {0..r-1}`) is
/// the minimizer.
pub fn ey_critical_set(a: &DMatrix<f64>, r: usize, tol_sv: f64) -> Result<Vec<EyPoint>> {
    let t = svd(a);
    let p = t.sigma.len();
    if r > p {
        return Err(GrassError::DimensionError(format!("rank {r} exceeds {p}")));
    }
    check_distinct_spectrum(&t.sigma, tol_sv)?;
    k_subsets(p, r)
        .into_iter()
        .map(|index_set| {
            let matrix = truncate_svd(&t, &index_set)?;
            let distance =
                (0..p).filter(|i| !index_set.contains(i)).map(|i| t.sigma[i] * t.sigma[i]).sum::<f64>().sqrt();
            Ok(EyPoint { index_set, matrix, distance })
        })
        .collect()
}

/// Adds a seeded random perturbation of Frobenius size `1e-8 |A|_F`. This
/// changes the instance; it exists to step off degenerate spectra.
pub fn perturb(a: &DMatrix<f64>, seed: u64) -> DMatrix<f64> {
    let g = gaussian_matrix(&mut rng_from_seed(seed), a.nrows(), a.ncols());
    let scale = 1e-8 * a.norm().max(f64::MIN_POSITIVE);
    let gn = g.norm();
    a + g * (scale / gn)
}

/// Normal-space residual `max(|U1^T (A - A_I)|, |(A - A_I) V1|)` of a rank-`r`
/// candidate `A_I`. It vanishes exactly when `A - A_I` is normal to the
/// fixed-rank manifold at `A_I`.
pub fn ey_normality_residual(a: &DMatrix<f64>, a_i: &DMatrix<f64>, r: usize) -> Result<f64> {
    let t = svd(a_i);
    let top = t.sigma.first().copied().unwrap_or(0.0);
    let found = t.sigma.iter().filter(|&&s| s > 1e-10 * top.max(f64::MIN_POSITIVE)).count();
    if found < r {
        return Err(GrassError::RankCollapse { found, expected: r });
    }
    let d = a - a_i;
    let u1 = t.u.columns(0, r);
    let v1 = t.v.columns(0, r);
    Ok((u1.transpose() * &d).norm().max((&d * v1).norm()))
}

/// Position of a matrix relative to the region `R_{pi/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPiRegion {
    Interior,
    Boundary,
    Outside,
}

/// Classifies `A` by its largest singular value against `pi/2 +- tol`.
pub fn in_r_half_pi(a: &DMatrix<f64>, tol: f64) -> HalfPiRegion {
    let smax = crate::linalg::singular_values(a).first().copied().unwrap_or(0.0);
    if smax < FRAC_PI_2 - tol {
        HalfPiRegion::Interior
    } else if smax <= FRAC_PI_2 + tol {
        HalfPiRegion::Boundary
    } else {
        HalfPiRegion::Outside
    }
}
