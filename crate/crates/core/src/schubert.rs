//! Simple Schubert varieties `Omega_s(W) = {E : dim(E ∩ W) >= s}`.
//!
//! Smooth points are reached as `exp_W(A)` with `rank(A) = k - s` and
//! singular values below pi/2, so tangent spaces are pushed forward from the
//! fixed-rank manifold through the exponential chart at `W`.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use rand::Rng;

use crate::cutlocus::cut_stratum;
use crate::error::{GrassError, Result};
use crate::grassmann::angles::{grassmann_distance, principal_angles, principal_decomposition};
use crate::grassmann::geodesic::{exp_raw, log, log_with_tol};
use crate::grassmann::plane::{complete_frame, FramedPlane, Plane, TangentMatrix};
use crate::grassmann::pullback::dexp_in_chart;
use crate::grassmann::sampling::{gaussian_matrix, rng_from_seed};
use crate::linalg::{complete_orthonormal, frobenius_inner, k_subsets, orthogonal_complement, orthonormalize, singular_values, sorted_svd};
use crate::lowrank::truncate;
use crate::Tolerances;

/// `Omega_s(W)` for a framed reference plane `W` and `1 <= s <= k - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchubertVariety {
    pub w: FramedPlane,
    pub s: usize,
}

impl SchubertVariety {
    pub fn new(w: &Plane, s: usize) -> Result<SchubertVariety> {
        if s == 0 || s >= w.k() {
            return Err(GrassError::DimensionError(format!("need 1 <= s <= k - 1, got s = {s}, k = {}", w.k())));
        }
        Ok(SchubertVariety { w: complete_frame(w), s })
    }

    pub fn n(&self) -> usize {
        self.w.n()
    }

    pub fn k(&self) -> usize {
        self.w.k()
    }

    /// Rank `k - s` of the chart matrices of smooth points.
    pub fn chart_rank(&self) -> usize {
        self.k() - self.s
    }

    /// Dimension `(k - s)(n - k + s)` of the smooth part.
    pub fn dim(&self) -> usize {
        let r = self.chart_rank();
        r * (self.n() - r)
    }

    fn check_plane(&self, e: &Plane) -> Result<()> {
        if e.n() != self.n() || e.k() != self.k() {
            return Err(GrassError::DimensionError(format!(
                "plane in G({}, {}) does not match G({}, {})",
                e.k(),
                e.n(),
                self.k(),
                self.n()
            )));
        }
        Ok(())
    }
}

/// Membership and stratum of a plane in `Omega_s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchubertStratum {
    NotMember,
    Smooth,
    /// `dim(E ∩ W) = s + j`.
    Singular(usize),
}

pub fn schubert_stratum(omega: &SchubertVariety, e: &Plane, tol: f64) -> Result<SchubertStratum> {
    omega.check_plane(e)?;
    let shared = principal_angles(omega.w.plane(), e)?.iter().filter(|&&t| t < tol).count();
    Ok(if shared < omega.s {
        SchubertStratum::NotMember
    } else if shared == omega.s {
        SchubertStratum::Smooth
    } else {
        SchubertStratum::Singular(shared - omega.s)
    })
}

/// Orthonormal tangent basis of `Omega_s` at a smooth point, in the frame
/// `frame` completed at that point.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartTangent {
    pub frame: FramedPlane,
    pub basis: Vec<TangentMatrix>,
}

fn gram_schmidt(vectors: Vec<DMatrix<f64>>, drop_tol: f64) -> Vec<DMatrix<f64>> {
    let mut out: Vec<DMatrix<f64>> = Vec::with_capacity(vectors.len());
    for mut v in vectors {
        let size = v.norm();
        for _ in 0..2 {
            for b in &out {
                let c = frobenius_inner(&v, b);
                v -= b * c;
            }
        }
        let norm = v.norm();
        if norm > drop_tol * size.max(1.0) {
            out.push(v / norm);
        }
    }
    out
}

/// Tangent space of `Omega_s` at a smooth point `e`.
///
/// The tangent space of the rank-`r` matrices at `A = log_W(e)` is spanned by
/// `u_a v_b^T` with `a < r` or `b < r` (full SVD bases of `A`); each element
/// is pushed through a central-difference differential of `exp_W` and the
/// results are orthonormalized.
pub fn chart_tangent_basis(omega: &SchubertVariety, e: &Plane, tol: &Tolerances) -> Result<ChartTangent> {
    match schubert_stratum(omega, e, tol.gen)? {
        SchubertStratum::Smooth => {}
        other => return Err(GrassError::NotSmoothPoint(format!("stratum is {other:?}"))),
    }
    let a = match log_with_tol(&omega.w, e, tol.cut) {
        Ok(a) => a.a,
        Err(GrassError::OnCutLocus { largest, .. }) => return Err(GrassError::ChartOutOfRange { sigma_max: largest }),
        Err(err) => return Err(err),
    };
    let (u, _, v) = sorted_svd(&a);
    let (rows, cols) = a.shape();
    let u_full = complete_orthonormal(&u, rows);
    let r = omega.chart_rank();
    let frame = complete_frame(e);
    let mut pushed = Vec::with_capacity(omega.dim());
    for ia in 0..rows {
        for ib in 0..cols {
            if ia < r || ib < r {
                let z = u_full.column(ia) * v.column(ib).transpose();
                pushed.push(dexp_in_chart(&omega.w, &a, &z, &frame)?);
            }
        }
    }
    let basis = gram_schmidt(pushed, 1e-6);
    if basis.len() != omega.dim() {
        return Err(GrassError::NotSmoothPoint(format!("pushed tangent space has rank {}, expected {}", basis.len(), omega.dim())));
    }
    let basis = basis.into_iter().map(|m| frame.tangent(m)).collect::<Result<Vec<_>>>()?;
    Ok(ChartTangent { frame, basis })
}

/// Tangent space at a smooth point from the incidence description: maps
/// `phi: E -> E^perp` sending `E ∩ W` into the projection of `W` onto
/// `E^perp`. Has dimension `k(n-k) - s(n-2k+s)`, the same as the chart.
pub fn incidence_tangent_basis(omega: &SchubertVariety, e: &FramedPlane, tol: f64) -> Result<Vec<TangentMatrix>> {
    omega.check_plane(e.plane())?;
    let s = omega.s;
    let d = principal_decomposition(e.plane(), omega.w.plane())?;
    let shared = d.angles.iter().filter(|&&t| t < tol).count();
    if shared != s {
        return Err(GrassError::NotSmoothPoint(format!("dim(E ∩ W) = {shared}, expected {s}")));
    }
    let (n, k) = (omega.n(), omega.k());
    let e1 = e.frame().columns(0, k);
    let e2 = e.complement();
    let c = orthonormalize(&(e1.transpose() * d.p_vectors.columns(0, s)));
    let c_full = complete_orthonormal(&c, k);
    let projected = e2.transpose() * omega.w.plane().basis();
    let (t_span, rank) = {
        let (u, sv, _) = sorted_svd(&projected);
        let top = sv.first().copied().unwrap_or(0.0);
        let rank = sv.iter().filter(|&&x| x > tol * top.max(1.0)).count();
        (u.columns(0, rank).into_owned(), rank)
    };
    let t_full = complete_orthonormal(&t_span, n - k);
    let mut out = Vec::new();
    for ia in 0..(n - k) {
        for ib in 0..k {
            if ia >= rank && ib < s {
                continue;
            }
            out.push(e.tangent(t_full.column(ia) * c_full.column(ib).transpose())?);
        }
    }
    Ok(out)
}

/// Largest residual of a unit vector of `b` after projection onto the span
/// of `a` (the sine of the largest principal angle between equal-dimension
/// subspaces of tangent matrices, given by orthonormal bases).
pub fn tangent_space_gap(a: &[TangentMatrix], b: &[TangentMatrix]) -> Result<f64> {
    if a.len() != b.len() || a.iter().chain(b).any(|t| t.attached_to != a[0].attached_to) {
        return Err(GrassError::DimensionMismatch("tangent spaces of different dimension or frame".into()));
    }
    let mut worst = 0.0f64;
    for y in b {
        let mut r = y.a.clone();
        for x in a {
            r -= &x.a * frobenius_inner(&x.a, &y.a);
        }
        worst = worst.max(r.norm());
    }
    Ok(worst)
}

/// One Eckart–Young critical point of `delta_L` on `Omega_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPointRecord {
    pub point: Plane,
    /// 0-based positions of the kept singular values of `log_W(L)`, largest
    /// first; `{0, .., k-s-1}` is the global minimizer.
    pub index_set: Vec<usize>,
    pub value: f64,
    pub normality_residual: f64,
    pub on_cut_of_l: bool,
}

/// Principal angles of `L` against `W`, gated for genericity: pairwise
/// separated and away from 0 and pi/2 by `tol_gen`.
pub fn generic_angles(omega: &SchubertVariety, l: &Plane, tol_gen: f64) -> Result<Vec<f64>> {
    omega.check_plane(l)?;
    let angles = principal_angles(omega.w.plane(), l)?;
    if angles[0] <= tol_gen {
        return Err(GrassError::NonGenericL(format!("smallest angle {} is zero", angles[0])));
    }
    let last = angles[angles.len() - 1];
    if last >= FRAC_PI_2 - tol_gen {
        return Err(GrassError::NonGenericL(format!("largest angle {last} equals pi/2")));
    }
    if let Some(i) = (1..angles.len()).find(|&i| angles[i] - angles[i - 1] <= tol_gen) {
        return Err(GrassError::NonGenericL(format!("angles {} and {} coincide", i - 1, i)));
    }
    Ok(angles)
}

/// The `binomial(k, s)` critical points `L_I = exp_W(A_{L,I})` obtained by
/// truncating `A_L = log_W(L)` to `k - s` of its singular values.
pub fn ey_schubert_critical_points(omega: &SchubertVariety, l: &Plane, tol: &Tolerances) -> Result<Vec<CriticalPointRecord>> {
    generic_angles(omega, l, tol.gen)?;
    let a_l = log(&omega.w, l)?;
    k_subsets(omega.k(), omega.chart_rank())
        .into_iter()
        .map(|index_set| {
            let a_i = truncate(&a_l.a, &index_set)?;
            let point = Plane::from_orthonormal(exp_raw(omega.w.frame(), omega.k(), &a_i))?;
            let value = grassmann_distance(l, &point)?;
            let on_cut_of_l = cut_stratum(l, &point, tol.cut)?.j >= 1;
            let normality_residual = normality_residual(omega, l, &point, tol)?;
            Ok(CriticalPointRecord { point, index_set, value, normality_residual, on_cut_of_l })
        })
        .collect()
}

/// Norm of the projection of `log_E(L)` onto the tangent space of `Omega_s`
/// at the smooth point `e`. Vanishes at critical points.
pub fn normality_residual(omega: &SchubertVariety, l: &Plane, e: &Plane, tol: &Tolerances) -> Result<f64> {
    let chart = chart_tangent_basis(omega, e, tol)?;
    let v = log_with_tol(&chart.frame, l, tol.cut)?;
    Ok(chart.basis.iter().map(|b| frobenius_inner(&v.a, &b.a).powi(2)).sum::<f64>().sqrt())
}

/// Closed-form global minimum of `delta_L` on `Omega_s`: the minimizer is
/// spanned by the first `s` principal vectors of `W` and the remaining
/// principal vectors of `L`. Planes already in `Omega_s` are returned as is.
pub fn global_min(omega: &SchubertVariety, l: &Plane, tol: &Tolerances) -> Result<(f64, Plane)> {
    omega.check_plane(l)?;
    let s = omega.s;
    let d = principal_decomposition(l, omega.w.plane())?;
    let value = d.angles[..s].iter().map(|t| t * t).sum::<f64>().sqrt();
    if d.angles[s - 1] <= tol.gen {
        return Ok((value, l.clone()));
    }
    generic_angles(omega, l, tol.gen)?;
    let mut basis = d.p_vectors.clone();
    for i in 0..s {
        basis.set_column(i, &d.q_vectors.column(i));
    }
    Ok((value, Plane::from_orthonormal(basis)?))
}

/// Closed-form global maximum of `delta_L` on `Omega_s`. The maximizers are
/// `B ⊕ span{q_{k-s+1}, .., q_k}` with `B` any `(k-s)`-plane orthogonal to `L`
/// and to those principal vectors of `W`; `b_seed` selects `B`.
pub fn global_max(omega: &SchubertVariety, l: &Plane, b_seed: u64, tol: &Tolerances) -> Result<(f64, Plane)> {
    let angles = generic_angles(omega, l, tol.gen)?;
    let (n, k, s) = (omega.n(), omega.k(), omega.s);
    let r = k - s;
    let d = principal_decomposition(l, omega.w.plane())?;
    let top = d.q_vectors.columns(r, s).into_owned();
    let mut blocked = DMatrix::zeros(n, k + s);
    blocked.columns_mut(0, k).copy_from(l.basis());
    blocked.columns_mut(k, s).copy_from(&top);
    let (aux, rank) = orthogonal_complement(&blocked, tol.orth.max(1e-10));
    if rank != k + s {
        return Err(GrassError::DegenerateAuxSpace { found: n - rank, expected: n - k - s });
    }
    let mut rng = rng_from_seed(b_seed);
    let coeffs = orthonormalize(&gaussian_matrix(&mut rng, n - k - s, r));
    let b = aux * coeffs;
    let mut basis = DMatrix::zeros(n, k);
    basis.columns_mut(0, r).copy_from(&b);
    basis.columns_mut(r, s).copy_from(&top);
    let value = (angles[r..].iter().map(|t| t * t).sum::<f64>() + r as f64 * FRAC_PI_2 * FRAC_PI_2).sqrt();
    Ok((value, Plane::from_orthonormal(orthonormalize(&basis))?))
}

/// Random point `exp_W(A)` with `A` a Gaussian rank-`rank` product scaled so
/// that its largest singular value is uniform in `(0, pi/2)`.
pub fn sample_exp_rank<R: Rng + ?Sized>(w: &FramedPlane, rank: usize, rng: &mut R) -> Result<Plane> {
    let (rows, cols) = (w.n() - w.k(), w.k());
    let a = gaussian_matrix(rng, rows, rank) * gaussian_matrix(rng, rank, cols);
    let smax = singular_values(&a).first().copied().unwrap_or(0.0);
    let target: f64 = rng.random::<f64>() * FRAC_PI_2;
    let scaled = if smax > 0.0 { a * (target / smax) } else { a };
    Plane::from_orthonormal(exp_raw(w.frame(), w.k(), &scaled))
}

/// Smallest and largest `delta_L` over `n_samples` random smooth points of `Omega_s`.
pub fn sample_extremes(omega: &SchubertVariety, l: &Plane, n_samples: usize, seed: u64) -> Result<(f64, f64)> {
    sample_extremes_rank(omega, l, omega.chart_rank(), n_samples, seed)
}

/// As [`sample_extremes`], over chart matrices of the given rank.
pub fn sample_extremes_rank(omega: &SchubertVariety, l: &Plane, rank: usize, n_samples: usize, seed: u64) -> Result<(f64, f64)> {
    let mut rng = rng_from_seed(seed);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..n_samples {
        let e = sample_exp_rank(&omega.w, rank, &mut rng)?;
        let d = grassmann_distance(l, &e)?;
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Ok((lo, hi))
}

/// Diagonal-angle test plane: `W = span{e_1..e_k}` and `L` rotated from `W`
/// by the given angles into the next `k` coordinates. Requires `n >= 2k`.
pub fn plane_at_angles(n: usize, angles: &[f64]) -> Result<(Plane, Plane)> {
    let k = angles.len();
    let w = Plane::from_orthonormal(DMatrix::identity(n, k))?;
    let mut l = DMatrix::zeros(n, k);
    for (i, &t) in angles.iter().enumerate() {
        l[(i, i)] = t.cos();
        l[(k + i, i)] = t.sin();
    }
    Ok((w, Plane::from_orthonormal(l)?))
}
