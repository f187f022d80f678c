//! Cut-locus strata, minimizing geodesics to cut points and the Clarke
//! subdifferential of the distance function there.
//!
//! At a cut point the `j` principal angles equal to pi/2 are placed in the
//! last `j` slots. Minimizing preimages then differ only by an orthogonal
//! `j x j` block `W` acting on those slots.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};

use crate::error::{GrassError, Result};
use crate::grassmann::angles::{principal_angles, principal_decomposition};
use crate::grassmann::geodesic::theta_over_sin;
use crate::grassmann::plane::{FramedPlane, Plane, TangentMatrix};
use crate::grassmann::sampling::{random_orthogonal, rng_from_seed};
use crate::linalg::{frobenius_inner, singular_values};
use crate::lowrank::{svd, SvdTriple};
use crate::minnorm::min_norm_point;

/// Which stratum `Omega(j)` of `cut(L)` a plane lies in.
#[derive(Debug, Clone, PartialEq)]
pub struct CutStratumReport {
    /// Number of principal angles within `tol` of pi/2; 0 means off the cut locus.
    pub j: usize,
    pub angles: Vec<f64>,
    pub tol: f64,
}

pub fn cut_stratum(l: &Plane, e: &Plane, tol: f64) -> Result<CutStratumReport> {
    let angles = principal_angles(l, e)?;
    let j = angles.iter().filter(|&&t| t >= FRAC_PI_2 - tol).count();
    Ok(CutStratumReport { j, angles, tol })
}

/// Decomposition of a preimage at `at` toward `target` into the part along
/// the angles below pi/2 and the orthonormal blocks carrying the pi/2 angles.
struct SplitPreimage {
    regular: DMatrix<f64>,
    left: DMatrix<f64>,
    right: DMatrix<f64>,
    j: usize,
}

impl SplitPreimage {
    fn new(at: &FramedPlane, target: &Plane, tol: f64) -> Result<SplitPreimage> {
        let d = principal_decomposition(at.plane(), target)?;
        let k = at.k();
        let j = d.angles.iter().filter(|&&t| t >= FRAC_PI_2 - tol).count();
        let r = k - j;
        let coords = at.complement().transpose() * &d.q_vectors;
        let scale = DMatrix::from_diagonal(&DVector::from_iterator(r, d.angles[..r].iter().map(|&t| theta_over_sin(t))));
        let regular = coords.columns(0, r) * scale * d.u.columns(0, r).transpose();
        let mut left = coords.columns(r, j).into_owned();
        for (c, &t) in d.angles[r..].iter().enumerate() {
            left.column_mut(c).scale_mut(1.0 / t.sin());
        }
        let right = d.u.columns(r, j).into_owned();
        Ok(SplitPreimage { regular, left, right, j })
    }

    fn with_block(&self, w: &DMatrix<f64>) -> DMatrix<f64> {
        &self.regular + &self.left * w * self.right.transpose() * FRAC_PI_2
    }

    fn check_block(&self, w: &DMatrix<f64>) -> Result<()> {
        if w.shape() != (self.j, self.j) {
            return Err(GrassError::DimensionError(format!("orthogonal block must be {0}x{0}", self.j)));
        }
        Ok(())
    }
}

/// The minimizing preimages `A_W = U Sigma blockdiag(1, W) V^T` of `S` under
/// `exp_L`, one per orthogonal block `W`.
pub fn geodesic_preimages(l: &FramedPlane, s: &Plane, w_list: &[DMatrix<f64>], tol: f64) -> Result<Vec<TangentMatrix>> {
    let split = SplitPreimage::new(l, s, tol)?;
    if split.j == 0 {
        return Err(GrassError::NotOnCut);
    }
    w_list
        .iter()
        .map(|w| {
            split.check_block(w)?;
            l.tangent(split.with_block(w))
        })
        .collect()
}

/// A finite sample of `O(j)`. `O(1)` is enumerated exactly, `O(2)` as
/// rotations and reflections on a uniform angle grid with `per_component`
/// points each, larger groups by seeded Haar sampling of both components.
pub fn sample_orthogonal_group(j: usize, per_component: usize, seed: u64) -> Vec<DMatrix<f64>> {
    match j {
        0 => vec![DMatrix::zeros(0, 0)],
        1 => vec![DMatrix::from_element(1, 1, 1.0), DMatrix::from_element(1, 1, -1.0)],
        2 => {
            let mut out = Vec::with_capacity(2 * per_component);
            for i in 0..per_component {
                let t = 2.0 * PI * i as f64 / per_component as f64;
                let (s, c) = t.sin_cos();
                out.push(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]));
            }
            for i in 0..per_component {
                let t = 2.0 * PI * i as f64 / per_component as f64;
                let (s, c) = t.sin_cos();
                out.push(DMatrix::from_row_slice(2, 2, &[c, s, s, -c]));
            }
            out
        }
        _ => {
            let mut rng = rng_from_seed(seed);
            let mut out = Vec::with_capacity(2 * per_component);
            for _ in 0..per_component {
                let q = random_orthogonal(&mut rng, j);
                let mut flipped = q.clone();
                flipped.column_mut(0).neg_mut();
                out.push(q);
                out.push(flipped);
            }
            out
        }
    }
}

/// Sampled generators of the Clarke subdifferential of `delta_L` at a cut point.
#[derive(Debug, Clone, PartialEq)]
pub struct SubdiffGeneratorSet {
    pub base: FramedPlane,
    pub delta: f64,
    pub b0_svd: SvdTriple,
    pub j: usize,
    pub generators: Vec<TangentMatrix>,
}

/// Generators `-B_W / delta(L, S)` where `B_W` runs over the minimizing
/// preimages of `L` under `exp_S`, with the block `W^T` for each sampled `W`.
pub fn subdiff_generators(l: &Plane, s: &FramedPlane, w_list: &[DMatrix<f64>], tol: f64) -> Result<SubdiffGeneratorSet> {
    let split = SplitPreimage::new(s, l, tol)?;
    if split.j == 0 {
        return Err(GrassError::NotOnCut);
    }
    let b0 = split.with_block(&DMatrix::identity(split.j, split.j));
    let delta = b0.norm();
    let generators = w_list
        .iter()
        .map(|w| {
            split.check_block(w)?;
            s.tangent(split.with_block(&w.transpose()) / (-delta))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SubdiffGeneratorSet { base: s.clone(), delta, b0_svd: svd(&b0), j: split.j, generators })
}

/// Numerical affine dimension of the sampled generators: the rank of the
/// centered generator matrix, counting singular values above `tol_rank`.
pub fn subdiff_affine_dimension(set: &SubdiffGeneratorSet, tol_rank: f64) -> Result<usize> {
    if set.j == 0 {
        return Err(GrassError::NotOnCut);
    }
    let needed = set.j * set.j + 1;
    let m = set.generators.len();
    if m < needed {
        return Err(GrassError::InsufficientSamples { needed, got: m });
    }
    let dim = set.generators[0].a.len();
    let mut mean = DVector::zeros(dim);
    for g in &set.generators {
        mean += DVector::from_column_slice(g.a.as_slice());
    }
    mean /= m as f64;
    let centered = DMatrix::from_fn(m, dim, |i, c| set.generators[i].a.as_slice()[c] - mean[c]);
    Ok(singular_values(&centered).iter().filter(|&&s| s > tol_rank).count())
}

/// Outcome of the zero-in-projected-hull test.
#[derive(Debug, Clone, PartialEq)]
pub enum CriticalTest {
    /// Convex weights on the sampled generators whose projection vanishes.
    Witness { weights: Vec<f64>, residual: f64 },
    /// No combination of the sampled generators projects to zero. This is
    /// inconclusive beyond the sampled net.
    NotFound { residual: f64 },
}

/// Decides whether `0` lies in the projection of `co(generators)` onto the
/// span of `tangent_basis` (orthonormal, at the generator base frame).
pub fn restricted_critical_test(set: &SubdiffGeneratorSet, tangent_basis: &[TangentMatrix], tol: f64) -> Result<CriticalTest> {
    let id = set.base.id();
    for (i, b) in tangent_basis.iter().enumerate() {
        if b.attached_to != id {
            return Err(GrassError::DimensionMismatch(format!("tangent basis element {i} belongs to another frame")));
        }
        for (j, c) in tangent_basis.iter().enumerate().take(i + 1) {
            let target = if i == j { 1.0 } else { 0.0 };
            if (frobenius_inner(&b.a, &c.a) - target).abs() > 1e-8 {
                return Err(GrassError::DimensionMismatch("tangent basis is not orthonormal".into()));
            }
        }
    }
    if set.generators.is_empty() {
        return Err(GrassError::InsufficientSamples { needed: 1, got: 0 });
    }
    let projected: Vec<DVector<f64>> = set
        .generators
        .iter()
        .map(|g| DVector::from_iterator(tangent_basis.len(), tangent_basis.iter().map(|b| frobenius_inner(&g.a, &b.a))))
        .collect();
    if tangent_basis.is_empty() {
        let m = set.generators.len();
        return Ok(CriticalTest::Witness { weights: vec![1.0 / m as f64; m], residual: 0.0 });
    }
    let r = min_norm_point(&projected, 1e-24);
    if r.norm <= tol {
        Ok(CriticalTest::Witness { weights: r.weights, residual: r.norm })
    } else {
        Ok(CriticalTest::NotFound { residual: r.norm })
    }
}

/// A point of `Omega(1)` at distance exactly pi/2 from `L`: keeps the first
/// `k - 1` principal vectors of `L` relative to `e` and replaces the last by
/// the unit normal of the largest rotation.
pub fn nearest_cut_witness(l: &Plane, e: &Plane) -> Result<Plane> {
    let d = principal_decomposition(l, e)?;
    let k = l.k();
    let last = k - 1;
    let mut normal = d.q_vectors.column(last) - d.p_vectors.column(last) * d.cosines[last];
    let nn = normal.norm();
    if nn < 1e-12 {
        return Err(GrassError::NonGenericL("e shares the last principal direction with l".into()));
    }
    normal /= nn;
    let mut basis = d.p_vectors.clone();
    basis.set_column(last, &normal);
    Plane::from_orthonormal(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::geodesic::{exp, geodesic_point};
    use crate::grassmann::plane::{complete_frame, make_plane};
    use crate::grassmann::{grassmann_distance, random_plane};

    fn coord_plane(n: usize, idx: &[usize]) -> Plane {
        let mut m = DMatrix::zeros(n, idx.len());
        for (j, &i) in idx.iter().enumerate() {
            m[(i, j)] = 1.0;
        }
        make_plane(&m, 1e-12).unwrap()
    }

    #[test]
    fn strata_of_coordinate_planes() {
        let l = coord_plane(4, &[0, 1]);
        assert_eq!(cut_stratum(&l, &l, 1e-9).unwrap().j, 0);
        assert_eq!(cut_stratum(&l, &coord_plane(4, &[0, 2]), 1e-9).unwrap().j, 1);
        assert_eq!(cut_stratum(&l, &coord_plane(4, &[2, 3]), 1e-9).unwrap().j, 2);
    }

    #[test]
    fn antipodal_lines_have_two_geodesics() {
        let l = complete_frame(&coord_plane(2, &[0]));
        let s = coord_plane(2, &[1]);
        let ws = sample_orthogonal_group(1, 0, 0);
        let pre = geodesic_preimages(&l, &s, &ws, 1e-9).unwrap();
        assert_eq!(pre.len(), 2);
        assert!((&pre[0].a + &pre[1].a).norm() < 1e-15);
        for a in &pre {
            assert!(grassmann_distance(&exp(&l, a).unwrap(), &s).unwrap() < 1e-12);
        }
        assert_eq!(geodesic_preimages(&l, l.plane(), &ws, 1e-9), Err(GrassError::NotOnCut));
    }

    #[test]
    fn identity_block_gives_base_preimage() {
        let l = complete_frame(&random_plane(4, 2, 3).unwrap());
        let s = nearest_cut_witness(l.plane(), &random_plane(4, 2, 4).unwrap()).unwrap();
        let pre = geodesic_preimages(&l, &s, &[DMatrix::identity(1, 1)], 1e-9).unwrap();
        let base = crate::grassmann::geodesic::connecting_matrix(&l, &s).unwrap().0;
        assert!((&pre[0].a - base).norm() < 1e-12);
    }

    #[test]
    fn distinct_geodesics_through_cut_point() {
        let l = complete_frame(&random_plane(4, 2, 5).unwrap());
        let e = random_plane(4, 2, 6).unwrap();
        let s = nearest_cut_witness(l.plane(), &e).unwrap();
        let pre = geodesic_preimages(&l, &s, &sample_orthogonal_group(1, 0, 0), 1e-9).unwrap();
        let delta = grassmann_distance(l.plane(), &s).unwrap();
        for a in &pre {
            assert!(grassmann_distance(&exp(&l, a).unwrap(), &s).unwrap() < 1e-9);
            assert!((a.norm() - delta).abs() < 1e-12);
        }
        let m0 = geodesic_point(&l, &pre[0], 0.5).unwrap();
        let m1 = geodesic_point(&l, &pre[1], 0.5).unwrap();
        assert!(grassmann_distance(&m0, &m1).unwrap() > 0.1);
    }

    #[test]
    fn generators_are_unit_and_dimension_matches() {
        let l = random_plane(4, 2, 7).unwrap();
        let s = complete_frame(&nearest_cut_witness(&l, &random_plane(4, 2, 8).unwrap()).unwrap());
        let set = subdiff_generators(&l, &s, &sample_orthogonal_group(1, 0, 0), 1e-9).unwrap();
        assert_eq!(set.j, 1);
        for g in &set.generators {
            assert!((g.norm() - 1.0).abs() < 1e-10);
        }
        assert_eq!(subdiff_affine_dimension(&set, 1e-8).unwrap(), 1);

        let l5 = coord_plane(5, &[0, 1]);
        let raw = DMatrix::from_row_slice(5, 2, &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let s5 = complete_frame(&make_plane(&raw, 1e-12).unwrap());
        let set2 = subdiff_generators(&l5, &s5, &sample_orthogonal_group(2, 64, 0), 1e-9).unwrap();
        assert_eq!(set2.j, 2);
        assert_eq!(subdiff_affine_dimension(&set2, 1e-8).unwrap(), 4);
        let few = SubdiffGeneratorSet { generators: set2.generators[..3].to_vec(), ..set2 };
        assert!(matches!(subdiff_affine_dimension(&few, 1e-8), Err(GrassError::InsufficientSamples { .. })));
    }

    #[test]
    fn antipodal_witness_on_the_circle() {
        let l = coord_plane(2, &[0]);
        let s = complete_frame(&coord_plane(2, &[1]));
        let set = subdiff_generators(&l, &s, &sample_orthogonal_group(1, 0, 0), 1e-9).unwrap();
        let full = vec![s.tangent(DMatrix::from_element(1, 1, 1.0)).unwrap()];
        match restricted_critical_test(&set, &full, 1e-8).unwrap() {
            CriticalTest::Witness { weights, .. } => {
                assert!((weights[0] - 0.5).abs() < 1e-12 && (weights[1] - 0.5).abs() < 1e-12)
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn curve_along_common_direction_is_not_critical() {
        let l = coord_plane(4, &[0, 1]);
        let t: f64 = 0.6;
        let raw = DMatrix::from_row_slice(4, 2, &[t.cos(), 0.0, 0.0, 0.0, t.sin(), 0.0, 0.0, 1.0]);
        let s = complete_frame(&make_plane(&raw, 1e-12).unwrap());
        let set = subdiff_generators(&l, &s, &sample_orthogonal_group(1, 0, 0), 1e-9).unwrap();
        let common = (&set.generators[0].a + &set.generators[1].a) * 0.5;
        let dir = s.tangent(&common / common.norm()).unwrap();
        assert!(matches!(restricted_critical_test(&set, &[dir], 1e-8).unwrap(), CriticalTest::NotFound { .. }));
    }

    #[test]
    fn cut_witness_is_at_quarter_turn() {
        for seed in 0..20 {
            let l = random_plane(5, 2, seed).unwrap();
            let s = nearest_cut_witness(&l, &random_plane(5, 2, seed + 100).unwrap()).unwrap();
            assert_eq!(cut_stratum(&l, &s, 1e-9).unwrap().j, 1);
            assert!((grassmann_distance(&l, &s).unwrap() - FRAC_PI_2).abs() < 1e-9);
        }
    }
}
