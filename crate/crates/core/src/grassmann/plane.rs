use nalgebra::DMatrix;

use crate::error::{GrassError, Result};
use crate::linalg::{complete_orthonormal, orthonormalize, singular_values};

/// A `k`-dimensional subspace of `R^n`, stored as an `n x k` matrix with
/// orthonormal columns. Always satisfies `1 <= k <= n - k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    basis: DMatrix<f64>,
}

impl Plane {
    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.basis.nrows()
    }

    /// Subspace dimension.
    pub fn k(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Orthogonal projector `basis * basis^T` onto the plane.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// Wraps a matrix whose columns are already orthonormal. The caller is
    /// responsible for the invariant; only the shape is checked.
    pub(crate) fn from_orthonormal(basis: DMatrix<f64>) -> Result<Plane> {
        check_shape(basis.nrows(), basis.ncols())?;
        Ok(Plane { basis })
    }
}

fn check_shape(n: usize, k: usize) -> Result<()> {
    if k == 0 || n < 2 || k > n - k {
        return Err(GrassError::DimensionError(format!("need 1 <= k <= n - k, got n = {n}, k = {k}")));
    }
    Ok(())
}

/// Orthonormalizes the columns of `raw` into a [`Plane`].
///
/// Fails with `RankDeficient` when the smallest singular value of `raw` is at
/// most `tol`, and with `DimensionError` when `k > n - k`.
pub fn make_plane(raw: &DMatrix<f64>, tol: f64) -> Result<Plane> {
    check_shape(raw.nrows(), raw.ncols())?;
    if raw.iter().any(|x| !x.is_finite()) {
        return Err(GrassError::DimensionError("basis has non-finite entries".into()));
    }
    let smallest = singular_values(raw).last().copied().unwrap_or(0.0);
    if smallest <= tol {
        return Err(GrassError::RankDeficient { smallest, tol });
    }
    Ok(Plane { basis: orthonormalize(raw) })
}

/// Identity of a frame, used to tie tangent matrices to the frame they were
/// expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrameId {
    pub n: usize,
    pub k: usize,
    pub hash: u64,
}

/// A plane together with a full orthogonal frame `[basis | complement]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FramedPlane {
    plane: Plane,
    frame: DMatrix<f64>,
    id: FrameId,
}

impl FramedPlane {
    pub fn plane(&self) -> &Plane {
        &self.plane
    }

    /// The `n x n` orthogonal frame; its first `k` columns are the plane basis.
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn id(&self) -> FrameId {
        self.id
    }

    pub fn n(&self) -> usize {
        self.plane.n()
    }

    pub fn k(&self) -> usize {
        self.plane.k()
    }

    /// The `n x (n-k)` block of the frame spanning the orthogonal complement.
    pub fn complement(&self) -> DMatrix<f64> {
        self.frame.columns(self.k(), self.n() - self.k()).into_owned()
    }

    /// Zero tangent matrix at this frame.
    pub fn zero_tangent(&self) -> TangentMatrix {
        TangentMatrix { a: DMatrix::zeros(self.n() - self.k(), self.k()), attached_to: self.id }
    }

    /// Attaches an `(n-k) x k` matrix to this frame.
    pub fn tangent(&self, a: DMatrix<f64>) -> Result<TangentMatrix> {
        if a.shape() != (self.n() - self.k(), self.k()) {
            return Err(GrassError::DimensionError(format!(
                "tangent matrix must be {}x{}, got {}x{}",
                self.n() - self.k(),
                self.k(),
                a.nrows(),
                a.ncols()
            )));
        }
        Ok(TangentMatrix { a, attached_to: self.id })
    }
}

fn frame_hash(frame: &DMatrix<f64>) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for x in frame.iter() {
        for byte in x.to_bits().to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(PRIME);
        }
    }
    h
}

/// Completes the plane basis to an orthogonal frame. The completion appends
/// standard basis vectors in order of largest residual, so it is deterministic.
pub fn complete_frame(plane: &Plane) -> FramedPlane {
    let frame = complete_orthonormal(plane.basis(), plane.n());
    let id = FrameId { n: plane.n(), k: plane.k(), hash: frame_hash(&frame) };
    FramedPlane { plane: plane.clone(), frame, id }
}

/// A tangent vector at a framed plane, as an `(n-k) x k` matrix in the frame's
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentMatrix {
    pub a: DMatrix<f64>,
    pub attached_to: FrameId,
}

impl TangentMatrix {
    pub fn norm(&self) -> f64 {
        self.a.norm()
    }

    pub fn scaled(&self, t: f64) -> TangentMatrix {
        TangentMatrix { a: &self.a * t, attached_to: self.attached_to }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::orthonormality_defect;

    #[test]
    fn scaling_columns_gives_coordinate_plane() {
        let raw = DMatrix::from_row_slice(4, 2, &[2.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 0.0]);
        let p = make_plane(&raw, 1e-12).unwrap();
        assert!((p.basis() - DMatrix::identity(4, 2)).norm() < 1e-15);
    }

    #[test]
    fn first_column_of_identity() {
        let raw = DMatrix::<f64>::identity(4, 4).columns(0, 1).into_owned();
        let p = make_plane(&raw, 1e-12).unwrap();
        assert_eq!(p.k(), 1);
        assert!((p.basis() - raw).norm() < 1e-15);
    }

    #[test]
    fn span_is_preserved() {
        let s = 1.0 / 2f64.sqrt();
        let raw = DMatrix::from_row_slice(4, 2, &[s, s, s, -s, 0.0, 0.0, 0.0, 0.0]);
        let p = make_plane(&raw, 1e-12).unwrap();
        assert!(orthonormality_defect(p.basis()) < 1e-14);
        let raw_proj = &raw * (raw.transpose() * &raw).try_inverse().unwrap() * raw.transpose();
        assert!((p.projector() - raw_proj).norm() < 1e-14);
    }

    #[test]
    fn rejects_rank_deficient_and_tall_k() {
        let raw = DMatrix::from_row_slice(4, 2, &[1.0, 2.0, 1.0, 2.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(make_plane(&raw, 1e-12), Err(GrassError::RankDeficient { .. })));
        let raw = DMatrix::<f64>::identity(4, 3);
        assert!(matches!(make_plane(&raw, 1e-12), Err(GrassError::DimensionError(_))));
    }

    #[test]
    fn frames_are_orthogonal_and_reproducible() {
        let p = make_plane(&DMatrix::identity(4, 2), 1e-12).unwrap();
        assert!((complete_frame(&p).frame() - DMatrix::<f64>::identity(4, 4)).norm() < 1e-15);

        let e3 = DMatrix::from_column_slice(3, 1, &[0.0, 0.0, 1.0]);
        let f = complete_frame(&make_plane(&e3, 1e-12).unwrap());
        assert_eq!(f.frame().column(0), f.plane().basis().column(0));
        assert!((f.frame().column(0) - e3.column(0)).norm() < 1e-15);
        assert!(orthonormality_defect(f.frame()) < 1e-15);
        assert!((f.frame().determinant().abs() - 1.0).abs() < 1e-12);

        let raw = DMatrix::from_row_slice(5, 2, &[0.3, 1.0, -0.2, 0.5, 0.9, 0.1, 0.4, -0.7, 0.0, 0.2]);
        let q = make_plane(&raw, 1e-12).unwrap();
        let a = complete_frame(&q);
        let b = complete_frame(&q);
        assert_eq!(a.frame(), b.frame());
        assert_eq!(a.id(), b.id());
        assert!(orthonormality_defect(a.frame()) < 1e-14);
    }
}
