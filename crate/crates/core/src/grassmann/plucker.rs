use nalgebra::DMatrix;

use super::plane::Plane;
use crate::linalg::k_subsets;

/// Plücker coordinates, normalized to unit length with the first nonzero
/// coordinate positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PluckerPoint {
    pub coords: Vec<f64>,
}

/// All `k x k` minors of an `n x k` matrix, rows chosen in lexicographic order.
pub fn minors(m: &DMatrix<f64>) -> Vec<f64> {
    let (n, k) = m.shape();
    k_subsets(n, k)
        .into_iter()
        .map(|rows| DMatrix::from_fn(k, k, |i, j| m[(rows[i], j)]).determinant())
        .collect()
}

/// Normalized Plücker coordinates of a plane.
pub fn plucker_coords(e: &Plane) -> PluckerPoint {
    let mut coords = minors(e.basis());
    let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
    let sign = coords.iter().find(|c| c.abs() > 1e-14 * norm).map_or(1.0, |c| c.signum());
    for c in &mut coords {
        *c *= sign / norm;
    }
    PluckerPoint { coords }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::plane::make_plane;

    #[test]
    fn coordinate_plane() {
        let p = plucker_coords(&make_plane(&DMatrix::identity(4, 2), 1e-12).unwrap());
        assert_eq!(p.coords.len(), 6);
        assert!((p.coords[0] - 1.0).abs() < 1e-15);
        assert!(p.coords[1..].iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn normalized_and_sign_fixed() {
        let raw = DMatrix::from_row_slice(5, 2, &[-1.0, 0.2, 0.3, 1.0, -0.5, 0.1, 0.2, 0.7, 0.0, -0.4]);
        let p = plucker_coords(&make_plane(&raw, 1e-12).unwrap());
        let norm: f64 = p.coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-14);
        assert!(p.coords.iter().find(|c| c.abs() > 1e-14).unwrap() > &0.0);
    }

    #[test]
    fn minors_of_a_known_matrix() {
        let m = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let c = minors(&m);
        assert!((c[0] - (-2.0)).abs() < 1e-12);
        assert!((c[1] - (-4.0)).abs() < 1e-12);
        assert!((c[2] - (-2.0)).abs() < 1e-12);
    }
}
