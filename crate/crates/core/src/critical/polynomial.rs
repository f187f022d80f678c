use serde::{Deserialize, Serialize};

use super::dual::{minors_of, Scalar};
use crate::error::{GrassError, Result};
use crate::grassmann::plane::Plane;
use crate::grassmann::sampling::{random_plane_with, rng_from_seed};
use crate::linalg::{binomial, k_subsets};

/// One monomial: the product of the Plücker coordinates at the listed
/// positions (0-based, lexicographic order of row subsets, repeats allowed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PluckerTerm {
    pub idx: Vec<usize>,
    pub coef: f64,
}

/// A homogeneous polynomial in the Plücker coordinates of `G(k, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PluckerPolynomial {
    pub n: usize,
    pub k: usize,
    pub terms: Vec<PluckerTerm>,
    pub degree: usize,
    subsets: Vec<Vec<usize>>,
}

const VANISHING_PROBES: usize = 32;

impl PluckerPolynomial {
    /// Validates shape, index range and homogeneity. Rejects the zero and
    /// constant polynomials.
    pub fn new(n: usize, k: usize, terms: Vec<PluckerTerm>) -> Result<PluckerPolynomial> {
        if k == 0 || n < 2 || k > n - k {
            return Err(GrassError::DimensionError(format!("need 1 <= k <= n - k, got n = {n}, k = {k}")));
        }
        let terms: Vec<PluckerTerm> = terms.into_iter().filter(|t| t.coef != 0.0).collect();
        let Some(first) = terms.first() else {
            return Err(GrassError::NotHypersurface("zero polynomial".into()));
        };
        let degree = first.idx.len();
        let count = binomial(n, k);
        for t in &terms {
            if t.idx.len() != degree {
                return Err(GrassError::NotHomogeneous(format!("terms of degree {degree} and {}", t.idx.len())));
            }
            if let Some(&bad) = t.idx.iter().find(|&&i| i >= count) {
                return Err(GrassError::DimensionError(format!("coordinate index {bad} out of range 0..{count}")));
            }
            if !t.coef.is_finite() {
                return Err(GrassError::DimensionError("non-finite coefficient".into()));
            }
        }
        if degree == 0 {
            return Err(GrassError::NotHypersurface("constant polynomial".into()));
        }
        Ok(PluckerPolynomial { n, k, terms, degree, subsets: k_subsets(n, k) })
    }

    /// Row subsets indexing the coordinates.
    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    /// Sum of absolute coefficients, the scale used by vanishing tests.
    pub fn scale(&self) -> f64 {
        self.terms.iter().map(|t| t.coef.abs()).sum()
    }

    /// Evaluates at a coordinate vector.
    pub fn eval<T: Scalar>(&self, coords: &[T]) -> T {
        let mut acc = T::cst(0.0);
        for t in &self.terms {
            let mut m = T::cst(t.coef);
            for &i in &t.idx {
                m = m * coords[i];
            }
            acc = acc + m;
        }
        acc
    }

    /// Evaluates at the minors of an `n x k` matrix given row-major.
    pub fn eval_matrix<T: Scalar>(&self, y: &[T]) -> T {
        self.eval(&minors_of(y, self.k, &self.subsets))
    }

    /// Value at the orthonormal basis of a plane (fixed up to sign).
    pub fn eval_plane(&self, e: &Plane) -> f64 {
        let b = e.basis();
        let rows: Vec<f64> = (0..b.nrows()).flat_map(|i| (0..b.ncols()).map(move |j| (i, j))).map(|(i, j)| b[(i, j)]).collect();
        self.eval_matrix(&rows)
    }

    /// Fails with `NotHypersurface` when the polynomial vanishes on the whole
    /// Grassmannian (for example a Plücker relation), detected on seeded
    /// random probes.
    pub fn check_hypersurface(&self) -> Result<()> {
        let mut rng = rng_from_seed(0x5eed);
        let scale = self.scale();
        let mut largest = 0.0f64;
        for _ in 0..VANISHING_PROBES {
            let e = random_plane_with(&mut rng, self.n, self.k)?;
            largest = largest.max(self.eval_plane(&e).abs());
        }
        if largest <= 1e-10 * scale {
            return Err(GrassError::NotHypersurface("polynomial vanishes identically on the Grassmannian".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(idx: &[usize], coef: f64) -> PluckerTerm {
        PluckerTerm { idx: idx.to_vec(), coef }
    }

    #[test]
    fn validation() {
        assert!(matches!(PluckerPolynomial::new(4, 2, vec![]), Err(GrassError::NotHypersurface(_))));
        assert!(matches!(PluckerPolynomial::new(4, 2, vec![term(&[0], 0.0)]), Err(GrassError::NotHypersurface(_))));
        assert!(matches!(PluckerPolynomial::new(4, 2, vec![term(&[0], 1.0), term(&[0, 1], 1.0)]), Err(GrassError::NotHomogeneous(_))));
        assert!(matches!(PluckerPolynomial::new(4, 2, vec![term(&[6], 1.0)]), Err(GrassError::DimensionError(_))));
        assert!(PluckerPolynomial::new(4, 2, vec![term(&[0], 1.0)]).unwrap().check_hypersurface().is_ok());
    }

    #[test]
    fn plucker_relation_vanishes() {
        // c12 c34 - c13 c24 + c14 c23 with lexicographic positions 0..5.
        let p = PluckerPolynomial::new(4, 2, vec![term(&[0, 5], 1.0), term(&[1, 4], -1.0), term(&[2, 3], 1.0)]).unwrap();
        assert!(matches!(p.check_hypersurface(), Err(GrassError::NotHypersurface(_))));
    }
}
