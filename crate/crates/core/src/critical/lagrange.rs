//! The Lagrange system of the squared distance on a hypersurface, written in
//! SVD coordinates `(U, V, mu)` of the tangent matrix `A = U diag(mu) V^T` at `L`.

use nalgebra::DMatrix;

use super::dual::{det, powi, Dual, Scalar};
use super::polynomial::PluckerPolynomial;
use crate::error::{GrassError, Result};
use crate::grassmann::geodesic::exp_raw;
use crate::grassmann::plane::{FramedPlane, Plane};
use crate::linalg::singular_values;

/// A point of the chart: `u` is `(n-k) x k` with orthonormal columns, `v` is
/// `k x k` orthogonal and every `mu_i` lies in `(0, pi/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdChartPoint {
    pub u: DMatrix<f64>,
    pub v: DMatrix<f64>,
    pub mu: Vec<f64>,
}

impl SvdChartPoint {
    /// The tangent matrix `U diag(mu) V^T`.
    pub fn tangent(&self) -> DMatrix<f64> {
        let mut us = self.u.clone();
        for (j, m) in self.mu.iter().enumerate() {
            us.column_mut(j).scale_mut(*m);
        }
        us * self.v.transpose()
    }

    /// The plane `exp_L(U diag(mu) V^T)`.
    pub fn to_plane(&self, l: &FramedPlane) -> Plane {
        Plane::from_orthonormal(exp_raw(l.frame(), l.k(), &self.tangent())).expect("exp keeps the shape")
    }

    /// The squared-distance objective `sum mu_i^2`, square-rooted.
    pub fn value(&self) -> f64 {
        self.mu.iter().map(|m| m * m).sum::<f64>().sqrt()
    }
}

/// Residual blocks of the Lagrange system at a chart point.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangeResidual {
    /// Value of the chart-transported polynomial.
    pub p_tilde: f64,
    /// Entries of `U^T U - I` and `V^T V - I` over pairs `i <= j`.
    pub orthogonality: Vec<f64>,
    /// 2x2 minors of the normalized `2 x k` matrix `(d_mu p ; mu)`.
    pub mu_minors: Vec<f64>,
    /// Singular value number `k(k+1)+1` of the normalized block `(d_UV p ; DF)`.
    pub sigma_gap: f64,
}

impl LagrangeResidual {
    /// Largest absolute entry over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.orthogonality
            .iter()
            .chain(self.mu_minors.iter())
            .map(|x| x.abs())
            .fold(self.p_tilde.abs().max(self.sigma_gap), f64::max)
    }
}

/// Layout and evaluation of the chart problem for a fixed `L`.
pub(crate) struct ChartProblem<'a> {
    pub p: &'a PluckerPolynomial,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    l1: Vec<f64>,
    l2: Vec<f64>,
}

impl<'a> ChartProblem<'a> {
    pub fn new(p: &'a PluckerPolynomial, l: &FramedPlane) -> Result<ChartProblem<'a>> {
        if p.n != l.n() || p.k != l.k() {
            return Err(GrassError::DimensionError(format!(
                "polynomial lives on G({}, {}) but L is in G({}, {})",
                p.k,
                p.n,
                l.k(),
                l.n()
            )));
        }
        let (n, k) = (l.n(), l.k());
        let f = l.frame();
        let l1 = (0..n).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| f[(i, j)]).collect();
        let l2 = (0..n).flat_map(|i| (k..n).map(move |j| (i, j))).map(|(i, j)| f[(i, j)]).collect();
        Ok(ChartProblem { p, n, k, m: n - k, l1, l2 })
    }

    /// Number of `(U, V)` variables.
    pub fn n_uv(&self) -> usize {
        self.m * self.k + self.k * self.k
    }

    /// Number of chart variables `(U, V, mu)`.
    pub fn n_x(&self) -> usize {
        self.n_uv() + self.k
    }

    /// Number of orthogonality constraints.
    pub fn n_f(&self) -> usize {
        self.k * (self.k + 1)
    }

    pub fn pack(&self, x: &SvdChartPoint) -> Vec<f64> {
        let mut z: Vec<f64> = x.u.iter().copied().collect();
        z.extend(x.v.iter().copied());
        z.extend(x.mu.iter().copied());
        z
    }

    pub fn unpack(&self, z: &[f64]) -> SvdChartPoint {
        let (m, k) = (self.m, self.k);
        SvdChartPoint {
            u: DMatrix::from_column_slice(m, k, &z[..m * k]),
            v: DMatrix::from_column_slice(k, k, &z[m * k..m * k + k * k]),
            mu: z[m * k + k * k..m * k + k * k + k].to_vec(),
        }
    }

    fn u_at<T: Scalar>(&self, x: &[T], a: usize, c: usize) -> T {
        x[c * self.m + a]
    }

    fn v_at<T: Scalar>(&self, x: &[T], b: usize, c: usize) -> T {
        x[self.m * self.k + c * self.k + b]
    }

    fn mu_at<T: Scalar>(&self, x: &[T], c: usize) -> T {
        x[self.n_uv() + c]
    }

    /// `p(minors(Y)) / (det V * prod cos mu)^d` with
    /// `Y = L1 V diag(cos mu) + L2 U diag(sin mu)`.
    pub fn p_tilde<T: Scalar>(&self, x: &[T]) -> T {
        let (n, k, m) = (self.n, self.k, self.m);
        let cos: Vec<T> = (0..k).map(|c| self.mu_at(x, c).cos()).collect();
        let sin: Vec<T> = (0..k).map(|c| self.mu_at(x, c).sin()).collect();
        let mut y = Vec::with_capacity(n * k);
        for i in 0..n {
            for c in 0..k {
                let mut a1 = T::cst(0.0);
                for b in 0..k {
                    a1 = a1 + T::cst(self.l1[i * k + b]) * self.v_at(x, b, c);
                }
                let mut a2 = T::cst(0.0);
                for a in 0..m {
                    a2 = a2 + T::cst(self.l2[i * m + a]) * self.u_at(x, a, c);
                }
                y.push(a1 * cos[c] + a2 * sin[c]);
            }
        }
        let vrows: Vec<T> = (0..k).flat_map(|b| (0..k).map(move |c| (b, c))).map(|(b, c)| self.v_at(x, b, c)).collect();
        let mut den = det(&vrows, k);
        for c in cos {
            den = den * c;
        }
        self.p.eval_matrix(&y) / powi(den, self.p.degree)
    }

    /// Value and full gradient of `p_tilde`, one dual pass per variable.
    pub fn p_tilde_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let mut value = 0.0;
        let mut seeded: Vec<Dual> = x.iter().map(|&v| Dual::cst(v)).collect();
        let grad = (0..x.len())
            .map(|j| {
                seeded[j].eps = 1.0;
                let r = self.p_tilde(&seeded);
                seeded[j].eps = 0.0;
                value = r.re;
                r.eps
            })
            .collect();
        (value, grad)
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let k = self.k;
        (0..k).flat_map(move |i| (i..k).map(move |j| (i, j)))
    }

    /// `U^T U - I` then `V^T V - I`, over pairs `i <= j`.
    pub fn constraints(&self, x: &[f64]) -> Vec<f64> {
        let (m, k) = (self.m, self.k);
        let mut out = Vec::with_capacity(self.n_f());
        for (i, j) in self.pairs() {
            let dot: f64 = (0..m).map(|a| self.u_at(x, a, i) * self.u_at(x, a, j)).sum();
            out.push(dot - if i == j { 1.0 } else { 0.0 });
        }
        for (i, j) in self.pairs() {
            let dot: f64 = (0..k).map(|b| self.v_at(x, b, i) * self.v_at(x, b, j)).sum();
            out.push(dot - if i == j { 1.0 } else { 0.0 });
        }
        out
    }

    /// Jacobian of [`Self::constraints`] with respect to `(U, V)`.
    pub fn constraints_jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let (m, k) = (self.m, self.k);
        let mut d = DMatrix::zeros(self.n_f(), self.n_uv());
        let mut row = 0;
        for (offset, len) in [(0, m), (m * k, k)] {
            for (i, j) in self.pairs() {
                for a in 0..len {
                    let xi = x[offset + i * len + a];
                    let xj = x[offset + j * len + a];
                    d[(row, offset + i * len + a)] += xj;
                    d[(row, offset + j * len + a)] += xi;
                }
                row += 1;
            }
        }
        d
    }

    /// The square system `[p_tilde; F; lambda d_UV p + DF^T Lambda; 2 mu - lambda d_mu p]`
    /// in the variables `z = (x, lambda, Lambda)`.
    pub fn system(&self, z: &[f64]) -> Vec<f64> {
        let nx = self.n_x();
        let nuv = self.n_uv();
        let x = &z[..nx];
        let lambda = z[nx];
        let big = &z[nx + 1..];
        let (pt, grad) = self.p_tilde_grad(x);
        let df = self.constraints_jacobian(x);
        let mut out = Vec::with_capacity(z.len());
        out.push(pt);
        out.extend(self.constraints(x));
        for c in 0..nuv {
            let mut s = lambda * grad[c];
            for (r, l) in big.iter().enumerate() {
                s += df[(r, c)] * l;
            }
            out.push(s);
        }
        for c in 0..self.k {
            out.push(2.0 * x[nuv + c] - lambda * grad[nuv + c]);
        }
        out
    }
}

/// Residual blocks of the Lagrange system at `x`.
///
/// Fails with `ChartBoundary` when some `mu_i` is within `tol_boundary` of
/// `0` or `pi/2`.
pub fn lagrange_residual(p: &PluckerPolynomial, l: &FramedPlane, x: &SvdChartPoint, tol_boundary: f64) -> Result<LagrangeResidual> {
    let prob = ChartProblem::new(p, l)?;
    let (m, k) = (prob.m, prob.k);
    if x.u.shape() != (m, k) || x.v.shape() != (k, k) || x.mu.len() != k {
        return Err(GrassError::DimensionError("chart point shape does not match the polynomial".into()));
    }
    for (index, &value) in x.mu.iter().enumerate() {
        if value <= tol_boundary || value >= std::f64::consts::FRAC_PI_2 - tol_boundary {
            return Err(GrassError::ChartBoundary { index, value });
        }
    }
    let z = prob.pack(x);
    let (pt, grad) = prob.p_tilde_grad(&z);
    let nuv = prob.n_uv();

    let gmu = &grad[nuv..];
    let unit = |v: &[f64]| {
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.iter().map(|a| if norm > 0.0 { a / norm } else { 0.0 }).collect::<Vec<f64>>()
    };
    let (a, b) = (unit(gmu), unit(&x.mu));
    let mut mu_minors = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            mu_minors.push(a[i] * b[j] - a[j] * b[i]);
        }
    }
    if k == 1 {
        // A 2 x 1 matrix always has rank at most one.
        mu_minors.clear();
    }

    let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    let df = prob.constraints_jacobian(&z);
    let nf = prob.n_f();
    let mut block = DMatrix::zeros(nf + 1, nuv);
    for c in 0..nuv {
        block[(0, c)] = if gnorm > 0.0 { grad[c] / gnorm } else { 0.0 };
    }
    block.view_mut((1, 0), (nf, nuv)).copy_from(&df);
    let sv = singular_values(&block);
    let sigma_gap = sv.get(nf).copied().unwrap_or(0.0);

    Ok(LagrangeResidual { p_tilde: pt, orthogonality: prob.constraints(&z), mu_minors, sigma_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::polynomial::PluckerTerm;
    use crate::grassmann::plane::{complete_frame, make_plane};

    fn e1_line() -> FramedPlane {
        complete_frame(&make_plane(&DMatrix::from_column_slice(2, 1, &[1.0, 0.0]), 1e-12).unwrap())
    }

    #[test]
    fn first_component_is_p_tilde() {
        let p = PluckerPolynomial::new(2, 1, vec![PluckerTerm { idx: vec![0], coef: 1.0 }, PluckerTerm { idx: vec![1], coef: 2.0 }]).unwrap();
        let x = SvdChartPoint { u: DMatrix::from_element(1, 1, 1.0), v: DMatrix::from_element(1, 1, 1.0), mu: vec![0.4] };
        let r = lagrange_residual(&p, &e1_line(), &x, 1e-9).unwrap();
        assert!((r.p_tilde - (1.0 + 2.0 * 0.4f64.tan())).abs() < 1e-14);
        assert!(r.orthogonality.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn line_slice_critical_point() {
        // X = the single line through (cos t, sin t); p = -sin t c1 + cos t c2.
        let t = 0.7f64;
        let p = PluckerPolynomial::new(2, 1, vec![PluckerTerm { idx: vec![0], coef: -t.sin() }, PluckerTerm { idx: vec![1], coef: t.cos() }])
            .unwrap();
        let x = SvdChartPoint { u: DMatrix::from_element(1, 1, 1.0), v: DMatrix::from_element(1, 1, 1.0), mu: vec![t] };
        let r = lagrange_residual(&p, &e1_line(), &x, 1e-9).unwrap();
        assert!(r.max_abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn boundary_is_rejected() {
        let p = PluckerPolynomial::new(2, 1, vec![PluckerTerm { idx: vec![1], coef: 1.0 }]).unwrap();
        let x = SvdChartPoint { u: DMatrix::from_element(1, 1, 1.0), v: DMatrix::from_element(1, 1, 1.0), mu: vec![0.0] };
        assert!(matches!(lagrange_residual(&p, &e1_line(), &x, 1e-9), Err(GrassError::ChartBoundary { index: 0, .. })));
    }

    #[test]
    fn constraint_jacobian_matches_differences() {
        let p = PluckerPolynomial::new(5, 2, vec![PluckerTerm { idx: vec![3], coef: 1.0 }]).unwrap();
        let l = complete_frame(&crate::grassmann::random_plane(5, 2, 3).unwrap());
        let prob = ChartProblem::new(&p, &l).unwrap();
        let x: Vec<f64> = (0..prob.n_x()).map(|i| ((i * 37 % 11) as f64) / 7.0 - 0.6).collect();
        let d = prob.constraints_jacobian(&x);
        for c in 0..prob.n_uv() {
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[c] += 1e-6;
            xm[c] -= 1e-6;
            let (fp, fm) = (prob.constraints(&xp), prob.constraints(&xm));
            for r in 0..prob.n_f() {
                assert!(((fp[r] - fm[r]) / 2e-6 - d[(r, c)]).abs() < 1e-8);
            }
        }
    }
}
