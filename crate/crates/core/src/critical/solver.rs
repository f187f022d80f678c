//! Damped Gauss-Newton (Levenberg-Marquardt) search for critical points of the
//! distance to `L` on a hypersurface, from random starts in the SVD chart.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;

use super::dual::{Dual, Scalar};
use super::lagrange::{lagrange_residual, ChartProblem, LagrangeResidual, SvdChartPoint};
use super::polynomial::PluckerPolynomial;
use crate::error::{GrassError, Result};
use crate::grassmann::angles::grassmann_distance;
use crate::grassmann::geodesic::log;
use crate::grassmann::plane::{complete_frame, FramedPlane, Plane};
use crate::grassmann::sampling::{gaussian_matrix, random_orthogonal, stream_rng};
use crate::linalg::{orthonormalize, pinv_solve};

/// Iterates closer than this to `0` or `pi/2` are rejected.
const BARRIER: f64 = 1e-6;
/// Points closer than this (Grassmann distance) are merged.
pub const DEDUP_DISTANCE: f64 = 1e-6;
/// Acceptance threshold for the chart-free normality certificate.
pub const CERTIFICATE_TOL: f64 = 1e-6;
const MAX_ITER: usize = 200;
const COINCIDENCE: f64 = 1e-6;

/// A critical point found by [`find_critical_points`].
#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub plane: Plane,
    /// Grassmann distance to `L`.
    pub value: f64,
    pub chart: SvdChartPoint,
    pub lagrange: LagrangeResidual,
    /// Relative residual of `log_E(L)` against the normal line of the hypersurface.
    pub certificate: f64,
    /// Index of the first start that reached the point.
    pub start: usize,
}

/// What happened to one start.
#[derive(Debug, Clone, PartialEq)]
pub enum StartOutcome {
    /// A new critical point.
    Found,
    /// Converged to a point already found by an earlier start.
    Duplicate { of_start: usize },
    /// Converged, but the certificate or the Lagrange residual check failed.
    Rejected { reason: String },
    NoConvergence { residual: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StartDiagnostic {
    pub start: usize,
    pub iterations: usize,
    pub residual: f64,
    pub outcome: StartOutcome,
}

#[derive(Debug, Clone)]
pub struct CriticalSearch {
    /// Deduplicated points, sorted by distance to `L`.
    pub points: Vec<CriticalPoint>,
    pub diagnostics: Vec<StartDiagnostic>,
}

struct LmOutcome {
    z: Vec<f64>,
    residual: f64,
    iterations: usize,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

fn fd_jacobian(f: &dyn Fn(&[f64]) -> Vec<f64>, z: &[f64], rows: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(rows, z.len());
    let mut w = z.to_vec();
    for c in 0..z.len() {
        let h = 1e-6 * z[c].abs().max(1.0);
        w[c] = z[c] + h;
        let fp = f(&w);
        w[c] = z[c] - h;
        let fm = f(&w);
        w[c] = z[c];
        for r in 0..rows {
            j[(r, c)] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    j
}

/// Levenberg-Marquardt on `f`, refusing steps that leave `admissible`.
fn levenberg_marquardt(f: &dyn Fn(&[f64]) -> Vec<f64>, admissible: &dyn Fn(&[f64]) -> bool, z0: Vec<f64>, tol: f64) -> LmOutcome {
    let mut z = z0;
    let mut r = f(&z);
    let mut cost: f64 = r.iter().map(|x| x * x).sum();
    let mut damping = 1e-3;
    let mut iterations = 0;
    // Polish a little below the acceptance tolerance.
    let target = tol * 1e-2;
    while iterations < MAX_ITER && max_abs(&r) > target {
        iterations += 1;
        let jac = fd_jacobian(f, &z, r.len());
        let jt = jac.transpose();
        let h = &jt * &jac;
        let g = &jt * DVector::from_column_slice(&r);
        let mut improved = false;
        while damping < 1e12 {
            let mut hd = h.clone();
            for i in 0..hd.nrows() {
                hd[(i, i)] += damping;
            }
            let step = match hd.clone().cholesky() {
                Some(ch) => ch.solve(&g),
                None => pinv_solve(&hd, &g, 1e-15),
            };
            let trial: Vec<f64> = z.iter().zip(step.iter()).map(|(a, s)| a - s).collect();
            if admissible(&trial) {
                let rt = f(&trial);
                let ct: f64 = rt.iter().map(|x| x * x).sum();
                if ct.is_finite() && ct < cost {
                    let tiny = step.norm() <= 1e-15 * (1.0 + DVector::from_column_slice(&z).norm());
                    z = trial;
                    r = rt;
                    cost = ct;
                    damping = (damping / 3.0).max(1e-15);
                    improved = !tiny;
                    break;
                }
            }
            damping *= 4.0;
        }
        if !improved {
            break;
        }
    }
    LmOutcome { residual: max_abs(&r), z, iterations }
}

fn in_chart(prob: &ChartProblem, x: &[f64]) -> bool {
    x[prob.n_uv()..prob.n_x()].iter().all(|&m| m > BARRIER && m < FRAC_PI_2 - BARRIER)
}

fn random_start<R: Rng + ?Sized>(prob: &ChartProblem, rng: &mut R) -> Vec<f64> {
    let u = orthonormalize(&gaussian_matrix(rng, prob.m, prob.k));
    let v = random_orthogonal(rng, prob.k);
    let mu: Vec<f64> = (0..prob.k).map(|_| rng.random_range(0.05..FRAC_PI_2 - 0.05)).collect();
    prob.pack(&SvdChartPoint { u, v, mu })
}

/// Least-squares multipliers `(lambda, Lambda)` for a chart point.
fn initial_multipliers(prob: &ChartProblem, x: &[f64]) -> Vec<f64> {
    let (nuv, nf, k) = (prob.n_uv(), prob.n_f(), prob.k);
    let (_, grad) = prob.p_tilde_grad(x);
    let df = prob.constraints_jacobian(x);
    let mut a = DMatrix::zeros(nuv + k, 1 + nf);
    let mut rhs = DVector::zeros(nuv + k);
    for c in 0..nuv {
        a[(c, 0)] = grad[c];
        for r in 0..nf {
            a[(c, 1 + r)] = df[(r, c)];
        }
    }
    for c in 0..k {
        a[(nuv + c, 0)] = grad[nuv + c];
        rhs[nuv + c] = 2.0 * x[nuv + c];
    }
    pinv_solve(&a, &rhs, 1e-12).iter().copied().collect()
}

/// Relative residual of `log_E(L)` against the normal line of `{p = 0}` at `E`.
///
/// The normal is the gradient of `B -> p(minors(E1 + E2 B))` at `B = 0`, which
/// needs no SVD chart. Fails with `NotSmoothPoint` when that gradient vanishes.
pub fn chart_free_certificate(p: &PluckerPolynomial, e: &Plane, l: &Plane) -> Result<f64> {
    let fe = complete_frame(e);
    let (n, k) = (e.n(), e.k());
    let f = fe.frame();
    let mut y: Vec<Dual> = (0..n).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| Dual::cst(f[(i, j)])).collect();
    let mut grad = DMatrix::zeros(n - k, k);
    for a in 0..n - k {
        for b in 0..k {
            for i in 0..n {
                y[i * k + b].eps = f[(i, k + a)];
            }
            grad[(a, b)] = p.eval_matrix(&y).eps;
            for i in 0..n {
                y[i * k + b].eps = 0.0;
            }
        }
    }
    let gn = grad.norm();
    if gn <= 1e-12 * p.scale() {
        return Err(GrassError::NotSmoothPoint("polynomial gradient vanishes".into()));
    }
    let v = log(&fe, l)?.a;
    let vn = v.norm();
    if vn == 0.0 {
        return Ok(0.0);
    }
    let unit = grad / gn;
    let along = crate::linalg::frobenius_inner(&v, &unit);
    Ok((v - unit * along).norm() / vn)
}

struct StartResult {
    start: usize,
    iterations: usize,
    residual: f64,
    point: std::result::Result<CriticalPoint, StartOutcome>,
}

fn run_start(p: &PluckerPolynomial, l: &FramedPlane, prob: &ChartProblem, seed: u64, start: usize, tol: f64) -> StartResult {
    let mut rng = stream_rng(seed, start as u64);
    let x0 = random_start(prob, &mut rng);
    let nx = prob.n_x();
    let admissible_x = |x: &[f64]| in_chart(prob, x);

    let on_surface = |x: &[f64]| {
        let mut out = vec![prob.p_tilde(x)];
        out.extend(prob.constraints(x));
        out
    };
    let phase1 = levenberg_marquardt(&on_surface, &admissible_x, x0, tol);

    let mut z = phase1.z.clone();
    z.extend(initial_multipliers(prob, &phase1.z));
    let system = |z: &[f64]| prob.system(z);
    let admissible_z = |z: &[f64]| in_chart(prob, &z[..nx]);
    let phase2 = levenberg_marquardt(&system, &admissible_z, z, tol);
    let iterations = phase1.iterations + phase2.iterations;
    let residual = phase2.residual;
    let fail = |outcome| StartResult { start, iterations, residual, point: Err(outcome) };
    if residual.is_nan() || residual > tol {
        return fail(StartOutcome::NoConvergence { residual });
    }

    let chart = prob.unpack(&phase2.z[..nx]);
    let lagrange = match lagrange_residual(p, l, &chart, BARRIER) {
        Ok(r) => r,
        Err(e) => return fail(StartOutcome::Rejected { reason: e.to_string() }),
    };
    // The chart is singular where two mu coincide; the Lagrange system has
    // spurious solutions there.
    let gap = (0..prob.k).flat_map(|i| (i + 1..prob.k).map(move |j| (i, j))).map(|(i, j)| (chart.mu[i] - chart.mu[j]).abs()).fold(f64::INFINITY, f64::min);
    if gap < COINCIDENCE {
        return fail(StartOutcome::Rejected { reason: format!("coincident mu (gap {gap:e})") });
    }
    let plane = chart.to_plane(l);
    let certificate = match chart_free_certificate(p, &plane, l.plane()) {
        Ok(c) => c,
        Err(e) => return fail(StartOutcome::Rejected { reason: e.to_string() }),
    };
    if certificate >= CERTIFICATE_TOL {
        return fail(StartOutcome::Rejected { reason: format!("normality certificate {certificate:e}") });
    }
    let value = chart.value();
    StartResult { start, iterations, residual, point: Ok(CriticalPoint { plane, value, chart, lagrange, certificate, start }) }
}

/// Searches for critical points of `delta(L, .)` on `{p = 0}` off the cut locus of `L`.
///
/// Runs `n_starts` independent solves (in parallel, start `i` drawing from
/// stream `i` of `seed`), keeps converged points with system residual at most
/// `tol` and a passing certificate, and merges points closer than
/// [`DEDUP_DISTANCE`] in start order. Starts that fail are reported in the
/// diagnostics; they never fail the batch.
pub fn find_critical_points(p: &PluckerPolynomial, l: &FramedPlane, n_starts: usize, seed: u64, tol: f64) -> Result<CriticalSearch> {
    let prob = ChartProblem::new(p, l)?;
    if n_starts == 0 {
        return Err(GrassError::InvalidArgument("need at least one start".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(GrassError::InvalidArgument(format!("solver tolerance must be positive, got {tol}")));
    }
    let at_l = p.eval_plane(l.plane());
    if at_l.abs() <= 1e-12 * p.scale() {
        return Err(GrassError::NonGenericL(format!("polynomial vanishes at L ({at_l:e})")));
    }

    let results: Vec<StartResult> = (0..n_starts).into_par_iter().map(|s| run_start(p, l, &prob, seed, s, tol)).collect();

    let mut points: Vec<CriticalPoint> = Vec::new();
    let mut diagnostics = Vec::with_capacity(results.len());
    for r in results {
        let outcome = match r.point {
            Err(o) => o,
            Ok(cp) => {
                let dup = points.iter().find(|q| grassmann_distance(&q.plane, &cp.plane).is_ok_and(|d| d < DEDUP_DISTANCE));
                match dup {
                    Some(q) => StartOutcome::Duplicate { of_start: q.start },
                    None => {
                        points.push(cp);
                        StartOutcome::Found
                    }
                }
            }
        };
        diagnostics.push(StartDiagnostic { start: r.start, iterations: r.iterations, residual: r.residual, outcome });
    }
    points.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.start.cmp(&b.start)));
    Ok(CriticalSearch { points, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::polynomial::PluckerTerm;
    use crate::grassmann::plane::make_plane;
    use crate::grassmann::random_plane;

    fn two_lines(phi: f64) -> PluckerPolynomial {
        // (c . d1)(c . d2) with d1 = (cos phi, sin phi), d2 perpendicular.
        let (c, s) = (phi.cos(), phi.sin());
        PluckerPolynomial::new(
            2,
            1,
            vec![
                PluckerTerm { idx: vec![0, 0], coef: -c * s },
                PluckerTerm { idx: vec![0, 1], coef: c * c - s * s },
                PluckerTerm { idx: vec![1, 1], coef: c * s },
            ],
        )
        .unwrap()
    }

    #[test]
    fn circle_two_points() {
        let p = two_lines(0.3);
        let l = complete_frame(&make_plane(&DMatrix::from_column_slice(2, 1, &[1.0, 0.0]), 1e-12).unwrap());
        let res = find_critical_points(&p, &l, 8, 1, 1e-10).unwrap();
        let values: Vec<f64> = res.points.iter().map(|c| c.value).collect();
        assert_eq!(values.len(), 2, "{:?}", res.diagnostics);
        assert!((values[0] - 0.3).abs() < 1e-9);
        assert!((values[1] - (FRAC_PI_2 - 0.3)).abs() < 1e-9);
        assert!((values[0] + values[1] - FRAC_PI_2).abs() < 1e-9);
    }

    #[test]
    fn linear_section_of_g24() {
        let p = PluckerPolynomial::new(
            4,
            2,
            (0..6).map(|i| PluckerTerm { idx: vec![i], coef: [0.3, -1.1, 0.7, 0.2, 0.9, -0.4][i] }).collect(),
        )
        .unwrap();
        let l = complete_frame(&random_plane(4, 2, 11).unwrap());
        let res = find_critical_points(&p, &l, 64, 5, 1e-10).unwrap();
        assert!(!res.points.is_empty(), "{:?}", res.diagnostics);
        for cp in &res.points {
            assert!(cp.lagrange.max_abs() < 1e-8, "{:?}", cp.lagrange);
            assert!(cp.certificate < CERTIFICATE_TOL);
            assert!(p.eval_plane(&cp.plane).abs() < 1e-9);
            assert!((grassmann_distance(l.plane(), &cp.plane).unwrap() - cp.value).abs() < 1e-9);
        }
        // The section has exactly a nearest and a farthest off-cut critical point.
        let values: Vec<f64> = res.points.iter().map(|c| c.value).collect();
        assert_eq!(values.len(), 2, "{values:?}");
        assert!((values[0] - 0.150814382236).abs() < 1e-9 && (values[1] - 1.812449709865).abs() < 1e-9);
    }

    #[test]
    fn rejects_l_on_hypersurface() {
        let p = PluckerPolynomial::new(2, 1, vec![PluckerTerm { idx: vec![1], coef: 1.0 }]).unwrap();
        let l = complete_frame(&make_plane(&DMatrix::from_column_slice(2, 1, &[1.0, 0.0]), 1e-12).unwrap());
        assert!(matches!(find_critical_points(&p, &l, 2, 0, 1e-10), Err(GrassError::NonGenericL(_))));
    }
}

