use rayon::prelude::*;

use super::polynomial::PluckerPolynomial;
use super::solver::find_critical_points;
use crate::cutlocus::cut_stratum;
use crate::error::Result;
use crate::grassmann::geodesic::DEFAULT_TOL_CUT;
use crate::grassmann::plane::{complete_frame, Plane};
use crate::grassmann::sampling::{random_plane_with, stream_rng};

/// Stream offset separating the draws of `L` from the solver streams.
const L_STREAM: u64 = 1 << 40;

/// One random `L` and the number of off-cut critical points found for it.
#[derive(Debug, Clone)]
pub struct GdcTrial {
    pub l: Plane,
    pub count: usize,
    /// Distances to `L` of the counted points, ascending.
    pub values: Vec<f64>,
    pub converged_starts: usize,
    pub error: Option<String>,
}

/// Empirical lower bound for the distance complexity of a hypersurface.
#[derive(Debug, Clone)]
pub struct GdcReport {
    pub trials: usize,
    pub n_starts: usize,
    pub seed: u64,
    pub tol: f64,
    pub per_trial: Vec<GdcTrial>,
    pub max_count: usize,
}

impl GdcReport {
    pub fn counts(&self) -> Vec<usize> {
        self.per_trial.iter().map(|t| t.count).collect()
    }
}

/// Trial `t` draws `L` from stream `2^40 + t` of `seed` and runs the search
/// with seed `seed + t`.
pub fn gdc_estimate(p: &PluckerPolynomial, trials: usize, n_starts: usize, seed: u64, tol: f64) -> Result<GdcReport> {
    p.check_hypersurface()?;
    let per_trial: Vec<GdcTrial> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(seed, L_STREAM + t as u64);
            let l = random_plane_with(&mut rng, p.n, p.k).expect("gaussian planes are full rank");
            let framed = complete_frame(&l);
            match find_critical_points(p, &framed, n_starts, seed.wrapping_add(t as u64), tol) {
                Ok(search) => {
                    let converged_starts = search.diagnostics.iter().filter(|d| d.residual <= tol).count();
                    let values: Vec<f64> = search
                        .points
                        .iter()
                        .filter(|cp| cut_stratum(&l, &cp.plane, DEFAULT_TOL_CUT).is_ok_and(|r| r.j == 0))
                        .map(|cp| cp.value)
                        .collect();
                    GdcTrial { l, count: values.len(), values, converged_starts, error: None }
                }
                Err(e) => GdcTrial { l, count: 0, values: Vec::new(), converged_starts: 0, error: Some(format!("{}: {e}", e.code())) },
            }
        })
        .collect();
    let max_count = per_trial.iter().map(|t| t.count).max().unwrap_or(0);
    Ok(GdcReport { trials, n_starts, seed, tol, per_trial, max_count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::polynomial::PluckerTerm;

    #[test]
    fn single_trial_matches_search() {
        let p = PluckerPolynomial::new(4, 2, (0..6).map(|i| PluckerTerm { idx: vec![i], coef: 1.0 + i as f64 }).collect()).unwrap();
        let rep = gdc_estimate(&p, 1, 16, 9, 1e-10).unwrap();
        let framed = complete_frame(&rep.per_trial[0].l);
        let direct = find_critical_points(&p, &framed, 16, 9, 1e-10).unwrap();
        assert_eq!(rep.max_count, direct.points.len());
        assert_eq!(rep.counts(), vec![direct.points.len()]);
    }
}
