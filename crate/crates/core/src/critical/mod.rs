//! Critical points of the distance to a plane on algebraic hypersurfaces of
//! `G(k, n)`, the complexity bound, and the transcendental `G~(2,4)` example.

pub mod dual;
pub mod g24;
pub mod gdc;
pub mod lagrange;
pub mod pfaffian;
pub mod polynomial;
pub mod solver;

pub use g24::{alpha, g24_critical_residual, g24_det_identity_check, g24_distance, g24_scan, DetIdentity, ScanRow};
pub use gdc::{gdc_estimate, GdcReport, GdcTrial};
pub use lagrange::{lagrange_residual, LagrangeResidual, SvdChartPoint};
pub use pfaffian::{c1_over_c, log10_big, pfaffian_bound, BoundReport};
pub use polynomial::{PluckerPolynomial, PluckerTerm};
pub use solver::{chart_free_certificate, find_critical_points, CriticalPoint, CriticalSearch, StartDiagnostic, StartOutcome};
