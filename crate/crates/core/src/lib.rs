//! Riemannian geometry of the real Grassmannian `G(k, n)` and nearest-point
//! problems to simple Schubert varieties.

pub mod error;
pub mod grassmann;
pub mod io;
pub mod linalg;
pub mod cli;
pub mod critical;
pub mod cutlocus;
pub mod lowrank;
pub mod minnorm;
pub mod schubert;

pub use error::{GrassError, Result};
pub use grassmann::{
    complete_frame, exp, geodesic_point, grassmann_distance, log, make_plane, metric, principal_decomposition, random_plane, FramedPlane,
    Plane, TangentMatrix,
};

/// Numerical tolerances shared across the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Orthonormality and rank decisions.
    pub orth: f64,
    /// Absolute distance (radians) to pi/2 counted as "on the cut locus".
    pub cut: f64,
    /// Separation of angles required by the genericity gate.
    pub gen: f64,
    /// Relative separation of singular values counted as distinct.
    pub sv: f64,
    /// Residual accepted by the critical-point solver.
    pub solver: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { orth: 1e-12, cut: 1e-9, gen: 1e-8, sv: 1e-10, solver: 1e-10 }
    }
}
