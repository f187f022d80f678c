//! Planes, frames, principal angles, the invariant metric, exp/log and
//! Plücker coordinates on the real Grassmannian `G(k, n)`.

pub mod angles;
pub mod geodesic;
pub mod plane;
pub mod plucker;
pub mod pullback;
pub mod sampling;

pub use angles::{grassmann_distance, principal_angles, principal_angles_rect, principal_decomposition, PrincipalDecomposition};
pub use geodesic::{exp, geodesic_point, log, log_with_tol, metric, DEFAULT_TOL_CUT};
pub use plane::{complete_frame, make_plane, FrameId, FramedPlane, Plane, TangentMatrix};
pub use plucker::{minors, plucker_coords, PluckerPoint};
pub use pullback::pullback_metric_error;
pub use sampling::{random_orthogonal, random_plane, random_plane_with, rng_from_seed, stream_rng};
