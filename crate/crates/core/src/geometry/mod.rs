//! Scalars, vectors, planes and rigid motions shared by every module.

mod motion;
pub mod planar;
mod scalar;
mod vec3;

use thiserror::Error;

pub use motion::{parallel_same_direction, side_of_plane, twist_velocity, Plane, RigidMotion, Twist};
pub use scalar::{exact_rank, parse_rational, Backend, Rational, Scalar, Sign, DEFAULT_TOLERANCE};
pub use vec3::{cross, orient3d, triangle_normal, Vec3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("degenerate triangle (collinear vertices)")]
    DegenerateTriangle,
    #[error("plane normal must be nonzero")]
    ZeroNormal,
    #[error("matrix is not a proper rotation")]
    NotARotation,
}
