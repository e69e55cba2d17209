//! Normed planes, their circles, 2-sums and the construction of 𝓛₁.

mod boundary;
mod gamma;
mod intersect;
mod l1;
pub mod roots;
mod space;
mod vector;

use thiserror::Error;

pub use boundary::{BoundarySpec, Piece};
pub use gamma::{concavity_gate, g_eval, gamma_d1, gamma_dd, gamma_eval, l0_norm, smallest_concave_m};
pub use intersect::{intersect_circles, Classification, Component, IntersectionReport};
pub use l1::{construct_l1, ConstructionOptions, L1Params, L1};
pub use space::{
    aux_a, is_rotund, is_rotund_sampled, same_direction, two_sum, NormedSpace, ROTUND_SAMPLES,
};
pub use vector::{Vec2, VecN};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("{op}: argument {value} outside the open interval (-1, 0)")]
    Domain { op: &'static str, value: f64 },
    #[error("zero vector")]
    ZeroVector,
    #[error("vector {0:?} is not in the open north-west or south-east quadrant")]
    OutsideQuadrants(Vec2),
    #[error("dimension mismatch: space has dimension {expected}, vector has {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation needs a two-dimensional plane")]
    NotAPlane,
    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),
    #[error("construction failed: {constraint}")]
    ConstructionFailed { constraint: String },
    #[error("grid too coarse: ambiguous plateau boundary near parameter {at}")]
    GridTooCoarse { at: f64 },
    #[error("intersection has {0} components; homothetic circles meet in at most two")]
    TooManyComponents(usize),
    #[error("invalid circle: {0}")]
    InvalidCircle(String),
}
