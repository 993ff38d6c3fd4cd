//! The union-of-balls support estimator and its boundary as an exact arc
//! arrangement with fast distance queries.

mod boundary;
mod union;

pub use boundary::{boundary, build_boundary, BoundaryArc, BoundaryArrangement, BoundaryLoop};
pub use union::{
    distance_to_boundary, max_nearest_neighbor_distance, select_epsilon, BallUnion, EpsilonMethod,
};
