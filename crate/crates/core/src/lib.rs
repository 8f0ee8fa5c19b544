//! Quasi-arcs in finite doubling, linearly connected metric spaces.
//!
//! An arc in a finite space is straightened at one scale by threading it
//! through the blobs of a separated net ([`straighten()`]), and the
//! operation is iterated over geometrically shrinking scales
//! ([`iterate()`]). Every quantitative guarantee of the construction is
//! re-checked exhaustively on the output and reported with a witness on
//! failure.
//!
//! The geometry is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix `f64`.

pub mod corpus;
pub mod error;
pub mod metric;
pub mod multiscale;
pub mod net;
pub mod scalar;
pub mod straighten;

pub use error::{Error, ErrorClass, HypothesisFailure, Result};
pub use metric::{
    diameter, directed_hausdorff, estimate_doubling, estimate_linear_connectivity, excise_loops, hausdorff_distance,
    linear_path, profile, scan_subarcs, set_distance, DiscreteArc, LinearPath, MetricKind, MetricSpace, Sampling,
};
pub use multiscale::{
    check_cauchy, compose_follow_maps, iterate, measure_local_quasiarc, DeltaRule, Depth, IterationConfig,
};
pub use net::{blob_family_at, build_blobs, build_net, color_net, verify_blob_properties};
pub use scalar::{LogValue, Scalar};
pub use straighten::{
    assemble_arc, build_follow_map, check_star, discretize_arc, extract_chain, straighten, verify_follows, CoarseMap,
    StraightenParams,
};

pub type Space = MetricSpace<f64>;
pub type SpaceF32 = MetricSpace<f32>;
pub type Net = net::Net<f64>;
pub type Coloring = net::Coloring<f64>;
pub type BlobFamily = net::BlobFamily<f64>;
pub type Discretization = straighten::Discretization<f64>;
pub type FollowMap = CoarseMap<f64>;
pub type StraighteningResult = straighten::StraighteningResult<f64>;
pub type MultiscaleTrace = multiscale::MultiscaleTrace<f64>;
pub type SpaceProfile = metric::SpaceProfile<f64>;
