//! Finite metric spaces, discrete arcs, set distances and estimators for
//! the linear-connectivity and doubling constants.

mod arc;
mod paths;
pub mod profile;
pub mod sets;
mod space;

pub use arc::{excise_loops, DiscreteArc};
pub use paths::{linear_path, LinearPath};
pub use profile::{
    estimate_doubling, estimate_linear_connectivity, profile, ConnectivityEstimate, DoublingEstimate, Sampling,
    SpaceProfile,
};
pub use sets::{diameter, directed_hausdorff, hausdorff_distance, scan_subarcs, set_distance};
pub use space::{MetricKind, MetricSpace, EXHAUSTIVE_AXIOM_LIMIT};
