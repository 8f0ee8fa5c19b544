//! Maximal separated nets, their separated colouring, and the blob family.

mod blobs;
mod coloring;
mod separated;

pub use blobs::{
    blob_family_at, build_blobs, build_blobs_linked, verify_blob_properties, Blob, BlobAnomaly, BlobFamily, BlobReport, BridgeEvent,
    PropertyVerdict,
};
pub(crate) use blobs::sorted_intersect;
pub use coloring::{color_net, Coloring, ColoringReport};
pub use separated::{build_net, Net, NetReport};
