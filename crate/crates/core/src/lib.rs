//! Exact combinatorics of the posets `NC^d_n` of d-indivisible noncrossing
//! partitions: construction, duals, tree and parking-function bijections,
//! generating functions, Möbius functions and the antipode.

pub mod antipode;
pub mod chains;
pub mod error;
pub mod parking_tree;
pub mod partition;
pub mod plane_tree;
pub mod poset;
pub mod series;
pub mod svg;
pub mod verify;

pub use error::{Error, Result};
pub use partition::{DualAdjacency, NoncrossingPartition};
