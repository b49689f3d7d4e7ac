//! Finite metric spaces with extended distances.

mod distance;
mod family;
mod json;
mod space;

pub use distance::ExtDistance;
pub use family::{is_r_disjoint, r_disjoint_witness, DisjointnessWitness, MetricFamily};
pub use json::{MetricDoc, SpaceDoc};
pub(crate) use json::RawId;
pub use space::{MetricSpace, Subspace, FULL_TRIANGLE_CHECK_LIMIT};
pub(crate) use space::lattice_id;
