pub mod algebra;
pub mod error;
pub mod fdc;
pub mod groups;
pub mod metric;
pub mod report;
pub mod rips;
pub mod rng;
pub mod suite;

pub use algebra::{GeomMorphism, GeometricModule, IntMorphism, ModuleSpace, Site};
pub use error::{Error, Result};
pub use fdc::{Certificate, DecomposedSequence};
pub use metric::{ExtDistance, MetricFamily, MetricSpace, Subspace};
pub use report::{CheckRecord, RunReport, Status};
pub use rips::{Path, Point, RelativeRipsComplex, RipsComplex};
