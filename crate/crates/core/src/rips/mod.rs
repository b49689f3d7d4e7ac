//! Rips complexes, PL paths and path straightening.

mod complex;
mod path;
mod sampling;
mod straighten;

pub use complex::{
    build_relative_rips, build_rips, rips_constant, rips_dimension, skeleton_distance, skeleton_dot, skeleton_path, straightening_factor,
    Complex, RelativeRipsComplex, RipsComplex, Simplex, SimplexTable, DEFAULT_DIM_CAP,
};
pub use path::{coordinate_tolerance, is_face, path_length, union, BarycentricPoint, Path, PlPath, Point};
pub use sampling::{
    check_metric_comparison, check_metric_comparison_with, path_constant, random_coface, random_path, random_point_in, random_transverse_path,
    ComparisonOptions,
    ComparisonReport, ComparisonSample,
};
pub use straighten::{
    certify_straightening, normalize, straighten_full, straighten_step, LevelReport, Replacement, StepOutcome,
    StraighteningCertificate, StraighteningReport, GEOMETRIC_TOLERANCE,
};
