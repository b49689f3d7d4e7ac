//! Finite decomposition complexity: certificates, strategies and sequences.

mod cert;
mod mutate;
mod relative;
mod sequence;
mod strategy;
mod weaken;

pub use cert::{
    certificate_dot, verify_certificate, Certificate, CertifiedFamily, Clause, Color, Failure, PartSplit, SplitNode,
    Verification,
};
pub use mutate::{mutate_certificate, Mutation, MutationKind};
pub use relative::{
    check_rel_nbhd, check_rel_separation, space_constant, FoundPath, NbhdWitness, RelNbhdOptions, RelNbhdReport,
    RelSeparationReport, SeparationStatus,
};
pub use sequence::{
    build_sequence_rips, check_cover, intersection_families, refinement_inequality, CoverCheck, DecomposedSequence,
    IntersectionFamily, Level, OrphanWitness, Piece, RefinedCover, SequenceCover, SequenceRips,
};
pub use strategy::{decompose, decompose_annuli, decompose_lattice, decompose_slabs, r_components, slab_width};
pub use weaken::{assign_targets, weaken_to_subneighborhoods};
