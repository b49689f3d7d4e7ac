//! Geometric modules over finite metric spaces and their finite-propagation morphisms.

mod control;
mod factor;
mod matrix;
mod module;
mod morphism;
mod random;

pub use control::{check_control_certificate, ControlCheck, ControlProbe, ControlViolation};
pub use factor::{difference_factorization, equivalent_mod_support, factors_through_support, Factorization, Side, SumFactorization};
pub use matrix::{Coefficient, Matrix};
pub use module::{GeometricModule, ModuleSpace, Site};
pub use morphism::{split_by_subspace, GeomMorphism, IntMorphism, SubspaceSplit};
pub use random::{random_module, random_morphism, RandomMorphismOptions};
