use std::sync::Arc;

use rand::Rng;

use super::matrix::{Coefficient, Matrix};
use super::module::{GeometricModule, ModuleSpace};
use super::morphism::GeomMorphism;
use crate::error::Result;

/// Each site is supported with probability `density`, with rank in `1..=max_rank`.
pub fn random_module(space: &Arc<ModuleSpace>, density: f64, max_rank: usize, rng: &mut impl Rng) -> GeometricModule {
    let mut ranks = Vec::new();
    for s in space.sites() {
        if rng.gen_bool(density) {
            ranks.push((s, rng.gen_range(1..=max_rank.max(1))));
        }
    }
    GeometricModule::new(space.clone(), ranks).expect("sites of the space")
}

#[derive(Clone, Debug)]
pub struct RandomMorphismOptions {
    /// Probability of a block between two supported sites within range.
    pub density: f64,
    /// Blocks only join sites at most this far apart.
    pub max_propagation: f64,
    /// Entries are drawn from `-entry_bound..=entry_bound`.
    pub entry_bound: i64,
}

impl Default for RandomMorphismOptions {
    fn default() -> Self {
        RandomMorphismOptions { density: 0.3, max_propagation: 3.0, entry_bound: 3 }
    }
}

pub fn random_morphism<R: Coefficient>(
    source: &GeometricModule,
    target: &GeometricModule,
    opts: &RandomMorphismOptions,
    rng: &mut impl Rng,
) -> Result<GeomMorphism<R>> {
    let space = source.space();
    let mut blocks = Vec::new();
    for (&x, &rows) in target.ranks() {
        for (&y, &cols) in source.ranks() {
            if space.distance(x, y).le(opts.max_propagation) && rng.gen_bool(opts.density) {
                let m = Matrix::from_fn(rows, cols, |_, _| R::from(rng.gen_range(-opts.entry_bound..=opts.entry_bound)));
                blocks.push(((x, y), m));
            }
        }
    }
    GeomMorphism::new(source.clone(), target.clone(), blocks)
}
