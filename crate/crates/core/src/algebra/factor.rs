use serde::Serialize;

use super::matrix::Coefficient;
use super::module::GeometricModule;
use super::morphism::GeomMorphism;
use crate::error::{Error, Result};
use crate::metric::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Row support lies near `Y`; the middle module is a restriction of the target.
    Rows,
    /// Column support lies near `Y`; the middle module is a restriction of the source.
    Columns,
}

/// `φ = β ∘ α` through a module supported in `N̄_r(Y)`.
#[derive(Clone, Debug)]
pub struct Factorization<R> {
    pub side: Side,
    pub middle: GeometricModule,
    pub alpha: GeomMorphism<R>,
    pub beta: GeomMorphism<R>,
}

impl<R: Coefficient> Factorization<R> {
    pub fn recompose(&self) -> Result<GeomMorphism<R>> {
        self.beta.compose(&self.alpha)
    }
}

/// Tries the support criterion: `row_support(φ) ⊆ N̄_r(Y)` or `col_support(φ) ⊆ N̄_r(Y)`.
///
/// `None` means the criterion does not apply, not that no factorization exists.
pub fn factors_through_support<R: Coefficient>(phi: &GeomMorphism<R>, y: &Subspace, r: f64) -> Result<Option<Factorization<R>>> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::InvalidRadius(r));
    }
    let hood = phi.source().space().base().closed_neighborhood(y, r)?;
    factor_with_hood(phi, &hood)
}

fn factor_with_hood<R: Coefficient>(phi: &GeomMorphism<R>, hood: &Subspace) -> Result<Option<Factorization<R>>> {
    if phi.row_support().is_subset(hood) {
        let middle = phi.target().restrict(hood)?;
        return Ok(Some(Factorization {
            side: Side::Rows,
            alpha: phi.reframe(phi.source().clone(), middle.clone())?,
            beta: GeomMorphism::canonical(&middle, phi.target())?,
            middle,
        }));
    }
    if phi.col_support().is_subset(hood) {
        let middle = phi.source().restrict(hood)?;
        return Ok(Some(Factorization {
            side: Side::Columns,
            alpha: GeomMorphism::canonical(phi.source(), &middle)?,
            beta: phi.reframe(middle.clone(), phi.target().clone())?,
            middle,
        }));
    }
    Ok(None)
}

/// `φ − ψ` as a sum of factorizations, each through one allowed neighborhood.
#[derive(Clone, Debug)]
pub struct SumFactorization<R> {
    /// `(index into allowed, factorization)`.
    pub pieces: Vec<(usize, Factorization<R>)>,
}

impl<R: Coefficient> SumFactorization<R> {
    pub fn recompose(&self, source: &GeometricModule, target: &GeometricModule) -> Result<GeomMorphism<R>> {
        self.pieces.iter().try_fold(GeomMorphism::zero(source.clone(), target.clone()), |acc, (_, f)| acc.add(&f.recompose()?))
    }
}

/// Finds a factorization of `φ − ψ` through `⊕ S(N̄_r(Y))` over the allowed pairs.
///
/// A single allowed pair is tried first; otherwise every block of the
/// difference is assigned to the first allowed neighborhood holding its row or
/// column, and each group factors on that side.
pub fn difference_factorization<R: Coefficient>(
    phi: &GeomMorphism<R>,
    psi: &GeomMorphism<R>,
    allowed: &[(Subspace, f64)],
) -> Result<Option<SumFactorization<R>>> {
    let delta = phi.sub(psi)?;
    if delta.is_zero() {
        return Ok(Some(SumFactorization { pieces: Vec::new() }));
    }
    let base = delta.source().space().base().clone();
    let hoods: Vec<Subspace> = allowed
        .iter()
        .map(|(y, r)| {
            if !(r.is_finite() && *r >= 0.0) {
                return Err(Error::InvalidRadius(*r));
            }
            base.closed_neighborhood(y, *r)
        })
        .collect::<Result<_>>()?;
    for (k, hood) in hoods.iter().enumerate() {
        if let Some(f) = factor_with_hood(&delta, hood)? {
            return Ok(Some(SumFactorization { pieces: vec![(k, f)] }));
        }
    }
    let mut groups: Vec<[Vec<_>; 2]> = vec![[Vec::new(), Vec::new()]; hoods.len()];
    for (&(x, y), m) in delta.blocks() {
        let slot = hoods.iter().enumerate().find_map(|(k, h)| {
            if h.contains(x.point) {
                Some((k, 0))
            } else if h.contains(y.point) {
                Some((k, 1))
            } else {
                None
            }
        });
        let Some((k, side)) = slot else { return Ok(None) };
        groups[k][side].push(((x, y), m.clone()));
    }
    let mut pieces = Vec::new();
    for (k, sides) in groups.into_iter().enumerate() {
        for blocks in sides.into_iter().filter(|b| !b.is_empty()) {
            let part = GeomMorphism::new(delta.source().clone(), delta.target().clone(), blocks)?;
            let f = factor_with_hood(&part, &hoods[k])?.expect("grouped blocks lie in the neighborhood");
            pieces.push((k, f));
        }
    }
    Ok(Some(SumFactorization { pieces }))
}

/// Whether `φ − ψ` factors through allowed support-restricted modules by the support criterion.
pub fn equivalent_mod_support<R: Coefficient>(phi: &GeomMorphism<R>, psi: &GeomMorphism<R>, allowed: &[(Subspace, f64)]) -> Result<bool> {
    Ok(difference_factorization(phi, psi, allowed)?.is_some())
}
