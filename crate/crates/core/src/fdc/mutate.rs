//! Single-point corruptions of certificates, for negative testing.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::cert::{Certificate, Clause, Color, Verification};
use crate::metric::MetricSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    /// The point leaves its sub-part for another of the same color.
    Move,
    /// The point is deleted from its only sub-part.
    Drop,
    /// The point is copied into another sub-part of the same color.
    Duplicate,
}

#[derive(Clone, Debug, Serialize)]
pub struct Mutation {
    pub node: String,
    pub part: usize,
    pub color: Color,
    pub kind: MutationKind,
    pub point: String,
}

impl Mutation {
    /// Whether the verifier blames this node with a clause naming the point.
    pub fn detected_by(&self, v: &Verification) -> bool {
        v.failures.iter().any(|f| {
            f.node == self.node
                && match (&f.clause, self.kind) {
                    (Clause::CoverMismatch { part, missing, .. }, MutationKind::Drop) => *part == self.part && missing.contains(&self.point),
                    (Clause::NotDisjoint { part, color, points, .. }, MutationKind::Move | MutationKind::Duplicate) => {
                        *part == self.part && *color == self.color && (points.0 == self.point || points.1 == self.point)
                    }
                    _ => false,
                }
        })
    }
}

/// Applies one random detectable mutation at a random split node.
pub fn mutate_certificate(space: &MetricSpace, cert: &Certificate, rng: &mut impl Rng) -> Option<(Certificate, Mutation)> {
    let mut splits = Vec::new();
    cert.visit(&mut |path, node| {
        if matches!(node, Certificate::Split(_)) {
            splits.push(path.to_string());
        }
    });
    for _ in 0..200 {
        let path = splits.choose(rng)?;
        let mut out = cert.clone();
        let Some(Certificate::Split(s)) = out.node_mut(path) else { continue };
        let r = s.r;
        let part = rng.gen_range(0..s.parts.len().max(1));
        let Some(split) = s.parts.get_mut(part) else { continue };
        let color = *Color::both().choose(rng)?;
        let kind = *[MutationKind::Move, MutationKind::Drop, MutationKind::Duplicate].choose(rng)?;
        let subs = split.color(color);
        let donors: Vec<usize> = (0..subs.len()).filter(|&i| !subs[i].is_empty()).collect();
        let Some(&from) = donors.choose(rng) else { continue };
        let p = *subs[from].members().choose(rng)?;
        let others: Vec<usize> = (0..subs.len()).filter(|&i| i != from).collect();
        match kind {
            MutationKind::Drop => {
                let elsewhere = split.u.iter().chain(&split.v).filter(|sub| sub.contains(p)).count();
                if elsewhere != 1 {
                    continue;
                }
                let subs = split.color_mut(color);
                subs[from] = subs[from].without(p);
            }
            MutationKind::Move => {
                let near = subs[from].members().iter().any(|&q| q != p && space.dist(p, q).le(r));
                let Some(&to) = others.choose(rng) else { continue };
                if !near || subs[to].contains(p) {
                    continue;
                }
                let subs = split.color_mut(color);
                subs[from] = subs[from].without(p);
                subs[to] = subs[to].with(p);
            }
            MutationKind::Duplicate => {
                let Some(&to) = others.choose(rng) else { continue };
                let subs = split.color_mut(color);
                subs[to] = subs[to].with(p);
            }
        }
        let mutation = Mutation { node: path.clone(), part, color, kind, point: space.id_of(p).to_string() };
        return Some((out, mutation));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdc::{decompose_lattice, verify_certificate};
    use crate::rng::stream_rng;

    #[test]
    fn mutations_are_detected() {
        let (x, cert) = decompose_lattice(2, 10, &[3.0, 3.0]).unwrap();
        for i in 0..30 {
            let (bad, m) = mutate_certificate(&x, &cert, &mut stream_rng(5, i)).unwrap();
            let v = verify_certificate(&x, &[x.full()], &bad).unwrap();
            assert!(!v.accepted);
            assert!(m.detected_by(&v), "{m:?} {:?}", v.failures);
        }
    }
}
