//! Indexed families of subspaces and r-disjointness.

use serde::Serialize;

use super::distance::ExtDistance;
use super::space::{MetricSpace, Subspace};
use crate::error::{Error, Result};

/// A finite indexed list of subspaces of one parent space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricFamily {
    space: u64,
    parts: Vec<Subspace>,
}

impl MetricFamily {
    pub fn new(space: &MetricSpace, parts: Vec<Subspace>) -> Result<Self> {
        for p in &parts {
            space.check_owner(p)?;
        }
        Ok(MetricFamily { space: space.space_id(), parts })
    }

    pub fn parts(&self) -> &[Subspace] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn space_id(&self) -> u64 {
        self.space
    }

    /// Union of all parts.
    pub fn union(&self) -> Subspace {
        Subspace::new(self.space, self.parts.iter().flat_map(|p| p.members().iter().copied()))
    }

    pub fn into_parts(self) -> Vec<Subspace> {
        self.parts
    }
}

/// A pair of parts closer than the required separation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DisjointnessWitness {
    pub parts: (usize, usize),
    pub points: (usize, usize),
    pub distance: ExtDistance,
}

/// Checks that distinct parts are at set-distance strictly greater than `r`.
///
/// Returns `None` when the family is r-disjoint, otherwise a witnessing pair of
/// points. A point shared by two parts is reported with distance zero.
pub fn r_disjoint_witness(space: &MetricSpace, parts: &[Subspace], r: f64) -> Result<Option<DisjointnessWitness>> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::InvalidRadius(r));
    }
    let mut owner: Vec<u32> = vec![u32::MAX; space.len()];
    for (k, part) in parts.iter().enumerate() {
        space.check_owner(part)?;
        for &p in part.members() {
            if owner[p] != u32::MAX {
                let j = owner[p] as usize;
                return Ok(Some(DisjointnessWitness { parts: (j, k), points: (p, p), distance: ExtDistance::ZERO }));
            }
            owner[p] = k as u32;
        }
    }
    let mut best: Option<DisjointnessWitness> = None;
    for (k, part) in parts.iter().enumerate() {
        for &p in part.members() {
            for q in space.neighbors_within(p, r, false) {
                let o = owner[q];
                if o != u32::MAX && o as usize != k {
                    let d = space.dist(p, q);
                    let candidate = DisjointnessWitness {
                        parts: (k.min(o as usize), k.max(o as usize)),
                        points: if k < o as usize { (p, q) } else { (q, p) },
                        distance: d,
                    };
                    // prefer the lexicographically first violating pair for stable witnesses
                    let replace = match &best {
                        None => true,
                        Some(b) => (candidate.parts, candidate.points) < (b.parts, b.points),
                    };
                    if replace {
                        best = Some(candidate);
                    }
                }
            }
        }
    }
    Ok(best)
}

/// `true` iff every pair of distinct parts is at distance strictly greater than `r`.
pub fn is_r_disjoint(space: &MetricSpace, family: &MetricFamily, r: f64) -> Result<(bool, Option<DisjointnessWitness>)> {
    if family.space_id() != space.space_id() {
        return Err(Error::MismatchedParents);
    }
    let w = r_disjoint_witness(space, family.parts(), r)?;
    Ok((w.is_none(), w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocks() -> (MetricSpace, MetricFamily) {
        let x = MetricSpace::integer_interval(0, 14).unwrap();
        let a = x.subspace_of_ids(["0", "1", "2", "3", "4"]).unwrap();
        let b = x.subspace_of_ids(["10", "11", "12", "13", "14"]).unwrap();
        let f = MetricFamily::new(&x, vec![a, b]).unwrap();
        (x, f)
    }

    #[test]
    fn strictness_at_the_boundary() {
        let (x, f) = blocks();
        // min pairwise distance is 6
        assert!(is_r_disjoint(&x, &f, 5.0).unwrap().0);
        let (ok, w) = is_r_disjoint(&x, &f, 6.0).unwrap();
        assert!(!ok);
        let w = w.unwrap();
        assert_eq!(w.distance.value(), 6.0);
        assert_eq!((x.id_of(w.points.0), x.id_of(w.points.1)), ("4", "10"));
    }

    #[test]
    fn single_part_is_vacuous() {
        let (x, _) = blocks();
        let f = MetricFamily::new(&x, vec![x.full()]).unwrap();
        assert!(is_r_disjoint(&x, &f, 1e6).unwrap().0);
    }

    #[test]
    fn overlap_reports_zero() {
        let (x, _) = blocks();
        let a = x.subspace_of_ids(["0", "1"]).unwrap();
        let b = x.subspace_of_ids(["1", "9"]).unwrap();
        let f = MetricFamily::new(&x, vec![a, b]).unwrap();
        let (ok, w) = is_r_disjoint(&x, &f, 0.0).unwrap();
        assert!(!ok);
        assert_eq!(w.unwrap().distance, ExtDistance::ZERO);
    }

    #[test]
    fn agrees_with_min_set_distance() {
        let x = MetricSpace::l1_ball(2, 5).unwrap();
        let a = x.subspace((0..x.len()).filter(|p| x.lattice_coords(*p).unwrap()[0] <= -2)).unwrap();
        let b = x.subspace((0..x.len()).filter(|p| x.lattice_coords(*p).unwrap()[0] >= 2)).unwrap();
        let d = x.min_set_distance(&a, &b).unwrap().value();
        let f = MetricFamily::new(&x, vec![a, b]).unwrap();
        assert!(is_r_disjoint(&x, &f, d - 0.5).unwrap().0);
        assert!(!is_r_disjoint(&x, &f, d).unwrap().0);
    }
}
