//! Transporting a certificate to a family of subsets of neighborhoods.
//!
//! If every target `Y_β` lies in `N_t(Z_α)` for its assigned part, intersecting
//! each sub-part's `t`-neighborhood with `Y_β` gives an `(r − 2t)`-disjoint
//! decomposition of the targets; leaf diameters grow by at most `2t`.

use super::cert::{Certificate, Color, PartSplit, SplitNode};
use crate::error::{Error, Result};
use crate::metric::{MetricSpace, Subspace};

fn check_t(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidRadius(t));
    }
    Ok(())
}

/// For each target, the first part whose open `t`-neighborhood contains it.
pub fn assign_targets(space: &MetricSpace, family: &[Subspace], targets: &[Subspace], t: f64) -> Result<Vec<usize>> {
    check_t(t)?;
    let hoods: Vec<Subspace> = family.iter().map(|z| space.neighborhood(z, t)).collect::<Result<_>>()?;
    targets
        .iter()
        .enumerate()
        .map(|(b, y)| {
            hoods.iter().position(|h| y.is_subset(h)).ok_or(Error::TargetNotContained { target: b, part: 0, t })
        })
        .collect()
}

/// Rewrites `cert` (for `family`) into a certificate for `targets`.
///
/// `assignment[β]` is the part `α` with `Y_β ⊆ N_t(Z_α)`. Every split radius must
/// exceed `2t`.
pub fn weaken_to_subneighborhoods(
    space: &MetricSpace,
    family: &[Subspace],
    cert: &Certificate,
    t: f64,
    targets: &[Subspace],
    assignment: &[usize],
) -> Result<Certificate> {
    check_t(t)?;
    if assignment.len() != targets.len() {
        return Err(Error::ShapeMismatch(format!("{} targets but {} assignments", targets.len(), assignment.len())));
    }
    for (b, (y, &a)) in targets.iter().zip(assignment).enumerate() {
        space.check_owner(y)?;
        let z = family.get(a).ok_or(Error::IndexOutOfRange { index: a, size: family.len() })?;
        if !y.is_subset(&space.neighborhood(z, t)?) {
            return Err(Error::TargetNotContained { target: b, part: a, t });
        }
    }
    weaken_node(space, family, cert, t, targets, assignment, "root")
}

fn weaken_node(
    space: &MetricSpace,
    family: &[Subspace],
    cert: &Certificate,
    t: f64,
    targets: &[Subspace],
    assignment: &[usize],
    path: &str,
) -> Result<Certificate> {
    let s = match cert {
        Certificate::Leaf { bound } => return Ok(Certificate::Leaf { bound: bound + 2.0 * t }),
        Certificate::Split(s) => s,
    };
    if s.r <= 2.0 * t {
        return Err(Error::DisjointnessExhausted { node: path.to_string(), r: s.r, two_t: 2.0 * t });
    }
    if s.parts.len() != family.len() {
        return Err(Error::ShapeMismatch(format!("{path}: {} part splits for {} parts", s.parts.len(), family.len())));
    }
    // sub-part offsets in the original child families
    let offsets = |color: Color| -> Vec<usize> {
        s.parts
            .iter()
            .scan(0, |acc, p| {
                let start = *acc;
                *acc += p.color(color).len();
                Some(start)
            })
            .collect()
    };
    let (u_offsets, v_offsets) = (offsets(Color::U), offsets(Color::V));
    let mut parts = Vec::with_capacity(targets.len());
    let mut child_targets: [Vec<Subspace>; 2] = [Vec::new(), Vec::new()];
    let mut child_assignment: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (y, &a) in targets.iter().zip(assignment) {
        let mut split = PartSplit { u: Vec::new(), v: Vec::new() };
        for (c, color) in Color::both().into_iter().enumerate() {
            let base = if color == Color::U { u_offsets[a] } else { v_offsets[a] };
            for (i, sub) in s.parts[a].color(color).iter().enumerate() {
                let piece = space.neighborhood(sub, t)?.intersection(y);
                if !piece.is_empty() {
                    split.color_mut(color).push(piece.clone());
                    child_targets[c].push(piece);
                    child_assignment[c].push(base + i);
                }
            }
        }
        parts.push(split);
    }
    let [u_targets, v_targets] = child_targets;
    let [u_assign, v_assign] = child_assignment;
    let u_child = weaken_node(space, &s.child_family(Color::U), &s.u_child, t, &u_targets, &u_assign, &format!("{path}.U"))?;
    let v_child = weaken_node(space, &s.child_family(Color::V), &s.v_child, t, &v_targets, &v_assign, &format!("{path}.V"))?;
    Ok(Certificate::Split(Box::new(SplitNode { r: s.r - 2.0 * t, parts, u_child, v_child })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdc::{decompose_lattice, verify_certificate};

    #[test]
    fn interval_weakening_drops_r_by_two_t() {
        let (x, cert) = decompose_lattice(1, 20, &[6.0]).unwrap();
        let targets: Vec<Subspace> = vec![
            x.subspace((0..x.len()).filter(|&p| x.lattice_coords(p).unwrap()[0] % 3 == 0)).unwrap(),
            x.subspace((0..x.len()).filter(|&p| x.lattice_coords(p).unwrap()[0] > 10)).unwrap(),
        ];
        let weak = weaken_to_subneighborhoods(&x, &[x.full()], &cert, 1.0, &targets, &[0, 0]).unwrap();
        assert_eq!(weak.split_radii(), vec![4.0]);
        assert!(verify_certificate(&x, &targets, &weak).unwrap().accepted);
        let Certificate::Leaf { bound } = (match &weak {
            Certificate::Split(s) => s.u_child.clone(),
            _ => unreachable!(),
        }) else {
            unreachable!()
        };
        assert_eq!(bound, 8.0);
    }

    #[test]
    fn exhausted_disjointness_names_the_node() {
        let (x, cert) = decompose_lattice(2, 6, &[4.0, 2.0]).unwrap();
        let err = weaken_to_subneighborhoods(&x, &[x.full()], &cert, 1.0, &[x.full()], &[0]).unwrap_err();
        assert!(matches!(err, Error::DisjointnessExhausted { ref node, .. } if node == "root.U"), "{err}");
    }

    #[test]
    fn tiny_t_keeps_the_structure() {
        let (x, cert) = decompose_lattice(2, 8, &[3.0, 3.0]).unwrap();
        let weak = weaken_to_subneighborhoods(&x, &[x.full()], &cert, 1e-9, &[x.full()], &[0]).unwrap();
        assert_eq!(weak.node_count(), cert.node_count());
        let (a, b) = (cert.split_radii(), weak.split_radii());
        assert!(a.iter().zip(&b).all(|(p, q)| (p - q).abs() < 1e-8));
        let (Certificate::Split(s), Certificate::Split(w)) = (&cert, &weak) else { unreachable!() };
        assert_eq!(s.parts, w.parts);
    }

    #[test]
    fn uncontained_target_is_rejected() {
        let x = MetricSpace::integer_interval(0, 20).unwrap();
        let z = x.subspace_of_ids(["0", "1", "2"]).unwrap();
        let y = x.subspace_of_ids(["4"]).unwrap();
        let cert = Certificate::Leaf { bound: 2.0 };
        assert!(matches!(
            weaken_to_subneighborhoods(&x, std::slice::from_ref(&z), &cert, 1.5, std::slice::from_ref(&y), &[0]),
            Err(Error::TargetNotContained { target: 0, part: 0, .. })
        ));
        assert_eq!(assign_targets(&x, &[z], &[y], 2.5).unwrap(), vec![0]);
    }
}
