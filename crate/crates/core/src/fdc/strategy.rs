//! Strategies that produce decomposition certificates.

use std::collections::BTreeMap;

use super::cert::{Certificate, PartSplit, SplitNode};
use crate::error::{Error, Result};
use crate::metric::{MetricSpace, Subspace};

fn check_schedule(schedule: &[f64], needed: usize) -> Result<()> {
    if schedule.len() < needed {
        return Err(Error::InvalidScales(format!("need {needed} radii, got {}", schedule.len())));
    }
    if let Some(r) = schedule.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
        return Err(Error::InvalidRadius(*r));
    }
    Ok(())
}

/// Slab width used at radius `r`: the least integer strictly above `r`.
pub fn slab_width(r: f64) -> i64 {
    r.floor() as i64 + 1
}

/// Slab decomposition of a lattice space, one coordinate per level.
///
/// At depth `k` every part is cut into slabs `⌊(x_k − min_k) / w_k⌋` of width
/// `w_k = ⌊r_k⌋ + 1`; even slabs go to `U`, odd ones to `V`, so same-colored slabs
/// are more than `r_k` apart. Leaves have diameter at most `Σ (w_k − 1)`.
pub fn decompose_slabs(space: &MetricSpace, family: &[Subspace], schedule: &[f64]) -> Result<Certificate> {
    let dim = space.lattice_dim().ok_or_else(|| Error::Invalid("slab decomposition needs lattice coordinates".into()))?;
    check_schedule(schedule, dim)?;
    let widths: Vec<i64> = schedule[..dim].iter().map(|&r| slab_width(r)).collect();
    let mins: Vec<i64> = (0..dim)
        .map(|k| (0..space.len()).map(|p| space.lattice_coords(p).unwrap()[k]).min().unwrap_or(0))
        .collect();
    Ok(slab_level(space, family, schedule, &widths, &mins, 0))
}

fn slab_level(space: &MetricSpace, family: &[Subspace], schedule: &[f64], widths: &[i64], mins: &[i64], k: usize) -> Certificate {
    if k == widths.len() {
        return Certificate::Leaf { bound: widths.iter().map(|w| (w - 1) as f64).sum() };
    }
    let parts: Vec<PartSplit> = family
        .iter()
        .map(|z| {
            let mut slabs: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
            for &p in z.members() {
                let c = space.lattice_coords(p).expect("lattice space")[k];
                slabs.entry((c - mins[k]).div_euclid(widths[k])).or_default().push(p);
            }
            let mut split = PartSplit { u: Vec::new(), v: Vec::new() };
            for (index, members) in slabs {
                let sub = space.subspace(members).expect("members of the space");
                if index % 2 == 0 {
                    split.u.push(sub);
                } else {
                    split.v.push(sub);
                }
            }
            split
        })
        .collect();
    let mut node = SplitNode {
        r: schedule[k],
        parts,
        u_child: Certificate::Leaf { bound: 0.0 },
        v_child: Certificate::Leaf { bound: 0.0 },
    };
    let (u, v) = rayon::join(
        || slab_level(space, &node.child_family(super::Color::U), schedule, widths, mins, k + 1),
        || slab_level(space, &node.child_family(super::Color::V), schedule, widths, mins, k + 1),
    );
    node.u_child = u;
    node.v_child = v;
    Certificate::Split(Box::new(node))
}

/// The ℓ¹ ball of radius `radius` in `Z^n` with its depth-`n` slab certificate.
pub fn decompose_lattice(n: usize, radius: u64, schedule: &[f64]) -> Result<(MetricSpace, Certificate)> {
    check_schedule(schedule, n)?;
    let space = MetricSpace::l1_ball(n, radius)?;
    let cert = if n == 0 { Certificate::Leaf { bound: 0.0 } } else { decompose_slabs(&space, &[space.full()], schedule)? };
    Ok((space, cert))
}

/// Connected components of the graph `d ≤ r` on `members`.
pub fn r_components(space: &MetricSpace, members: &Subspace, r: f64) -> Vec<Subspace> {
    let mut seen = vec![false; space.len()];
    let mut out = Vec::new();
    for &start in members.members() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut component = vec![start];
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            for q in space.neighbors_within(p, r, false) {
                if !seen[q] && members.contains(q) {
                    seen[q] = true;
                    component.push(q);
                    stack.push(q);
                }
            }
        }
        out.push(space.subspace(component).expect("members of the space"));
    }
    out
}

/// Annulus decomposition for arbitrary spaces.
///
/// Each part is cut into annuli of width `r` around its first point; even annuli
/// form `U`, odd annuli `V`, and sub-parts are the r-components of each color.
/// Points at infinite distance from the center join `U`. Leaves record the
/// largest remaining diameter.
pub fn decompose_annuli(space: &MetricSpace, family: &[Subspace], schedule: &[f64]) -> Result<Certificate> {
    check_schedule(schedule, schedule.len())?;
    Ok(annulus_level(space, family, schedule))
}

fn annulus_level(space: &MetricSpace, family: &[Subspace], schedule: &[f64]) -> Certificate {
    let Some((&r, rest)) = schedule.split_first() else {
        let bound = family.iter().map(|z| space.diameter(z).0.value()).fold(0.0, f64::max);
        return Certificate::Leaf { bound };
    };
    let parts: Vec<PartSplit> = family
        .iter()
        .map(|z| {
            let Some(&center) = z.members().first() else { return PartSplit { u: vec![], v: vec![] } };
            let (even, odd): (Vec<usize>, Vec<usize>) = z.members().iter().partition(|&&p| {
                let d = space.dist(center, p).value();
                !d.is_finite() || ((d / r).floor() as u64).is_multiple_of(2)
            });
            PartSplit {
                u: r_components(space, &space.subspace(even).expect("members"), r),
                v: r_components(space, &space.subspace(odd).expect("members"), r),
            }
        })
        .collect();
    let mut node = SplitNode { r, parts, u_child: Certificate::Leaf { bound: 0.0 }, v_child: Certificate::Leaf { bound: 0.0 } };
    node.u_child = annulus_level(space, &node.child_family(super::Color::U), rest);
    node.v_child = annulus_level(space, &node.child_family(super::Color::V), rest);
    Certificate::Split(Box::new(node))
}

/// Slabs for lattice spaces, annuli otherwise.
pub fn decompose(space: &MetricSpace, family: &[Subspace], schedule: &[f64]) -> Result<Certificate> {
    match space.lattice_dim() {
        Some(dim) if schedule.len() >= dim && dim > 0 => decompose_slabs(space, family, schedule),
        _ => decompose_annuli(space, family, schedule),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdc::verify_certificate;

    #[test]
    fn one_dimensional_slabs() {
        let (x, cert) = decompose_lattice(1, 20, &[5.0]).unwrap();
        assert_eq!(x.len(), 41);
        assert_eq!(cert.depth(), 1);
        let Certificate::Split(s) = &cert else { panic!() };
        assert!(s.parts[0].u.iter().chain(&s.parts[0].v).all(|sub| sub.len() <= 6));
        assert!(verify_certificate(&x, &[x.full()], &cert).unwrap().accepted);
    }

    #[test]
    fn zero_dimensional_is_a_point() {
        let (x, cert) = decompose_lattice(0, 20, &[]).unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(cert, Certificate::Leaf { bound: 0.0 });
        assert!(verify_certificate(&x, &[x.full()], &cert).unwrap().accepted);
    }

    #[test]
    fn two_dimensional_slabs() {
        let (x, cert) = decompose_lattice(2, 20, &[5.0, 5.0]).unwrap();
        assert_eq!((cert.depth(), cert.min_depth()), (2, 2));
        let v = verify_certificate(&x, &[x.full()], &cert).unwrap();
        assert!(v.accepted, "{:?}", v.failures.first());
    }

    #[test]
    fn short_schedule_is_rejected() {
        assert!(decompose_lattice(2, 5, &[3.0]).is_err());
    }

    #[test]
    fn annuli_on_a_matrix_space() {
        let pts: Vec<Vec<f64>> = (0..40).map(|i| vec![(i % 8) as f64 * 1.3, (i / 8) as f64 * 0.9]).collect();
        let x = MetricSpace::euclidean("grid", &pts).unwrap();
        let cert = decompose_annuli(&x, &[x.full()], &[2.0, 1.0]).unwrap();
        assert_eq!(cert.depth(), 2);
        assert!(verify_certificate(&x, &[x.full()], &cert).unwrap().accepted);
    }
}
