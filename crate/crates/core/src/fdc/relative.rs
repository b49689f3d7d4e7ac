//! Randomized checks of the relative Rips distance estimates.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{ExtDistance, MetricFamily, MetricSpace, Subspace};
use crate::rips::{
    build_relative_rips, build_rips, random_coface, random_point_in, rips_constant, BarycentricPoint, Complex,
    RelativeRipsComplex, DEFAULT_DIM_CAP, GEOMETRIC_TOLERANCE,
};
use crate::rng::stream_rng;

fn distance_to_union(space: &MetricSpace, x: usize, sets: &[Subspace]) -> ExtDistance {
    sets.iter().flat_map(|w| w.members().iter().map(move |&y| space.dist(x, y))).min().unwrap_or(ExtDistance::INFINITY)
}

/// `C(s, X)` of the full space.
pub fn space_constant(space: &Arc<MetricSpace>, s: f64, dim_cap: usize) -> Result<f64> {
    rips_constant(&build_rips(space.clone(), s, dim_cap)?)
}

#[derive(Clone, Debug)]
pub struct RelNbhdOptions {
    pub samples: usize,
    pub seed: u64,
    pub max_steps: usize,
    /// Multiplies `C(s, X)`; values below one make a corrupted constant.
    pub constant_factor: f64,
    pub dim_cap: usize,
}

impl Default for RelNbhdOptions {
    fn default() -> Self {
        RelNbhdOptions { samples: 200, seed: 0, max_steps: 8, constant_factor: 1.0, dim_cap: DEFAULT_DIM_CAP }
    }
}

/// A vertex joined to `P_{s'}(W)` by a walk shorter than `t`.
#[derive(Clone, Debug, Serialize)]
pub struct NbhdWitness {
    pub sample: usize,
    pub x: String,
    pub path_length: f64,
    /// Vertices of the carrier reached inside `W`.
    pub reached: Vec<String>,
    pub member: usize,
    pub distance: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelNbhdReport {
    pub constant: f64,
    /// `(t + 1)·C(s, X)·s`.
    pub bound: f64,
    pub samples: usize,
    pub witnesses: usize,
    pub max_distance: f64,
    pub failures: Vec<NbhdWitness>,
}

impl RelNbhdReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn nbhd_sample(k: &RelativeRipsComplex, vertices: &[usize], t: f64, bound: f64, opts: &RelNbhdOptions, index: usize) -> Option<NbhdWitness> {
    let mut rng = stream_rng(opts.seed, index as u64);
    let x = *vertices.choose(&mut rng)?;
    let space = k.base();
    let mut point = BarycentricPoint::vertex(x);
    let mut length = 0.0;
    for step in 0..=opts.max_steps {
        if step > 0 {
            let sigma = random_coface(k, point.carrier(), &mut rng);
            let next = random_point_in(&sigma, &mut rng);
            length += point.distance(&next);
            point = next;
        }
        if length >= t {
            return None;
        }
        if let Some(member) = k.containing_member(point.carrier()) {
            let distance = distance_to_union(space, x, k.family()).value();
            return Some(NbhdWitness {
                sample: index,
                x: space.id_of(x).to_string(),
                path_length: length,
                reached: point.carrier().iter().map(|&v| space.id_of(v).to_string()).collect(),
                member,
                distance,
                bound,
            });
        }
    }
    None
}

/// Checks `d(x, ∪W) ≤ (t + 1)·C(s, X)·s` for vertices certified to lie within `t` of `P_{s'}(W)`.
///
/// Certificates are random simplex walks in `P_{s,s'}(Z, W)` of length below `t`
/// that end in a simplex spanned by one member of `W`.
#[allow(clippy::too_many_arguments)]
pub fn check_rel_nbhd(
    x: Arc<MetricSpace>,
    z: &Subspace,
    family: &MetricFamily,
    s: f64,
    s_prime: f64,
    t: f64,
    opts: &RelNbhdOptions,
) -> Result<RelNbhdReport> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidRadius(t));
    }
    let constant = space_constant(&x, s, opts.dim_cap)? * opts.constant_factor;
    let k = build_relative_rips(x, z, family, s, s_prime, opts.dim_cap)?;
    let bound = (t + 1.0) * constant * s;
    let vertices: Vec<usize> = (0..k.base().len()).filter(|&v| k.is_vertex(v)).collect();
    let witnesses: Vec<NbhdWitness> =
        (0..opts.samples).into_par_iter().filter_map(|i| nbhd_sample(&k, &vertices, t, bound, opts, i)).collect();
    let max_distance = witnesses.iter().map(|w| w.distance).fold(0.0, f64::max);
    let count = witnesses.len();
    Ok(RelNbhdReport {
        constant,
        bound,
        samples: opts.samples,
        witnesses: count,
        max_distance,
        failures: witnesses.into_iter().filter(|w| w.distance > w.bound + GEOMETRIC_TOLERANCE).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparationStatus {
    Pass,
    Fail,
    /// The distance hypothesis does not hold, so there is nothing to check.
    SkippedHypothesis,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoundPath {
    pub length: f64,
    pub from: Vec<String>,
    pub to: Vec<String>,
    pub via_skeleton: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelSeparationReport {
    pub status: SeparationStatus,
    /// `d(V_1, V_2)`.
    pub distance: f64,
    /// `(L + 2)·s·C(s, X)`.
    pub threshold: f64,
    pub hypothesis: bool,
    pub paths_searched: usize,
    pub found: Option<FoundPath>,
}

struct Side<'a> {
    x: &'a Subspace,
    w: &'a [Subspace],
}

impl Side<'_> {
    /// Carrier spans a simplex of `P_{s,s'}(X_i, W_i)`.
    fn holds(&self, space: &MetricSpace, carrier: &[usize], s: f64, s_prime: f64) -> bool {
        let within = |r: f64| carrier.iter().enumerate().all(|(i, &a)| carrier[i + 1..].iter().all(|&b| space.dist(a, b).le(r)));
        (carrier.iter().all(|&v| self.x.contains(v)) && within(s))
            || self.w.iter().any(|w| carrier.iter().all(|&v| w.contains(v)) && within(s_prime))
    }

    fn vertices(&self, space: &MetricSpace) -> Subspace {
        let mut v = self.x.clone();
        for w in self.w {
            v = v.union(w);
        }
        debug_assert_eq!(v.space_id(), space.space_id());
        v
    }
}

/// Searches for short paths from `P_1` to `P_2` in `P_{s,s'}(X, W_1 ∪ W_2)`.
///
/// When `d(V_1, V_2) > (L + 2)·s·C(s, X)` no path of length at most `L` may
/// exist; finding one fails the check. Below the threshold the check is skipped.
#[allow(clippy::too_many_arguments)]
pub fn check_rel_separation(
    x: Arc<MetricSpace>,
    x1: &Subspace,
    x2: &Subspace,
    w1: &[Subspace],
    w2: &[Subspace],
    s: f64,
    s_prime: f64,
    l: f64,
    probe_budget: usize,
    seed: u64,
) -> Result<RelSeparationReport> {
    let constant = space_constant(&x, s, DEFAULT_DIM_CAP)?;
    let (p1, p2) = (Side { x: x1, w: w1 }, Side { x: x2, w: w2 });
    let (v1, v2) = (p1.vertices(&x), p2.vertices(&x));
    let threshold = (l + 2.0) * s * constant;
    if !v1.intersection(&v2).is_empty() {
        return Ok(RelSeparationReport {
            status: SeparationStatus::SkippedHypothesis,
            distance: 0.0,
            threshold,
            hypothesis: false,
            paths_searched: 0,
            found: None,
        });
    }
    let distance = x.min_set_distance(&v1, &v2)?.value();
    let hypothesis = distance > threshold;
    let all: Vec<Subspace> = w1.iter().chain(w2).cloned().collect();
    let family = MetricFamily::new(&x, all)?;
    let k = build_relative_rips(x.clone(), &x.full(), &family, s, s_prime, DEFAULT_DIM_CAP)?;
    let ids = |c: &[usize]| -> Vec<String> { c.iter().map(|&v| x.id_of(v).to_string()).collect() };

    // shortest edge path between the vertex sets
    let mut found = None;
    let mut dist = vec![usize::MAX; x.len()];
    let mut origin = vec![usize::MAX; x.len()];
    let mut queue = VecDeque::new();
    for &v in v1.members().iter().filter(|&&v| p1.holds(&x, &[v], s, s_prime)) {
        dist[v] = 0;
        origin[v] = v;
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        if (dist[v] as f64) > l {
            break;
        }
        if p2.holds(&x, &[v], s, s_prime) {
            found = Some(FoundPath { length: dist[v] as f64, from: ids(&[origin[v]]), to: ids(&[v]), via_skeleton: true });
            break;
        }
        for &u in k.neighbors(v) {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                origin[u] = origin[v];
                queue.push_back(u);
            }
        }
    }

    // random PL walks starting inside P_1
    let starts: Vec<usize> = v1.members().iter().copied().filter(|&v| p1.holds(&x, &[v], s, s_prime)).collect();
    if found.is_none() && !starts.is_empty() {
        found = (0..probe_budget).into_par_iter().find_map_first(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let start = *starts.choose(&mut rng)?;
            let sigma = random_coface(&k, &[start], &mut rng);
            let first: Vec<usize> = sigma.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            let from = if !first.is_empty() && p1.holds(&x, &first, s, s_prime) { first } else { vec![start] };
            let mut point = random_point_in(&from, &mut rng);
            let origin = point.carrier().to_vec();
            let mut length = 0.0;
            for _ in 0..16 {
                let sigma = random_coface(&k, point.carrier(), &mut rng);
                let next = random_point_in(&sigma, &mut rng);
                length += point.distance(&next);
                point = next;
                if length > l {
                    return None;
                }
                if p2.holds(&x, point.carrier(), s, s_prime) {
                    return Some(FoundPath { length, from: ids(&origin), to: ids(point.carrier()), via_skeleton: false });
                }
            }
            None
        });
    }
    let status = match (hypothesis, found.is_some()) {
        (true, false) => SeparationStatus::Pass,
        (true, true) => SeparationStatus::Fail,
        (false, _) => SeparationStatus::SkippedHypothesis,
    };
    Ok(RelSeparationReport { status, distance, threshold, hypothesis, paths_searched: probe_budget + 1, found })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval(lo: i64, hi: i64) -> Arc<MetricSpace> {
        Arc::new(MetricSpace::integer_interval(lo, hi).unwrap())
    }

    #[test]
    fn points_of_w_are_trivial_witnesses() {
        let x = interval(0, 12);
        let w = x.subspace(8..13).unwrap();
        let fam = MetricFamily::new(&x, vec![w]).unwrap();
        let opts = RelNbhdOptions { samples: 300, seed: 4, ..RelNbhdOptions::default() };
        let report = check_rel_nbhd(x.clone(), &x.full(), &fam, 1.0, 2.0, 3.0, &opts).unwrap();
        assert!(report.passed());
        assert!(report.witnesses > 0);
        assert!(report.max_distance <= report.bound);
    }

    #[test]
    fn corrupted_constant_is_caught() {
        let x = interval(0, 12);
        let w = x.subspace(8..13).unwrap();
        let fam = MetricFamily::new(&x, vec![w]).unwrap();
        let opts = RelNbhdOptions { samples: 400, seed: 4, constant_factor: 0.01, ..RelNbhdOptions::default() };
        let report = check_rel_nbhd(x.clone(), &x.full(), &fam, 1.0, 2.0, 3.0, &opts).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn far_intervals_are_separated() {
        let x = interval(0, 40);
        let x1 = x.subspace(0..5).unwrap();
        let x2 = x.subspace(35..41).unwrap();
        let w1 = vec![x.subspace(3..6).unwrap()];
        let w2 = vec![x.subspace(34..36).unwrap()];
        let report = check_rel_separation(x, &x1, &x2, &w1, &w2, 1.0, 2.0, 5.0, 200, 1).unwrap();
        assert_eq!(report.status, SeparationStatus::Pass);
        assert!(report.found.is_none());
    }

    #[test]
    fn touching_pieces_are_inapplicable() {
        let x = interval(0, 10);
        let x1 = x.subspace(0..5).unwrap();
        let x2 = x.subspace(5..11).unwrap();
        let report = check_rel_separation(x.clone(), &x1, &x2, &[], &[], 1.0, 1.0, 3.0, 50, 1).unwrap();
        assert_eq!(report.status, SeparationStatus::SkippedHypothesis);
        assert!(report.found.is_some());
        let same = check_rel_separation(x.clone(), &x1, &x1, &[], &[], 1.0, 1.0, 3.0, 50, 1).unwrap();
        assert_eq!(same.status, SeparationStatus::SkippedHypothesis);
        assert_eq!(same.paths_searched, 0);
    }
}
