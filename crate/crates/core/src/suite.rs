//! Randomized property checks of the whole library, with reproducible seeds.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::algebra::{
    factors_through_support, random_module, random_morphism, split_by_subspace, GeomMorphism, IntMorphism, ModuleSpace,
    RandomMorphismOptions,
};
use crate::error::{Error, Result};
use crate::fdc::{
    check_cover, check_rel_nbhd, check_rel_separation, decompose_lattice, decompose_slabs, mutate_certificate,
    verify_certificate, weaken_to_subneighborhoods, DecomposedSequence, RelNbhdOptions, SeparationStatus, SequenceCover,
};
use crate::metric::{MetricFamily, MetricSpace, Subspace};
use crate::report::{CheckRecord, RunReport, Status};
use crate::rips::{
    build_rips, check_metric_comparison_with, rips_dimension, random_transverse_path, straighten_step, ComparisonOptions, Complex, RipsComplex,
    StepOutcome, DEFAULT_DIM_CAP,
};
use crate::rng::{named_seed, stream_rng};

/// Sizes of a suite run: `quick` uses the base counts, `full` doubles them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Profile {
    pub factor: usize,
}

impl Profile {
    pub const QUICK: Profile = Profile { factor: 1 };
    pub const FULL: Profile = Profile { factor: 2 };

    pub fn parse(name: &str) -> Result<Profile> {
        match name {
            "quick" => Ok(Self::QUICK),
            "full" => Ok(Self::FULL),
            other => Err(Error::Invalid(format!("unknown profile {other:?}"))),
        }
    }
}

/// Uniform random points in a cube sized so that balls stay small.
pub fn random_bounded_space(rng: &mut impl Rng, n: usize, dim: usize) -> MetricSpace {
    let side = (n as f64).powf(1.0 / dim as f64) * 1.5;
    let mut seen = std::collections::HashSet::new();
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n);
    while pts.len() < n {
        let grid: Vec<i64> = (0..dim).map(|_| (rng.gen::<f64>() * side * 64.0).round() as i64).collect();
        if seen.insert(grid.clone()) {
            pts.push(grid.into_iter().map(|c| c as f64 / 64.0).collect());
        }
    }
    MetricSpace::euclidean("random", &pts).expect("distinct finite coordinates")
}

/// The least pairwise distance `s` with `dim P_s ≥ target`, if its dimension is at most `hi`.
pub fn scale_for_dimension(space: &Arc<MetricSpace>, target: usize, hi: usize) -> Option<(f64, RipsComplex)> {
    let mut scales: Vec<f64> = (0..space.len())
        .flat_map(|a| (a + 1..space.len()).map(move |b| (a, b)))
        .map(|(a, b)| space.dist(a, b).value())
        .filter(|d| d.is_finite() && *d > 0.0)
        .collect();
    scales.sort_by(f64::total_cmp);
    scales.dedup();
    let (mut lo, mut up) = (0, scales.len());
    while lo < up {
        let mid = (lo + up) / 2;
        if rips_dimension(space, scales[mid]).ok()? >= target {
            up = mid;
        } else {
            lo = mid + 1;
        }
    }
    let s = *scales.get(lo)?;
    let k = build_rips(space.clone(), s, DEFAULT_DIM_CAP).ok()?;
    (k.dimension() <= hi && !k.is_capped()).then_some((s, k))
}

fn random_subset(space: &MetricSpace, from: &Subspace, p: f64, rng: &mut impl Rng) -> Subspace {
    let mut picked: Vec<usize> = from.members().iter().copied().filter(|_| rng.gen_bool(p)).collect();
    if picked.is_empty() {
        if let Some(&q) = from.members().choose(rng) {
            picked.push(q);
        }
    }
    space.subspace(picked).expect("members of the space")
}

/// A random space with a Rips complex of dimension in `lo..=hi`; retries other draws.
fn random_rips(rng: &mut ChaCha8Rng, max_points: usize, lo: usize, hi: usize) -> (f64, RipsComplex) {
    loop {
        let n = rng.gen_range(max_points / 2..=max_points);
        let dim = rng.gen_range(2..=3);
        let space = Arc::new(random_bounded_space(rng, n, dim));
        let target = rng.gen_range(lo..=hi);
        if let Some(found) = scale_for_dimension(&space, target, hi) {
            return found;
        }
    }
}

fn guard(name: &str, f: impl FnOnce() -> Result<CheckRecord>) -> CheckRecord {
    f().unwrap_or_else(|e| {
        let mut c = CheckRecord::new(name);
        c.require(false, || json!({ "error": e.to_string() }));
        c
    })
}

/// Every projection replacement obeys the `√2` and `2√2 + 1` bounds.
pub fn check_straighten_steps(seed: u64, paths: usize) -> CheckRecord {
    const PER_SPACE: usize = 10;
    let seed = named_seed(seed, "straighten_step");
    let spaces = paths.div_ceil(PER_SPACE);
    let results: Vec<(usize, usize, f64, f64, Option<serde_json::Value>)> = (0..spaces)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream_rng(seed, j as u64);
            let (s, k) = random_rips(&mut rng, 60, 2, 5);
            let (mut count, mut replacements, mut worst_inflation, mut worst_projection) = (0, 0, 0.0f64, 0.0f64);
            let mut witness = None;
            let vertices: Vec<usize> = (0..k.base().len()).filter(|&v| k.is_vertex(v)).collect();
            for p in 0..PER_SPACE.min(paths - j * PER_SPACE) {
                let mut path = random_transverse_path(&k, vertices[0], 1, &mut rng);
                for _ in 0..50 {
                    let start = *vertices.choose(&mut rng).expect("nonempty");
                    path = random_transverse_path(&k, start, rng.gen_range(2..=8), &mut rng);
                    if path.dim() >= 2 {
                        break;
                    }
                }
                count += 1;
                while path.dim() >= 2 {
                    let (next, outcome) = match straighten_step(&path) {
                        Ok(step) => step,
                        Err(e) => {
                            witness.get_or_insert_with(|| json!({ "space": j, "path": p, "scale": s, "error": e.to_string() }));
                            break;
                        }
                    };
                    if let StepOutcome::Replaced(rep) = &outcome {
                        replacements += 1;
                        if rep.original > 0.0 {
                            worst_inflation = worst_inflation.max(rep.replaced / rep.original);
                            worst_projection = worst_projection.max(rep.projections.0.max(rep.projections.1) / rep.original);
                        }
                        if !(rep.projection_bound_holds() && rep.inflation_bound_holds()) {
                            witness.get_or_insert_with(|| json!({ "space": j, "path": p, "scale": s, "replacement": rep }));
                        }
                    }
                    path = next;
                }
            }
            (count, replacements, worst_inflation, worst_projection, witness)
        })
        .collect();
    let mut c = CheckRecord::new("straighten_step")
        .extreme("paths", results.iter().map(|r| r.0).sum::<usize>() as f64)
        .extreme("replacements", results.iter().map(|r| r.1).sum::<usize>() as f64)
        .extreme("max_inflation", results.iter().map(|r| r.2).fold(0.0, f64::max))
        .extreme("max_projection", results.iter().map(|r| r.3).fold(0.0, f64::max));
    for (_, _, _, _, w) in results {
        c.require(w.is_none(), || w.unwrap());
    }
    c
}

/// `d(x, y) ≤ s·C(s, X)·l(γ)` and `d ≤ s·l(straightened γ)` on random paths, plus an inflated control.
pub fn check_comparison(seed: u64, samples: usize) -> CheckRecord {
    const SPACES: usize = 10;
    let seed = named_seed(seed, "metric_comparison");
    let runs: Vec<Result<(f64, usize, serde_json::Value, Option<serde_json::Value>, usize)>> = (0..SPACES)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream_rng(seed, j as u64);
            let (_, k) = random_rips(&mut rng, 40, 2, 5);
            let per = samples.div_ceil(SPACES);
            let opts = ComparisonOptions { samples: per, seed: rng.gen(), ..ComparisonOptions::default() };
            let report = check_metric_comparison_with(&k, &opts)?;
            let control = check_metric_comparison_with(&k, &ComparisonOptions { distance_inflation: 10.0, ..opts })?;
            let witness = report.failures.first().map(|f| json!({ "space": j, "sample": f }));
            Ok((report.max_ratio, report.samples, json!(report.dimension), witness, control.failures.len()))
        })
        .collect();
    let mut c = CheckRecord::new("metric_comparison");
    let (mut max_ratio, mut count, mut control_failures, mut max_dim) = (0.0f64, 0, 0, 0u64);
    for run in runs {
        match run {
            Ok((ratio, n, dim, witness, control)) => {
                max_ratio = max_ratio.max(ratio);
                count += n;
                control_failures += control;
                max_dim = max_dim.max(dim.as_u64().unwrap_or(0));
                c.require(witness.is_none(), || witness.unwrap());
            }
            Err(e) => c.require(false, || json!({ "error": e.to_string() })),
        }
    }
    c.require(control_failures > 0, || json!({ "control": "10x inflated distances produced no failure" }));
    c.extreme("samples", count as f64)
        .extreme("max_ratio", max_ratio)
        .extreme("max_dimension", max_dim as f64)
        .extreme("control_failures", control_failures as f64)
}

/// Slab certificates of the ℓ¹ balls of radius 20 in `Z^1..Z^3`, and their mutations.
pub fn check_lattice_fdc(seed: u64, mutations: usize) -> CheckRecord {
    let seed = named_seed(seed, "lattice_fdc");
    guard("lattice_fdc", || {
        let mut c = CheckRecord::new("lattice_fdc");
        let mut rejected = 0;
        for n in 1..=3 {
            let (x, cert) = decompose_lattice(n, 20, &vec![5.0; n])?;
            c.require(cert.depth() == n && cert.min_depth() == n, || json!({ "n": n, "depth": cert.depth() }));
            let v = verify_certificate(&x, &[x.full()], &cert)?;
            c.require(v.accepted, || json!({ "n": n, "failures": v.failures.first() }));
            let outcomes: Vec<Result<Option<serde_json::Value>>> = (0..mutations)
                .into_par_iter()
                .map(|i| {
                    let mut rng = stream_rng(seed, (n * 1000 + i) as u64);
                    let Some((bad, m)) = mutate_certificate(&x, &cert, &mut rng) else {
                        return Ok(Some(json!({ "n": n, "mutation": i, "error": "no mutation applies" })));
                    };
                    let v = verify_certificate(&x, &[x.full()], &bad)?;
                    Ok((v.accepted || !m.detected_by(&v)).then(|| json!({ "n": n, "mutation": m, "failures": v.failures.first() })))
                })
                .collect();
            for o in outcomes {
                let w = o?;
                rejected += usize::from(w.is_none());
                c.require(w.is_none(), || w.unwrap());
            }
        }
        Ok(c.extreme("mutations_rejected", rejected as f64))
    })
}

/// Weakened certificates verify for `t < min r / 2`, and weakening errors beyond.
pub fn check_weakening(seed: u64, pairs: usize) -> CheckRecord {
    let seed = named_seed(seed, "weakening");
    let outcomes: Vec<Result<Option<serde_json::Value>>> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let n = rng.gen_range(1..=2);
            let radius = if n == 1 { rng.gen_range(10..=24) } else { rng.gen_range(4..=7) };
            let x = MetricSpace::l1_ball(n, radius)?;
            let schedule: Vec<f64> = (0..n).map(|_| rng.gen_range(6..=16) as f64 / 2.0).collect();
            let parts: Vec<Subspace> = (0..rng.gen_range(1..=3)).map(|_| random_subset(&x, &x.full(), 0.6, &mut rng)).collect();
            let cert = decompose_slabs(&x, &parts, &schedule)?;
            let min_r = schedule.iter().copied().fold(f64::INFINITY, f64::min);
            let t = rng.gen_range(0.05..0.95) * min_r / 2.0;
            let mut targets = Vec::new();
            let mut assignment = Vec::new();
            for _ in 0..rng.gen_range(1..=3) {
                let a = rng.gen_range(0..parts.len());
                targets.push(random_subset(&x, &x.neighborhood(&parts[a], t)?, 0.7, &mut rng));
                assignment.push(a);
            }
            let weak = weaken_to_subneighborhoods(&x, &parts, &cert, t, &targets, &assignment)?;
            let v = verify_certificate(&x, &targets, &weak)?;
            if !v.accepted {
                return Ok(Some(json!({ "pair": i, "t": t, "schedule": schedule, "failure": v.failures.first() })));
            }
            let big = min_r / 2.0 + rng.gen_range(0.0..1.0);
            match weaken_to_subneighborhoods(&x, &parts, &cert, big, &targets, &assignment) {
                Err(Error::DisjointnessExhausted { .. }) => Ok(None),
                other => Ok(Some(json!({ "pair": i, "t": big, "schedule": schedule, "unexpected": format!("{:?}", other.map(|c| c.depth())) }))),
            }
        })
        .collect();
    let mut c = CheckRecord::new("weakening").extreme("pairs", pairs as f64);
    for o in outcomes {
        match o {
            Ok(w) => c.require(w.is_none(), || w.unwrap()),
            Err(e) => c.require(false, || json!({ "error": e.to_string() })),
        }
    }
    c
}

fn random_sequence(rng: &mut ChaCha8Rng) -> Result<(DecomposedSequence, Vec<f64>)> {
    let x = Arc::new(match rng.gen_range(0..3) {
        0 => MetricSpace::integer_interval(0, rng.gen_range(10..=30))?,
        1 => MetricSpace::l1_ball(2, rng.gen_range(2..=4))?,
        _ => {
            let n = rng.gen_range(10..=25);
            random_bounded_space(rng, n, 2)
        }
    });
    let levels = rng.gen_range(1..=3);
    let mut schedule: Vec<f64> = (0..levels).map(|_| rng.gen_range(2..=5) as f64 / 2.0).collect();
    schedule.sort_by(f64::total_cmp);
    let parts = (0..levels)
        .map(|_| (0..rng.gen_range(1..=3)).map(|_| random_subset(&x, &x.full(), 0.5, rng)).collect())
        .collect();
    Ok((DecomposedSequence::new(x, parts)?, schedule))
}

/// Genuine covers pass the cover check; removing one point from both colors is caught at that point.
pub fn check_sequence_cover(seed: u64, covers: usize) -> CheckRecord {
    let seed = named_seed(seed, "sequence_cover");
    let outcomes: Vec<Result<Option<serde_json::Value>>> = (0..covers)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let (z, schedule) = random_sequence(&mut rng)?;
            let x = z.space().clone();
            let (mut u, mut v) = (Vec::new(), Vec::new());
            for level in z.levels() {
                let (mut lu, mut lv) = (Vec::new(), Vec::new());
                for part in level.parts() {
                    let (mut a, mut b) = (Vec::new(), Vec::new());
                    for &p in part.members() {
                        match rng.gen_range(0..3) {
                            0 => a.push(p),
                            1 => b.push(p),
                            _ => {
                                a.push(p);
                                b.push(p);
                            }
                        }
                    }
                    lu.push(x.subspace(a)?);
                    lv.push(x.subspace(b)?);
                }
                u.push(lu);
                v.push(lv);
            }
            let mut cover = SequenceCover::new(z.clone(), u, v)?;
            let genuine = check_cover(&cover, &schedule, DEFAULT_DIM_CAP)?;
            if !genuine.covered {
                return Ok(Some(json!({ "cover": i, "genuine": genuine })));
            }
            let level = rng.gen_range(0..z.levels().len());
            let part = rng.gen_range(0..z.levels()[level].parts().len());
            let p = *z.levels()[level].parts()[part].members().choose(&mut rng).expect("random subsets are nonempty");
            cover.uncover(level, part, p);
            let orphan = check_cover(&cover, &schedule, DEFAULT_DIM_CAP)?;
            let expected = (level + 1, part, vec![x.id_of(p).to_string()]);
            let ok = orphan.witness.as_ref().is_some_and(|w| (w.level, w.part, w.simplex.clone()) == expected);
            Ok((!ok).then(|| json!({ "cover": i, "removed": expected, "check": orphan })))
        })
        .collect();
    let mut c = CheckRecord::new("sequence_cover").extreme("covers", covers as f64).extreme("orphans", covers as f64);
    for o in outcomes {
        match o {
            Ok(w) => c.require(w.is_none(), || w.unwrap()),
            Err(e) => c.require(false, || json!({ "error": e.to_string() })),
        }
    }
    c
}

/// `d(x, ∪W) ≤ (t + 1)·C(s, X)·s` for certified witnesses, with a shrunken-constant control.
pub fn check_rel_nbhd_suite(seed: u64, instances: usize) -> CheckRecord {
    let seed = named_seed(seed, "rel_nbhd");
    let outcomes: Vec<Result<(usize, f64, usize, Option<serde_json::Value>)>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let (s, k) = random_rips(&mut rng, 30, 1, 3);
            let x = k.base_arc();
            let z = random_subset(x, &x.full(), 0.7, &mut rng);
            let members: Vec<Subspace> = (0..rng.gen_range(1..=3))
                .map(|_| {
                    let center = rng.gen_range(0..x.len());
                    let ball = x.ball(center, s * rng.gen_range(1.0..3.0))?;
                    Ok(random_subset(x, &ball, 0.8, &mut rng))
                })
                .collect::<Result<_>>()?;
            let family = MetricFamily::new(x, members)?;
            let s_prime = s * rng.gen_range(1.0..2.0);
            let t = rng.gen_range(1.0..4.0);
            let opts = RelNbhdOptions { samples: 60, seed: rng.gen(), ..RelNbhdOptions::default() };
            let report = check_rel_nbhd(x.clone(), &z, &family, s, s_prime, t, &opts)?;
            let control = check_rel_nbhd(x.clone(), &z, &family, s, s_prime, t, &RelNbhdOptions { constant_factor: 0.01, ..opts })?;
            let witness = report.failures.first().map(|f| json!({ "instance": i, "s": s, "t": t, "witness": f }));
            Ok((report.witnesses, report.max_distance / report.bound, control.failures.len(), witness))
        })
        .collect();
    let mut c = CheckRecord::new("rel_nbhd");
    let (mut witnesses, mut ratio, mut control) = (0, 0.0f64, 0);
    for o in outcomes {
        match o {
            Ok((w, r, k, failure)) => {
                witnesses += w;
                ratio = ratio.max(r);
                control += k;
                c.require(failure.is_none(), || failure.unwrap());
            }
            Err(e) => c.require(false, || json!({ "error": e.to_string() })),
        }
    }
    c.require(control > 0, || json!({ "control": "corrupted constant produced no failure" }));
    c.require(witnesses > 0, || json!({ "witnesses": 0 }));
    c.extreme("instances", instances as f64)
        .extreme("witnesses", witnesses as f64)
        .extreme("max_distance_over_bound", ratio)
        .extreme("control_failures", control as f64)
}

/// Far-apart pieces of a line admit no short path in the relative complex.
pub fn check_rel_separation_suite(seed: u64, instances: usize) -> CheckRecord {
    let seed = named_seed(seed, "rel_separation");
    let outcomes: Vec<Result<(SeparationStatus, Option<serde_json::Value>)>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let x = Arc::new(MetricSpace::integer_interval(0, 60)?);
            let a = rng.gen_range(3..=20);
            let b = rng.gen_range(a + 3..=57);
            let x1 = x.subspace(0..=a)?;
            let x2 = x.subspace(b..=60)?;
            let w1 = vec![x.subspace(a - 2..=a + 1)?];
            let w2 = vec![x.subspace(b - 1..=b + 2)?];
            let l = rng.gen_range(1..=12) as f64;
            let report = check_rel_separation(x, &x1, &x2, &w1, &w2, 1.0, 2.0, l, 40, rng.gen())?;
            let witness = (report.status == SeparationStatus::Fail).then(|| json!({ "instance": i, "a": a, "b": b, "report": report }));
            Ok((report.status, witness))
        })
        .collect();
    let mut c = CheckRecord::new("rel_separation");
    let (mut applicable, mut skipped) = (0, 0);
    for o in outcomes {
        match o {
            Ok((status, w)) => {
                if status == SeparationStatus::SkippedHypothesis {
                    skipped += 1;
                } else {
                    applicable += 1;
                }
                c.require(w.is_none(), || w.unwrap());
            }
            Err(e) => c.require(false, || json!({ "error": e.to_string() })),
        }
    }
    if applicable == 0 && c.passed() {
        c.status = Status::SkippedHypothesis;
    }
    c.extreme("applicable", applicable as f64).extreme("skipped", skipped as f64)
}

fn random_module_space(rng: &mut ChaCha8Rng) -> Arc<ModuleSpace> {
    let x = Arc::new(MetricSpace::integer_interval(0, rng.gen_range(5..=12)).expect("valid interval"));
    let times = *[1, 2, 4].choose(rng).expect("nonempty");
    ModuleSpace::uniform(x, times).expect("valid grid")
}

/// `propagation(ψ∘φ) ≤ propagation(ψ) + propagation(φ)`, exactly.
pub fn check_algebra_propagation(seed: u64, pairs: usize) -> CheckRecord {
    let seed = named_seed(seed, "algebra_propagation");
    let outcomes: Vec<Result<(f64, Option<serde_json::Value>)>> = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let space = random_module_space(&mut rng);
            let [m, n, p] = [(); 3].map(|_| random_module(&space, 0.5, 3, &mut rng));
            let opts = |rng: &mut ChaCha8Rng| RandomMorphismOptions { max_propagation: rng.gen_range(0..=4) as f64, ..RandomMorphismOptions::default() };
            let (o1, o2) = (opts(&mut rng), opts(&mut rng));
            let phi: IntMorphism = random_morphism(&m, &n, &o1, &mut rng)?;
            let psi: IntMorphism = random_morphism(&n, &p, &o2, &mut rng)?;
            let (a, b, ab) = (phi.propagation(), psi.propagation(), psi.compose(&phi)?.propagation());
            let ok = ab <= a + b;
            Ok((ab.value(), (!ok).then(|| json!({ "pair": i, "phi": a, "psi": b, "composite": ab }))))
        })
        .collect();
    algebra_record("algebra_propagation", pairs, outcomes, "max_composite_propagation")
}

/// `π_k∘i_k = id` and `i_1∘π_1 + i_2∘π_2 = id`, bit-exact.
pub fn check_algebra_split(seed: u64, cases: usize) -> CheckRecord {
    let seed = named_seed(seed, "algebra_split");
    let outcomes: Vec<Result<(f64, Option<serde_json::Value>)>> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let space = random_module_space(&mut rng);
            let m = random_module(&space, 0.6, 4, &mut rng);
            let x = space.base();
            let z = x.subspace((0..x.len()).filter(|_| rng.gen_bool(0.5)))?;
            let s = split_by_subspace::<i64>(&m, &z)?;
            let id = IntMorphism::identity(&m);
            let sum = s.include_inside.compose(&s.project_inside)?.add(&s.include_outside.compose(&s.project_outside)?)?;
            let ok = sum == id
                && s.project_inside.compose(&s.include_inside)? == GeomMorphism::identity(&s.inside)
                && s.project_outside.compose(&s.include_outside)? == GeomMorphism::identity(&s.outside);
            Ok((m.total_rank() as f64, (!ok).then(|| json!({ "case": i, "module": m.to_json(), "z": x.ids_of(&z) }))))
        })
        .collect();
    algebra_record("algebra_split", cases, outcomes, "max_total_rank")
}

/// Every factorization found by the support criterion recomposes to `φ` exactly.
pub fn check_algebra_factor(seed: u64, trials: usize) -> CheckRecord {
    let seed = named_seed(seed, "algebra_factor");
    let outcomes: Vec<Result<(f64, Option<serde_json::Value>)>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let space = random_module_space(&mut rng);
            let x = space.base().clone();
            let (m, n) = (random_module(&space, 0.6, 3, &mut rng), random_module(&space, 0.6, 3, &mut rng));
            let mut phi: IntMorphism = random_morphism(&m, &n, &RandomMorphismOptions::default(), &mut rng)?;
            let y = x.subspace((0..x.len()).filter(|_| rng.gen_bool(0.3)))?;
            let r = rng.gen_range(0..=3) as f64;
            if rng.gen_bool(0.5) {
                let hood = x.closed_neighborhood(&y, r)?;
                let by_rows = rng.gen_bool(0.5);
                let kept = phi.blocks().iter().filter(|((a, b), _)| hood.contains(if by_rows { a.point } else { b.point }));
                phi = GeomMorphism::new(m.clone(), n.clone(), kept.map(|(k, v)| (*k, v.clone())).collect::<Vec<_>>())?;
            }
            let found = factors_through_support(&phi, &y, r)?;
            let Some(f) = found else { return Ok((0.0, None)) };
            let hood = x.closed_neighborhood(&y, r)?;
            let ok = f.recompose()? == phi && f.middle.support().is_subset(&hood);
            Ok((1.0, (!ok).then(|| json!({ "trial": i, "phi": phi.to_json(), "y": x.ids_of(&y), "r": r }))))
        })
        .collect();
    algebra_record("algebra_factor", trials, outcomes, "factorizations")
}

fn algebra_record(name: &str, count: usize, outcomes: Vec<Result<(f64, Option<serde_json::Value>)>>, key: &str) -> CheckRecord {
    let mut c = CheckRecord::new(name).extreme("cases", count as f64);
    let sum = key == "factorizations";
    let mut acc = 0.0f64;
    for o in outcomes {
        match o {
            Ok((value, w)) => {
                acc = if sum { acc + value } else { acc.max(value) };
                c.require(w.is_none(), || w.unwrap());
            }
            Err(e) => c.require(false, || json!({ "error": e.to_string() })),
        }
    }
    c.extreme(key, acc)
}

type Job = (&'static str, fn(u64, usize) -> CheckRecord, usize);

/// Base counts of the quick profile.
pub const JOBS: &[Job] = &[
    ("algebra_factor", check_algebra_factor, 200),
    ("algebra_propagation", check_algebra_propagation, 500),
    ("algebra_split", check_algebra_split, 200),
    ("lattice_fdc", check_lattice_fdc, 20),
    ("metric_comparison", check_comparison, 500),
    ("rel_nbhd", check_rel_nbhd_suite, 50),
    ("rel_separation", check_rel_separation_suite, 20),
    ("sequence_cover", check_sequence_cover, 50),
    ("straighten_step", check_straighten_steps, 500),
    ("weakening", check_weakening, 100),
];

/// Runs every check concurrently; records come back ordered by name.
pub fn run_suite(profile: Profile, seed: u64, command: Vec<String>) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new(command, seed);
    report.checks = JOBS.par_iter().map(|(_, f, n)| f(seed, n * profile.factor)).collect();
    report.checks.sort_by(|a, b| a.name.cmp(&b.name));
    report.wall_time = start.elapsed();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scales_hit_the_requested_dimension() {
        let mut rng = stream_rng(1, 0);
        let (_, k) = random_rips(&mut rng, 40, 2, 5);
        assert!((2..=5).contains(&k.dimension()));
    }

    #[test]
    fn small_runs_pass() {
        for c in [
            check_straighten_steps(3, 20),
            check_comparison(3, 40),
            check_weakening(3, 10),
            check_sequence_cover(3, 10),
            check_rel_nbhd_suite(3, 6),
            check_rel_separation_suite(3, 6),
            check_algebra_propagation(3, 30),
            check_algebra_split(3, 30),
            check_algebra_factor(3, 30),
        ] {
            assert!(c.passed(), "{} {:?}", c.name, c.witness);
        }
    }

    #[test]
    fn profiles() {
        assert_eq!(Profile::parse("full").unwrap().factor, 2);
        assert!(Profile::parse("slow").is_err());
    }
}
