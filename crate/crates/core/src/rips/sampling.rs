//! Random PL paths and the Rips metric comparison check.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::complex::{build_rips, rips_constant, straightening_factor, Complex, DEFAULT_DIM_CAP};
use super::path::{path_length, BarycentricPoint, Path};
use super::straighten::{certify_straightening, straighten_full, StraighteningCertificate, GEOMETRIC_TOLERANCE};
use crate::error::{Error, Result};
use crate::metric::MetricSpace;
use crate::rng::stream_rng;

/// A random simplex containing `face`, grown by greedy random extension.
pub fn random_coface<K: Complex + ?Sized, R: Rng>(complex: &K, face: &[usize], rng: &mut R) -> Vec<usize> {
    let mut sigma = face.to_vec();
    let mut candidates: Vec<usize> =
        complex.neighbors(face[0]).iter().copied().filter(|v| face.binary_search(v).is_err()).collect();
    candidates.shuffle(rng);
    for v in candidates {
        if sigma.len() > complex.dim_cap() || !rng.gen_bool(0.5) {
            continue;
        }
        let mut grown = sigma.clone();
        let at = grown.binary_search(&v).unwrap_or_else(|e| e);
        grown.insert(at, v);
        if complex.is_simplex(&grown) {
            sigma = grown;
        }
    }
    sigma
}

/// A random point of `sigma`, sometimes on a proper face.
pub fn random_point_in<R: Rng>(sigma: &[usize], rng: &mut R) -> BarycentricPoint<f64> {
    let mut support: Vec<usize> = if sigma.len() > 1 && rng.gen_bool(0.25) {
        sigma.iter().copied().filter(|_| rng.gen_bool(0.5)).collect()
    } else {
        sigma.to_vec()
    };
    if support.is_empty() {
        support.push(*sigma.choose(rng).expect("simplices are nonempty"));
    }
    // exponential weights give the uniform distribution on the simplex
    let weights: Vec<f64> = support.iter().map(|_| -(1.0 - rng.gen::<f64>()).ln() + 1e-6).collect();
    BarycentricPoint::from_weights(&support, &weights).expect("positive weights")
}

/// A random walk through simplices from a vertex to a vertex.
pub fn random_path<K: Complex + ?Sized, R: Rng>(complex: &K, start: usize, max_steps: usize, rng: &mut R) -> Path {
    let mut points = vec![BarycentricPoint::vertex(start)];
    for _ in 0..rng.gen_range(1..=max_steps.max(1)) {
        let sigma = random_coface(complex, points.last().unwrap().carrier(), rng);
        points.push(random_point_in(&sigma, rng));
    }
    let sigma = random_coface(complex, points.last().unwrap().carrier(), rng);
    points.push(BarycentricPoint::vertex(*sigma.choose(rng).expect("simplices are nonempty")));
    Path::new(complex, points).expect("random walks stay inside simplices")
}

/// A random walk whose consecutive segments tend to lie in non-nested simplices.
///
/// Each new point has full support on a face that adds vertices outside the
/// current carrier and, where possible, outside the previous one, and drops at
/// least one current vertex.
pub fn random_transverse_path<K: Complex + ?Sized, R: Rng>(complex: &K, start: usize, steps: usize, rng: &mut R) -> Path {
    let mut points = vec![BarycentricPoint::vertex(start)];
    let mut previous: Vec<usize> = Vec::new();
    for _ in 0..steps.max(1) {
        let p = points.last().unwrap().clone();
        let sigma = (0..5).map(|_| random_coface(complex, p.carrier(), rng)).max_by_key(Vec::len).expect("five draws");
        let fresh: Vec<usize> = sigma.iter().copied().filter(|v| p.carrier().binary_search(v).is_err()).collect();
        if fresh.is_empty() {
            continue;
        }
        let far: Vec<usize> = fresh.iter().copied().filter(|v| previous.binary_search(v).is_err()).collect();
        let pool = if far.is_empty() { fresh } else { far };
        let mut face: Vec<usize> = pool.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if face.is_empty() {
            face.push(*pool.choose(rng).expect("nonempty"));
        }
        let keep = p.carrier().len().saturating_sub(1);
        let mut old = p.carrier().to_vec();
        old.shuffle(rng);
        face.extend(old.into_iter().take(rng.gen_range(0..=keep)));
        face.sort_unstable();
        let weights: Vec<f64> = face.iter().map(|_| -(1.0 - rng.gen::<f64>()).ln() + 1e-3).collect();
        previous = p.carrier().to_vec();
        points.push(BarycentricPoint::from_weights(&face, &weights).expect("positive weights"));
    }
    let last = points.last().unwrap().carrier().to_vec();
    let sigma = random_coface(complex, &last, rng);
    let outside: Vec<usize> = sigma.iter().copied().filter(|v| last.binary_search(v).is_err()).collect();
    let end = *outside.choose(rng).or_else(|| sigma.choose(rng)).expect("simplices are nonempty");
    points.push(BarycentricPoint::vertex(end));
    Path::new(complex, points).expect("transverse walks stay inside simplices")
}

#[derive(Clone, Debug)]
pub struct ComparisonOptions {
    pub samples: usize,
    pub seed: u64,
    pub max_steps: usize,
    /// Multiplies every base distance; values above one make a corrupted metric.
    pub distance_inflation: f64,
    /// Also straighten every sample and check the straightening certificate.
    pub straighten: bool,
}

impl Default for ComparisonOptions {
    fn default() -> Self {
        ComparisonOptions { samples: 200, seed: 0, max_steps: 6, distance_inflation: 1.0, straighten: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonSample {
    pub index: usize,
    pub x: String,
    pub y: String,
    pub distance: f64,
    pub length: f64,
    pub path_dim: usize,
    /// `d(x, y) / (s·l(γ))`.
    pub ratio: f64,
    pub comparison: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub straightening: Option<StraighteningCertificate>,
}

impl ComparisonSample {
    pub fn passed(&self) -> bool {
        self.comparison && self.straightening.as_ref().is_none_or(StraighteningCertificate::holds)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub scale: f64,
    pub dimension: usize,
    pub constant: f64,
    pub samples: usize,
    pub max_ratio: f64,
    pub failures: Vec<ComparisonSample>,
    /// The sample attaining `max_ratio`.
    pub extreme: Option<ComparisonSample>,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `(2√2 + 1)^{dim − 1}`, the comparison constant for a path of the given dimension.
pub fn path_constant(dim: usize) -> f64 {
    straightening_factor().powi(dim.max(1) as i32 - 1)
}

fn sample<K: Complex + ?Sized>(complex: &K, opts: &ComparisonOptions, index: usize) -> Result<ComparisonSample> {
    let mut rng: ChaCha8Rng = stream_rng(opts.seed, index as u64);
    let vertices: Vec<usize> = (0..complex.base().len()).filter(|&v| complex.is_vertex(v)).collect();
    let start = *vertices.choose(&mut rng).ok_or_else(|| Error::Invalid("complex has no vertices".into()))?;
    let path = random_path(complex, start, opts.max_steps, &mut rng);
    let s = complex.max_scale();
    let y = path.end().as_vertex().expect("random paths end at a vertex");
    let distance = complex.base().dist(start, y).value() * opts.distance_inflation;
    let length = path_length(&path);
    let ratio = if length > 0.0 {
        distance / (s * length)
    } else if distance == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let straightening = if opts.straighten {
        Some(certify_straightening(&straighten_full(&path)?, distance, s))
    } else {
        None
    };
    Ok(ComparisonSample {
        index,
        x: complex.base().id_of(start).to_string(),
        y: complex.base().id_of(y).to_string(),
        distance,
        length,
        path_dim: path.dim(),
        ratio,
        comparison: distance <= s * path_constant(path.dim()) * length + GEOMETRIC_TOLERANCE,
        straightening,
    })
}

/// Samples random PL paths and checks `d(x, y) ≤ s·(2√2 + 1)^{dim γ − 1}·l(γ)` on each.
pub fn check_metric_comparison_with<K: Complex + ?Sized>(complex: &K, opts: &ComparisonOptions) -> Result<ComparisonReport> {
    let constant = rips_constant(complex)?;
    let samples: Vec<ComparisonSample> =
        (0..opts.samples).into_par_iter().map(|i| sample(complex, opts, i)).collect::<Result<_>>()?;
    let extreme = samples.iter().filter(|s| s.ratio.is_finite()).max_by(|a, b| a.ratio.total_cmp(&b.ratio)).cloned();
    let max_ratio = samples.iter().map(|s| s.ratio).fold(0.0, f64::max);
    Ok(ComparisonReport {
        scale: complex.max_scale(),
        dimension: complex.dimension(),
        constant,
        samples: samples.len(),
        max_ratio,
        failures: samples.into_iter().filter(|s| !s.passed()).collect(),
        extreme,
    })
}

/// Builds `P_s(X)` and runs [`check_metric_comparison_with`] with default options.
pub fn check_metric_comparison(x: Arc<MetricSpace>, s: f64, samples: usize, seed: u64) -> Result<ComparisonReport> {
    let complex = build_rips(x, s, DEFAULT_DIM_CAP)?;
    check_metric_comparison_with(&complex, &ComparisonOptions { samples, seed, ..ComparisonOptions::default() })
}
