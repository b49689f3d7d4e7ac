//! Straightening PL paths into the 1-skeleton.
//!
//! A top-dimensional segment from `p_i` to `p_{i+1}` inside `σ = ⟨x_0, …, x_n⟩`,
//! with `x_n` absent from `p_i` and `x_0` absent from `p_{i+1}`, is replaced by
//! `p_i, p̄_i, p̄_{i+1}, p_{i+1}` where the bars denote orthogonal projection onto
//! the face `⟨x_1, …, x_{n-1}⟩`. Each replacement lowers the segment dimension
//! and stretches the segment by at most `2√2 + 1`.

use num_traits::Float;
use serde::Serialize;

use super::complex::straightening_factor;
use super::path::{is_face, path_length, BarycentricPoint, PlPath};
use crate::error::{Error, Result};

/// Absolute tolerance for all geometric inequalities.
pub const GEOMETRIC_TOLERANCE: f64 = 1e-9;

fn cast<T: Float>(v: f64) -> T {
    T::from(v).expect("float constants are representable")
}

/// One projection replacement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Replacement<T> {
    pub segment: usize,
    pub simplex: Vec<usize>,
    /// `(x_0, x_n)` after relabeling.
    pub dropped: (usize, usize),
    pub original: T,
    pub projections: (T, T),
    pub replaced: T,
}

impl<T: Float> Replacement<T> {
    /// Both projection moves are at most `√2` times the original segment.
    pub fn projection_bound_holds(&self) -> bool {
        let bound = self.original * cast(std::f64::consts::SQRT_2) + cast(GEOMETRIC_TOLERANCE);
        self.projections.0 <= bound && self.projections.1 <= bound
    }

    /// The replaced sub-path is at most `2√2 + 1` times the original segment.
    pub fn inflation_bound_holds(&self) -> bool {
        self.replaced <= self.original * cast(straightening_factor()) + cast(GEOMETRIC_TOLERANCE)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum StepOutcome<T> {
    Replaced(Replacement<T>),
    /// A zero-length segment was deleted.
    RemovedDegenerate { segment: usize },
    /// `p_i` was dropped because `σ_{i-1}` and `σ_i` are nested.
    Shortcut { point: usize },
}

fn degenerate_segment<T: Float>(path: &PlPath<T>) -> Option<usize> {
    let tol = cast(1e-12);
    (0..path.segment_count()).find(|&i| path.points()[i].approx_eq(&path.points()[i + 1], tol))
}

fn nested_point<T: Float>(path: &PlPath<T>) -> Option<usize> {
    (1..path.segment_count()).find(|&i| {
        let (a, b) = (path.segment_simplex(i - 1), path.segment_simplex(i));
        is_face(&a, &b) || is_face(&b, &a)
    })
}

fn remove_degenerate<T: Float>(path: &mut PlPath<T>, segment: usize) {
    let last = path.points().len() - 1;
    let drop = if segment + 1 == last { segment } else { segment + 1 };
    path.points_mut().remove(drop);
}

/// Projects `p` onto the affine span of `face`, moving the weight of `dropped` evenly onto `face`.
fn project<T: Float>(p: &BarycentricPoint<T>, face: &[usize], dropped: (usize, usize)) -> BarycentricPoint<T> {
    let moved = (p.weight(dropped.0) + p.weight(dropped.1)) / cast(face.len() as f64);
    let weights: Vec<T> = face.iter().map(|&v| p.weight(v) + moved).collect();
    BarycentricPoint::from_weights(face, &weights).expect("projection keeps positive weight on the face")
}

fn replace_segment<T: Float>(path: &PlPath<T>, i: usize) -> Option<(Vec<BarycentricPoint<T>>, Replacement<T>)> {
    let sigma = path.segment_simplex(i);
    let (p, q) = (&path.points()[i], &path.points()[i + 1]);
    let x_n = *sigma.iter().find(|v| p.carrier().binary_search(v).is_err())?;
    let x_0 = *sigma.iter().find(|v| q.carrier().binary_search(v).is_err())?;
    let face: Vec<usize> = sigma.iter().copied().filter(|&v| v != x_0 && v != x_n).collect();
    let p_bar = project(p, &face, (x_0, x_n));
    let q_bar = project(q, &face, (x_0, x_n));
    let projections = (p.distance(&p_bar), q_bar.distance(q));
    let replaced = projections.0 + p_bar.distance(&q_bar) + projections.1;
    let rep = Replacement { segment: i, simplex: sigma, dropped: (x_0, x_n), original: p.distance(q), projections, replaced };
    Some((vec![p_bar, q_bar], rep))
}

/// Performs one straightening move.
///
/// Zero-length segments and nested consecutive simplices are cleaned up first;
/// otherwise the earliest top-dimensional segment is projected.
pub fn straighten_step<T: Float>(path: &PlPath<T>) -> Result<(PlPath<T>, StepOutcome<T>)> {
    if path.dim() < 2 || path.segment_count() == 0 {
        return Err(Error::AlreadyOneDimensional);
    }
    let mut out = path.clone();
    if let Some(segment) = degenerate_segment(path) {
        remove_degenerate(&mut out, segment);
        return Ok((out, StepOutcome::RemovedDegenerate { segment }));
    }
    if let Some(point) = nested_point(path) {
        out.points_mut().remove(point);
        return Ok((out, StepOutcome::Shortcut { point }));
    }
    let top = path.dim();
    for i in (0..path.segment_count()).filter(|&i| path.segment_dim(i) == top) {
        if let Some((inserted, rep)) = replace_segment(path, i) {
            out.points_mut().splice(i + 1..i + 1, inserted);
            return Ok((out, StepOutcome::Replaced(rep)));
        }
    }
    Err(Error::InvalidPath("every top-dimensional segment has an endpoint interior to its simplex".into()))
}

/// Removes zero-length segments and nested shortcuts until none remain.
pub fn normalize<T: Float>(path: &mut PlPath<T>) {
    loop {
        if let Some(segment) = degenerate_segment(path) {
            remove_degenerate(path, segment);
        } else if let Some(point) = nested_point(path) {
            path.points_mut().remove(point);
        } else {
            return;
        }
    }
}

/// Summary of one dimension drop.
#[derive(Clone, Debug, Serialize)]
pub struct LevelReport<T> {
    pub dim: usize,
    pub length_before: T,
    pub length_after: T,
    pub replacements: Vec<Replacement<T>>,
}

#[derive(Clone, Debug)]
pub struct StraighteningReport<T> {
    pub initial_dim: usize,
    pub initial_length: T,
    pub levels: Vec<LevelReport<T>>,
    pub path: PlPath<T>,
    pub final_length: T,
    /// Vertices visited by the final path, consecutive duplicates merged.
    pub vertex_path: Vec<usize>,
}

impl<T: Float> StraighteningReport<T> {
    pub fn edge_count(&self) -> usize {
        self.vertex_path.len() - 1
    }

    /// `final_length / initial_length`, or 1 for constant paths.
    pub fn inflation(&self) -> T {
        if self.initial_length > T::zero() {
            self.final_length / self.initial_length
        } else {
            T::one()
        }
    }

    /// `(2√2 + 1)^(dim(γ) - 1)`.
    pub fn inflation_bound(&self) -> T {
        cast::<T>(straightening_factor()).powi(self.initial_dim.max(1) as i32 - 1)
    }

    pub fn replacements(&self) -> impl Iterator<Item = &Replacement<T>> {
        self.levels.iter().flat_map(|l| l.replacements.iter())
    }
}

/// Straightens a path with vertex endpoints into the 1-skeleton.
///
/// Each round normalizes, then replaces every top-dimensional segment at once,
/// so a round inflates length by at most `2√2 + 1`.
pub fn straighten_full<T: Float>(path: &PlPath<T>) -> Result<StraighteningReport<T>> {
    let (Some(x), Some(_)) = (path.start().as_vertex(), path.end().as_vertex()) else {
        return Err(Error::InvalidPath("straightening needs vertex endpoints".into()));
    };
    let initial_length = path_length(path);
    let initial_dim = path.dim();
    let mut current = path.clone();
    let mut levels = Vec::new();
    while current.dim() >= 2 {
        let length_before = path_length(&current);
        normalize(&mut current);
        let top = current.dim();
        if top < 2 {
            break;
        }
        let mut replacements = Vec::new();
        let mut points = Vec::with_capacity(current.points().len() * 2);
        points.push(current.points()[0].clone());
        for i in 0..current.segment_count() {
            if current.segment_dim(i) == top {
                let (inserted, rep) = replace_segment(&current, i).ok_or_else(|| {
                    Error::InvalidPath(format!("segment {i} has an endpoint interior to its simplex"))
                })?;
                points.extend(inserted);
                replacements.push(rep);
            }
            points.push(current.points()[i + 1].clone());
        }
        current = PlPath::from_points_unchecked(points);
        levels.push(LevelReport { dim: top, length_before, length_after: path_length(&current), replacements });
    }
    let mut vertex_path = vec![x];
    for p in current.points() {
        if let Some(v) = p.as_vertex() {
            if vertex_path.last() != Some(&v) {
                vertex_path.push(v);
            }
        }
    }
    let final_length = path_length(&current);
    Ok(StraighteningReport { initial_dim, initial_length, levels, path: current, final_length, vertex_path })
}

/// The inequalities a straightening certifies about the endpoint distance `d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StraighteningCertificate {
    /// `d ≤ s·(2√2+1)^(dim−1)·l(γ)`.
    pub length_bound: bool,
    /// `d ≤ s·L` for the final edge count `L`.
    pub edge_bound: bool,
    /// `L ≤ l(γ′)` and `l(γ′) ≤ (2√2+1)^(dim−1)·l(γ)`.
    pub inflation: bool,
    /// Every replacement met its projection and inflation bounds.
    pub replacements: bool,
}

impl StraighteningCertificate {
    pub fn holds(&self) -> bool {
        self.length_bound && self.edge_bound && self.inflation && self.replacements
    }
}

pub fn certify_straightening(report: &StraighteningReport<f64>, d: f64, s: f64) -> StraighteningCertificate {
    let tol = GEOMETRIC_TOLERANCE;
    let bound = report.inflation_bound();
    let edges = report.edge_count() as f64;
    StraighteningCertificate {
        length_bound: d <= s * bound * report.initial_length + tol,
        edge_bound: d <= s * edges + tol,
        inflation: edges <= report.final_length + tol && report.final_length <= bound * report.initial_length + tol,
        replacements: report.replacements().all(|r| r.projection_bound_holds() && r.inflation_bound_holds()),
    }
}
