//! Barycentric points and piecewise-linear paths in a simplicial complex.
//!
//! Every simplex is embedded isometrically as the convex hull of the points
//! `(√2/2)·e_v`, so edges have length one and the distance between two points
//! of a common simplex is `(√2/2)·‖a − b‖₂` in barycentric coordinates.

use num_traits::Float;

use super::complex::Complex;
use crate::error::{Error, Result};

fn cast<T: Float>(v: f64) -> T {
    T::from(v).expect("float constants are representable")
}

/// Tolerance on barycentric coordinate sums.
pub fn coordinate_tolerance<T: Float>() -> T {
    cast(1e-12)
}

/// A point of a complex: positive weights over the vertices of its carrier.
#[derive(Clone, Debug, PartialEq)]
pub struct BarycentricPoint<T> {
    carrier: Vec<usize>,
    coords: Vec<T>,
}

impl<T: Float> BarycentricPoint<T> {
    /// Weights are paired with vertices; they are sorted by vertex internally.
    pub fn new(vertices: Vec<usize>, weights: Vec<T>) -> Result<Self> {
        if vertices.is_empty() || vertices.len() != weights.len() {
            return Err(Error::InvalidPath("carrier and weights must be nonempty and of equal length".into()));
        }
        let mut pairs: Vec<(usize, T)> = vertices.into_iter().zip(weights).collect();
        pairs.sort_by_key(|p| p.0);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidPath("repeated carrier vertex".into()));
        }
        if pairs.iter().any(|p| !(p.1 > T::zero())) {
            return Err(Error::InvalidPath("barycentric coordinates must be positive".into()));
        }
        let sum = pairs.iter().fold(T::zero(), |acc, p| acc + p.1);
        if (sum - T::one()).abs() > coordinate_tolerance() {
            return Err(Error::InvalidPath("barycentric coordinates must sum to one".into()));
        }
        let (carrier, coords) = pairs.into_iter().unzip();
        Ok(BarycentricPoint { carrier, coords })
    }

    /// Builds a point from nonnegative weights, dropping zeros and normalizing.
    pub fn from_weights(vertices: &[usize], weights: &[T]) -> Result<Self> {
        let total = weights.iter().fold(T::zero(), |acc, &w| acc + w);
        if vertices.len() != weights.len() || !(total > T::zero()) || weights.iter().any(|w| *w < T::zero()) {
            return Err(Error::InvalidPath("weights must be nonnegative with positive sum".into()));
        }
        let mut pairs: Vec<(usize, T)> =
            vertices.iter().zip(weights).filter(|p| *p.1 > T::zero()).map(|(&v, &w)| (v, w / total)).collect();
        pairs.sort_by_key(|p| p.0);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidPath("repeated carrier vertex".into()));
        }
        let (carrier, coords) = pairs.into_iter().unzip();
        let mut p = BarycentricPoint { carrier, coords };
        p.renormalize();
        Ok(p)
    }

    pub fn vertex(v: usize) -> Self {
        BarycentricPoint { carrier: vec![v], coords: vec![T::one()] }
    }

    pub fn barycenter(simplex: &[usize]) -> Result<Self> {
        let w = T::one() / cast(simplex.len() as f64);
        BarycentricPoint::new(simplex.to_vec(), vec![w; simplex.len()])
    }

    fn renormalize(&mut self) {
        let sum = self.coords.iter().fold(T::zero(), |acc, &c| acc + c);
        for c in &mut self.coords {
            *c = *c / sum;
        }
    }

    /// Sorted vertices with positive weight.
    pub fn carrier(&self) -> &[usize] {
        &self.carrier
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn weight(&self, v: usize) -> T {
        self.carrier.binary_search(&v).map(|k| self.coords[k]).unwrap_or_else(|_| T::zero())
    }

    pub fn as_vertex(&self) -> Option<usize> {
        (self.carrier.len() == 1).then(|| self.carrier[0])
    }

    pub fn dim(&self) -> usize {
        self.carrier.len() - 1
    }

    /// Same carrier and coordinates within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.carrier == other.carrier && self.coords.iter().zip(&other.coords).all(|(a, b)| (*a - *b).abs() <= tol)
    }

    /// Embedded distance to a point sharing a simplex with this one.
    pub fn distance(&self, other: &Self) -> T {
        let sq = union(&self.carrier, &other.carrier).into_iter().fold(T::zero(), |acc, v| {
            let d = self.weight(v) - other.weight(v);
            acc + d * d
        });
        sq.sqrt() * cast(std::f64::consts::FRAC_1_SQRT_2)
    }
}

/// Sorted union of two sorted vertex lists.
pub fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `a ⊆ b` for sorted vertex lists.
pub fn is_face(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

/// Double-precision path, the form used throughout the checks.
pub type Path = PlPath<f64>;

pub type Point = BarycentricPoint<f64>;

/// A piecewise-linear path `p_0, …, p_k`; segment `i` joins `p_i` and `p_{i+1}`
/// inside the simplex spanned by their carriers.
#[derive(Clone, Debug, PartialEq)]
pub struct PlPath<T> {
    points: Vec<BarycentricPoint<T>>,
}

impl<T: Float> PlPath<T> {
    /// Checks that consecutive points share a simplex of `complex`.
    pub fn new<K: Complex + ?Sized>(complex: &K, points: Vec<BarycentricPoint<T>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidPath("a path needs at least one point".into()));
        }
        for p in &points {
            if !complex.is_simplex(p.carrier()) {
                return Err(Error::InvalidPath(format!("carrier {:?} is not a simplex", p.carrier())));
            }
        }
        let path = PlPath { points };
        for i in 0..path.segment_count() {
            if !complex.is_simplex(&path.segment_simplex(i)) {
                return Err(Error::InvalidPath(format!("segment {i} does not lie in a simplex")));
            }
        }
        Ok(path)
    }

    pub(crate) fn from_points_unchecked(points: Vec<BarycentricPoint<T>>) -> Self {
        PlPath { points }
    }

    /// The path through a sequence of vertices.
    pub fn from_vertices<K: Complex + ?Sized>(complex: &K, vertices: &[usize]) -> Result<Self> {
        PlPath::new(complex, vertices.iter().map(|&v| BarycentricPoint::vertex(v)).collect())
    }

    pub fn points(&self) -> &[BarycentricPoint<T>] {
        &self.points
    }

    pub(crate) fn points_mut(&mut self) -> &mut Vec<BarycentricPoint<T>> {
        &mut self.points
    }

    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    /// The minimal simplex `σ_i` containing both ends of segment `i`.
    pub fn segment_simplex(&self, i: usize) -> Vec<usize> {
        union(self.points[i].carrier(), self.points[i + 1].carrier())
    }

    pub fn segment_dim(&self, i: usize) -> usize {
        self.segment_simplex(i).len() - 1
    }

    pub fn segment_length(&self, i: usize) -> T {
        self.points[i].distance(&self.points[i + 1])
    }

    /// `dim(γ)`: the largest segment dimension, or the dimension of the single point.
    pub fn dim(&self) -> usize {
        if self.points.len() == 1 {
            return self.points[0].dim();
        }
        (0..self.segment_count()).map(|i| self.segment_dim(i)).max().unwrap_or(0)
    }

    pub fn start(&self) -> &BarycentricPoint<T> {
        &self.points[0]
    }

    pub fn end(&self) -> &BarycentricPoint<T> {
        self.points.last().expect("paths are nonempty")
    }
}

/// `l(γ)`: the sum of segment lengths.
pub fn path_length<T: Float>(path: &PlPath<T>) -> T {
    (0..path.segment_count()).fold(T::zero(), |acc, i| acc + path.segment_length(i))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::metric::MetricSpace;
    use crate::rips::complex::build_rips;

    fn simplex(n: usize) -> crate::rips::RipsComplex {
        let ids = (0..n).map(|i| i.to_string()).collect();
        build_rips(Arc::new(MetricSpace::from_fn("simplex", ids, |i, j| (i != j) as u8 as f64).unwrap()), 1.0, 8).unwrap()
    }

    #[test]
    fn spec_lengths() {
        let k = simplex(3);
        let edge = Path::from_vertices(&k, &[0, 1]).unwrap();
        assert!((path_length(&edge) - 1.0).abs() < 1e-12);
        let half = Path::new(&k, vec![Point::vertex(0), Point::barycenter(&[0, 1]).unwrap()]).unwrap();
        assert!((path_length(&half) - 0.5).abs() < 1e-12);
        let constant = Path::from_vertices(&k, &[2]).unwrap();
        assert_eq!(path_length(&constant), 0.0);
    }

    #[test]
    fn generic_scalar_agrees() {
        let a = BarycentricPoint::<f32>::barycenter(&[0, 1, 2]).unwrap();
        let b = BarycentricPoint::<f32>::vertex(0);
        let a64 = Point::barycenter(&[0, 1, 2]).unwrap();
        let b64 = Point::vertex(0);
        assert!((a.distance(&b) as f64 - a64.distance(&b64)).abs() < 1e-6);
    }

    #[test]
    fn invalid_points_are_rejected() {
        assert!(Point::new(vec![0, 1], vec![0.5, 0.6]).is_err());
        assert!(Point::new(vec![0, 1], vec![1.0, 0.0]).is_err());
        assert!(Point::new(vec![0, 0], vec![0.5, 0.5]).is_err());
        let x = Arc::new(MetricSpace::integer_interval(0, 3).unwrap());
        let k = build_rips(x, 1.0, 4).unwrap();
        assert!(Path::from_vertices(&k, &[0, 2]).is_err());
        assert!(Path::from_vertices(&k, &[0, 1, 2]).is_ok());
    }

    #[test]
    fn dimension_of_paths() {
        let k = simplex(4);
        let p = Path::new(&k, vec![Point::vertex(0), Point::barycenter(&[1, 2, 3]).unwrap()]).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(p.segment_simplex(0), vec![0, 1, 2, 3]);
    }
}
