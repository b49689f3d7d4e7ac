//! Finite metric spaces and their subspaces.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::distance::ExtDistance;
use crate::error::{Error, Result};

static NEXT_SPACE_ID: AtomicU64 = AtomicU64::new(1);

/// Spaces up to this size get the full cubic triangle-inequality check.
pub const FULL_TRIANGLE_CHECK_LIMIT: usize = 2000;

const TRIANGLE_SAMPLES: usize = 4_000_000;
const WORD_INFINITY: u32 = u32::MAX;
const DENSE_LATTICE_LIMIT: usize = 1 << 23;

fn fresh_id() -> u64 {
    NEXT_SPACE_ID.fetch_add(1, Ordering::Relaxed)
}

/// Relative slack allowed in the triangle inequality for float matrices.
fn triangle_slack(bound: f64) -> f64 {
    1e-9 * bound.max(1.0)
}

#[derive(Clone, Debug)]
pub(crate) struct Lattice {
    pub(crate) dim: usize,
    /// Row-major `n x dim` coordinates.
    pub(crate) coords: Vec<i64>,
    pub(crate) radius: Option<u64>,
    lookup: LatticeLookup,
}

#[derive(Clone, Debug)]
enum LatticeLookup {
    Dense { origin: Vec<i64>, extent: Vec<usize>, cells: Vec<u32> },
    Hashed(HashMap<Vec<i64>, usize>),
}

impl Lattice {
    fn new(dim: usize, coords: Vec<i64>, radius: Option<u64>) -> Result<Self> {
        let n = if dim == 0 { 1 } else { coords.len() / dim };
        let mut origin = vec![i64::MAX; dim];
        let mut upper = vec![i64::MIN; dim];
        for p in 0..n {
            for k in 0..dim {
                let c = coords[p * dim + k];
                origin[k] = origin[k].min(c);
                upper[k] = upper[k].max(c);
            }
        }
        let extent: Vec<usize> = (0..dim).map(|k| (upper[k] - origin[k] + 1) as usize).collect();
        let cells_needed = extent.iter().try_fold(1usize, |acc, &e| acc.checked_mul(e));
        let lookup = match cells_needed {
            Some(total) if total <= DENSE_LATTICE_LIMIT => {
                let mut cells = vec![u32::MAX; total];
                let mut lattice = LatticeLookup::Dense { origin: origin.clone(), extent: extent.clone(), cells: Vec::new() };
                for p in 0..n {
                    let key = dense_index(&origin, &extent, &coords[p * dim..(p + 1) * dim]).unwrap();
                    if cells[key] != u32::MAX {
                        return Err(Error::InvalidMetric("duplicate lattice point".into()));
                    }
                    cells[key] = p as u32;
                }
                if let LatticeLookup::Dense { cells: c, .. } = &mut lattice {
                    *c = cells;
                }
                lattice
            }
            _ => {
                let mut map = HashMap::with_capacity(n);
                for p in 0..n {
                    if map.insert(coords[p * dim..(p + 1) * dim].to_vec(), p).is_some() {
                        return Err(Error::InvalidMetric("duplicate lattice point".into()));
                    }
                }
                LatticeLookup::Hashed(map)
            }
        };
        Ok(Lattice { dim, coords, radius, lookup })
    }

    pub(crate) fn coord(&self, p: usize) -> &[i64] {
        &self.coords[p * self.dim..(p + 1) * self.dim]
    }

    /// Points within l1 distance `k` of `center`, unsorted.
    fn ball_into(&self, center: &[i64], k: u64, out: &mut Vec<usize>) {
        fn dense(center: &[i64], origin: &[i64], extent: &[usize], cells: &[u32], d: usize, key: usize, budget: i64, out: &mut Vec<usize>) {
            if d == center.len() {
                if cells[key] != u32::MAX {
                    out.push(cells[key] as usize);
                }
                return;
            }
            let lo = (center[d] - budget - origin[d]).max(0);
            let hi = (center[d] + budget - origin[d]).min(extent[d] as i64 - 1);
            for off in lo..=hi {
                let used = (origin[d] + off - center[d]).abs();
                dense(center, origin, extent, cells, d + 1, key * extent[d] + off as usize, budget - used, out);
            }
        }
        match &self.lookup {
            LatticeLookup::Dense { origin, extent, cells } => dense(center, origin, extent, cells, 0, 0, k as i64, out),
            LatticeLookup::Hashed(map) => {
                let mut c = center.to_vec();
                for off in l1_offsets(self.dim, k) {
                    for (i, o) in off.iter().enumerate() {
                        c[i] = center[i] + o;
                    }
                    if let Some(&p) = map.get(&c) {
                        out.push(p);
                    }
                }
            }
        }
    }

    fn l1(&self, a: usize, b: usize) -> u64 {
        self.coord(a).iter().zip(self.coord(b)).map(|(x, y)| x.abs_diff(*y)).sum()
    }
}

fn dense_index(origin: &[i64], extent: &[usize], c: &[i64]) -> Option<usize> {
    let mut key = 0usize;
    for k in 0..origin.len() {
        let off = c[k] - origin[k];
        if off < 0 || off as usize >= extent[k] {
            return None;
        }
        key = key * extent[k] + off as usize;
    }
    Some(key)
}

/// All integer vectors of the given dimension with l1 norm at most `k`.
fn l1_offsets(dim: usize, k: u64) -> Vec<Vec<i64>> {
    fn rec(dim: usize, budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == dim {
            out.push(prefix.clone());
            return;
        }
        for v in -budget..=budget {
            prefix.push(v);
            rec(dim, budget - v.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, k as i64, &mut Vec::with_capacity(dim), &mut out);
    out
}

#[derive(Clone, Debug)]
pub(crate) enum Metric {
    /// Row-major float matrix.
    Matrix(Vec<f64>),
    /// Finite subset of the integer lattice with the l1 metric.
    Lattice(Lattice),
    /// Integer word metric; `u32::MAX` encodes infinity.
    Word(Vec<u32>),
}

/// A finite metric space with extended (possibly infinite) distances.
///
/// Points are addressed either by their opaque string identifier or by their
/// index in the point order. The space is immutable once built.
#[derive(Clone, Debug)]
pub struct MetricSpace {
    id: u64,
    label: String,
    ids: Vec<String>,
    index: HashMap<String, usize>,
    pub(crate) metric: Metric,
    meta: BTreeMap<String, String>,
}

impl MetricSpace {
    fn assemble(label: impl Into<String>, ids: Vec<String>, metric: Metric) -> Result<Self> {
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidMetric(format!("duplicate point id {id:?}")));
            }
        }
        Ok(MetricSpace { id: fresh_id(), label: label.into(), ids, index, metric, meta: BTreeMap::new() })
    }

    /// Builds a space from a full distance matrix, validating every metric axiom.
    ///
    /// The triangle inequality is checked on all triples up to
    /// [`FULL_TRIANGLE_CHECK_LIMIT`] points and on a fixed random sample above.
    pub fn from_matrix(label: impl Into<String>, ids: Vec<String>, rows: Vec<Vec<ExtDistance>>) -> Result<Self> {
        let n = ids.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMetric(format!("distance matrix must be {n} x {n}")));
        }
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().map(|d| d.value())).collect();
        validate_matrix(n, &flat)?;
        Self::assemble(label, ids, Metric::Matrix(flat))
    }

    /// Builds a space from a distance function over `ids.len()` points.
    pub fn from_fn(label: impl Into<String>, ids: Vec<String>, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let n = ids.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| ExtDistance::new(f(i, j))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_matrix(label, ids, rows)
    }

    /// Points of the Euclidean plane (or any R^k), labelled `p0, p1, ...`.
    pub fn euclidean(label: impl Into<String>, points: &[Vec<f64>]) -> Result<Self> {
        let ids = (0..points.len()).map(|i| format!("p{i}")).collect();
        Self::from_fn(label, ids, |i, j| {
            points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
        })
    }

    /// The closed l1 ball of the given radius in the rank-`dim` integer lattice.
    pub fn l1_ball(dim: usize, radius: u64) -> Result<Self> {
        let offsets = l1_offsets(dim, radius);
        let mut space = Self::l1_points(format!("l1-ball(dim={dim}, radius={radius})"), dim, offsets)?;
        if let Metric::Lattice(l) = &mut space.metric {
            l.radius = Some(radius);
        }
        Ok(space)
    }

    /// An arbitrary finite subset of the integer lattice with the l1 metric.
    pub fn l1_points(label: impl Into<String>, dim: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        if dim == 0 && points.len() != 1 {
            return Err(Error::InvalidMetric("the rank-0 lattice has exactly one point".into()));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidMetric(format!("lattice points must have {dim} coordinates")));
        }
        let ids = points.iter().map(|p| lattice_id(p)).collect();
        let coords: Vec<i64> = points.into_iter().flatten().collect();
        let lattice = Lattice::new(dim, coords, None)?;
        Self::assemble(label, ids, Metric::Lattice(lattice))
    }

    /// The integers `lo..=hi` with the absolute-value metric; ids are the integers themselves.
    pub fn integer_interval(lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::InvalidMetric("empty interval".into()));
        }
        let space = Self::l1_points(format!("integers {lo}..{hi}"), 1, (lo..=hi).map(|v| vec![v]).collect())?;
        space.with_ids((lo..=hi).map(|v| v.to_string()).collect())
    }

    /// A word-metric space; `rows[i][j]` is the word length of `g_i^{-1} g_j`.
    pub fn from_word_lengths(label: impl Into<String>, ids: Vec<String>, rows: Vec<u32>) -> Result<Self> {
        let n = ids.len();
        if rows.len() != n * n {
            return Err(Error::InvalidMetric(format!("word metric must be {n} x {n}")));
        }
        for i in 0..n {
            if rows[i * n + i] != 0 {
                return Err(Error::InvalidMetric(format!("d(x,x) != 0 at {}", ids[i])));
            }
            for j in 0..i {
                if rows[i * n + j] != rows[j * n + i] {
                    return Err(Error::InvalidMetric(format!("asymmetric at ({}, {})", ids[i], ids[j])));
                }
                if rows[i * n + j] == 0 {
                    return Err(Error::InvalidMetric(format!("distinct points {} and {} at distance 0", ids[i], ids[j])));
                }
            }
        }
        Self::assemble(label, ids, Metric::Word(rows))
    }

    /// Disjoint union; points of different summands are infinitely far apart.
    /// Ids are prefixed with the summand index (`"0:x"`).
    pub fn disjoint_union(label: impl Into<String>, parts: &[&MetricSpace]) -> Result<Self> {
        let offsets: Vec<usize> = parts
            .iter()
            .scan(0, |acc, p| {
                let start = *acc;
                *acc += p.len();
                Some(start)
            })
            .collect();
        let n: usize = parts.iter().map(|p| p.len()).sum();
        let mut flat = vec![f64::INFINITY; n * n];
        let mut ids = Vec::with_capacity(n);
        for (k, part) in parts.iter().enumerate() {
            let o = offsets[k];
            for i in 0..part.len() {
                ids.push(format!("{k}:{}", part.ids[i]));
                for j in 0..part.len() {
                    flat[(o + i) * n + o + j] = part.dist(i, j).value();
                }
            }
        }
        Self::assemble(label, ids, Metric::Matrix(flat))
    }

    /// The subspace as a metric space of its own; point ids are preserved.
    pub fn restrict(&self, sub: &Subspace) -> Result<Self> {
        self.check_owner(sub)?;
        let m = sub.members();
        let ids: Vec<String> = m.iter().map(|&i| self.ids[i].clone()).collect();
        let metric = match &self.metric {
            Metric::Lattice(l) => {
                let coords = m.iter().flat_map(|&i| l.coord(i).iter().copied()).collect();
                if l.dim == 0 && m.is_empty() {
                    return Err(Error::InvalidMetric("cannot restrict to an empty subspace".into()));
                }
                Metric::Lattice(Lattice::new(l.dim, coords, None)?)
            }
            Metric::Word(rows) => {
                let n = self.len();
                Metric::Word(m.iter().flat_map(|&i| m.iter().map(move |&j| rows[i * n + j])).collect())
            }
            Metric::Matrix(_) => {
                Metric::Matrix(m.iter().flat_map(|&i| m.iter().map(move |&j| self.dist(i, j).value())).collect())
            }
        };
        let mut out = Self::assemble(format!("{} restricted", self.label), ids, metric)?;
        out.meta = self.meta.clone();
        Ok(out)
    }

    /// Same space with new point ids (same order, same count).
    pub fn with_ids(mut self, ids: Vec<String>) -> Result<Self> {
        if ids.len() != self.len() {
            return Err(Error::Invalid(format!("expected {} ids, got {}", self.len(), ids.len())));
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidMetric(format!("duplicate point id {id:?}")));
            }
        }
        self.ids = ids;
        self.index = index;
        Ok(self)
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Identity of this space, used to reject subspaces of a different parent.
    pub fn space_id(&self) -> u64 {
        self.id
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id_of(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownPoint(id.to_string()))
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.meta
    }

    pub fn set_metadata(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.meta.insert(key.into(), value.into());
    }

    /// Lattice coordinates, when the space is an l1 lattice subset.
    pub fn lattice_coords(&self, index: usize) -> Option<&[i64]> {
        match &self.metric {
            Metric::Lattice(l) => Some(l.coord(index)),
            _ => None,
        }
    }

    pub fn lattice_dim(&self) -> Option<usize> {
        match &self.metric {
            Metric::Lattice(l) => Some(l.dim),
            _ => None,
        }
    }

    /// Distance between two points given by index. Panics on out-of-range indices.
    pub fn dist(&self, a: usize, b: usize) -> ExtDistance {
        match &self.metric {
            Metric::Matrix(m) => ExtDistance::raw(m[a * self.len() + b]),
            Metric::Lattice(l) => ExtDistance::raw(l.l1(a, b) as f64),
            Metric::Word(w) => match w[a * self.len() + b] {
                WORD_INFINITY => ExtDistance::INFINITY,
                v => ExtDistance::raw(v as f64),
            },
        }
    }

    /// Distance between two points given by id.
    pub fn distance(&self, x: &str, y: &str) -> Result<ExtDistance> {
        Ok(self.dist(self.index_of(x)?, self.index_of(y)?))
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, size: self.len() })
        }
    }

    pub fn check_owner(&self, sub: &Subspace) -> Result<()> {
        if sub.space == self.id {
            Ok(())
        } else {
            Err(Error::MismatchedParents)
        }
    }

    /// Points `y` with `d(x, y) < r` (strict) or `d(x, y) <= r` (closed), sorted by index.
    pub fn neighbors_within(&self, x: usize, r: f64, strict: bool) -> Vec<usize> {
        let inside = |d: ExtDistance| if strict { d.lt(r) } else { d.le(r) };
        if let Metric::Lattice(l) = &self.metric {
            if r.is_finite() && l.dim > 0 {
                let k = if strict { (r.ceil() - 1.0).max(-1.0) } else { r.floor() };
                if k < 0.0 {
                    return Vec::new();
                }
                let k = k as u64;
                // (2k+1)^dim bounds the offset count; scan when that is worse
                let box_size = (2 * k + 1).checked_pow(l.dim as u32).unwrap_or(u64::MAX);
                if box_size < 4 * self.len() as u64 {
                    let mut out = Vec::new();
                    l.ball_into(l.coord(x), k, &mut out);
                    out.sort_unstable();
                    return out;
                }
            }
        }
        (0..self.len()).filter(|&y| inside(self.dist(x, y))).collect()
    }

    /// `N_r(Z) = { y : d(y, Z) < r }`, strict.
    pub fn neighborhood(&self, z: &Subspace, r: f64) -> Result<Subspace> {
        self.check_owner(z)?;
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidRadius(r));
        }
        let mut mark = vec![false; self.len()];
        for &p in z.members() {
            for q in self.neighbors_within(p, r, true) {
                mark[q] = true;
            }
        }
        Ok(Subspace::from_sorted(self.id, (0..self.len()).filter(|&i| mark[i]).collect()))
    }

    /// Closed neighborhood `{ y : d(y, Z) <= r }`; `r = 0` gives `Z` itself.
    pub fn closed_neighborhood(&self, z: &Subspace, r: f64) -> Result<Subspace> {
        self.check_owner(z)?;
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::InvalidRadius(r));
        }
        let mut mark = vec![false; self.len()];
        for &p in z.members() {
            for q in self.neighbors_within(p, r, false) {
                mark[q] = true;
            }
        }
        Ok(Subspace::from_sorted(self.id, (0..self.len()).filter(|&i| mark[i]).collect()))
    }

    /// `B_r(x) = { y : d(x, y) < r }`, strict; `r` must be finite and positive.
    pub fn ball(&self, x: usize, r: f64) -> Result<Subspace> {
        self.check_index(x)?;
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidRadius(r));
        }
        Ok(Subspace::from_sorted(self.id, self.neighbors_within(x, r, true)))
    }

    /// Largest closed ball `|{ y : d(x, y) <= r }|` over all centers.
    pub fn growth_bound(&self, r: f64) -> Result<usize> {
        if !(r > 0.0) || r.is_nan() {
            return Err(Error::InvalidRadius(r));
        }
        Ok((0..self.len()).map(|x| self.neighbors_within(x, r, false).len()).max().unwrap_or(0))
    }

    /// `min d(a, b)` over `a in A`, `b in B`; infinite when either is empty.
    pub fn min_set_distance(&self, a: &Subspace, b: &Subspace) -> Result<ExtDistance> {
        self.check_owner(a)?;
        self.check_owner(b)?;
        Ok(self.closest_pair(a, b).map(|(_, _, d)| d).unwrap_or(ExtDistance::INFINITY))
    }

    /// A pair realising the set distance, if both sets are nonempty.
    pub fn closest_pair(&self, a: &Subspace, b: &Subspace) -> Option<(usize, usize, ExtDistance)> {
        let mut best: Option<(usize, usize, ExtDistance)> = None;
        for &x in a.members() {
            for &y in b.members() {
                let d = self.dist(x, y);
                if best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((x, y, d));
                    if d == ExtDistance::ZERO {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Largest distance inside `A`, with a realising pair; zero for sets of size at most one.
    pub fn diameter(&self, a: &Subspace) -> (ExtDistance, Option<(usize, usize)>) {
        if let Metric::Lattice(l) = &self.metric {
            // ℓ¹ diameter is the widest spread of Σ ±x_k over sign patterns
            let mut best = (ExtDistance::ZERO, None);
            for signs in 0..(1usize << l.dim.saturating_sub(1)) {
                let score = |p: usize| -> i64 {
                    l.coord(p).iter().enumerate().map(|(k, &c)| if k > 0 && signs >> (k - 1) & 1 == 1 { -c } else { c }).sum()
                };
                let lo = a.members().iter().copied().min_by_key(|&p| score(p));
                let hi = a.members().iter().copied().max_by_key(|&p| score(p));
                if let (Some(x), Some(y)) = (lo, hi) {
                    let d = self.dist(x, y);
                    if d > best.0 {
                        best = (d, Some((x.min(y), x.max(y))));
                    }
                }
            }
            return best;
        }
        let m = a.members();
        let mut best = (ExtDistance::ZERO, None);
        for (k, &x) in m.iter().enumerate() {
            for &y in &m[k + 1..] {
                let d = self.dist(x, y);
                if d > best.0 {
                    best = (d, Some((x, y)));
                }
            }
        }
        best
    }

    pub fn full(&self) -> Subspace {
        Subspace::from_sorted(self.id, (0..self.len()).collect())
    }

    pub fn empty_subspace(&self) -> Subspace {
        Subspace::from_sorted(self.id, Vec::new())
    }

    /// Subspace from point indices (any order, duplicates dropped).
    pub fn subspace(&self, members: impl IntoIterator<Item = usize>) -> Result<Subspace> {
        let sub = Subspace::new(self.id, members);
        if let Some(&last) = sub.members().last() {
            self.check_index(last)?;
        }
        Ok(sub)
    }

    /// Subspace from point ids.
    pub fn subspace_of_ids<S: AsRef<str>>(&self, ids: impl IntoIterator<Item = S>) -> Result<Subspace> {
        let idx = ids.into_iter().map(|s| self.index_of(s.as_ref())).collect::<Result<Vec<_>>>()?;
        Ok(Subspace::new(self.id, idx))
    }

    pub fn ids_of(&self, sub: &Subspace) -> Vec<String> {
        sub.members().iter().map(|&i| self.ids[i].clone()).collect()
    }
}

pub(crate) fn lattice_id(coords: &[i64]) -> String {
    let inner: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    format!("({})", inner.join(","))
}

fn validate_matrix(n: usize, m: &[f64]) -> Result<()> {
    for i in 0..n {
        if m[i * n + i] != 0.0 {
            return Err(Error::InvalidMetric(format!("d(x,x) = {} at point {i}", m[i * n + i])));
        }
        for j in 0..n {
            let d = m[i * n + j];
            if d.is_nan() || d < 0.0 {
                return Err(Error::InvalidMetric(format!("invalid distance {d} at ({i}, {j})")));
            }
            if d != m[j * n + i] {
                return Err(Error::InvalidMetric(format!("asymmetric at ({i}, {j})")));
            }
            if i != j && d == 0.0 {
                return Err(Error::InvalidMetric(format!("distinct points {i} and {j} at distance 0")));
            }
        }
    }
    let violation = |x: usize, y: usize, z: usize| {
        let via = m[x * n + y] + m[y * n + z];
        m[x * n + z] > via + triangle_slack(via)
    };
    let found = if n <= FULL_TRIANGLE_CHECK_LIMIT {
        (0..n).into_par_iter().find_map_any(|x| {
            for y in 0..n {
                for z in 0..n {
                    if violation(x, y, z) {
                        return Some((x, y, z));
                    }
                }
            }
            None
        })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        (0..TRIANGLE_SAMPLES)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
            .find(|&(x, y, z)| violation(x, y, z))
    };
    match found {
        Some((x, y, z)) => Err(Error::InvalidMetric(format!("triangle inequality fails for ({x}, {y}, {z})"))),
        None => Ok(()),
    }
}

/// A subset of a metric space, stored as sorted point indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    space: u64,
    members: Vec<usize>,
}

impl Subspace {
    pub(crate) fn new(space: u64, members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Subspace { space, members }
    }

    pub(crate) fn from_sorted(space: u64, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Subspace { space, members }
    }

    pub fn space_id(&self) -> u64 {
        self.space
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members.binary_search(&p).is_ok()
    }

    pub fn is_subset(&self, other: &Subspace) -> bool {
        self.members.iter().all(|&p| other.contains(p))
    }

    pub fn union(&self, other: &Subspace) -> Subspace {
        Subspace::new(self.space, self.members.iter().chain(&other.members).copied())
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        Subspace::from_sorted(self.space, self.members.iter().copied().filter(|&p| other.contains(p)).collect())
    }

    pub fn difference(&self, other: &Subspace) -> Subspace {
        Subspace::from_sorted(self.space, self.members.iter().copied().filter(|&p| !other.contains(p)).collect())
    }

    /// Same members, with one point added.
    pub fn with(&self, p: usize) -> Subspace {
        Subspace::new(self.space, self.members.iter().copied().chain([p]))
    }

    pub fn without(&self, p: usize) -> Subspace {
        Subspace::from_sorted(self.space, self.members.iter().copied().filter(|&q| q != p).collect())
    }
}
