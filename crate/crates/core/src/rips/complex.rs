//! Rips and relative Rips complexes over finite metric spaces.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::metric::{ExtDistance, MetricFamily, MetricSpace, Subspace};

pub const DEFAULT_DIM_CAP: usize = 8;

/// Sorted vertex indices.
pub type Simplex = Vec<usize>;

/// `2√2 + 1`, the per-dimension inflation factor of path straightening.
pub fn straightening_factor() -> f64 {
    2.0 * std::f64::consts::SQRT_2 + 1.0
}

/// A finite simplicial complex with vertices the points of a metric space.
pub trait Complex: Sync {
    fn base(&self) -> &MetricSpace;

    /// Membership by the defining condition, regardless of `dim_cap`.
    fn is_simplex(&self, vertices: &[usize]) -> bool;

    /// Largest pairwise distance allowed inside a simplex.
    fn max_scale(&self) -> f64;

    fn table(&self) -> &SimplexTable;

    fn dimension(&self) -> usize {
        self.table().dimension
    }

    fn is_capped(&self) -> bool {
        self.table().capped
    }

    fn dim_cap(&self) -> usize {
        self.table().dim_cap
    }

    /// Enumerated simplices of dimension `dim`, in lexicographic order.
    fn simplices(&self, dim: usize) -> &[Simplex] {
        self.table().by_dim.get(dim).map(Vec::as_slice).unwrap_or(&[])
    }

    fn neighbors(&self, v: usize) -> &[usize] {
        &self.table().adjacency[v]
    }

    fn is_vertex(&self, v: usize) -> bool {
        self.table().vertices.contains(&v)
    }

    fn simplex_count(&self) -> usize {
        self.table().by_dim.iter().map(Vec::len).sum()
    }
}

/// Enumerated simplices plus the 1-skeleton.
#[derive(Clone, Debug)]
pub struct SimplexTable {
    vertices: BTreeSet<usize>,
    adjacency: Vec<Vec<usize>>,
    by_dim: Vec<Vec<Simplex>>,
    dimension: usize,
    capped: bool,
    dim_cap: usize,
}

impl SimplexTable {
    fn from_graphs(n: usize, graphs: &[Graph], dim_cap: usize) -> Self {
        let mut vertices = BTreeSet::new();
        let mut adjacency: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut sets: Vec<BTreeSet<Simplex>> = Vec::new();
        let mut largest = 0usize;
        for g in graphs {
            vertices.extend(g.vertices.iter().copied());
            for &v in &g.vertices {
                adjacency[v].extend(g.adj[v].iter().copied());
            }
            largest = largest.max(g.max_clique_size());
            g.enumerate(dim_cap + 1, &mut |s| {
                let d = s.len() - 1;
                if sets.len() <= d {
                    sets.resize_with(d + 1, BTreeSet::new);
                }
                sets[d].insert(s.to_vec());
            });
        }
        let by_dim: Vec<Vec<Simplex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let dimension = largest.saturating_sub(1);
        SimplexTable {
            vertices,
            adjacency: adjacency.into_iter().map(|s| s.into_iter().collect()).collect(),
            by_dim,
            dimension,
            capped: dimension > dim_cap,
            dim_cap,
        }
    }
}

/// Undirected graph on a vertex subset, adjacency sorted.
struct Graph {
    vertices: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    fn threshold(space: &MetricSpace, vertices: &Subspace, s: f64) -> Graph {
        let mut adj = vec![Vec::new(); space.len()];
        for &v in vertices.members() {
            adj[v] = space.neighbors_within(v, s, false).into_iter().filter(|&u| u != v && vertices.contains(u)).collect();
            adj[v].sort_unstable();
        }
        Graph { vertices: vertices.members().to_vec(), adj }
    }

    fn common(a: &[usize], b: &[usize]) -> Vec<usize> {
        let (mut i, mut j, mut out) = (0, 0, Vec::new());
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    /// Size of a largest clique, by Bron–Kerbosch with pivoting.
    fn max_clique_size(&self) -> usize {
        if self.vertices.is_empty() {
            return 0;
        }
        let mut best = 0;
        self.bron_kerbosch(0, self.vertices.clone(), Vec::new(), &mut best);
        best
    }

    fn bron_kerbosch(&self, size: usize, p: Vec<usize>, x: Vec<usize>, best: &mut usize) {
        if p.is_empty() {
            if x.is_empty() {
                *best = (*best).max(size);
            }
            return;
        }
        if size + p.len() <= *best {
            return;
        }
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| Graph::common(&self.adj[u], &p).len())
            .expect("p is nonempty");
        let mut p = p;
        let mut x = x;
        let candidates: Vec<usize> = p.iter().copied().filter(|v| self.adj[pivot].binary_search(v).is_err()).collect();
        for v in candidates {
            let nv = &self.adj[v];
            self.bron_kerbosch(size + 1, Graph::common(&p, nv), Graph::common(&x, nv), best);
            p.retain(|&u| u != v);
            let at = x.binary_search(&v).unwrap_or_else(|e| e);
            x.insert(at, v);
        }
    }

    /// Every clique with at most `max_size` vertices, each exactly once.
    fn enumerate(&self, max_size: usize, emit: &mut impl FnMut(&[usize])) {
        let mut stack = Vec::new();
        for &v in &self.vertices {
            stack.push(v);
            let higher: Vec<usize> = self.adj[v].iter().copied().filter(|&u| u > v).collect();
            self.extend(&mut stack, &higher, max_size, emit);
            stack.pop();
        }
    }

    fn extend(&self, stack: &mut Vec<usize>, candidates: &[usize], max_size: usize, emit: &mut impl FnMut(&[usize])) {
        emit(stack);
        if stack.len() == max_size {
            return;
        }
        for (k, &c) in candidates.iter().enumerate() {
            stack.push(c);
            let next = Graph::common(&candidates[k + 1..], &self.adj[c]);
            self.extend(stack, &next, max_size, emit);
            stack.pop();
        }
    }
}

fn pairwise_within(space: &MetricSpace, vertices: &[usize], s: f64) -> bool {
    vertices.iter().enumerate().all(|(i, &a)| vertices[i + 1..].iter().all(|&b| space.dist(a, b).le(s)))
}

fn check_scale(s: f64) -> Result<()> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::InvalidRadius(s));
    }
    Ok(())
}

/// The Rips complex `P_s(X)`: a simplex on every finite set of pairwise distance at most `s`.
#[derive(Clone, Debug)]
pub struct RipsComplex {
    base: Arc<MetricSpace>,
    scale: f64,
    table: SimplexTable,
}

pub fn build_rips(base: Arc<MetricSpace>, s: f64, dim_cap: usize) -> Result<RipsComplex> {
    check_scale(s)?;
    if dim_cap < 1 {
        return Err(Error::Invalid("dim_cap must be at least 1".into()));
    }
    let graph = Graph::threshold(&base, &base.full(), s);
    let table = SimplexTable::from_graphs(base.len(), &[graph], dim_cap);
    Ok(RipsComplex { base, scale: s, table })
}

impl RipsComplex {
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn base_arc(&self) -> &Arc<MetricSpace> {
        &self.base
    }
}

impl Complex for RipsComplex {
    fn base(&self) -> &MetricSpace {
        &self.base
    }

    fn is_simplex(&self, vertices: &[usize]) -> bool {
        !vertices.is_empty() && vertices.iter().all(|&v| v < self.base.len()) && pairwise_within(&self.base, vertices, self.scale)
    }

    fn max_scale(&self) -> f64 {
        self.scale
    }

    fn table(&self) -> &SimplexTable {
        &self.table
    }
}

/// `dim P_s(X)` without enumerating simplices.
pub fn rips_dimension(space: &MetricSpace, s: f64) -> Result<usize> {
    check_scale(s)?;
    Ok(Graph::threshold(space, &space.full(), s).max_clique_size().saturating_sub(1))
}

/// The relative Rips complex `P_{s,s'}(Z, W)`.
#[derive(Clone, Debug)]
pub struct RelativeRipsComplex {
    base: Arc<MetricSpace>,
    z: Subspace,
    family: Vec<Subspace>,
    inner: f64,
    outer: f64,
    table: SimplexTable,
}

pub fn build_relative_rips(
    base: Arc<MetricSpace>,
    z: &Subspace,
    family: &MetricFamily,
    s: f64,
    s_prime: f64,
    dim_cap: usize,
) -> Result<RelativeRipsComplex> {
    check_scale(s)?;
    check_scale(s_prime)?;
    if s > s_prime {
        return Err(Error::InvalidScales(format!("need s <= s', got s = {s}, s' = {s_prime}")));
    }
    if dim_cap < 1 {
        return Err(Error::Invalid("dim_cap must be at least 1".into()));
    }
    base.check_owner(z)?;
    if family.space_id() != base.space_id() {
        return Err(Error::MismatchedParents);
    }
    let mut graphs = vec![Graph::threshold(&base, z, s)];
    graphs.extend(family.parts().iter().map(|w| Graph::threshold(&base, w, s_prime)));
    let table = SimplexTable::from_graphs(base.len(), &graphs, dim_cap);
    Ok(RelativeRipsComplex { base, z: z.clone(), family: family.parts().to_vec(), inner: s, outer: s_prime, table })
}

impl RelativeRipsComplex {
    pub fn scales(&self) -> (f64, f64) {
        (self.inner, self.outer)
    }

    pub fn z(&self) -> &Subspace {
        &self.z
    }

    pub fn family(&self) -> &[Subspace] {
        &self.family
    }

    /// Index of a family member containing every vertex, if any.
    pub fn containing_member(&self, vertices: &[usize]) -> Option<usize> {
        self.family.iter().position(|w| vertices.iter().all(|&v| w.contains(v)))
    }
}

impl Complex for RelativeRipsComplex {
    fn base(&self) -> &MetricSpace {
        &self.base
    }

    fn is_simplex(&self, vertices: &[usize]) -> bool {
        if vertices.is_empty() || vertices.iter().any(|&v| v >= self.base.len()) {
            return false;
        }
        let in_z = vertices.iter().all(|&v| self.z.contains(v)) && pairwise_within(&self.base, vertices, self.inner);
        in_z || self.family.iter().any(|w| {
            vertices.iter().all(|&v| w.contains(v)) && pairwise_within(&self.base, vertices, self.outer)
        })
    }

    fn max_scale(&self) -> f64 {
        self.outer
    }

    fn table(&self) -> &SimplexTable {
        &self.table
    }
}

/// `C(s, X) = (2√2 + 1)^(N - 1)`, and `1` for zero-dimensional complexes.
pub fn rips_constant<K: Complex + ?Sized>(complex: &K) -> Result<f64> {
    if complex.is_capped() {
        return Err(Error::DimensionUncertain(complex.dim_cap()));
    }
    Ok(match complex.dimension() {
        0 => 1.0,
        n => straightening_factor().powi(n as i32 - 1),
    })
}

/// Edge count of a shortest 1-skeleton path; infinite across components.
pub fn skeleton_distance<K: Complex + ?Sized>(complex: &K, x: usize, y: usize) -> Result<ExtDistance> {
    for v in [x, y] {
        complex.base().check_index(v)?;
        if !complex.is_vertex(v) {
            return Err(Error::UnknownPoint(format!("{} is not a vertex of the complex", complex.base().id_of(v))));
        }
    }
    Ok(skeleton_path(complex, x, y).map_or(ExtDistance::INFINITY, |p| ExtDistance::raw((p.len() - 1) as f64)))
}

/// A shortest 1-skeleton path from `x` to `y`, ties broken towards smaller vertices.
pub fn skeleton_path<K: Complex + ?Sized>(complex: &K, x: usize, y: usize) -> Option<Vec<usize>> {
    let n = complex.base().len();
    let mut parent = vec![usize::MAX; n];
    parent[x] = x;
    let mut queue = VecDeque::from([x]);
    while let Some(v) = queue.pop_front() {
        if v == y {
            let mut path = vec![y];
            let mut cur = y;
            while cur != x {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &u in complex.neighbors(v) {
            if parent[u] == usize::MAX {
                parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    None
}

fn simplices_json<K: Complex + ?Sized>(complex: &K) -> Value {
    let space = complex.base();
    let by_dim: Vec<Vec<Vec<&str>>> = (0..=complex.dimension().min(complex.dim_cap()))
        .map(|d| complex.simplices(d).iter().map(|s| s.iter().map(|&v| space.id_of(v)).collect()).collect())
        .collect();
    json!(by_dim)
}

impl RipsComplex {
    /// `{"label", "scale", "dimCap", "dimension", "capped", "simplices": [[[ids]] by dimension]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "label": self.base.label(),
            "scale": self.scale,
            "dimCap": self.dim_cap(),
            "dimension": self.dimension(),
            "capped": self.is_capped(),
            "simplices": simplices_json(self),
        })
    }
}

impl RelativeRipsComplex {
    pub fn to_json(&self) -> Value {
        json!({
            "label": self.base.label(),
            "scale": self.inner,
            "outerScale": self.outer,
            "dimCap": self.dim_cap(),
            "dimension": self.dimension(),
            "capped": self.is_capped(),
            "simplices": simplices_json(self),
        })
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering of the 1-skeleton.
pub fn skeleton_dot<K: Complex + ?Sized>(complex: &K, name: &str) -> String {
    let space = complex.base();
    let mut out = format!("graph {} {{\n", dot_quote(name));
    for &v in &complex.table().vertices {
        let _ = writeln!(out, "  {};", dot_quote(space.id_of(v)));
    }
    for e in complex.simplices(1) {
        let _ = writeln!(out, "  {} -- {};", dot_quote(space.id_of(e[0])), dot_quote(space.id_of(e[1])));
    }
    out.push_str("}\n");
    out
}
