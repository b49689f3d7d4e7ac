//! Word-metric balls in finitely generated groups.
//!
//! Balls are explored breadth-first from the identity out to twice the
//! requested radius. Every geodesic between two elements of the radius-`R`
//! ball has length at most `2R`, so the restricted word metric is exact:
//! `d(g, h) = |g^{-1} h|` is always found in the explored set.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::MetricSpace;

pub const DEFAULT_NODE_CAP: usize = 200_000;

/// Environment variable overriding [`DEFAULT_NODE_CAP`].
pub const NODE_CAP_ENV: &str = "COARSEKIT_NODE_CAP";

pub fn node_cap_from_env() -> usize {
    std::env::var(NODE_CAP_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_NODE_CAP)
}

/// Square integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl From<Vec<Vec<i64>>> for IntMatrix {
    fn from(rows: Vec<Vec<i64>>) -> Self {
        IntMatrix { n: rows.len(), entries: rows.into_iter().flatten().collect() }
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.entries.chunks(m.n.max(1)).map(|r| r.to_vec()).collect()
    }
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        IntMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn is_square(&self) -> bool {
        self.entries.len() == self.n * self.n
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        IntMatrix { n, entries }
    }

    /// Inverse over the integers, if it exists.
    pub fn inverse(&self) -> Option<IntMatrix> {
        let n = self.n;
        let mut a: Vec<Vec<Ratio<i128>>> = (0..n)
            .map(|i| {
                let mut row: Vec<Ratio<i128>> = (0..n).map(|j| Ratio::from_integer(self.entries[i * n + j] as i128)).collect();
                row.extend((0..n).map(|j| if i == j { Ratio::one() } else { Ratio::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            let p = a[col][col];
            for v in a[col].iter_mut() {
                *v /= p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col];
                    for c in 0..2 * n {
                        let sub = f * a[col][c];
                        a[r][c] -= sub;
                    }
                }
            }
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in &a {
            for v in &row[n..] {
                if !v.is_integer() {
                    return None;
                }
                entries.push(i64::try_from(v.to_integer()).ok()?);
            }
        }
        Some(IntMatrix { n, entries })
    }
}

/// A generator together with its inverse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixGenerator {
    pub matrix: IntMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<IntMatrix>,
}

/// Generator file for matrix groups: `{"generators": [{"matrix": [[..]], "inverse": [[..]]}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixGeneratorFile {
    pub generators: Vec<MatrixGenerator>,
}

/// A finitely generated group with a symmetric generating set.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupSpec {
    FreeAbelian(usize),
    Free(usize),
    IntegerMatrix(Vec<MatrixGenerator>),
}

impl GroupSpec {
    pub fn name(&self) -> String {
        match self {
            GroupSpec::FreeAbelian(k) => format!("z{k}"),
            GroupSpec::Free(k) => format!("free{k}"),
            GroupSpec::IntegerMatrix(g) => format!("matrix({} generators)", g.len()),
        }
    }

    /// Checks generator shapes and inverses, filling in missing inverses.
    pub fn validated(self) -> Result<Self> {
        match self {
            GroupSpec::IntegerMatrix(gens) => {
                let n = gens.first().map(|g| g.matrix.size()).unwrap_or(0);
                let mut out = Vec::with_capacity(gens.len());
                for (k, g) in gens.into_iter().enumerate() {
                    if !g.matrix.is_square() || g.matrix.size() != n || n == 0 {
                        return Err(Error::InvalidGenerator(format!("generator {k} is not a nonempty {n}x{n} matrix")));
                    }
                    let inverse = match g.inverse {
                        Some(inv) => inv,
                        None => g
                            .matrix
                            .inverse()
                            .ok_or_else(|| Error::InvalidGenerator(format!("generator {k} is not invertible over the integers")))?,
                    };
                    if !inverse.is_square() || inverse.size() != n || g.matrix.mul(&inverse) != IntMatrix::identity(n) {
                        return Err(Error::InvalidGenerator(format!("generator {k}: supplied inverse is wrong")));
                    }
                    out.push(MatrixGenerator { matrix: g.matrix, inverse: Some(inverse) });
                }
                Ok(GroupSpec::IntegerMatrix(out))
            }
            other => Ok(other),
        }
    }
}

/// The integer Heisenberg group, generated by the two elementary upper-triangular 3x3 matrices.
pub fn heisenberg_spec() -> GroupSpec {
    let x = IntMatrix::from(vec![vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    let x_inv = IntMatrix::from(vec![vec![1, -1, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    let y = IntMatrix::from(vec![vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 1]]);
    let y_inv = IntMatrix::from(vec![vec![1, 0, 0], vec![0, 1, -1], vec![0, 0, 1]]);
    GroupSpec::IntegerMatrix(vec![
        MatrixGenerator { matrix: x, inverse: Some(x_inv) },
        MatrixGenerator { matrix: y, inverse: Some(y_inv) },
    ])
}

trait WordGroup {
    type Elem: Clone + Eq + Hash;

    fn identity(&self) -> Self::Elem;
    fn generators(&self) -> Vec<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    fn encode(&self, a: &Self::Elem) -> String;
    fn describe_generators(&self) -> String;
}

struct FreeAbelian(usize);

impl WordGroup for FreeAbelian {
    type Elem = Vec<i64>;

    fn identity(&self) -> Vec<i64> {
        vec![0; self.0]
    }

    fn generators(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for k in 0..self.0 {
            for sign in [1, -1] {
                let mut e = vec![0; self.0];
                e[k] = sign;
                out.push(e);
            }
        }
        out
    }

    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn inverse(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    fn encode(&self, a: &Vec<i64>) -> String {
        crate::metric::lattice_id(a)
    }

    fn describe_generators(&self) -> String {
        format!("standard basis vectors of Z^{} and their negatives", self.0)
    }
}

/// Letters are `±(1..=rank)`; words are kept freely reduced.
struct Free(usize);

impl WordGroup for Free {
    type Elem = Vec<i32>;

    fn identity(&self) -> Vec<i32> {
        Vec::new()
    }

    fn generators(&self) -> Vec<Vec<i32>> {
        (1..=self.0 as i32).flat_map(|k| [vec![k], vec![-k]]).collect()
    }

    fn mul(&self, a: &Vec<i32>, b: &Vec<i32>) -> Vec<i32> {
        let mut out = a.clone();
        for &letter in b {
            if out.last() == Some(&-letter) {
                out.pop();
            } else {
                out.push(letter);
            }
        }
        out
    }

    fn inverse(&self, a: &Vec<i32>) -> Vec<i32> {
        a.iter().rev().map(|x| -x).collect()
    }

    fn encode(&self, a: &Vec<i32>) -> String {
        if a.is_empty() {
            return "e".into();
        }
        a.iter()
            .map(|&l| {
                let c = (b'a' + (l.unsigned_abs() - 1) as u8) as char;
                if l > 0 {
                    c
                } else {
                    c.to_ascii_uppercase()
                }
            })
            .collect()
    }

    fn describe_generators(&self) -> String {
        format!("free basis a.. of rank {} and inverses (uppercase)", self.0)
    }
}

struct MatrixGroup(Vec<MatrixGenerator>);

impl WordGroup for MatrixGroup {
    type Elem = IntMatrix;

    fn identity(&self) -> IntMatrix {
        IntMatrix::identity(self.0[0].matrix.size())
    }

    fn generators(&self) -> Vec<IntMatrix> {
        let id = self.identity();
        let mut out: Vec<IntMatrix> = Vec::new();
        for g in &self.0 {
            for m in [&g.matrix, g.inverse.as_ref().expect("validated")] {
                if *m != id && !out.contains(m) {
                    out.push(m.clone());
                }
            }
        }
        out
    }

    fn mul(&self, a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        a.mul(b)
    }

    fn inverse(&self, a: &IntMatrix) -> IntMatrix {
        a.inverse().expect("group elements are invertible")
    }

    fn encode(&self, a: &IntMatrix) -> String {
        let rows: Vec<String> = a
            .entries
            .chunks(a.n)
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        format!("[{}]", rows.join(";"))
    }

    fn describe_generators(&self) -> String {
        let gens: Vec<String> = self.0.iter().map(|g| self.encode(&g.matrix)).collect();
        format!("{} and inverses", gens.join(" "))
    }
}

fn explore<G: WordGroup>(group: &G, depth: u32, cap: usize) -> Result<(Vec<G::Elem>, HashMap<G::Elem, u32>)> {
    let gens = group.generators();
    let id = group.identity();
    let mut order = vec![id.clone()];
    let mut length = HashMap::from([(id.clone(), 0u32)]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        let d = length[&g];
        if d == depth {
            continue;
        }
        for s in &gens {
            let h = group.mul(&g, s);
            if !length.contains_key(&h) {
                if length.len() >= cap {
                    return Err(Error::BallTooLarge { cap });
                }
                length.insert(h.clone(), d + 1);
                order.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok((order, length))
}

fn ball_of<G: WordGroup>(group: &G, name: &str, radius: u32, cap: usize) -> Result<MetricSpace> {
    let (order, length) = explore(group, 2 * radius, cap)?;
    let ball: Vec<G::Elem> = order.into_iter().filter(|g| length[g] <= radius).collect();
    let inverses: Vec<G::Elem> = ball.iter().map(|g| group.inverse(g)).collect();
    let n = ball.len();
    let mut rows = vec![0u32; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let w = group.mul(&inverses[i], &ball[j]);
            let d = *length.get(&w).expect("geodesics inside the doubled ball");
            rows[i * n + j] = d;
            rows[j * n + i] = d;
        }
    }
    let ids = ball.iter().map(|g| group.encode(g)).collect();
    let mut space = MetricSpace::from_word_lengths(format!("{name} word ball, radius {radius}"), ids, rows)?;
    space.set_metadata("group", name);
    space.set_metadata("generators", group.describe_generators());
    space.set_metadata("radius", radius.to_string());
    Ok(space)
}

/// The word-metric ball of the given radius around the identity.
pub fn cayley_ball(spec: &GroupSpec, radius: u32, node_cap: usize) -> Result<MetricSpace> {
    let name = spec.name();
    match spec.clone().validated()? {
        GroupSpec::FreeAbelian(k) => ball_of(&FreeAbelian(k), &name, radius, node_cap),
        GroupSpec::Free(k) => ball_of(&Free(k), &name, radius, node_cap),
        GroupSpec::IntegerMatrix(gens) => {
            if gens.is_empty() {
                return Err(Error::InvalidGenerator("no generators".into()));
            }
            ball_of(&MatrixGroup(gens), &name, radius, node_cap)
        }
    }
}
