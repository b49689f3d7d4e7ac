use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::matrix::{Coefficient, Matrix};
use super::module::{parse_time, GeometricModule, Site};
use crate::error::{Error, Result};
use crate::metric::{ExtDistance, Subspace};

/// `φ: M → N` as blocks `φ_{xy}: M_y → N_x`, keyed `(x, y)`; zero blocks are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct GeomMorphism<R> {
    source: GeometricModule,
    target: GeometricModule,
    blocks: BTreeMap<(Site, Site), Matrix<R>>,
}

pub type IntMorphism = GeomMorphism<i64>;

fn same_module(a: &GeometricModule, b: &GeometricModule, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::ShapeMismatch(format!("{what}: modules differ")));
    }
    Ok(())
}

impl<R: Coefficient> GeomMorphism<R> {
    pub fn new(source: GeometricModule, target: GeometricModule, blocks: impl IntoIterator<Item = ((Site, Site), Matrix<R>)>) -> Result<Self> {
        if source.space() != target.space() {
            return Err(Error::MismatchedParents);
        }
        let mut map = BTreeMap::new();
        for ((x, y), m) in blocks {
            let shape = (target.rank(x), source.rank(y));
            if shape.0 == 0 || shape.1 == 0 || m.shape() != shape {
                return Err(Error::ShapeMismatch(format!("block {x:?},{y:?} has shape {:?}, expected {shape:?}", m.shape())));
            }
            if !m.is_zero() {
                map.insert((x, y), m);
            }
        }
        Ok(GeomMorphism { source, target, blocks: map })
    }

    pub fn zero(source: GeometricModule, target: GeometricModule) -> Self {
        GeomMorphism { source, target, blocks: BTreeMap::new() }
    }

    pub fn identity(m: &GeometricModule) -> Self {
        let blocks = m.ranks().iter().map(|(&s, &r)| ((s, s), Matrix::identity(r))).collect();
        GeomMorphism { source: m.clone(), target: m.clone(), blocks }
    }

    /// Identity on shared summands from `source` to `target`: an inclusion or projection.
    pub fn canonical(source: &GeometricModule, target: &GeometricModule) -> Result<Self> {
        let blocks = source
            .ranks()
            .iter()
            .filter(|(s, _)| target.rank(**s) > 0)
            .map(|(&s, &r)| {
                if target.rank(s) != r {
                    return Err(Error::ShapeMismatch(format!("rank {r} vs {} at {s:?}", target.rank(s))));
                }
                Ok(((s, s), Matrix::identity(r)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source.clone(), target.clone(), blocks)
    }

    pub fn source(&self) -> &GeometricModule {
        &self.source
    }

    pub fn target(&self) -> &GeometricModule {
        &self.target
    }

    pub fn blocks(&self) -> &BTreeMap<(Site, Site), Matrix<R>> {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The least `R` with `φ_{xy} = 0` whenever `d(x, y) > R`.
    pub fn propagation(&self) -> ExtDistance {
        let space = self.source.space();
        self.blocks.keys().map(|&(x, y)| space.distance(x, y)).max().unwrap_or(ExtDistance::ZERO)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GeomMorphism<R>) -> Result<Self> {
        same_module(&first.target, &self.source, "compose")?;
        let mut by_col: BTreeMap<Site, Vec<(Site, &Matrix<R>)>> = BTreeMap::new();
        for (&(z, x), m) in &self.blocks {
            by_col.entry(x).or_default().push((z, m));
        }
        let mut out: BTreeMap<(Site, Site), Matrix<R>> = BTreeMap::new();
        for (&(x, y), b) in &first.blocks {
            for &(z, a) in by_col.get(&x).into_iter().flatten() {
                let product = a.checked_mul(b)?;
                match out.get_mut(&(z, y)) {
                    Some(acc) => *acc = acc.checked_add(&product)?,
                    None => {
                        out.insert((z, y), product);
                    }
                }
            }
        }
        Self::new(first.source.clone(), self.target.clone(), out)
    }

    fn combine(&self, other: &Self, f: impl Fn(&Matrix<R>, &Matrix<R>) -> Result<Matrix<R>>) -> Result<Self> {
        same_module(&self.source, &other.source, "source")?;
        same_module(&self.target, &other.target, "target")?;
        let keys: BTreeSet<(Site, Site)> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        let blocks = keys
            .into_iter()
            .map(|k| {
                let shape = (self.target.rank(k.0), self.source.rank(k.1));
                let zero = Matrix::zeros(shape.0, shape.1);
                Ok((k, f(self.blocks.get(&k).unwrap_or(&zero), other.blocks.get(&k).unwrap_or(&zero))?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.source.clone(), self.target.clone(), blocks)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, Matrix::checked_add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, Matrix::checked_sub)
    }

    pub fn neg(&self) -> Self {
        GeomMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks: self.blocks.iter().map(|(k, m)| (*k, m.neg())).collect(),
        }
    }

    /// The same blocks between new modules that still carry them.
    pub fn reframe(&self, source: GeometricModule, target: GeometricModule) -> Result<Self> {
        Self::new(source, target, self.blocks.clone())
    }

    /// Target sites carrying a nonzero block.
    pub fn row_sites(&self) -> BTreeSet<Site> {
        self.blocks.keys().map(|k| k.0).collect()
    }

    /// Source sites carrying a nonzero block.
    pub fn col_sites(&self) -> BTreeSet<Site> {
        self.blocks.keys().map(|k| k.1).collect()
    }

    /// Base points of [`row_sites`](Self::row_sites).
    pub fn row_support(&self) -> Subspace {
        self.source.space().base().subspace(self.blocks.keys().map(|k| k.0.point)).expect("sites of the space")
    }

    /// Base points of [`col_sites`](Self::col_sites).
    pub fn col_support(&self) -> Subspace {
        self.source.space().base().subspace(self.blocks.keys().map(|k| k.1.point)).expect("sites of the space")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct BlockEntry {
    row: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    row_time: Option<String>,
    col: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    col_time: Option<String>,
    matrix: Matrix<i64>,
}

#[derive(Serialize, Deserialize)]
struct BlocksDoc {
    blocks: Vec<BlockEntry>,
}

impl IntMorphism {
    pub fn to_json(&self) -> serde_json::Value {
        let space = self.source.space();
        let timed = space.grid().len() > 1;
        let time = |s: Site| timed.then(|| space.time(s).to_string());
        let blocks = self
            .blocks
            .iter()
            .map(|(&(x, y), m)| BlockEntry {
                row: space.base().id_of(x.point).to_string(),
                row_time: time(x),
                col: space.base().id_of(y.point).to_string(),
                col_time: time(y),
                matrix: m.clone(),
            })
            .collect();
        serde_json::to_value(BlocksDoc { blocks }).expect("serializable")
    }

    pub fn from_json(source: GeometricModule, target: GeometricModule, value: serde_json::Value) -> Result<Self> {
        let doc: BlocksDoc = serde_json::from_value(value)?;
        let space = source.space().clone();
        let blocks = doc
            .blocks
            .into_iter()
            .map(|b| {
                let x = space.site_of(&b.row, b.row_time.as_deref().map(parse_time).transpose()?)?;
                let y = space.site_of(&b.col, b.col_time.as_deref().map(parse_time).transpose()?)?;
                Ok(((x, y), b.matrix))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, blocks)
    }
}

/// `M = M_Z ⊕ M_{X∖Z}` with its inclusions and projections.
#[derive(Clone, Debug)]
pub struct SubspaceSplit<R> {
    pub inside: GeometricModule,
    pub outside: GeometricModule,
    pub include_inside: GeomMorphism<R>,
    pub include_outside: GeomMorphism<R>,
    pub project_inside: GeomMorphism<R>,
    pub project_outside: GeomMorphism<R>,
}

pub fn split_by_subspace<R: Coefficient>(m: &GeometricModule, z: &Subspace) -> Result<SubspaceSplit<R>> {
    let inside = m.restrict(z)?;
    let outside = m.filter(|s| !z.contains(s.point));
    Ok(SubspaceSplit {
        include_inside: GeomMorphism::canonical(&inside, m)?,
        include_outside: GeomMorphism::canonical(&outside, m)?,
        project_inside: GeomMorphism::canonical(m, &inside)?,
        project_outside: GeomMorphism::canonical(m, &outside)?,
        inside,
        outside,
    })
}
