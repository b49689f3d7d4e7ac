use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{ExtDistance, MetricSpace, Subspace};

/// `X × T` for a finite grid `T ⊂ [0, 1)`; a bare `X` is the grid `{0}`.
#[derive(Clone, Debug)]
pub struct ModuleSpace {
    base: Arc<MetricSpace>,
    grid: Vec<Ratio<i64>>,
}

impl PartialEq for ModuleSpace {
    fn eq(&self, other: &Self) -> bool {
        self.base.space_id() == other.base.space_id() && self.grid == other.grid
    }
}

impl ModuleSpace {
    pub fn new(base: Arc<MetricSpace>) -> Arc<Self> {
        Arc::new(ModuleSpace { base, grid: vec![Ratio::zero()] })
    }

    pub fn with_grid(base: Arc<MetricSpace>, mut grid: Vec<Ratio<i64>>) -> Result<Arc<Self>> {
        grid.sort();
        grid.dedup();
        if grid.is_empty() || grid.iter().any(|t| *t < Ratio::zero() || *t >= Ratio::from_integer(1)) {
            return Err(Error::Invalid("time grid must be a nonempty subset of [0, 1)".into()));
        }
        Ok(Arc::new(ModuleSpace { base, grid }))
    }

    /// The grid `{0, 1/n, …, (n−1)/n}`.
    pub fn uniform(base: Arc<MetricSpace>, n: i64) -> Result<Arc<Self>> {
        Self::with_grid(base, (0..n.max(1)).map(|k| Ratio::new(k, n.max(1))).collect())
    }

    pub fn base(&self) -> &Arc<MetricSpace> {
        &self.base
    }

    pub fn grid(&self) -> &[Ratio<i64>] {
        &self.grid
    }

    pub fn time(&self, site: Site) -> Ratio<i64> {
        self.grid[site.time]
    }

    pub fn time_f64(&self, site: Site) -> f64 {
        self.grid[site.time].to_f64().unwrap_or(0.0)
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.base.len()).flat_map(move |point| (0..self.grid.len()).map(move |time| Site { point, time }))
    }

    /// `d(x, y) + |t − s|`.
    pub fn distance(&self, a: Site, b: Site) -> ExtDistance {
        let dt = (self.grid[a.time] - self.grid[b.time]).abs().to_f64().unwrap_or(0.0);
        self.base.dist(a.point, b.point) + ExtDistance::new(dt).expect("finite gap")
    }

    pub fn site_of(&self, id: &str, time: Option<Ratio<i64>>) -> Result<Site> {
        let point = self.base.index_of(id)?;
        let time = match time {
            None => 0,
            Some(t) => self.grid.iter().position(|g| *g == t).ok_or_else(|| Error::Invalid(format!("time {t} is not on the grid")))?,
        };
        Ok(Site { point, time })
    }
}

/// A point of `X × T`; `time` indexes the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site {
    pub point: usize,
    pub time: usize,
}

impl Site {
    pub fn at(point: usize) -> Site {
        Site { point, time: 0 }
    }
}

/// Free modules of finite rank placed at finitely many sites.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricModule {
    space: Arc<ModuleSpace>,
    ranks: BTreeMap<Site, usize>,
}

#[derive(Serialize, Deserialize)]
struct SupportDoc {
    support: Vec<SupportEntry>,
}

#[derive(Serialize, Deserialize)]
struct SupportEntry {
    point: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    time: Option<String>,
    rank: usize,
}

pub(crate) fn parse_time(text: &str) -> Result<Ratio<i64>> {
    text.parse().map_err(|_| Error::Invalid(format!("bad time {text:?}")))
}

impl GeometricModule {
    /// Zero ranks are dropped.
    pub fn new(space: Arc<ModuleSpace>, ranks: impl IntoIterator<Item = (Site, usize)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (site, rank) in ranks {
            space.base.check_index(site.point)?;
            if site.time >= space.grid.len() {
                return Err(Error::IndexOutOfRange { index: site.time, size: space.grid.len() });
            }
            if rank > 0 {
                map.insert(site, rank);
            }
        }
        Ok(GeometricModule { space, ranks: map })
    }

    pub fn zero(space: Arc<ModuleSpace>) -> Self {
        GeometricModule { space, ranks: BTreeMap::new() }
    }

    pub fn space(&self) -> &Arc<ModuleSpace> {
        &self.space
    }

    pub fn rank(&self, site: Site) -> usize {
        self.ranks.get(&site).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<Site, usize> {
        &self.ranks
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Base points carrying a nonzero summand.
    pub fn support(&self) -> Subspace {
        self.space.base.subspace(self.ranks.keys().map(|s| s.point)).expect("sites of the space")
    }

    /// `M(Y)`: the summands over `Y × T`.
    pub fn restrict(&self, y: &Subspace) -> Result<Self> {
        self.space.base.check_owner(y)?;
        Ok(self.filter(|s| y.contains(s.point)))
    }

    pub(crate) fn filter(&self, keep: impl Fn(Site) -> bool) -> Self {
        GeometricModule { space: self.space.clone(), ranks: self.ranks.iter().filter(|(s, _)| keep(**s)).map(|(s, r)| (*s, *r)).collect() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let timed = self.space.grid.len() > 1;
        let support = self
            .ranks
            .iter()
            .map(|(s, &rank)| SupportEntry {
                point: self.space.base.id_of(s.point).to_string(),
                time: timed.then(|| self.space.time(*s).to_string()),
                rank,
            })
            .collect();
        serde_json::to_value(SupportDoc { support }).expect("serializable")
    }

    pub fn from_json(space: Arc<ModuleSpace>, value: serde_json::Value) -> Result<Self> {
        let doc: SupportDoc = serde_json::from_value(value)?;
        let entries = doc
            .support
            .into_iter()
            .map(|e| {
                let time = e.time.as_deref().map(parse_time).transpose()?;
                Ok((space.site_of(&e.point, time)?, e.rank))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, entries)
    }
}
