//! JSON space format.
//!
//! ```json
//! {"label": "...", "points": ["a", "b"], "metric": {"kind": "matrix", "rows": [[0, "inf"], ["inf", 0]]}}
//! {"label": "...", "metric": {"kind": "l1_lattice", "dim": 2, "radius": 20}}
//! {"label": "...", "points": [...], "metric": {"kind": "word", "rows": [[0, 1], [1, 0]]}}
//! ```
//!
//! Matrix rows are row-major over the `points` order and use the literal
//! `"inf"` for infinite distances. Lattice spaces may list explicit `coords`
//! instead of a `radius`; their `points` are derived and optional.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::distance::ExtDistance;
use super::space::{lattice_id, Metric, MetricSpace};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum RawId {
    Text(String),
    Int(i64),
    Float(f64),
}

impl RawId {
    pub(crate) fn into_string(self) -> String {
        match self {
            RawId::Text(s) => s,
            RawId::Int(v) => v.to_string(),
            RawId::Float(v) => v.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricDoc {
    Matrix {
        rows: Vec<Vec<ExtDistance>>,
    },
    L1Lattice {
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coords: Option<Vec<Vec<i64>>>,
    },
    Word {
        rows: Vec<Vec<ExtDistance>>,
    },
}

/// Serializable form of a [`MetricSpace`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceDoc {
    #[serde(default)]
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<RawId>>,
    pub metric: MetricDoc,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl SpaceDoc {
    pub fn from_space(space: &MetricSpace) -> Self {
        let n = space.len();
        let ids = || Some(space.ids().iter().cloned().map(RawId::Text).collect());
        let (points, metric) = match &space.metric {
            Metric::Lattice(l) => {
                let derived = (0..n).all(|p| space.id_of(p) == lattice_id(l.coord(p)));
                let points = if derived { None } else { ids() };
                match l.radius {
                    Some(r) => (points, MetricDoc::L1Lattice { dim: l.dim, radius: Some(r), coords: None }),
                    None => {
                        let coords = (0..n).map(|p| l.coord(p).to_vec()).collect();
                        (points, MetricDoc::L1Lattice { dim: l.dim, radius: None, coords: Some(coords) })
                    }
                }
            }
            Metric::Word(_) => (ids(), MetricDoc::Word { rows: rows_of(space) }),
            Metric::Matrix(_) => (ids(), MetricDoc::Matrix { rows: rows_of(space) }),
        };
        SpaceDoc { label: space.label().to_string(), points, metric, metadata: space.metadata().clone() }
    }

    pub fn into_space(self) -> Result<MetricSpace> {
        let ids: Option<Vec<String>> = self.points.map(|p| p.into_iter().map(RawId::into_string).collect());
        let mut space = match self.metric {
            MetricDoc::Matrix { rows } => {
                let ids = ids.ok_or_else(|| Error::Invalid("matrix spaces need a \"points\" list".into()))?;
                MetricSpace::from_matrix(self.label.clone(), ids, rows)?
            }
            MetricDoc::Word { rows } => {
                let ids = ids.ok_or_else(|| Error::Invalid("word spaces need a \"points\" list".into()))?;
                let n = ids.len();
                if rows.len() != n {
                    return Err(Error::InvalidMetric(format!("word metric must have {n} rows")));
                }
                let mut flat = Vec::with_capacity(n * n);
                for row in rows {
                    for d in row {
                        let v = d.value();
                        if v.is_infinite() {
                            flat.push(u32::MAX);
                        } else if v.fract() == 0.0 && v < u32::MAX as f64 {
                            flat.push(v as u32);
                        } else {
                            return Err(Error::InvalidMetric(format!("word length {v} is not a natural number")));
                        }
                    }
                }
                MetricSpace::from_word_lengths(self.label.clone(), ids, flat)?
            }
            MetricDoc::L1Lattice { dim, radius, coords } => {
                let mut space = match (radius, coords) {
                    (Some(r), None) => MetricSpace::l1_ball(dim, r)?,
                    (None, Some(c)) => MetricSpace::l1_points(self.label.clone(), dim, c)?,
                    _ => return Err(Error::Invalid("l1_lattice needs exactly one of \"radius\" or \"coords\"".into())),
                };
                if let Some(ids) = ids {
                    if ids.len() != space.len() {
                        return Err(Error::Invalid(format!("expected {} points, got {}", space.len(), ids.len())));
                    }
                    space = space.with_ids(ids)?;
                }
                space
            }
        };
        space.set_label(self.label);
        for (k, v) in self.metadata {
            space.set_metadata(k, v);
        }
        Ok(space)
    }
}

fn rows_of(space: &MetricSpace) -> Vec<Vec<ExtDistance>> {
    (0..space.len()).map(|i| (0..space.len()).map(|j| space.dist(i, j)).collect()).collect()
}

impl MetricSpace {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SpaceDoc::from_space(self)).expect("space documents always serialize")
    }

    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        let doc: SpaceDoc = serde_json::from_value(value)?;
        doc.into_space()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: SpaceDoc = serde_json::from_str(text)?;
        doc.into_space()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_with_infinity_parses() {
        let text = r#"{"label":"two","points":["a","b"],"metric":{"kind":"matrix","rows":[[0,"inf"],["inf",0]]}}"#;
        let x = MetricSpace::from_json_str(text).unwrap();
        assert_eq!(x.distance("a", "b").unwrap(), ExtDistance::INFINITY);
        let again = MetricSpace::from_json(x.to_json()).unwrap();
        assert_eq!(again.distance("a", "b").unwrap(), ExtDistance::INFINITY);
    }

    #[test]
    fn lattice_round_trip_is_compact() {
        let x = MetricSpace::l1_ball(2, 3).unwrap();
        let v = x.to_json();
        assert!(v.get("points").is_none());
        let y = MetricSpace::from_json(v).unwrap();
        assert_eq!(y.len(), 25);
        assert_eq!(y.distance("(1,-2)", "(-1,0)").unwrap().value(), 4.0);
        let interval = MetricSpace::integer_interval(-2, 2).unwrap();
        let back = MetricSpace::from_json(interval.to_json()).unwrap();
        assert_eq!(back.distance("-2", "2").unwrap().value(), 4.0);
    }

    #[test]
    fn invalid_matrix_is_rejected() {
        let text = r#"{"label":"bad","points":[1,2,3],"metric":{"kind":"matrix","rows":[[0,1,5],[1,0,1],[5,1,0]]}}"#;
        assert!(matches!(MetricSpace::from_json_str(text), Err(Error::InvalidMetric(_))));
    }
}
