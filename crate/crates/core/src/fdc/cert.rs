//! Decomposition certificates and their verifier.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{r_disjoint_witness, MetricSpace, RawId, SpaceDoc, Subspace};

/// How one part `Z_α` splits at a node: `U_α` and `V_α` given by their r-disjoint sub-parts.
#[derive(Clone, Debug, PartialEq)]
pub struct PartSplit {
    pub u: Vec<Subspace>,
    pub v: Vec<Subspace>,
}

impl PartSplit {
    pub fn color(&self, color: Color) -> &[Subspace] {
        match color {
            Color::U => &self.u,
            Color::V => &self.v,
        }
    }

    pub fn color_mut(&mut self, color: Color) -> &mut Vec<Subspace> {
        match color {
            Color::U => &mut self.u,
            Color::V => &mut self.v,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Color {
    U,
    V,
}

impl Color {
    pub fn both() -> [Color; 2] {
        [Color::U, Color::V]
    }

    fn tag(self) -> &'static str {
        match self {
            Color::U => "U",
            Color::V => "V",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitNode {
    pub r: f64,
    pub parts: Vec<PartSplit>,
    pub u_child: Certificate,
    pub v_child: Certificate,
}

impl SplitNode {
    pub fn child(&self, color: Color) -> &Certificate {
        match color {
            Color::U => &self.u_child,
            Color::V => &self.v_child,
        }
    }

    pub fn child_mut(&mut self, color: Color) -> &mut Certificate {
        match color {
            Color::U => &mut self.u_child,
            Color::V => &mut self.v_child,
        }
    }

    /// The family handed to a child: every sub-part of that color, in part order.
    pub fn child_family(&self, color: Color) -> Vec<Subspace> {
        self.parts.iter().flat_map(|p| p.color(color).iter().cloned()).collect()
    }
}

/// A finite-depth witness that a metric family decomposes down to a bounded family.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// Every part has diameter at most `bound`.
    Leaf { bound: f64 },
    Split(Box<SplitNode>),
}

impl Certificate {
    /// Number of split levels on the longest branch.
    pub fn depth(&self) -> usize {
        match self {
            Certificate::Leaf { .. } => 0,
            Certificate::Split(s) => 1 + s.u_child.depth().max(s.v_child.depth()),
        }
    }

    /// Depth of the shallowest leaf.
    pub fn min_depth(&self) -> usize {
        match self {
            Certificate::Leaf { .. } => 0,
            Certificate::Split(s) => 1 + s.u_child.min_depth().min(s.v_child.min_depth()),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Certificate::Leaf { .. } => 1,
            Certificate::Split(s) => 1 + s.u_child.node_count() + s.v_child.node_count(),
        }
    }

    /// The split radii, root first.
    pub fn split_radii(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.visit(&mut |_, node| {
            if let Certificate::Split(s) = node {
                out.push(s.r);
            }
        });
        out
    }

    /// Pre-order traversal with node paths.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&str, &'a Certificate)) {
        fn go<'a>(node: &'a Certificate, path: &mut String, f: &mut impl FnMut(&str, &'a Certificate)) {
            f(path, node);
            if let Certificate::Split(s) = node {
                for color in Color::both() {
                    let len = path.len();
                    path.push('.');
                    path.push_str(color.tag());
                    go(s.child(color), path, f);
                    path.truncate(len);
                }
            }
        }
        go(self, &mut "root".to_string(), f)
    }

    /// The node at a path such as `root.U.V`.
    pub fn node_mut(&mut self, path: &str) -> Option<&mut Certificate> {
        let mut steps = path.split('.');
        if steps.next() != Some("root") {
            return None;
        }
        let mut node = self;
        for step in steps {
            let Certificate::Split(s) = node else { return None };
            node = match step {
                "U" => &mut s.u_child,
                "V" => &mut s.v_child,
                _ => return None,
            };
        }
        Some(node)
    }
}

/// A violated certificate clause.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Clause {
    /// The node lists a different number of part splits than the family has parts.
    PartCountMismatch { expected: usize, found: usize },
    /// `r` is not a positive finite number.
    NonPositiveScale { r: f64 },
    /// `U_α ∪ V_α ≠ Z_α`.
    CoverMismatch { part: usize, missing: Vec<String>, extra: Vec<String> },
    /// Two sub-parts of one color are within distance `r`.
    NotDisjoint { part: usize, color: Color, subparts: (usize, usize), points: (String, String), distance: f64, r: f64 },
    /// A leaf part is wider than the bound.
    DiameterExceeded { part: usize, diameter: f64, bound: f64, points: (String, String) },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub node: String,
    #[serde(flatten)]
    pub clause: Clause,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub accepted: bool,
    pub nodes: usize,
    pub depth: usize,
    /// In pre-order of the failing nodes.
    pub failures: Vec<Failure>,
}

fn check_node(space: &MetricSpace, family: &[Subspace], node: &Certificate, path: &str) -> Vec<Failure> {
    let fail = |clause| Failure { node: path.to_string(), clause };
    let mut failures = Vec::new();
    match node {
        Certificate::Leaf { bound } => {
            for (k, part) in family.iter().enumerate() {
                let (d, pair) = space.diameter(part);
                if !(d.value() <= *bound) {
                    let (a, b) = pair.unwrap_or((part.members()[0], part.members()[0]));
                    failures.push(fail(Clause::DiameterExceeded {
                        part: k,
                        diameter: d.value(),
                        bound: *bound,
                        points: (space.id_of(a).into(), space.id_of(b).into()),
                    }));
                }
            }
        }
        Certificate::Split(s) => {
            if !(s.r.is_finite() && s.r > 0.0) {
                failures.push(fail(Clause::NonPositiveScale { r: s.r }));
            }
            if s.parts.len() != family.len() {
                failures.push(fail(Clause::PartCountMismatch { expected: family.len(), found: s.parts.len() }));
                return failures;
            }
            for (k, (z, split)) in family.iter().zip(&s.parts).enumerate() {
                let mut covered = space.empty_subspace();
                for sub in split.u.iter().chain(&split.v) {
                    covered = covered.union(sub);
                }
                if covered != *z {
                    failures.push(fail(Clause::CoverMismatch {
                        part: k,
                        missing: space.ids_of(&z.difference(&covered)),
                        extra: space.ids_of(&covered.difference(z)),
                    }));
                }
                if s.r.is_finite() && s.r > 0.0 {
                    for color in Color::both() {
                        if let Ok(Some(w)) = r_disjoint_witness(space, split.color(color), s.r) {
                            failures.push(fail(Clause::NotDisjoint {
                                part: k,
                                color,
                                subparts: w.parts,
                                points: (space.id_of(w.points.0).into(), space.id_of(w.points.1).into()),
                                distance: w.distance.value(),
                                r: s.r,
                            }));
                        }
                    }
                }
            }
        }
    }
    failures
}

fn verify_rec(space: &MetricSpace, family: &[Subspace], node: &Certificate, path: String) -> Vec<Failure> {
    let mut failures = check_node(space, family, node, &path);
    if let Certificate::Split(s) = node {
        if s.parts.len() == family.len() {
            let (u, v) = rayon::join(
                || verify_rec(space, &s.child_family(Color::U), &s.u_child, format!("{path}.U")),
                || verify_rec(space, &s.child_family(Color::V), &s.v_child, format!("{path}.V")),
            );
            failures.extend(u);
            failures.extend(v);
        }
    }
    failures
}

/// Checks every split and leaf clause of `cert` against `family`.
pub fn verify_certificate(space: &MetricSpace, family: &[Subspace], cert: &Certificate) -> Result<Verification> {
    for part in family {
        space.check_owner(part)?;
    }
    let mut owned = true;
    cert.visit(&mut |_, node| {
        if let Certificate::Split(s) = node {
            owned &= s.parts.iter().flat_map(|p| p.u.iter().chain(&p.v)).all(|sub| sub.space_id() == space.space_id());
        }
    });
    if !owned {
        return Err(Error::MismatchedParents);
    }
    let failures = verify_rec(space, family, cert, "root".to_string());
    Ok(Verification { accepted: failures.is_empty(), nodes: cert.node_count(), depth: cert.depth(), failures })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum NodeDoc {
    Leaf {
        bound: f64,
    },
    Split {
        r: f64,
        parts: Vec<PartDoc>,
        #[serde(rename = "uChild")]
        u_child: Box<NodeDoc>,
        #[serde(rename = "vChild")]
        v_child: Box<NodeDoc>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PartDoc {
    #[serde(rename = "U")]
    u: Vec<Vec<RawId>>,
    #[serde(rename = "V")]
    v: Vec<Vec<RawId>>,
}

fn ids_doc(space: &MetricSpace, subs: &[Subspace]) -> Vec<Vec<RawId>> {
    subs.iter().map(|s| s.members().iter().map(|&p| RawId::Text(space.id_of(p).to_string())).collect()).collect()
}

fn subs_from_doc(space: &MetricSpace, doc: Vec<Vec<RawId>>) -> Result<Vec<Subspace>> {
    doc.into_iter().map(|ids| space.subspace_of_ids(ids.into_iter().map(RawId::into_string))).collect()
}

impl NodeDoc {
    fn from_cert(space: &MetricSpace, cert: &Certificate) -> NodeDoc {
        match cert {
            Certificate::Leaf { bound } => NodeDoc::Leaf { bound: *bound },
            Certificate::Split(s) => NodeDoc::Split {
                r: s.r,
                parts: s.parts.iter().map(|p| PartDoc { u: ids_doc(space, &p.u), v: ids_doc(space, &p.v) }).collect(),
                u_child: Box::new(NodeDoc::from_cert(space, &s.u_child)),
                v_child: Box::new(NodeDoc::from_cert(space, &s.v_child)),
            },
        }
    }

    fn into_cert(self, space: &MetricSpace) -> Result<Certificate> {
        Ok(match self {
            NodeDoc::Leaf { bound } => Certificate::Leaf { bound },
            NodeDoc::Split { r, parts, u_child, v_child } => Certificate::Split(Box::new(SplitNode {
                r,
                parts: parts
                    .into_iter()
                    .map(|p| Ok(PartSplit { u: subs_from_doc(space, p.u)?, v: subs_from_doc(space, p.v)? }))
                    .collect::<Result<_>>()?,
                u_child: u_child.into_cert(space)?,
                v_child: v_child.into_cert(space)?,
            })),
        })
    }
}

impl Certificate {
    /// The nested `{"kind": "split" | "leaf", …}` form, with point ids of `space`.
    pub fn to_json(&self, space: &MetricSpace) -> serde_json::Value {
        serde_json::to_value(NodeDoc::from_cert(space, self)).expect("certificates always serialize")
    }

    pub fn from_json(space: &MetricSpace, value: serde_json::Value) -> Result<Self> {
        let doc: NodeDoc = serde_json::from_value(value)?;
        doc.into_cert(space)
    }
}

/// A certificate together with its space and root family.
#[derive(Clone, Debug)]
pub struct CertifiedFamily {
    pub space: MetricSpace,
    pub family: Vec<Subspace>,
    pub certificate: Certificate,
}

#[derive(Serialize, Deserialize)]
struct CertifiedDoc {
    space: SpaceDoc,
    family: Vec<Vec<RawId>>,
    certificate: NodeDoc,
}

impl CertifiedFamily {
    /// `{"space": <space>, "family": [[ids]], "certificate": <node>}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CertifiedDoc {
            space: SpaceDoc::from_space(&self.space),
            family: ids_doc(&self.space, &self.family),
            certificate: NodeDoc::from_cert(&self.space, &self.certificate),
        })
        .expect("certificates always serialize")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: CertifiedDoc = serde_json::from_str(text)?;
        let space = doc.space.into_space()?;
        let family = subs_from_doc(&space, doc.family)?;
        let certificate = doc.certificate.into_cert(&space)?;
        Ok(CertifiedFamily { space, family, certificate })
    }

    pub fn verify(&self) -> Result<Verification> {
        verify_certificate(&self.space, &self.family, &self.certificate)
    }
}

/// Graphviz rendering of the certificate tree.
pub fn certificate_dot(cert: &Certificate) -> String {
    let mut out = String::from("digraph certificate {\n  node [shape=box];\n");
    cert.visit(&mut |path, node| {
        let label = match node {
            Certificate::Leaf { bound } => format!("leaf\\nD = {bound}"),
            Certificate::Split(s) => {
                let subparts: usize = s.parts.iter().map(|p| p.u.len() + p.v.len()).sum();
                format!("split r = {}\\n{} parts, {} sub-parts", s.r, s.parts.len(), subparts)
            }
        };
        let _ = writeln!(out, "  \"{path}\" [label=\"{label}\"];");
        if let Some((parent, color)) = path.rsplit_once('.') {
            let _ = writeln!(out, "  \"{parent}\" -> \"{path}\" [label=\"{color}\"];");
        }
    });
    out.push_str("}\n");
    out
}
