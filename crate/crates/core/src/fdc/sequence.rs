//! Decomposed sequences, their Rips complexes and covers.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{MetricSpace, RawId, SpaceDoc, Subspace};
use crate::rips::{build_rips, Complex, RipsComplex};

/// One level `Z^r = ∪_α Z^r_α`.
#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    z: Subspace,
    parts: Vec<Subspace>,
}

impl Level {
    /// `Z^r` is the union of the parts.
    pub fn new(space: &MetricSpace, parts: Vec<Subspace>) -> Result<Self> {
        let mut z = space.empty_subspace();
        for p in &parts {
            space.check_owner(p)?;
            z = z.union(p);
        }
        Ok(Level { z, parts })
    }

    pub fn z(&self) -> &Subspace {
        &self.z
    }

    pub fn parts(&self) -> &[Subspace] {
        &self.parts
    }
}

/// Levels `r = 1..=R` of indexed covers of subspaces of one ambient space.
#[derive(Clone, Debug)]
pub struct DecomposedSequence {
    space: Arc<MetricSpace>,
    levels: Vec<Level>,
}

impl DecomposedSequence {
    pub fn new(space: Arc<MetricSpace>, levels: Vec<Vec<Subspace>>) -> Result<Self> {
        let levels = levels.into_iter().map(|parts| Level::new(&space, parts)).collect::<Result<_>>()?;
        Ok(DecomposedSequence { space, levels })
    }

    pub fn space(&self) -> &Arc<MetricSpace> {
        &self.space
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// `|A_r|` per level.
    pub fn index_counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.parts.len()).collect()
    }
}

fn check_schedule(schedule: &[f64], levels: usize) -> Result<()> {
    if schedule.len() < levels {
        return Err(Error::InvalidScales(format!("{levels} levels but {} scales", schedule.len())));
    }
    if let Some(s) = schedule.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(Error::InvalidRadius(*s));
    }
    if let Some(k) = schedule.windows(2).position(|w| w[1] < w[0]) {
        return Err(Error::InvalidScales(format!("scales must be nondecreasing: s_{} = {} > s_{} = {}", k + 1, schedule[k], k + 2, schedule[k + 1])));
    }
    Ok(())
}

/// One piece `P_{s_r}(Z^r_α)`, over its own copy of the points.
#[derive(Clone, Debug)]
pub struct Piece {
    /// 1-based level.
    pub level: usize,
    pub part: usize,
    /// Point `k` of the piece is `members[k]` of the ambient space.
    pub members: Vec<usize>,
    pub complex: RipsComplex,
}

/// `P_s(Z) = ∐_r ∐_α P_{s_r}(Z^r_α)`.
#[derive(Clone, Debug)]
pub struct SequenceRips {
    pub pieces: Vec<Piece>,
    /// All pieces side by side with ids `x@r.α`; distinct pieces are infinitely far apart.
    pub tagged: MetricSpace,
}

impl SequenceRips {
    /// Connected components over all pieces.
    pub fn component_count(&self) -> usize {
        self.pieces
            .iter()
            .map(|p| {
                let n = p.members.len();
                let mut seen = vec![false; n];
                let mut count = 0;
                for start in 0..n {
                    if seen[start] {
                        continue;
                    }
                    count += 1;
                    seen[start] = true;
                    let mut stack = vec![start];
                    while let Some(v) = stack.pop() {
                        for &u in p.complex.neighbors(v) {
                            if !seen[u] {
                                seen[u] = true;
                                stack.push(u);
                            }
                        }
                    }
                }
                count
            })
            .sum()
    }

    pub fn simplex_count(&self) -> usize {
        self.pieces.iter().map(|p| p.complex.simplex_count()).sum()
    }
}

pub fn build_sequence_rips(z: &DecomposedSequence, schedule: &[f64], dim_cap: usize) -> Result<SequenceRips> {
    check_schedule(schedule, z.levels.len())?;
    let space = &z.space;
    let mut pieces = Vec::new();
    let mut restricted = Vec::new();
    let mut tags = Vec::new();
    for (r, level) in z.levels.iter().enumerate() {
        for (a, part) in level.parts.iter().enumerate() {
            let sub = space.restrict(part)?;
            tags.extend(part.members().iter().map(|&p| format!("{}@{}.{}", space.id_of(p), r + 1, a)));
            let complex = build_rips(Arc::new(sub.clone()), schedule[r], dim_cap)?;
            restricted.push(sub);
            pieces.push(Piece { level: r + 1, part: a, members: part.members().to_vec(), complex });
        }
    }
    let refs: Vec<&MetricSpace> = restricted.iter().collect();
    let tagged = MetricSpace::disjoint_union(format!("{} sequence", space.label()), &refs)?.with_ids(tags)?;
    Ok(SequenceRips { pieces, tagged })
}

/// `Z = U ∪ V` level by level and index by index.
#[derive(Clone, Debug)]
pub struct SequenceCover {
    z: DecomposedSequence,
    u: Vec<Vec<Subspace>>,
    v: Vec<Vec<Subspace>>,
}

impl SequenceCover {
    /// `u[r][α]` and `v[r][α]` must lie in `Z^r_α`; exactness is what [`check_cover`] tests.
    pub fn new(z: DecomposedSequence, u: Vec<Vec<Subspace>>, v: Vec<Vec<Subspace>>) -> Result<Self> {
        let shape = z.index_counts();
        for (name, side) in [("U", &u), ("V", &v)] {
            let got: Vec<usize> = side.iter().map(Vec::len).collect();
            if got != shape {
                return Err(Error::ShapeMismatch(format!("{name} has index counts {got:?}, Z has {shape:?}")));
            }
            for (r, level) in side.iter().enumerate() {
                for (a, s) in level.iter().enumerate() {
                    z.space.check_owner(s)?;
                    if !s.is_subset(&z.levels[r].parts[a]) {
                        return Err(Error::Invalid(format!("{name}^{}_{a} is not contained in Z^{}_{a}", r + 1, r + 1)));
                    }
                }
            }
        }
        Ok(SequenceCover { z, u, v })
    }

    pub fn z(&self) -> &DecomposedSequence {
        &self.z
    }

    pub fn u(&self, level: usize, part: usize) -> &Subspace {
        &self.u[level][part]
    }

    pub fn v(&self, level: usize, part: usize) -> &Subspace {
        &self.v[level][part]
    }

    /// `U^r_α ∪ V^r_α = Z^r_α` everywhere.
    pub fn is_exact(&self) -> bool {
        self.z.levels.iter().enumerate().all(|(r, l)| l.parts.iter().enumerate().all(|(a, z)| self.u[r][a].union(&self.v[r][a]) == *z))
    }

    /// Removes `point` from both colors of one index; `level` is zero-based.
    pub fn uncover(&mut self, level: usize, part: usize, point: usize) {
        self.u[level][part] = self.u[level][part].without(point);
        self.v[level][part] = self.v[level][part].without(point);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrphanWitness {
    pub level: usize,
    pub part: usize,
    pub simplex: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverCheck {
    pub covered: bool,
    pub simplices_checked: usize,
    pub witness: Option<OrphanWitness>,
}

/// Checks `N_1(P_s(U)) ∪ N_1(P_s(V)) = P_s(Z)` through vertex witnesses.
///
/// A simplex of `P_{s_r}(Z^r_α)` is covered when one of its vertices lies in
/// `U^r_α` or `V^r_α`: that vertex is a 0-simplex of `P_s(U)` or `P_s(V)` whose
/// closed 1-neighborhood contains the simplex. The witness on failure is the
/// first uncovered simplex of least dimension.
pub fn check_cover(cover: &SequenceCover, schedule: &[f64], dim_cap: usize) -> Result<CoverCheck> {
    let seq = build_sequence_rips(&cover.z, schedule, dim_cap)?;
    let space = &cover.z.space;
    let mut checked = 0;
    let mut witness: Option<(usize, OrphanWitness)> = None;
    for piece in &seq.pieces {
        let (u, v) = (&cover.u[piece.level - 1][piece.part], &cover.v[piece.level - 1][piece.part]);
        let covered: Vec<bool> = piece.members.iter().map(|&p| u.contains(p) || v.contains(p)).collect();
        for d in 0..=piece.complex.dim_cap().min(piece.complex.dimension()) {
            for simplex in piece.complex.simplices(d) {
                checked += 1;
                if !simplex.iter().any(|&k| covered[k]) && witness.as_ref().is_none_or(|(wd, _)| d < *wd) {
                    witness = Some((
                        d,
                        OrphanWitness {
                            level: piece.level,
                            part: piece.part,
                            simplex: simplex.iter().map(|&k| space.id_of(piece.members[k]).to_string()).collect(),
                        },
                    ));
                }
            }
        }
    }
    Ok(CoverCheck { covered: witness.is_none(), simplices_checked: checked, witness: witness.map(|w| w.1) })
}

/// A cover whose colors come with r-disjoint refinements `U^r_α = ⊔_i U^r_{αi}`.
#[derive(Clone, Debug)]
pub struct RefinedCover {
    cover: SequenceCover,
    u_parts: Vec<Vec<Vec<Subspace>>>,
    v_parts: Vec<Vec<Vec<Subspace>>>,
}

impl RefinedCover {
    /// Sub-parts must be pairwise disjoint with union the color they refine.
    pub fn new(cover: SequenceCover, u_parts: Vec<Vec<Vec<Subspace>>>, v_parts: Vec<Vec<Vec<Subspace>>>) -> Result<Self> {
        for (name, parts, side) in [("U", &u_parts, &cover.u), ("V", &v_parts, &cover.v)] {
            if parts.len() != side.len() || parts.iter().zip(side).any(|(p, s)| p.len() != s.len()) {
                return Err(Error::ShapeMismatch(format!("{name} refinement does not match the cover")));
            }
            for (r, level) in parts.iter().enumerate() {
                for (a, subs) in level.iter().enumerate() {
                    let total: usize = subs.iter().map(Subspace::len).sum();
                    let mut union = cover.z.space.empty_subspace();
                    for s in subs {
                        cover.z.space.check_owner(s)?;
                        union = union.union(s);
                    }
                    if union != side[r][a] || total != union.len() {
                        return Err(Error::Invalid(format!("{name}^{}_{a} sub-parts do not partition it", r + 1)));
                    }
                }
            }
        }
        Ok(RefinedCover { cover, u_parts, v_parts })
    }

    /// Each color as its own single sub-part.
    pub fn trivial(cover: SequenceCover) -> Self {
        let wrap = |side: &Vec<Vec<Subspace>>| -> Vec<Vec<Vec<Subspace>>> {
            side.iter().map(|l| l.iter().map(|s| if s.is_empty() { vec![] } else { vec![s.clone()] }).collect()).collect()
        };
        let (u_parts, v_parts) = (wrap(&cover.u), wrap(&cover.v));
        RefinedCover { cover, u_parts, v_parts }
    }

    pub fn cover(&self) -> &SequenceCover {
        &self.cover
    }
}

/// `𝕎^r_{T,α}`: the nonempty sets `N_T(U^r_{αi}) ∩ N_T(V^r_{αj}) ∩ Z^r_α`.
#[derive(Clone, Debug)]
pub struct IntersectionFamily {
    pub level: usize,
    pub part: usize,
    /// `(i, j, set)` for each nonempty intersection.
    pub members: Vec<(usize, usize, Subspace)>,
    pub omitted_empty: usize,
}

pub fn intersection_families(refined: &RefinedCover, t_schedule: &[f64]) -> Result<Vec<IntersectionFamily>> {
    let z = &refined.cover.z;
    if t_schedule.len() < z.levels.len() {
        return Err(Error::InvalidScales(format!("{} levels but {} values of T", z.levels.len(), t_schedule.len())));
    }
    let space = &z.space;
    let mut out = Vec::new();
    for (r, level) in z.levels.iter().enumerate() {
        let t = t_schedule[r];
        for (a, za) in level.parts.iter().enumerate() {
            let hoods = |subs: &[Subspace]| -> Result<Vec<Subspace>> { subs.iter().map(|s| space.neighborhood(s, t)).collect() };
            let (nu, nv) = (hoods(&refined.u_parts[r][a])?, hoods(&refined.v_parts[r][a])?);
            let mut members = Vec::new();
            let mut omitted_empty = 0;
            for (i, a_i) in nu.iter().enumerate() {
                for (j, b_j) in nv.iter().enumerate() {
                    let w = a_i.intersection(b_j).intersection(za);
                    if w.is_empty() {
                        omitted_empty += 1;
                    } else {
                        members.push((i, j, w));
                    }
                }
            }
            out.push(IntersectionFamily { level: r + 1, part: a, members, omitted_empty });
        }
    }
    Ok(out)
}

/// Per-level check of `f_r > (T_r + 1)·q_r·C_r` at a finite truncation.
pub fn refinement_inequality(f: &[f64], q: &[f64], c: &[f64], t: &[f64]) -> Result<Vec<bool>> {
    let n = f.len();
    if q.len() != n || c.len() != n || t.len() != n {
        return Err(Error::ShapeMismatch("schedules must have equal length".into()));
    }
    Ok((0..n).map(|r| f[r] > (t[r] + 1.0) * q[r] * c[r]).collect())
}

#[derive(Serialize, Deserialize)]
struct CoverPartDoc {
    #[serde(rename = "Z")]
    z: Vec<RawId>,
    #[serde(rename = "U")]
    u: Vec<RawId>,
    #[serde(rename = "V")]
    v: Vec<RawId>,
    #[serde(rename = "Uparts", default, skip_serializing_if = "Option::is_none")]
    u_parts: Option<Vec<Vec<RawId>>>,
    #[serde(rename = "Vparts", default, skip_serializing_if = "Option::is_none")]
    v_parts: Option<Vec<Vec<RawId>>>,
}

/// `{"space": <space>, "levels": [[{"Z": [ids], "U": [ids], "V": [ids], "Uparts"?: [[ids]], "Vparts"?: [[ids]]}]]}`.
#[derive(Serialize, Deserialize)]
struct CoverDoc {
    space: SpaceDoc,
    levels: Vec<Vec<CoverPartDoc>>,
}

fn sub_of(space: &MetricSpace, ids: Vec<RawId>) -> Result<Subspace> {
    space.subspace_of_ids(ids.into_iter().map(RawId::into_string))
}

fn ids_of(space: &MetricSpace, s: &Subspace) -> Vec<RawId> {
    s.members().iter().map(|&p| RawId::Text(space.id_of(p).to_string())).collect()
}

impl RefinedCover {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: CoverDoc = serde_json::from_str(text)?;
        let space = Arc::new(doc.space.into_space()?);
        let (mut zs, mut us, mut vs, mut ups, mut vps) = (vec![], vec![], vec![], vec![], vec![]);
        for level in doc.levels {
            let (mut z, mut u, mut v, mut up, mut vp) = (vec![], vec![], vec![], vec![], vec![]);
            for part in level {
                let (zs_, us_, vs_) = (sub_of(&space, part.z)?, sub_of(&space, part.u)?, sub_of(&space, part.v)?);
                let refine = |given: Option<Vec<Vec<RawId>>>, whole: &Subspace| -> Result<Vec<Subspace>> {
                    match given {
                        Some(list) => list.into_iter().map(|ids| sub_of(&space, ids)).collect(),
                        None if whole.is_empty() => Ok(vec![]),
                        None => Ok(vec![whole.clone()]),
                    }
                };
                up.push(refine(part.u_parts, &us_)?);
                vp.push(refine(part.v_parts, &vs_)?);
                z.push(zs_);
                u.push(us_);
                v.push(vs_);
            }
            zs.push(z);
            us.push(u);
            vs.push(v);
            ups.push(up);
            vps.push(vp);
        }
        let cover = SequenceCover::new(DecomposedSequence::new(space, zs)?, us, vs)?;
        RefinedCover::new(cover, ups, vps)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let z = &self.cover.z;
        let space = &z.space;
        let levels = z
            .levels
            .iter()
            .enumerate()
            .map(|(r, l)| {
                l.parts
                    .iter()
                    .enumerate()
                    .map(|(a, za)| CoverPartDoc {
                        z: ids_of(space, za),
                        u: ids_of(space, &self.cover.u[r][a]),
                        v: ids_of(space, &self.cover.v[r][a]),
                        u_parts: Some(self.u_parts[r][a].iter().map(|s| ids_of(space, s)).collect()),
                        v_parts: Some(self.v_parts[r][a].iter().map(|s| ids_of(space, s)).collect()),
                    })
                    .collect()
            })
            .collect();
        serde_json::to_value(CoverDoc { space: SpaceDoc::from_space(space), levels }).expect("covers always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval_sequence(levels: usize) -> DecomposedSequence {
        let x = Arc::new(MetricSpace::integer_interval(0, 29).unwrap());
        let lv = (1..=levels)
            .map(|r| {
                let w = 30 / (r + 1);
                (0..=r).map(|k| x.subspace((k * w..((k + 1) * w).min(30)).collect::<Vec<_>>()).unwrap()).collect()
            })
            .collect();
        DecomposedSequence::new(x, lv).unwrap()
    }

    fn halves(z: &DecomposedSequence) -> SequenceCover {
        let (mut u, mut v) = (vec![], vec![]);
        for level in z.levels() {
            let (mut lu, mut lv) = (vec![], vec![]);
            for p in level.parts() {
                let m = p.members();
                let mid = m.len() / 2;
                lu.push(z.space().subspace(m[..=mid].to_vec()).unwrap());
                lv.push(z.space().subspace(m[mid..].to_vec()).unwrap());
            }
            u.push(lu);
            v.push(lv);
        }
        SequenceCover::new(z.clone(), u, v).unwrap()
    }

    #[test]
    fn components_count_index_sets() {
        let z = interval_sequence(3);
        let seq = build_sequence_rips(&z, &[1.0, 2.0, 3.0], 4).unwrap();
        assert_eq!(seq.component_count(), z.index_counts().iter().sum::<usize>());
        assert_eq!(seq.component_count(), 2 + 3 + 4);
        assert!(build_sequence_rips(&z, &[2.0, 1.0, 3.0], 4).is_err());
    }

    #[test]
    fn overlapping_parts_are_tagged_apart() {
        let x = Arc::new(MetricSpace::integer_interval(0, 4).unwrap());
        let a = x.subspace_of_ids(["0", "1", "2"]).unwrap();
        let b = x.subspace_of_ids(["2", "3"]).unwrap();
        let z = DecomposedSequence::new(x, vec![vec![a, b]]).unwrap();
        let seq = build_sequence_rips(&z, &[1.0], 4).unwrap();
        assert_eq!(seq.tagged.len(), 5);
        assert_eq!(seq.tagged.distance("2@1.0", "2@1.1").unwrap(), crate::metric::ExtDistance::INFINITY);
        assert_eq!(seq.tagged.distance("1@1.0", "2@1.0").unwrap().value(), 1.0);
    }

    #[test]
    fn cover_and_orphan() {
        let z = interval_sequence(2);
        let mut cover = halves(&z);
        assert!(cover.is_exact());
        assert!(check_cover(&cover, &[1.0, 2.0], 4).unwrap().covered);
        let p = z.space().index_of("3").unwrap();
        cover.uncover(0, 0, p);
        let check = check_cover(&cover, &[1.0, 2.0], 4).unwrap();
        assert!(!check.covered);
        let w = check.witness.unwrap();
        assert_eq!((w.level, w.part, w.simplex), (1, 0, vec!["3".to_string()]));
    }

    #[test]
    fn seam_family() {
        let z = interval_sequence(1);
        let x = z.space().clone();
        let whole = x.full();
        let zz = DecomposedSequence::new(x.clone(), vec![vec![whole.clone()]]).unwrap();
        let left = x.subspace(0..15).unwrap();
        let right = x.subspace(15..30).unwrap();
        let cover = SequenceCover::new(zz, vec![vec![left]], vec![vec![right]]).unwrap();
        let fam = intersection_families(&RefinedCover::trivial(cover.clone()), &[2.0]).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam[0].members.len(), 1);
        assert_eq!(x.ids_of(&fam[0].members[0].2), vec!["14", "15"]);
        assert!(intersection_families(&RefinedCover::trivial(cover), &[0.0]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let cover = halves(&interval_sequence(2));
        let refined = RefinedCover::trivial(cover);
        let back = RefinedCover::from_json_str(&refined.to_json().to_string()).unwrap();
        assert!(back.cover().is_exact());
        assert!(check_cover(back.cover(), &[1.0, 1.0], 3).unwrap().covered);
    }
}
