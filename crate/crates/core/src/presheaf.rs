//! Presheaves over a finite space, natural transformations, and the two
//! sheaf checks (axioms and equalizer criterion).

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    enumerate_morphisms, equalizer, product, AlgMorphism, AlgObject, CategoryTag, MorphismJson,
    ObjectJson, ProductCone,
};
use crate::error::{Error, Result};
use crate::finspace::{Cover, CoverMode, FinSpace, OpenId, SpaceJson};
use crate::Caps;

/// Presheaf JSON. Restriction key `"V|U"` means `V ⊆ U` and maps `F(U) → F(V)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafJson {
    pub space: SpaceJson,
    pub tag: CategoryTag,
    pub sections: BTreeMap<String, ObjectJson>,
    #[serde(default)]
    pub restrictions: BTreeMap<String, MorphismJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NatTransJson {
    pub components: BTreeMap<String, MorphismJson>,
}

/// A contravariant functor from the opens of a space into a tagged category.
#[derive(Clone, Debug)]
pub struct Presheaf {
    space: Arc<FinSpace>,
    tag: CategoryTag,
    sections: Vec<Arc<AlgObject>>,
    /// Keyed by `(big, small)`; maps `F(big) → F(small)`.
    restrictions: BTreeMap<(OpenId, OpenId), AlgMorphism>,
}

fn restriction_key(space: &FinSpace, big: OpenId, small: OpenId) -> String {
    format!("{}|{}", space.key(small), space.key(big))
}

impl Presheaf {
    /// Validates sections and restrictions. Identity restrictions may be omitted.
    pub fn new(
        space: Arc<FinSpace>,
        tag: CategoryTag,
        sections: Vec<Arc<AlgObject>>,
        mut restrictions: BTreeMap<(OpenId, OpenId), AlgMorphism>,
    ) -> Result<Presheaf> {
        if sections.len() != space.opens().len() {
            let missing = space.key(OpenId(sections.len().min(space.opens().len() - 1)));
            return Err(Error::MissingSection(missing.to_string()));
        }
        for (u, s) in space.open_ids().zip(&sections) {
            if s.tag() != tag {
                return Err(Error::MixedTags(tag.to_string(), s.tag().to_string())
                    .context(format!("section over `{}`", space.key(u))));
            }
        }
        for u in space.open_ids() {
            restrictions
                .entry((u, u))
                .or_insert_with(|| AlgMorphism::identity(sections[u.0].clone()));
        }
        let f = Presheaf {
            space,
            tag,
            sections,
            restrictions,
        };
        f.check()?;
        Ok(f)
    }

    /// Builds a presheaf from section and restriction functions on indices.
    pub fn from_fn(
        space: Arc<FinSpace>,
        tag: CategoryTag,
        section: impl Fn(&FinSpace, OpenId) -> Arc<AlgObject>,
        restrict: impl Fn(&FinSpace, OpenId, OpenId, usize) -> usize,
    ) -> Result<Presheaf> {
        let sections: Vec<Arc<AlgObject>> = space.open_ids().map(|u| section(&space, u)).collect();
        let mut restrictions = BTreeMap::new();
        for big in space.open_ids() {
            for small in space.opens_within(big) {
                let map = (0..sections[big.0].len())
                    .map(|s| restrict(&space, big, small, s))
                    .collect();
                let m = AlgMorphism::new(sections[big.0].clone(), sections[small.0].clone(), map)
                    .map_err(|e| e.context(restriction_key(&space, big, small)))?;
                restrictions.insert((big, small), m);
            }
        }
        Presheaf::new(space, tag, sections, restrictions)
    }

    /// The constant presheaf: the same object everywhere, identity restrictions.
    pub fn constant(space: Arc<FinSpace>, object: Arc<AlgObject>) -> Result<Presheaf> {
        let tag = object.tag();
        Presheaf::from_fn(space, tag, |_, _| object.clone(), |_, _, _, s| s)
    }

    fn check(&self) -> Result<()> {
        let space = &self.space;
        for big in space.open_ids() {
            for small in space.opens_within(big) {
                let key = restriction_key(space, big, small);
                let r = self
                    .restrictions
                    .get(&(big, small))
                    .ok_or_else(|| {
                        Error::MissingRestriction(
                            space.key(small).to_string(),
                            space.key(big).to_string(),
                        )
                    })?;
                if !Arc::ptr_eq(r.source(), &self.sections[big.0])
                    && !r.source().same_as(&self.sections[big.0])
                    || !Arc::ptr_eq(r.target(), &self.sections[small.0])
                        && !r.target().same_as(&self.sections[small.0])
                {
                    return Err(Error::SourceMismatch.context(key));
                }
                r.check().map_err(|e| e.context(key))?;
            }
        }
        if let Some(((big, small), _)) = self
            .restrictions
            .iter()
            .find(|((b, s), _)| !space.is_subset(*s, *b))
        {
            return Err(Error::NotAnOpen(restriction_key(space, *big, *small)));
        }
        for u in space.open_ids() {
            let r = &self.restrictions[&(u, u)];
            if let Some(s) = (0..r.map().len()).find(|&s| r.apply(s) != s) {
                return Err(Error::IdentityLawViolated {
                    open: space.key(u).to_string(),
                    element: self.sections[u.0].name(s),
                });
            }
        }
        for w in space.open_ids() {
            for v in space.opens_within(w) {
                for u in space.opens_within(v) {
                    let (wv, vu, wu) = (
                        &self.restrictions[&(w, v)],
                        &self.restrictions[&(v, u)],
                        &self.restrictions[&(w, u)],
                    );
                    if let Some(s) =
                        (0..self.sections[w.0].len()).find(|&s| vu.apply(wv.apply(s)) != wu.apply(s))
                    {
                        return Err(Error::CompositionLawViolated {
                            u: space.key(u).to_string(),
                            v: space.key(v).to_string(),
                            w: space.key(w).to_string(),
                            element: self.sections[w.0].name(s),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(raw: &PresheafJson) -> Result<Presheaf> {
        let space = Arc::new(FinSpace::from_json(&raw.space)?);
        let tag = raw.tag;
        let mut sections: Vec<Option<Arc<AlgObject>>> = vec![None; space.opens().len()];
        for (key, obj) in &raw.sections {
            let u = space.open_by_key(key)?;
            let o = AlgObject::from_json(tag, obj)
                .map_err(|e| e.context(format!("section over `{}`", space.key(u))))?;
            sections[u.0] = Some(Arc::new(o));
        }
        let sections = space
            .open_ids()
            .map(|u| {
                sections[u.0]
                    .clone()
                    .ok_or_else(|| Error::MissingSection(space.key(u).to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut restrictions = BTreeMap::new();
        for (key, m) in &raw.restrictions {
            let (small, big) = key
                .split_once('|')
                .ok_or_else(|| Error::Parse(format!("restriction key `{key}` is not `V|U`")))?;
            let (small, big) = (space.open_by_key(small)?, space.open_by_key(big)?);
            if !space.is_subset(small, big) {
                return Err(Error::NotAnOpen(key.clone()).context("restriction between non-nested opens"));
            }
            let f = AlgMorphism::from_json(sections[big.0].clone(), sections[small.0].clone(), m)
                .map_err(|e| e.context(restriction_key(&space, big, small)))?;
            restrictions.insert((big, small), f);
        }
        Presheaf::new(space, tag, sections, restrictions)
    }

    pub fn to_json(&self) -> PresheafJson {
        PresheafJson {
            space: self.space.to_json(),
            tag: self.tag,
            sections: self
                .space
                .open_ids()
                .map(|u| (self.space.key(u).to_string(), self.sections[u.0].to_json()))
                .collect(),
            restrictions: self
                .restrictions
                .iter()
                .map(|(&(b, s), m)| (restriction_key(&self.space, b, s), m.to_json()))
                .collect(),
        }
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        &self.space
    }

    pub fn tag(&self) -> CategoryTag {
        self.tag
    }

    pub fn section(&self, u: OpenId) -> &Arc<AlgObject> {
        &self.sections[u.0]
    }

    pub fn sections(&self) -> &[Arc<AlgObject>] {
        &self.sections
    }

    /// `F_small^big : F(big) → F(small)`; panics unless `small ⊆ big`.
    pub fn restriction(&self, big: OpenId, small: OpenId) -> &AlgMorphism {
        &self.restrictions[&(big, small)]
    }

    pub fn restrict(&self, big: OpenId, small: OpenId, s: usize) -> usize {
        self.restrictions[&(big, small)].apply(s)
    }

    /// Same space, tag, sections and restrictions (names included).
    pub fn same_as(&self, other: &Presheaf) -> bool {
        self.tag == other.tag
            && self.space == other.space
            && self
                .sections
                .iter()
                .zip(&other.sections)
                .all(|(a, b)| Arc::ptr_eq(a, b) || a.same_as(b))
            && self
                .restrictions
                .iter()
                .all(|(k, m)| other.restrictions.get(k).is_some_and(|n| m.map() == n.map()))
    }

    /// Re-runs every presheaf check on the stored data.
    pub fn revalidate(&self) -> Result<Presheaf> {
        Presheaf::new(
            self.space.clone(),
            self.tag,
            self.sections.clone(),
            self.restrictions.clone(),
        )
    }

    /// Copy of the presheaf with every section re-tagged as a set.
    pub(crate) fn retagged_as_sets(&self) -> Presheaf {
        let sections: Vec<Arc<AlgObject>> = self
            .sections
            .iter()
            .map(|s| Arc::new(s.underlying_set()))
            .collect();
        let restrictions = self
            .restrictions
            .iter()
            .map(|(&(b, s), m)| {
                (
                    (b, s),
                    AlgMorphism::new_unchecked(
                        sections[b.0].clone(),
                        sections[s.0].clone(),
                        m.map().to_vec(),
                    ),
                )
            })
            .collect();
        Presheaf {
            space: self.space.clone(),
            tag: CategoryTag::FinSet,
            sections,
            restrictions,
        }
    }
}

fn same_presheaf(a: &Arc<Presheaf>, b: &Arc<Presheaf>) -> bool {
    Arc::ptr_eq(a, b) || a.same_as(b)
}

/// A family of component morphisms `θ_U : F(U) → G(U)` satisfying naturality.
#[derive(Clone, Debug)]
pub struct NatTrans {
    source: Arc<Presheaf>,
    target: Arc<Presheaf>,
    components: Vec<AlgMorphism>,
}

impl NatTrans {
    pub fn new(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        components: Vec<AlgMorphism>,
    ) -> Result<NatTrans> {
        let t = NatTrans {
            source,
            target,
            components,
        };
        t.check()?;
        Ok(t)
    }

    pub(crate) fn new_unchecked(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        components: Vec<AlgMorphism>,
    ) -> NatTrans {
        NatTrans {
            source,
            target,
            components,
        }
    }

    pub fn from_fn(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        component: impl Fn(OpenId, usize) -> usize,
    ) -> Result<NatTrans> {
        let components = source
            .space
            .open_ids()
            .map(|u| {
                AlgMorphism::from_fn(source.section(u).clone(), target.section(u).clone(), |s| {
                    component(u, s)
                })
                .map_err(|e| e.context(format!("component over `{}`", source.space.key(u))))
            })
            .collect::<Result<Vec<_>>>()?;
        NatTrans::new(source, target, components)
    }

    pub fn identity(f: Arc<Presheaf>) -> NatTrans {
        let components = f
            .sections
            .iter()
            .map(|s| AlgMorphism::identity(s.clone()))
            .collect();
        NatTrans {
            source: f.clone(),
            target: f,
            components,
        }
    }

    fn check(&self) -> Result<()> {
        let (f, g) = (&self.source, &self.target);
        if f.space != g.space || f.tag != g.tag {
            return Err(Error::PresheafMismatch);
        }
        let space = &f.space;
        if self.components.len() != space.opens().len() {
            return Err(Error::PresheafMismatch);
        }
        for u in space.open_ids() {
            let c = &self.components[u.0];
            let ctx = || format!("component over `{}`", space.key(u));
            if !(Arc::ptr_eq(c.source(), f.section(u)) || c.source().same_as(f.section(u)))
                || !(Arc::ptr_eq(c.target(), g.section(u)) || c.target().same_as(g.section(u)))
            {
                return Err(Error::SourceMismatch.context(ctx()));
            }
            c.check().map_err(|e| e.context(ctx()))?;
        }
        for big in space.open_ids() {
            for small in space.opens_within(big) {
                for s in 0..f.section(big).len() {
                    let down_then_across = self.components[small.0].apply(f.restrict(big, small, s));
                    let across_then_down = g.restrict(big, small, self.components[big.0].apply(s));
                    if down_then_across != across_then_down {
                        return Err(Error::NaturalityViolated {
                            small: space.key(small).to_string(),
                            big: space.key(big).to_string(),
                            element: f.section(big).name(s),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_json(
        source: Arc<Presheaf>,
        target: Arc<Presheaf>,
        raw: &NatTransJson,
    ) -> Result<NatTrans> {
        let space = source.space.clone();
        let components = space
            .open_ids()
            .map(|u| {
                let key = space.key(u);
                let m = raw
                    .components
                    .get(key)
                    .ok_or_else(|| Error::MissingSection(key.to_string()))?;
                AlgMorphism::from_json(source.section(u).clone(), target.section(u).clone(), m)
            })
            .collect::<Result<Vec<_>>>()?;
        NatTrans::new(source, target, components)
    }

    pub fn to_json(&self) -> NatTransJson {
        NatTransJson {
            components: self
                .source
                .space
                .open_ids()
                .map(|u| (self.source.space.key(u).to_string(), self.components[u.0].to_json()))
                .collect(),
        }
    }

    pub fn source(&self) -> &Arc<Presheaf> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presheaf> {
        &self.target
    }

    pub fn component(&self, u: OpenId) -> &AlgMorphism {
        &self.components[u.0]
    }

    pub fn components(&self) -> &[AlgMorphism] {
        &self.components
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &NatTrans) -> Result<NatTrans> {
        if !same_presheaf(&self.target, &next.source) {
            return Err(Error::PresheafMismatch);
        }
        let components = self
            .components
            .iter()
            .zip(&next.components)
            .map(|(a, b)| {
                Ok(AlgMorphism::new_unchecked(
                    a.source().clone(),
                    b.target().clone(),
                    a.then(b)?.map().to_vec(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NatTrans {
            source: self.source.clone(),
            target: next.target.clone(),
            components,
        })
    }

    /// Componentwise equality of maps (sources and targets assumed to match).
    pub fn same_maps(&self, other: &NatTrans) -> bool {
        self.components.len() == other.components.len()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.map() == b.map())
    }

    /// Every component passes `is_isomorphism`.
    pub fn is_natural_isomorphism(&self) -> bool {
        self.components.iter().all(|c| c.is_isomorphism().is_some())
    }

    /// The componentwise inverse, when every component is an isomorphism.
    pub fn inverse(&self) -> Option<NatTrans> {
        let components = self
            .components
            .iter()
            .map(|c| c.is_isomorphism())
            .collect::<Option<Vec<_>>>()?;
        Some(NatTrans {
            source: self.target.clone(),
            target: self.source.clone(),
            components,
        })
    }
}

/// Every natural transformation `F → G`, found by backtracking over opens.
pub fn enumerate_nattrans(
    source: &Arc<Presheaf>,
    target: &Arc<Presheaf>,
    caps: &Caps,
) -> Result<Vec<NatTrans>> {
    if source.space != target.space || source.tag != target.tag {
        return Err(Error::PresheafMismatch);
    }
    let space = source.space.clone();
    let candidates = space
        .open_ids()
        .map(|u| enumerate_morphisms(source.section(u), target.section(u), caps.search_nodes))
        .collect::<Result<Vec<_>>>()?;
    let order: Vec<OpenId> = space.open_ids().rev().collect();
    let mut chosen: Vec<Option<usize>> = vec![None; space.opens().len()];
    let mut out = Vec::new();
    let mut nodes = 0usize;

    #[allow(clippy::too_many_arguments)]
    fn go(
        depth: usize,
        order: &[OpenId],
        space: &FinSpace,
        source: &Arc<Presheaf>,
        target: &Arc<Presheaf>,
        candidates: &[Vec<AlgMorphism>],
        chosen: &mut Vec<Option<usize>>,
        nodes: &mut usize,
        cap: usize,
        out: &mut Vec<NatTrans>,
    ) -> Result<()> {
        if depth == order.len() {
            let components = space
                .open_ids()
                .map(|u| candidates[u.0][chosen[u.0].unwrap()].clone())
                .collect();
            out.push(NatTrans::new_unchecked(source.clone(), target.clone(), components));
            return Ok(());
        }
        let u = order[depth];
        for k in 0..candidates[u.0].len() {
            *nodes += 1;
            if *nodes > cap {
                return Err(Error::SizeCap(format!("natural transformation search exceeded {cap} nodes")));
            }
            let c = &candidates[u.0][k];
            let natural = space.open_ids().all(|other| {
                let Some(j) = chosen[other.0] else { return true };
                let d = &candidates[other.0][j];
                let pairs = [(u, other, c, d), (other, u, d, c)];
                pairs.iter().all(|&(big, small, cb, cs)| {
                    !space.is_subset(small, big)
                        || (0..source.section(big).len()).all(|s| {
                            cs.apply(source.restrict(big, small, s))
                                == target.restrict(big, small, cb.apply(s))
                        })
                })
            });
            if natural {
                chosen[u.0] = Some(k);
                go(depth + 1, order, space, source, target, candidates, chosen, nodes, cap, out)?;
                chosen[u.0] = None;
            }
        }
        Ok(())
    }

    go(
        0,
        &order,
        &space,
        source,
        target,
        &candidates,
        &mut chosen,
        &mut nodes,
        caps.search_nodes,
        &mut out,
    )?;
    Ok(out)
}

/// One failing `(open, cover)` pair and the elements witnessing the failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub open: String,
    pub cover: Vec<String>,
    pub witness: Vec<String>,
}

/// `(open, cover keys)` for each failing cover.
pub type FailureSites = Vec<(String, Vec<String>)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafReport {
    pub is_sheaf: bool,
    pub mode: CoverMode,
    /// Whether every cover of every open was examined.
    pub exhaustive: bool,
    pub axiom1_failures: Vec<Failure>,
    pub axiom2_failures: Vec<Failure>,
}

impl SheafReport {
    fn new(mode: CoverMode, exhaustive: bool) -> SheafReport {
        SheafReport {
            is_sheaf: true,
            mode,
            exhaustive,
            axiom1_failures: Vec::new(),
            axiom2_failures: Vec::new(),
        }
    }

    fn finish(mut self) -> SheafReport {
        self.is_sheaf = self.axiom1_failures.is_empty() && self.axiom2_failures.is_empty();
        self
    }

    /// `(open, cover)` pairs failing each axiom, for comparing checkers.
    pub fn failure_sites(&self) -> (FailureSites, FailureSites) {
        let sites = |v: &[Failure]| v.iter().map(|f| (f.open.clone(), f.cover.clone())).collect();
        (sites(&self.axiom1_failures), sites(&self.axiom2_failures))
    }
}

fn covers_for(f: &Presheaf, mode: CoverMode, caps: &Caps) -> (Vec<Cover>, bool) {
    let mut all = Vec::new();
    let mut exhaustive = true;
    for u in f.space.open_ids() {
        let list = f.space.covers(u, mode, caps.exhaustive_opens);
        exhaustive &= list.exhaustive;
        all.extend(list.covers);
    }
    (all, exhaustive)
}

/// Checks locality and gluing over every cover the mode enumerates.
pub fn check_sheaf_axioms(f: &Presheaf, mode: CoverMode, caps: &Caps) -> Result<SheafReport> {
    let space = &f.space;
    let (covers, exhaustive) = covers_for(f, mode, caps);
    let mut report = SheafReport::new(mode, exhaustive);
    for cover in &covers {
        let u = cover.target;
        let parts = &cover.parts;
        let open = space.key(u).to_string();
        let cover_keys = space.cover_keys(cover);

        let restrictions_of =
            |s: usize| -> Vec<usize> { parts.iter().map(|&p| f.restrict(u, p, s)).collect() };
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut locality = None;
        for s in 0..f.section(u).len() {
            let key = restrictions_of(s);
            if let Some(&first) = seen.get(&key) {
                locality.get_or_insert((first, s));
            } else {
                seen.insert(key, s);
            }
        }
        if let Some((a, b)) = locality {
            report.axiom1_failures.push(Failure {
                open: open.clone(),
                cover: cover_keys.clone(),
                witness: vec![f.section(u).name(a), f.section(u).name(b)],
            });
        }

        let total: usize = parts
            .iter()
            .try_fold(1usize, |acc, p| acc.checked_mul(f.section(*p).len()))
            .unwrap_or(usize::MAX);
        if total > caps.families {
            return Err(Error::SizeCap(format!(
                "{total} families over cover {cover_keys:?} of `{open}`"
            )));
        }
        let mut family = vec![0usize; parts.len()];
        let mut gluing_failure = None;
        glue_search(f, parts, 0, &mut family, &mut |fam| {
            if !seen.contains_key(fam) {
                gluing_failure.get_or_insert_with(|| fam.to_vec());
                false
            } else {
                true
            }
        });
        if let Some(fam) = gluing_failure {
            report.axiom2_failures.push(Failure {
                open,
                cover: cover_keys,
                witness: fam
                    .iter()
                    .zip(parts)
                    .map(|(&s, p)| f.section(*p).name(s))
                    .collect(),
            });
        }
    }
    Ok(report.finish())
}

/// Enumerates matching families over `parts`; `visit` returns false to stop.
fn glue_search(
    f: &Presheaf,
    parts: &[OpenId],
    i: usize,
    family: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if i == parts.len() {
        return visit(family);
    }
    let space = &f.space;
    for s in 0..f.section(parts[i]).len() {
        family[i] = s;
        let compatible = (0..i).all(|j| {
            let w = space.intersection(parts[i], parts[j]);
            f.restrict(parts[i], w, s) == f.restrict(parts[j], w, family[j])
        });
        if compatible && !glue_search(f, parts, i + 1, family, visit) {
            return false;
        }
    }
    true
}

/// The maps `a : F(U) → ∏ F(U_i)` and `b, c : ∏ F(U_i) → ∏ F(U_i ∩ U_j)`.
#[derive(Clone, Debug)]
pub struct EqualizerMaps {
    pub parts: ProductCone,
    pub overlaps: ProductCone,
    pub a: AlgMorphism,
    pub b: AlgMorphism,
    pub c: AlgMorphism,
}

pub fn equalizer_maps(f: &Presheaf, cover: &Cover, caps: &Caps) -> Result<EqualizerMaps> {
    let space = &f.space;
    space.check_cover(cover)?;
    let u = cover.target;
    let parts = &cover.parts;
    let factor_objects: Vec<Arc<AlgObject>> = parts.iter().map(|p| f.section(*p).clone()).collect();
    let parts_cone = product(f.tag, &factor_objects)?;
    if parts_cone.object.len() > caps.families {
        return Err(Error::SizeCap(format!(
            "∏ F(U_i) has {} elements",
            parts_cone.object.len()
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..parts.len())
        .flat_map(|i| (0..parts.len()).map(move |j| (i, j)))
        .collect();
    let overlap_objects: Vec<Arc<AlgObject>> = pairs
        .iter()
        .map(|&(i, j)| f.section(space.intersection(parts[i], parts[j])).clone())
        .collect();
    let overlaps = product(f.tag, &overlap_objects)?;

    let a_map = (0..f.section(u).len())
        .map(|s| {
            let comps: Vec<usize> = parts.iter().map(|&p| f.restrict(u, p, s)).collect();
            parts_cone.tuple(&comps)
        })
        .collect();
    let side = |use_first: bool| -> Vec<usize> {
        (0..parts_cone.object.len())
            .map(|t| {
                let fam = parts_cone.components(t);
                let comps: Vec<usize> = pairs
                    .iter()
                    .map(|&(i, j)| {
                        let w = space.intersection(parts[i], parts[j]);
                        let k = if use_first { i } else { j };
                        f.restrict(parts[k], w, fam[k])
                    })
                    .collect();
                overlaps.tuple(&comps)
            })
            .collect()
    };
    let a = AlgMorphism::new_unchecked(f.section(u).clone(), parts_cone.object.clone(), a_map);
    let b = AlgMorphism::new_unchecked(parts_cone.object.clone(), overlaps.object.clone(), side(true));
    let c = AlgMorphism::new_unchecked(parts_cone.object.clone(), overlaps.object.clone(), side(false));
    Ok(EqualizerMaps {
        parts: parts_cone,
        overlaps,
        a,
        b,
        c,
    })
}

/// Sheaf check via the criterion "`a` is an equalizer of `(b, c)`".
pub fn check_sheaf_equalizer(f: &Presheaf, mode: CoverMode, caps: &Caps) -> Result<SheafReport> {
    let space = &f.space;
    let (covers, exhaustive) = covers_for(f, mode, caps);
    let mut report = SheafReport::new(mode, exhaustive);
    for cover in &covers {
        let maps = equalizer_maps(f, cover, caps)?;
        let eq = equalizer(&maps.b, &maps.c)?;
        let u = cover.target;
        let open = space.key(u).to_string();
        let cover_keys = space.cover_keys(cover);
        let mut preimage: HashMap<usize, usize> = HashMap::new();
        let mut collision = None;
        for s in 0..f.section(u).len() {
            if let Some(&first) = preimage.get(&maps.a.apply(s)) {
                collision.get_or_insert((first, s));
            } else {
                preimage.insert(maps.a.apply(s), s);
            }
        }
        if let Some((x, y)) = collision {
            report.axiom1_failures.push(Failure {
                open: open.clone(),
                cover: cover_keys.clone(),
                witness: vec![f.section(u).name(x), f.section(u).name(y)],
            });
        }
        if let Some(&missing) = eq.witness.members.iter().find(|m| !preimage.contains_key(m)) {
            let fam = maps.parts.components(missing);
            report.axiom2_failures.push(Failure {
                open,
                cover: cover_keys,
                witness: fam
                    .iter()
                    .zip(&cover.parts)
                    .map(|(&s, p)| f.section(*p).name(s))
                    .collect(),
            });
        }
    }
    Ok(report.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sierpinski_set_fixture_validates() {
        let f = fixtures::sierpinski_set();
        assert_eq!(f.sections().len(), 3);
        let space = f.space();
        let x = space.whole();
        let q = space.open_by_key("q").unwrap();
        assert_eq!(f.restrict(x, q, 0), 0);
        assert_eq!(f.restrict(x, q, 1), 0);
    }

    #[test]
    fn composition_violation_is_detected() {
        let raw = fixtures::json_fixture("sierpinski_set").unwrap();
        let mut raw: PresheafJson = serde_json::from_str(&raw).unwrap();
        raw.sections.insert(
            "".into(),
            ObjectJson {
                tag: None,
                elements: vec!["*".into(), "#".into()],
                table: None,
                identity: None,
                leq: None,
            },
        );
        let to = |pairs: &[(&str, &str)]| MorphismJson {
            map: pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        };
        raw.restrictions.insert("|p,q".into(), to(&[("a", "*"), ("b", "*")]));
        raw.restrictions.insert("|q".into(), to(&[("u", "#")]));
        raw.restrictions.insert("|".into(), to(&[("*", "*"), ("#", "#")]));
        let err = Presheaf::from_json(&raw).unwrap_err();
        assert_eq!(
            err,
            Error::CompositionLawViolated {
                u: "".into(),
                v: "q".into(),
                w: "p,q".into(),
                element: "a".into()
            }
        );
    }

    #[test]
    fn missing_and_identity_violations() {
        let raw = fixtures::json_fixture("sierpinski_set").unwrap();
        let mut raw: PresheafJson = serde_json::from_str(&raw).unwrap();
        let mut missing = raw.clone();
        missing.restrictions.remove("|q");
        assert_eq!(
            Presheaf::from_json(&missing).unwrap_err(),
            Error::MissingRestriction("".into(), "q".into())
        );
        let mut no_section = raw.clone();
        no_section.sections.remove("q");
        assert_eq!(Presheaf::from_json(&no_section).unwrap_err(), Error::MissingSection("q".into()));
        raw.restrictions.insert(
            "p,q|p,q".into(),
            MorphismJson {
                map: [("a".to_string(), "b".to_string()), ("b".into(), "a".into())].into(),
            },
        );
        assert_eq!(
            Presheaf::from_json(&raw).unwrap_err(),
            Error::IdentityLawViolated {
                open: "p,q".into(),
                element: "a".into()
            }
        );
    }

    #[test]
    fn identity_and_sign_transformations_are_natural() {
        let f = Arc::new(fixtures::const_s3());
        NatTrans::identity(f.clone()).check().unwrap();
        let g = Arc::new(fixtures::const_z2());
        let theta = fixtures::sign_transformation(&f, &g);
        theta.check().unwrap();
        let id = NatTrans::identity(f.clone());
        assert!(id.then(&theta).unwrap().same_maps(&theta));
        assert!(theta.then(&NatTrans::identity(g)).unwrap().same_maps(&theta));
    }

    #[test]
    fn non_natural_family_is_rejected() {
        let f = Arc::new(fixtures::sierpinski_z4());
        // identity on X but zero on {q}: the square at X ⊇ {q} fails at 1.
        let err = NatTrans::from_fn(f.clone(), f.clone(), |u, s| {
            if u == f.space().whole() || u == f.space().empty() {
                s
            } else {
                0
            }
        })
        .unwrap_err();
        assert!(matches!(err, Error::NaturalityViolated { .. }), "{err}");
    }

    #[test]
    fn discrete_nonsheaf_fails_gluing() {
        let f = fixtures::discrete_nonsheaf();
        let caps = Caps::default();
        let report = check_sheaf_axioms(&f, CoverMode::Canonical, &caps).unwrap();
        assert!(!report.is_sheaf);
        assert!(report.axiom1_failures.is_empty());
        assert_eq!(
            report.axiom2_failures,
            vec![Failure {
                open: "p,q".into(),
                cover: vec!["p".into(), "q".into()],
                witness: vec!["b".into(), "c".into()],
            }]
        );
        let eq = check_sheaf_equalizer(&f, CoverMode::Canonical, &caps).unwrap();
        assert_eq!(eq.failure_sites(), report.failure_sites());
    }

    #[test]
    fn sierpinski_set_is_a_sheaf_and_fat_empty_section_is_not() {
        let caps = Caps::default();
        for mode in [CoverMode::Canonical, CoverMode::Exhaustive] {
            let f = fixtures::sierpinski_set();
            assert!(check_sheaf_axioms(&f, mode, &caps).unwrap().is_sheaf);
            assert!(check_sheaf_equalizer(&f, mode, &caps).unwrap().is_sheaf);
            // constant S3 has six sections over ∅
            let c = fixtures::const_s3();
            let r = check_sheaf_axioms(&c, mode, &caps).unwrap();
            assert!(r.axiom1_failures.iter().any(|f| f.open.is_empty() && f.cover.is_empty()));
            assert!(!check_sheaf_equalizer(&c, mode, &caps).unwrap().is_sheaf);
        }
    }

    #[test]
    fn equalizer_maps_shapes() {
        let caps = Caps::default();
        let f = fixtures::discrete_nonsheaf();
        let space = f.space();
        let single = Cover {
            target: space.whole(),
            parts: vec![space.whole()],
        };
        let m = equalizer_maps(&f, &single, &caps).unwrap();
        assert_eq!(m.b.map(), m.c.map());
        assert_eq!(m.a.map().len(), 1);
        let cover = space.canonical_cover(space.whole());
        let m = equalizer_maps(&f, &cover, &caps).unwrap();
        m.a.check().unwrap();
        m.b.check().unwrap();
        m.c.check().unwrap();
        // every family is compatible (singleton F(∅)) yet only one glues
        assert_eq!(m.b.map(), m.c.map());
        assert_eq!(m.parts.object.len(), 2);
        assert_eq!(m.a.map().len(), 1);
        let bad = Cover {
            target: space.whole(),
            parts: vec![space.open_by_key("p").unwrap()],
        };
        assert!(matches!(equalizer_maps(&f, &bad, &caps), Err(Error::NotACover { .. })));

        let s = fixtures::sierpinski_set();
        let m = equalizer_maps(&s, &s.space().canonical_cover(s.space().whole()), &caps).unwrap();
        assert!(m.a.is_injective());
    }

    #[test]
    fn enumerate_nattrans_counts() {
        let caps = Caps::default();
        let f = Arc::new(fixtures::const_s3());
        let g = Arc::new(fixtures::const_z2());
        // componentwise homs S3 → Z/2 that commute with identities: all equal
        let all = enumerate_nattrans(&f, &g, &caps).unwrap();
        assert_eq!(all.len(), 2);
        for t in &all {
            t.check().unwrap();
        }
    }
}
