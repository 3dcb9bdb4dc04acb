//! Reflections into full subcategories, at the level of objects, presheaves
//! and sheaves, and the comparison of the two ways of combining a
//! reflection with sheafification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{product, quotient, AlgMorphism, AlgObject, CategoryTag};
use crate::error::{Error, Result};
use crate::finspace::CoverMode;
use crate::plus::{plus, sheafify_factor_with, PlusResult};
use crate::presheaf::{
    check_sheaf_axioms, check_sheaf_equalizer, enumerate_nattrans, NatTrans, NatTransJson, Presheaf,
    PresheafJson,
};
use crate::Caps;

/// The subcategory a reflection lands in.
///
/// Reflected objects keep the tag of their source; membership in the target
/// subcategory is the predicate [`ReflectionTarget::admits`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ReflectionTarget {
    /// Abelian groups: abelianization of groups, group completion of commutative monoids.
    IntoAb,
    /// Groups, from commutative monoids by group completion.
    IntoGrp,
    /// Cancellative commutative monoids.
    IntoCancellative,
    /// Partial orders, from preorders.
    IntoPoset,
    Identity,
}

impl ReflectionTarget {
    pub const ALL: [ReflectionTarget; 5] = [
        ReflectionTarget::IntoAb,
        ReflectionTarget::IntoGrp,
        ReflectionTarget::IntoCancellative,
        ReflectionTarget::IntoPoset,
        ReflectionTarget::Identity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReflectionTarget::IntoAb => "IntoAb",
            ReflectionTarget::IntoGrp => "IntoGrp",
            ReflectionTarget::IntoCancellative => "IntoCancellative",
            ReflectionTarget::IntoPoset => "IntoPoset",
            ReflectionTarget::Identity => "Identity",
        }
    }

    /// Whether objects of `tag` can be reflected.
    pub fn accepts(self, tag: CategoryTag) -> bool {
        use CategoryTag::*;
        match self {
            ReflectionTarget::IntoAb => matches!(tag, FinGrp | FinAb | FinCMon),
            ReflectionTarget::IntoGrp | ReflectionTarget::IntoCancellative => tag == FinCMon,
            ReflectionTarget::IntoPoset => tag == FinPreord,
            ReflectionTarget::Identity => true,
        }
    }

    /// Membership of an object in the target subcategory.
    pub fn admits(self, object: &AlgObject) -> bool {
        self.accepts(object.tag())
            && match self {
                ReflectionTarget::IntoAb => object.is_group() && object.is_commutative(),
                ReflectionTarget::IntoGrp => object.is_group(),
                ReflectionTarget::IntoCancellative => object.is_cancellative(),
                ReflectionTarget::IntoPoset => object.is_antisymmetric(),
                ReflectionTarget::Identity => true,
            }
    }

    fn incompatible(self, tag: CategoryTag) -> Error {
        Error::IncompatibleTarget {
            target: self.name().to_string(),
            tag: tag.to_string(),
        }
    }
}

impl fmt::Display for ReflectionTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReflectionTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReflectionTarget::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown reflection target `{s}`")))
    }
}

/// An object's reflection `A → rA` into the target subcategory.
#[derive(Clone, Debug)]
pub struct Reflection {
    pub source: Arc<AlgObject>,
    pub reflected: Arc<AlgObject>,
    pub unit: AlgMorphism,
    pub target: ReflectionTarget,
}

/// Labels each element by the least element of its class under `related`,
/// which must be an equivalence relation.
fn classes_of(n: usize, related: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut class = vec![usize::MAX; n];
    for a in 0..n {
        if class[a] != usize::MAX {
            continue;
        }
        for (b, c) in class.iter_mut().enumerate().skip(a) {
            if *c == usize::MAX && related(a, b) {
                *c = a;
            }
        }
    }
    class
}

/// `R[x][y]` iff `x + k = y + k` for some `k`.
fn translation_relation(m: &AlgObject) -> Vec<bool> {
    let n = m.len();
    let mut r = vec![false; n * n];
    for k in 0..n {
        let shifted: Vec<usize> = (0..n).map(|x| m.op(x, k)).collect();
        for x in 0..n {
            for y in 0..n {
                if shifted[x] == shifted[y] {
                    r[x * n + y] = true;
                }
            }
        }
    }
    r
}

fn commutator_quotient(a: &Arc<AlgObject>) -> Result<(Arc<AlgObject>, AlgMorphism)> {
    let n = a.len();
    let inv = |x: usize| a.inverse(x).expect("groups have inverses");
    let mut member = vec![false; n];
    let mut subgroup = Vec::new();
    let e = a.identity().unwrap();
    member[e] = true;
    subgroup.push(e);
    for x in 0..n {
        for y in 0..n {
            let c = a.op(a.op(x, y), a.op(inv(x), inv(y)));
            if !member[c] {
                member[c] = true;
                subgroup.push(c);
            }
        }
    }
    // close the commutators under products
    let mut i = 0;
    while i < subgroup.len() {
        for j in 0..=i {
            for (p, q) in [(subgroup[i], subgroup[j]), (subgroup[j], subgroup[i])] {
                let c = a.op(p, q);
                if !member[c] {
                    member[c] = true;
                    subgroup.push(c);
                }
            }
        }
        i += 1;
    }
    let class = classes_of(n, |x, y| member[a.op(inv(x), y)]);
    quotient(a, &class)
}

/// The Grothendieck group `M × M / ~` with `(a,b) ~ (c,d)` iff `R[a+d][c+b]`.
///
/// The table is computed from class representatives; the result and the
/// unit `a ↦ [(a|e)]` are then validated.
fn group_completion(m: &Arc<AlgObject>) -> Result<(Arc<AlgObject>, AlgMorphism)> {
    let n = m.len();
    let r = translation_relation(m);
    let pair = |i: usize| (i / n, i % n);
    let class = classes_of(n * n, |i, j| {
        let ((a, b), (c, d)) = (pair(i), pair(j));
        r[m.op(a, d) * n + m.op(c, b)]
    });
    let reps: Vec<usize> = (0..n * n).filter(|&i| class[i] == i).collect();
    let id_of: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let names: Vec<String> = reps
        .iter()
        .map(|&i| {
            let (a, b) = pair(i);
            format!("[({}|{})]", m.name(a), m.name(b))
        })
        .collect();
    let table: Vec<Vec<usize>> = reps
        .iter()
        .map(|&i| {
            reps.iter()
                .map(|&j| {
                    let ((a, b), (c, d)) = (pair(i), pair(j));
                    id_of[&class[m.op(a, c) * n + m.op(b, d)]]
                })
                .collect()
        })
        .collect();
    let e = m.identity().unwrap();
    let identity = id_of[&class[e * n + e]];
    let g = Arc::new(AlgObject::from_table(m.tag(), &names, table, Some(identity))?);
    let unit = AlgMorphism::new(m.clone(), g.clone(), (0..n).map(|a| id_of[&class[a * n + e]]).collect())?;
    Ok((g, unit))
}

pub fn reflect_object(a: &Arc<AlgObject>, target: ReflectionTarget) -> Result<Reflection> {
    let tag = a.tag();
    if !target.accepts(tag) {
        return Err(target.incompatible(tag));
    }
    let (reflected, unit) = match (target, tag) {
        (ReflectionTarget::Identity, _) => (a.clone(), AlgMorphism::identity(a.clone())),
        (ReflectionTarget::IntoAb, CategoryTag::FinGrp | CategoryTag::FinAb) => commutator_quotient(a)?,
        (ReflectionTarget::IntoAb | ReflectionTarget::IntoGrp, _) => group_completion(a)?,
        (ReflectionTarget::IntoCancellative, _) => {
            let r = translation_relation(a);
            let n = a.len();
            quotient(a, &classes_of(n, |x, y| r[x * n + y]))?
        }
        (ReflectionTarget::IntoPoset, _) => quotient(a, &classes_of(a.len(), |x, y| a.leq(x, y) && a.leq(y, x)))?,
    };
    if !target.admits(&reflected) {
        return Err(Error::Internal(format!(
            "{target} reflection of a {} object left the subcategory",
            tag
        )));
    }
    Ok(Reflection {
        source: a.clone(),
        reflected,
        unit,
        target,
    })
}

/// The unique `g : rA → B` with `g ∘ unit = f`, for `B` in the subcategory.
pub fn factor_through_reflection(refl: &Reflection, f: &AlgMorphism) -> Result<AlgMorphism> {
    if !(Arc::ptr_eq(f.source(), &refl.source) || f.source().same_as(&refl.source)) {
        return Err(Error::SourceMismatch);
    }
    if !refl.target.admits(f.target()) {
        return Err(Error::TargetNotInSubcategory(refl.target.to_string()));
    }
    let mut g = vec![usize::MAX; refl.reflected.len()];
    for a in 0..refl.source.len() {
        let slot = &mut g[refl.unit.apply(a)];
        if *slot == usize::MAX {
            *slot = f.apply(a);
        } else if *slot != f.apply(a) {
            return Err(Error::NoFactorization(refl.source.name(a)));
        }
    }
    if let Some(c) = g.iter().position(|&v| v == usize::MAX) {
        return Err(Error::Internal(format!(
            "reflection unit misses `{}`",
            refl.reflected.name(c)
        )));
    }
    AlgMorphism::new(refl.reflected.clone(), f.target().clone(), g)
}

pub fn unit_is_mono(a: &Arc<AlgObject>, target: ReflectionTarget) -> Result<bool> {
    Ok(reflect_object(a, target)?.unit.is_injective())
}

/// The comparison `w : r(∏ A_i) → ∏ r(A_i)` and whether it is an isomorphism.
#[derive(Clone, Debug)]
pub struct ProductCheck {
    pub preserved: bool,
    pub w: AlgMorphism,
}

pub fn preserves_finite_products(
    target: ReflectionTarget,
    tag: CategoryTag,
    family: &[Arc<AlgObject>],
) -> Result<ProductCheck> {
    if !target.accepts(tag) {
        return Err(target.incompatible(tag));
    }
    let source = product(tag, family)?;
    let reflections = family
        .iter()
        .map(|a| reflect_object(a, target))
        .collect::<Result<Vec<_>>>()?;
    let reflected: Vec<Arc<AlgObject>> = reflections.iter().map(|r| r.reflected.clone()).collect();
    let target_cone = product(tag, &reflected)?;
    let units: Vec<AlgMorphism> = reflections.iter().map(|r| r.unit.clone()).collect();
    let prod_units = source.product_map(&target_cone, &units)?;
    let whole = reflect_object(&source.object, target)?;
    let w = factor_through_reflection(&whole, &prod_units)?;
    Ok(ProductCheck {
        preserved: w.is_isomorphism().is_some(),
        w,
    })
}

/// `rF` with its unit `θ^F : F → rF` and the objectwise reflections.
#[derive(Clone, Debug)]
pub struct ReflectedPresheaf {
    pub presheaf: Arc<Presheaf>,
    pub unit: NatTrans,
    pub reflections: Vec<Reflection>,
}

pub fn reflect_presheaf(f: &Arc<Presheaf>, target: ReflectionTarget) -> Result<ReflectedPresheaf> {
    if !target.accepts(f.tag()) {
        return Err(target.incompatible(f.tag()));
    }
    let space = f.space().clone();
    let reflections = space
        .open_ids()
        .map(|u| reflect_object(f.section(u), target))
        .collect::<Result<Vec<_>>>()?;
    let mut restrictions = BTreeMap::new();
    for big in space.open_ids() {
        for small in space.opens_within(big) {
            let down = f.restriction(big, small).then(&reflections[small.0].unit)?;
            restrictions.insert((big, small), factor_through_reflection(&reflections[big.0], &down)?);
        }
    }
    let sections = reflections.iter().map(|r| r.reflected.clone()).collect();
    let presheaf = Arc::new(Presheaf::new(space, f.tag(), sections, restrictions)?);
    let unit = NatTrans::new(
        f.clone(),
        presheaf.clone(),
        reflections.iter().map(|r| r.unit.clone()).collect(),
    )?;
    Ok(ReflectedPresheaf {
        presheaf,
        unit,
        reflections,
    })
}

/// Every section of `G` lies in the target subcategory.
pub fn valued_in(g: &Presheaf, target: ReflectionTarget) -> bool {
    g.sections().iter().all(|s| target.admits(s))
}

/// `𝒞(θ) : rF → G` with `𝒞(θ) ∘ θ^F = θ`.
pub fn reflect_nattrans(theta: &NatTrans, target: ReflectionTarget) -> Result<NatTrans> {
    let rf = reflect_presheaf(theta.source(), target)?;
    reflect_nattrans_via(theta, &rf)
}

pub fn reflect_nattrans_via(theta: &NatTrans, rf: &ReflectedPresheaf) -> Result<NatTrans> {
    let target = rf.reflections.first().map_or(ReflectionTarget::Identity, |r| r.target);
    let g = theta.target();
    if !valued_in(g, target) {
        return Err(Error::TargetNotInSubcategory(target.to_string()));
    }
    let components = rf
        .reflections
        .iter()
        .zip(theta.components())
        .map(|(r, c)| factor_through_reflection(r, c))
        .collect::<Result<Vec<_>>>()?;
    let ct = NatTrans::new(rf.presheaf.clone(), g.clone(), components)?;
    if !rf.unit.then(&ct)?.same_maps(theta) {
        return Err(Error::Internal("𝒞(θ) ∘ θ^F ≠ θ".into()));
    }
    Ok(ct)
}

/// Outcome shared by both routes: the sheaf, its unit from `F`, and checks.
#[derive(Clone, Debug)]
pub struct Route {
    pub presheaf: Arc<Presheaf>,
    pub unit: NatTrans,
    pub is_sheaf: bool,
    pub in_subcategory: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RouteJson {
    pub presheaf: PresheafJson,
    pub unit: NatTransJson,
    pub is_sheaf: bool,
    pub in_subcategory: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guaranteed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis_details: Option<HypothesisReport>,
}

impl Route {
    fn new(presheaf: Arc<Presheaf>, unit: NatTrans, target: ReflectionTarget, caps: &Caps) -> Result<Route> {
        let eq = check_sheaf_equalizer(&presheaf, CoverMode::Exhaustive, caps)?;
        let ax = check_sheaf_axioms(&presheaf, CoverMode::Exhaustive, caps)?;
        if eq.is_sheaf != ax.is_sheaf {
            return Err(Error::Internal("sheaf checkers disagree".into()));
        }
        let in_subcategory = valued_in(&presheaf, target);
        Ok(Route {
            presheaf,
            unit,
            is_sheaf: eq.is_sheaf,
            in_subcategory,
        })
    }

    pub fn to_json(&self) -> RouteJson {
        RouteJson {
            presheaf: self.presheaf.to_json(),
            unit: self.unit.to_json(),
            is_sheaf: self.is_sheaf,
            in_subcategory: self.in_subcategory,
            guaranteed: None,
            hypothesis_details: None,
        }
    }
}

/// Reflect first, then sheafify: `F → rF → (rF)⁺`.
#[derive(Clone, Debug)]
pub struct Route303 {
    pub route: Route,
    pub reflected: ReflectedPresheaf,
    pub plus: PlusResult,
}

pub fn sheaf_reflect_303(f: &Arc<Presheaf>, target: ReflectionTarget, caps: &Caps) -> Result<Route303> {
    let reflected = reflect_presheaf(f, target)?;
    let plus = plus(&reflected.presheaf, caps)?;
    let unit = reflected.unit.then(&plus.p)?;
    let route = Route::new(plus.plus.clone(), unit, target, caps)?;
    Ok(Route303 {
        route,
        reflected,
        plus,
    })
}

/// Which hypotheses of the sheafify-then-reflect route were observed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub unit_mono: bool,
    pub products_preserved: bool,
    /// Opens whose `F⁺` section has a non-injective reflection unit.
    pub non_mono_sections: Vec<String>,
    /// Product families (factor names per family) whose comparison failed.
    pub product_failures: Vec<Vec<String>>,
    pub families_checked: usize,
    /// Families over the size cap; any skipped family keeps the report from being green.
    pub families_skipped: usize,
}

impl HypothesisReport {
    pub fn all_green(&self) -> bool {
        self.unit_mono && self.products_preserved
    }
}

/// Sheafify first, then reflect: `F → F⁺ → r(F⁺)`.
#[derive(Clone, Debug)]
pub struct Route3031 {
    pub route: Route,
    pub plus: PlusResult,
    pub reflected: ReflectedPresheaf,
    pub hypotheses: HypothesisReport,
}

impl Route3031 {
    /// The hypotheses held, so the output is a sheaf by construction, not only by check.
    pub fn guaranteed(&self) -> bool {
        self.hypotheses.all_green()
    }

    pub fn to_json(&self) -> RouteJson {
        let mut js = self.route.to_json();
        js.guaranteed = Some(self.guaranteed());
        js.hypothesis_details = Some(self.hypotheses.clone());
        js
    }
}

/// The product families the reflection must preserve: stalk products `∏_{x∈U} F_x`,
/// and the part and overlap products of every canonical cover of `F⁺`.
fn product_families(pf: &PlusResult) -> Vec<Vec<Arc<AlgObject>>> {
    let f = &pf.plus;
    let space = f.space();
    let mut families = vec![Vec::new()];
    for u in space.open_ids() {
        families.push(space.points_of(u).iter().map(|&x| pf.stalks[x].object().clone()).collect());
        let cover = space.canonical_cover(u);
        families.push(cover.parts.iter().map(|&p| f.section(p).clone()).collect());
        families.push(
            cover
                .parts
                .iter()
                .flat_map(|&a| cover.parts.iter().map(move |&b| (a, b)))
                .map(|(a, b)| f.section(space.intersection(a, b)).clone())
                .collect(),
        );
    }
    let mut seen = BTreeSet::new();
    families.retain(|fam| {
        let key: Vec<String> = fam
            .iter()
            .map(|o| serde_json::to_string(&o.to_json()).expect("objects serialize"))
            .collect();
        seen.insert(key)
    });
    families
}

pub fn sheaf_reflect_3031(f: &Arc<Presheaf>, target: ReflectionTarget, caps: &Caps) -> Result<Route3031> {
    let pf = plus(f, caps)?;
    let reflected = reflect_presheaf(&pf.plus, target)?;
    let unit = pf.p.then(&reflected.unit)?;
    let space = f.space();

    let mut hypotheses = HypothesisReport {
        unit_mono: true,
        products_preserved: true,
        ..HypothesisReport::default()
    };
    for (u, r) in space.open_ids().zip(&reflected.reflections) {
        if !r.unit.is_injective() {
            hypotheses.unit_mono = false;
            hypotheses.non_mono_sections.push(space.key(u).to_string());
        }
    }
    // the identity reflection preserves every product
    let families = if target == ReflectionTarget::Identity {
        Vec::new()
    } else {
        product_families(&pf)
    };
    for family in families {
        let size = family
            .iter()
            .try_fold(1usize, |acc, o| acc.checked_mul(o.len()))
            .unwrap_or(usize::MAX);
        if size > caps.reflect_product {
            hypotheses.families_skipped += 1;
            hypotheses.products_preserved = false;
            continue;
        }
        hypotheses.families_checked += 1;
        if !preserves_finite_products(target, f.tag(), &family)?.preserved {
            hypotheses.products_preserved = false;
            hypotheses
                .product_failures
                .push(family.iter().map(|o| o.names().join(",")).collect());
        }
    }
    let route = Route::new(reflected.presheaf.clone(), unit, target, caps)?;
    Ok(Route3031 {
        route,
        plus: pf,
        reflected,
        hypotheses,
    })
}

/// How the comparison between the routes was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonMethod {
    /// Canonical maps from the universal properties, checked mutually inverse.
    Universal,
    /// Exhaustive search for a natural isomorphism.
    Search,
    /// The search hit the size cap before finishing.
    SearchCapped,
}

#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub route_303: Route303,
    pub route_3031: Route3031,
    pub natural_iso_found: bool,
    pub iso: Option<NatTrans>,
    pub method: ComparisonMethod,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Hypotheses {
    pub unit_mono: bool,
    pub products_preserved: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonJson {
    pub route_303: RouteJson,
    pub route_3031: RouteJson,
    pub hypotheses: Hypotheses,
    pub natural_iso_found: bool,
    pub iso: Option<NatTransJson>,
    pub method: ComparisonMethod,
}

impl ComparisonReport {
    pub fn to_json(&self) -> ComparisonJson {
        ComparisonJson {
            route_303: self.route_303.route.to_json(),
            route_3031: self.route_3031.to_json(),
            hypotheses: Hypotheses {
                unit_mono: self.route_3031.hypotheses.unit_mono,
                products_preserved: self.route_3031.hypotheses.products_preserved,
            },
            natural_iso_found: self.natural_iso_found,
            iso: self.iso.as_ref().map(NatTrans::to_json),
            method: self.method,
        }
    }
}

fn is_identity(t: &NatTrans) -> bool {
    t.components()
        .iter()
        .all(|c| c.map().iter().enumerate().all(|(i, &j)| i == j))
}

/// The canonical maps `φ : (rF)⁺ → r(F⁺)` and `ψ : r(F⁺) → (rF)⁺`, when both
/// routes produced target-valued sheaves and the factorizations exist.
fn canonical_comparison(a: &Route303, b: &Route3031, caps: &Caps) -> Result<Option<(NatTrans, NatTrans)>> {
    let (ra, rb) = (&a.route, &b.route);
    if !(ra.is_sheaf && rb.is_sheaf && ra.in_subcategory && rb.in_subcategory) {
        return Ok(None);
    }
    // φ: factor F → r(F⁺) through rF, then through p^{rF}
    let through_r = reflect_nattrans_via(&rb.unit, &a.reflected)?;
    let target_plus = plus(&rb.presheaf, caps)?;
    let phi = match sheafify_factor_with(&through_r, &a.plus, &target_plus) {
        Ok(phi) => phi,
        Err(Error::PNotInvertible(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    // ψ: factor F → (rF)⁺ through p^F, then through θ^{F⁺}
    let back_plus = plus(&ra.presheaf, caps)?;
    let sigma = match sheafify_factor_with(&ra.unit, &b.plus, &back_plus) {
        Ok(s) => s,
        Err(Error::PNotInvertible(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let psi = reflect_nattrans_via(&sigma, &b.reflected)?;
    Ok(Some((phi, psi)))
}

pub fn compare_reflections(f: &Arc<Presheaf>, target: ReflectionTarget, caps: &Caps) -> Result<ComparisonReport> {
    let route_303 = sheaf_reflect_303(f, target, caps)?;
    let route_3031 = sheaf_reflect_3031(f, target, caps)?;
    if let Some((phi, psi)) = canonical_comparison(&route_303, &route_3031, caps)? {
        let inverse = is_identity(&phi.then(&psi)?) && is_identity(&psi.then(&phi)?);
        if inverse {
            return Ok(ComparisonReport {
                route_303,
                route_3031,
                natural_iso_found: true,
                iso: Some(phi),
                method: ComparisonMethod::Universal,
            });
        }
    }
    let (a, b) = (&route_303.route.presheaf, &route_3031.route.presheaf);
    let sizes_match = a
        .sections()
        .iter()
        .zip(b.sections())
        .all(|(x, y)| x.len() == y.len());
    let (iso, method) = if !sizes_match {
        (None, ComparisonMethod::Search)
    } else {
        match enumerate_nattrans(a, b, caps) {
            Ok(all) => (
                all.into_iter().find(NatTrans::is_natural_isomorphism),
                ComparisonMethod::Search,
            ),
            Err(Error::SizeCap(_)) => (None, ComparisonMethod::SearchCapped),
            Err(e) => return Err(e),
        }
    };
    Ok(ComparisonReport {
        route_303,
        route_3031,
        natural_iso_found: iso.is_some(),
        iso,
        method,
    })
}
