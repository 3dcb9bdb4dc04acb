//! Stalks as germ classes, their cocone maps, and the structure recovered
//! on them from the sections.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgObject, CategoryTag};
use crate::error::{Error, Result};
use crate::finspace::OpenId;
use crate::presheaf::Presheaf;

/// A germ at a point, represented at the point's minimal open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Germ {
    pub point: String,
    pub class_id: usize,
    pub representative: (OpenId, usize),
}

/// The stalk `F_x` with its cocone `ρ^U : F(U) → F_x`.
#[derive(Clone, Debug)]
pub struct Stalk {
    point: usize,
    point_name: String,
    min_open: OpenId,
    neighborhoods: Vec<OpenId>,
    rho: BTreeMap<OpenId, Vec<usize>>,
    reps: Vec<usize>,
    object: Arc<AlgObject>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The germ classes of `F` at `x`, carried by a plain set.
///
/// `(U, a) ~ (V, b)` when some open `W ⊆ U ∩ V` containing `x` has
/// `F_W^U(a) = F_W^V(b)`; the equivalence is closed transitively.
pub fn stalk(f: &Presheaf, x: &str) -> Result<Stalk> {
    let point = f.space().point_index(x)?;
    stalk_at(f, point)
}

pub(crate) fn stalk_at(f: &Presheaf, point: usize) -> Result<Stalk> {
    let space = f.space();
    let neighborhoods = space.neighborhoods(point);
    let min_open = space.min_open(point);

    let mut offset = BTreeMap::new();
    let mut nodes = 0usize;
    for &u in &neighborhoods {
        offset.insert(u, nodes);
        nodes += f.section(u).len();
    }
    let mut uf = UnionFind((0..nodes).collect());
    for &w in &neighborhoods {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for &u in neighborhoods.iter().filter(|&&u| space.is_subset(w, u)) {
            for s in 0..f.section(u).len() {
                let node = offset[&u] + s;
                match seen.get(&f.restrict(u, w, s)) {
                    Some(&other) => uf.union(node, other),
                    None => {
                        seen.insert(f.restrict(u, w, s), node);
                    }
                }
            }
        }
    }

    // classes are numbered by their least member over the minimal open
    let base = offset[&min_open];
    let mut class_of_root = HashMap::new();
    let mut reps = Vec::new();
    for s in 0..f.section(min_open).len() {
        let root = uf.find(base + s);
        class_of_root.entry(root).or_insert_with(|| {
            reps.push(s);
            reps.len() - 1
        });
    }
    let mut rho = BTreeMap::new();
    for &u in &neighborhoods {
        let ids = (0..f.section(u).len())
            .map(|s| {
                let root = uf.find(offset[&u] + s);
                class_of_root.get(&root).copied().ok_or_else(|| {
                    Error::Internal(format!(
                        "germ of `{}` over `{}` has no representative over `{}`",
                        f.section(u).name(s),
                        space.key(u),
                        space.key(min_open)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rho.insert(u, ids);
    }
    let names: Vec<String> = reps.iter().map(|&r| f.section(min_open).name(r)).collect();
    let object = Arc::new(AlgObject::set(&names)?);
    Ok(Stalk {
        point,
        point_name: space.points()[point].clone(),
        min_open,
        neighborhoods,
        rho,
        reps,
        object,
    })
}

impl Stalk {
    pub fn point(&self) -> usize {
        self.point
    }

    pub fn point_name(&self) -> &str {
        &self.point_name
    }

    pub fn min_open(&self) -> OpenId {
        self.min_open
    }

    pub fn neighborhoods(&self) -> &[OpenId] {
        &self.neighborhoods
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// The germs as an object; structured once [`stalk_structured`] has run.
    pub fn object(&self) -> &Arc<AlgObject> {
        &self.object
    }

    /// Representative element over the minimal open of each germ.
    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    pub fn germ(&self, class_id: usize) -> Germ {
        Germ {
            point: self.point_name.clone(),
            class_id,
            representative: (self.min_open, self.reps[class_id]),
        }
    }

    pub fn germs(&self) -> Vec<Germ> {
        (0..self.len()).map(|g| self.germ(g)).collect()
    }

    /// The cocone map `ρ^U` as class ids, for `U` a neighborhood of the point.
    pub fn rho_map(&self, u: OpenId) -> Option<&[usize]> {
        self.rho.get(&u).map(Vec::as_slice)
    }

    /// `ρ^U(s)`, or `None` when `U` is not a neighborhood of the point.
    pub fn rho(&self, u: OpenId, s: usize) -> Option<usize> {
        self.rho.get(&u).and_then(|m| m.get(s).copied())
    }

    /// The class of `(U, s)`.
    pub fn germ_of(&self, f: &Presheaf, u: OpenId, s: usize) -> Result<Germ> {
        let map = self.rho.get(&u).ok_or_else(|| {
            Error::NotANeighborhood(f.space().key(u).to_string(), self.point_name.clone())
        })?;
        let class = map
            .get(s)
            .copied()
            .ok_or_else(|| Error::UnknownElement(format!("#{s} of F({})", f.space().key(u))))?;
        Ok(self.germ(class))
    }

    pub fn to_json(&self, f: &Presheaf) -> StalkJson {
        let obj = &self.object;
        let n = obj.len();
        StalkJson {
            point: self.point_name.clone(),
            germs: (0..n)
                .map(|g| GermJson {
                    id: g,
                    rep: (
                        f.space().key(self.min_open).to_string(),
                        f.section(self.min_open).name(self.reps[g]),
                    ),
                })
                .collect(),
            operation: obj
                .tag()
                .is_algebraic()
                .then(|| (0..n).map(|a| (0..n).map(|b| obj.op(a, b)).collect()).collect()),
            identity: obj.identity(),
            leq: (obj.tag() == CategoryTag::FinPreord).then(|| {
                (0..n)
                    .flat_map(|a| (0..n).map(move |b| (a, b)))
                    .filter(|&(a, b)| obj.leq(a, b))
                    .map(|(a, b)| [a, b])
                    .collect()
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermJson {
    pub id: usize,
    pub rep: (String, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StalkJson {
    pub point: String,
    pub germs: Vec<GermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operation: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leq: Option<Vec<[usize; 2]>>,
}

/// The class of `(U, s)` at `x`.
pub fn germ_of(f: &Presheaf, x: &str, u: OpenId, s: usize) -> Result<Germ> {
    stalk(f, x)?.germ_of(f, u, s)
}

/// Whether `(U, a)` and `(V, b)` agree on some neighborhood `W ⊆ U ∩ V` of
/// `x`; returns the largest such `W`.
pub fn germs_equal(
    f: &Presheaf,
    x: &str,
    (u, a): (OpenId, usize),
    (v, b): (OpenId, usize),
) -> Result<Option<OpenId>> {
    let space = f.space();
    let point = space.point_index(x)?;
    for (w, s) in [(u, a), (v, b)] {
        if !space.contains(w, point) {
            return Err(Error::NotANeighborhood(space.key(w).to_string(), x.to_string()));
        }
        if s >= f.section(w).len() {
            return Err(Error::UnknownElement(format!("#{s} of F({})", space.key(w))));
        }
    }
    let meet = space.intersection(u, v);
    Ok(space
        .neighborhoods(point)
        .into_iter()
        .rev()
        .filter(|&w| space.is_subset(w, meet))
        .find(|&w| f.restrict(u, w, a) == f.restrict(v, w, b)))
}

/// Every `(U, s)` pair in each germ class.
fn class_members(stalk: &Stalk) -> Vec<Vec<(OpenId, usize)>> {
    let mut members = vec![Vec::new(); stalk.len()];
    for (&u, ids) in &stalk.rho {
        for (s, &g) in ids.iter().enumerate() {
            members[g].push((u, s));
        }
    }
    members
}

/// The germ operation `[U,a] ∗ [V,b] = ρ^{U∩V}(a|_{U∩V} · b|_{U∩V})`.
///
/// The product is recomputed from every pair of representatives and must
/// agree; the identity germ is `ρ^U(e_U)` for every neighborhood `U`.
pub fn stalk_operation(f: &Presheaf, x: &str) -> Result<Stalk> {
    if !f.tag().is_algebraic() {
        return Err(Error::NotAlgebraic(f.tag().to_string()));
    }
    let base = stalk(f, x)?;
    with_operation(f, base)
}

fn with_operation(f: &Presheaf, mut st: Stalk) -> Result<Stalk> {
    let space = f.space();
    let members = class_members(&st);
    let n = st.len();
    let mut table = vec![usize::MAX; n * n];
    for g in 0..n {
        for h in 0..n {
            for &(u, a) in &members[g] {
                for &(v, b) in &members[h] {
                    let w = space.intersection(u, v);
                    let prod = f.section(w).op(f.restrict(u, w, a), f.restrict(v, w, b));
                    let class = st.rho(w, prod).ok_or_else(|| {
                        Error::Internal(format!("`{}` is not a neighborhood", space.key(w)))
                    })?;
                    let slot = &mut table[g * n + h];
                    if *slot == usize::MAX {
                        *slot = class;
                    } else if *slot != class {
                        return Err(Error::WellDefinednessFailure(format!(
                            "{}: germs {g} ∗ {h} via ({}, {}) and ({}, {})",
                            st.point_name,
                            space.key(u),
                            f.section(u).name(a),
                            space.key(v),
                            f.section(v).name(b)
                        )));
                    }
                }
            }
        }
    }
    let mut identity = None;
    for &u in &st.neighborhoods {
        let e = st.rho(u, f.section(u).identity().unwrap()).unwrap();
        if *identity.get_or_insert(e) != e {
            return Err(Error::WellDefinednessFailure(format!(
                "{}: identity germs disagree over `{}`",
                st.point_name,
                space.key(u)
            )));
        }
    }
    let identity = identity.expect("every point has a neighborhood");
    if f.tag().requires_inverses() {
        for (g, class) in members.iter().enumerate() {
            for &(u, a) in class {
                let inv = st.rho(u, f.section(u).inverse(a).unwrap()).unwrap();
                if table[g * n + inv] != identity || table[inv * n + g] != identity {
                    return Err(Error::WellDefinednessFailure(format!(
                        "{}: germ {g} has no inverse via `{}`",
                        st.point_name,
                        space.key(u)
                    )));
                }
            }
        }
    }
    let names = st.object.names();
    let rows = (0..n).map(|a| table[a * n..(a + 1) * n].to_vec()).collect();
    st.object = Arc::new(AlgObject::from_table(f.tag(), &names, rows, Some(identity))?);
    Ok(st)
}

/// The stalk order: `[U,a] ≤ [V,b]` when the restrictions compare on some
/// neighborhood inside `U ∩ V`.
fn with_order(f: &Presheaf, mut st: Stalk) -> Result<Stalk> {
    let space = f.space();
    let members = class_members(&st);
    let n = st.len();
    let mut pairs = Vec::new();
    for g in 0..n {
        for h in 0..n {
            let related = members[g].iter().any(|&(u, a)| {
                members[h].iter().any(|&(v, b)| {
                    let meet = space.intersection(u, v);
                    st.neighborhoods.iter().any(|&w| {
                        space.is_subset(w, meet)
                            && f.section(w).leq(f.restrict(u, w, a), f.restrict(v, w, b))
                    })
                })
            });
            if related {
                pairs.push((g, h));
            }
        }
    }
    st.object = Arc::new(AlgObject::preorder(&st.object.names(), &pairs)?);
    Ok(st)
}

/// The stalk carrying the structure of `F`'s category.
pub fn stalk_structured(f: &Presheaf, x: &str) -> Result<Stalk> {
    let point = f.space().point_index(x)?;
    stalk_structured_at(f, point)
}

pub(crate) fn stalk_structured_at(f: &Presheaf, point: usize) -> Result<Stalk> {
    let st = stalk_at(f, point)?;
    match f.tag() {
        CategoryTag::FinSet => Ok(st),
        CategoryTag::FinPreord => with_order(f, st),
        _ => with_operation(f, st),
    }
}

/// The same sections and restrictions with the structure dropped.
pub fn forget(f: &Presheaf) -> Result<Presheaf> {
    if f.tag() == CategoryTag::FinSet {
        return Err(Error::AlreadySet);
    }
    f.retagged_as_sets().revalidate()
}

/// Compares the set-level stalk of `forget(F)` with the colimit computed in
/// `F`'s own category.
///
/// The minimal open `M` is initial among the neighborhoods, so `F(M)` with
/// the restrictions `F_M^U` is the colimit in the category. The check asks
/// that `[U,a] ↦ F_M^U(a)` be a well-defined bijection from the set-level
/// germs onto `F(M)` carrying `∗` (or the stalk order) to the structure of
/// `F(M)`.
pub fn stalk_commutes_with_forget(f: &Presheaf, x: &str) -> Result<bool> {
    if f.tag() == CategoryTag::FinSet {
        return Err(Error::AlreadySet);
    }
    let point = f.space().point_index(x)?;
    let set_level = stalk_at(&forget(f)?, point)?;
    let structured = match f.tag() {
        CategoryTag::FinPreord => with_order(f, set_level.clone())?,
        _ => with_operation(f, set_level.clone())?,
    };
    let m = set_level.min_open;
    let fm = f.section(m);
    let mut phi = vec![usize::MAX; set_level.len()];
    for (&u, ids) in &set_level.rho {
        for (s, &g) in ids.iter().enumerate() {
            let image = f.restrict(u, m, s);
            if phi[g] == usize::MAX {
                phi[g] = image;
            } else if phi[g] != image {
                return Ok(false);
            }
        }
    }
    let mut hit = vec![false; fm.len()];
    for &i in &phi {
        if i == usize::MAX || std::mem::replace(&mut hit[i], true) {
            return Ok(false);
        }
    }
    if hit.iter().any(|h| !h) {
        return Ok(false);
    }
    let obj = &structured.object;
    let n = obj.len();
    let preserved = if f.tag() == CategoryTag::FinPreord {
        (0..n).all(|a| (0..n).all(|b| obj.leq(a, b) == fm.leq(phi[a], phi[b])))
    } else {
        phi[obj.identity().unwrap()] == fm.identity().unwrap()
            && (0..n).all(|a| (0..n).all(|b| phi[obj.op(a, b)] == fm.op(phi[a], phi[b])))
    };
    Ok(preserved)
}
