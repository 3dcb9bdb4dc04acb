//! Finite concrete categories: sets, groups, abelian groups, commutative
//! monoids and preorders.
//!
//! An [`AlgObject`] is either given explicitly by its multiplication table
//! (or order relation), or is a lazy product or subobject of other objects.
//! Lazy carriers keep large products such as `∏_{(i,j)} F(U_i ∩ U_j)`
//! addressable without materializing their tables; elements are plain
//! indices and names are rendered on demand.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CategoryTag {
    FinSet,
    FinGrp,
    FinAb,
    FinCMon,
    FinPreord,
}

impl CategoryTag {
    pub const ALL: [CategoryTag; 5] = [
        CategoryTag::FinSet,
        CategoryTag::FinGrp,
        CategoryTag::FinAb,
        CategoryTag::FinCMon,
        CategoryTag::FinPreord,
    ];

    /// Tags whose objects carry a binary operation with identity.
    pub fn is_algebraic(self) -> bool {
        matches!(self, CategoryTag::FinGrp | CategoryTag::FinAb | CategoryTag::FinCMon)
    }

    pub fn requires_inverses(self) -> bool {
        matches!(self, CategoryTag::FinGrp | CategoryTag::FinAb)
    }

    pub fn requires_commutativity(self) -> bool {
        matches!(self, CategoryTag::FinAb | CategoryTag::FinCMon)
    }

    pub fn name(self) -> &'static str {
        match self {
            CategoryTag::FinSet => "FinSet",
            CategoryTag::FinGrp => "FinGrp",
            CategoryTag::FinAb => "FinAb",
            CategoryTag::FinCMon => "FinCMon",
            CategoryTag::FinPreord => "FinPreord",
        }
    }
}

impl fmt::Display for CategoryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Object JSON: `{"tag":"FinGrp","elements":[...],"table":[[...]],"identity":0}`
/// or `{"tag":"FinPreord","elements":[...],"leq":[[0,0],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<CategoryTag>,
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leq: Option<Vec<[usize; 2]>>,
}

/// Morphism JSON: `{"map":{"a":"x",...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub map: BTreeMap<String, String>,
}

#[derive(Clone, Debug)]
struct Explicit {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    /// Row-major `n × n` operation table.
    table: Option<Vec<usize>>,
    identity: Option<usize>,
    /// Row-major `n × n` order relation.
    leq: Option<Vec<bool>>,
}

#[derive(Clone, Debug)]
enum Carrier {
    Explicit(Explicit),
    Product {
        factors: Vec<Arc<AlgObject>>,
        strides: Vec<usize>,
    },
    Sub {
        ambient: Arc<AlgObject>,
        members: Vec<usize>,
    },
}

/// A finite structure in one of the tagged categories.
#[derive(Clone, Debug)]
pub struct AlgObject {
    tag: CategoryTag,
    len: usize,
    carrier: Carrier,
}

/// Splits `(a|b|c)` into its top-level components.
pub fn split_tuple(name: &str) -> Option<Vec<&str>> {
    let inner = name.strip_prefix('(')?.strip_suffix(')')?;
    if inner.is_empty() {
        return Some(Vec::new());
    }
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in inner.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            '|' if depth == 0 => {
                parts.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return None;
        }
    }
    parts.push(&inner[start..]);
    Some(parts)
}

/// Renders a tuple name `(a|b|c)`.
pub fn tuple_name<S: AsRef<str>>(parts: &[S]) -> String {
    let mut s = String::from("(");
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            s.push('|');
        }
        s.push_str(p.as_ref());
    }
    s.push(')');
    s
}

impl AlgObject {
    /// A finite set.
    pub fn set<S: AsRef<str>>(elements: &[S]) -> Result<AlgObject> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        AlgObject::validate(CategoryTag::FinSet, names, None, None, None)
    }

    /// An algebraic object from its table; the identity is located if not given.
    pub fn from_table<S: AsRef<str>>(
        tag: CategoryTag,
        elements: &[S],
        table: Vec<Vec<usize>>,
        identity: Option<usize>,
    ) -> Result<AlgObject> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        AlgObject::validate(tag, names, Some(table), identity, None)
    }

    /// An algebraic object whose operation is given on element indices.
    pub fn from_fn<S: AsRef<str>>(
        tag: CategoryTag,
        elements: &[S],
        op: impl Fn(usize, usize) -> usize,
    ) -> Result<AlgObject> {
        let n = elements.len();
        let table = (0..n).map(|i| (0..n).map(|j| op(i, j)).collect()).collect();
        AlgObject::from_table(tag, elements, table, None)
    }

    /// A preorder from its relation pairs `(a, b)` meaning `a ≤ b`.
    pub fn preorder<S: AsRef<str>>(elements: &[S], leq: &[(usize, usize)]) -> Result<AlgObject> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let pairs: Vec<[usize; 2]> = leq.iter().map(|&(a, b)| [a, b]).collect();
        AlgObject::validate(CategoryTag::FinPreord, names, None, None, Some(pairs))
    }

    /// The one-element object of a category.
    pub fn terminal(tag: CategoryTag) -> AlgObject {
        AlgObject::explicit_unchecked(
            tag,
            vec!["()".to_string()],
            tag.is_algebraic().then(|| vec![0]),
            tag.is_algebraic().then_some(0),
            (tag == CategoryTag::FinPreord).then(|| vec![true]),
        )
    }

    pub fn from_json(tag: CategoryTag, raw: &ObjectJson) -> Result<AlgObject> {
        if let Some(t) = raw.tag {
            if t != tag {
                return Err(Error::MixedTags(t.to_string(), tag.to_string()));
            }
        }
        AlgObject::validate(
            tag,
            raw.elements.clone(),
            raw.table.clone(),
            raw.identity,
            raw.leq.clone(),
        )
    }

    fn validate(
        tag: CategoryTag,
        elements: Vec<String>,
        table: Option<Vec<Vec<usize>>>,
        identity: Option<usize>,
        leq: Option<Vec<[usize; 2]>>,
    ) -> Result<AlgObject> {
        let n = elements.len();
        let mut index = HashMap::with_capacity(n);
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::DuplicateElement(e.clone()));
            }
        }
        let name = |i: usize| elements[i].clone();

        let mut flat_table = None;
        let mut ident = None;
        if tag.is_algebraic() {
            let table = table.ok_or_else(|| Error::MalformedTable("missing table".into()))?;
            if table.len() != n || table.iter().any(|row| row.len() != n) {
                return Err(Error::MalformedTable(format!("expected a {n}×{n} table")));
            }
            if let Some(bad) = table.iter().flatten().find(|&&v| v >= n) {
                return Err(Error::MalformedTable(format!("entry {bad} out of range")));
            }
            let t = |a: usize, b: usize| table[a][b];
            let is_identity = |e: usize| (0..n).all(|a| t(e, a) == a && t(a, e) == a);
            let e = match identity {
                Some(e) if e >= n => {
                    return Err(Error::MalformedTable(format!("identity {e} out of range")))
                }
                Some(e) if !is_identity(e) => return Err(Error::NoIdentity(Some(name(e)))),
                Some(e) => e,
                None => (0..n).find(|&e| is_identity(e)).ok_or(Error::NoIdentity(None))?,
            };
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if t(t(a, b), c) != t(a, t(b, c)) {
                            return Err(Error::NotAssociative(name(a), name(b), name(c)));
                        }
                    }
                }
            }
            if tag.requires_commutativity() {
                for a in 0..n {
                    for b in a + 1..n {
                        if t(a, b) != t(b, a) {
                            return Err(Error::NotCommutative(name(a), name(b)));
                        }
                    }
                }
            }
            if tag.requires_inverses() {
                for a in 0..n {
                    if !(0..n).any(|b| t(a, b) == e && t(b, a) == e) {
                        return Err(Error::NoInverse(name(a)));
                    }
                }
            }
            flat_table = Some(table.into_iter().flatten().collect());
            ident = Some(e);
        } else if table.is_some() {
            return Err(Error::MalformedTable(format!("{tag} objects carry no table")));
        }

        let mut flat_leq = None;
        if tag == CategoryTag::FinPreord {
            let pairs = leq.unwrap_or_default();
            let mut rel = vec![false; n * n];
            for [a, b] in pairs {
                if a >= n || b >= n {
                    return Err(Error::MalformedTable(format!("order pair ({a},{b}) out of range")));
                }
                rel[a * n + b] = true;
            }
            for a in 0..n {
                if !rel[a * n + a] {
                    return Err(Error::NotReflexive(name(a)));
                }
            }
            for a in 0..n {
                for b in 0..n {
                    if !rel[a * n + b] {
                        continue;
                    }
                    for c in 0..n {
                        if rel[b * n + c] && !rel[a * n + c] {
                            return Err(Error::NotTransitive(name(a), name(b), name(c)));
                        }
                    }
                }
            }
            flat_leq = Some(rel);
        } else if leq.is_some() {
            return Err(Error::MalformedTable(format!("{tag} objects carry no order")));
        }

        Ok(AlgObject {
            tag,
            len: n,
            carrier: Carrier::Explicit(Explicit {
                elements,
                index,
                table: flat_table,
                identity: ident,
                leq: flat_leq,
            }),
        })
    }

    pub(crate) fn explicit_unchecked(
        tag: CategoryTag,
        elements: Vec<String>,
        table: Option<Vec<usize>>,
        identity: Option<usize>,
        leq: Option<Vec<bool>>,
    ) -> AlgObject {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        AlgObject {
            tag,
            len: elements.len(),
            carrier: Carrier::Explicit(Explicit {
                elements,
                index,
                table,
                identity,
                leq,
            }),
        }
    }

    /// Re-runs the full validation of the tag's axioms.
    pub fn revalidate(&self) -> Result<AlgObject> {
        AlgObject::from_json(self.tag, &self.to_json())
    }

    /// The same carrier and table, checked against another tag's axioms.
    pub fn validate_as(&self, tag: CategoryTag) -> Result<AlgObject> {
        let mut raw = self.to_json();
        raw.tag = None;
        if !tag.is_algebraic() {
            raw.table = None;
            raw.identity = None;
        }
        if tag != CategoryTag::FinPreord {
            raw.leq = None;
        }
        AlgObject::from_json(tag, &raw)
    }

    /// Structure-forgetting copy of the carrier.
    pub fn underlying_set(&self) -> AlgObject {
        AlgObject::explicit_unchecked(CategoryTag::FinSet, self.names(), None, None, None)
    }

    pub fn tag(&self) -> CategoryTag {
        self.tag
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn name(&self, i: usize) -> String {
        match &self.carrier {
            Carrier::Explicit(e) => e.elements[i].clone(),
            Carrier::Product { factors, .. } => {
                let parts: Vec<String> = self
                    .decode(i)
                    .iter()
                    .zip(factors)
                    .map(|(&c, f)| f.name(c))
                    .collect();
                tuple_name(&parts)
            }
            Carrier::Sub { ambient, members } => ambient.name(members[i]),
        }
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.len).map(|i| self.name(i)).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        match &self.carrier {
            Carrier::Explicit(e) => e.index.get(name).copied(),
            Carrier::Product { factors, .. } => {
                let parts = split_tuple(name)?;
                if parts.len() != factors.len() {
                    return None;
                }
                let comps: Option<Vec<usize>> = parts
                    .iter()
                    .zip(factors)
                    .map(|(p, f)| f.index_of(p))
                    .collect();
                Some(self.encode(&comps?))
            }
            Carrier::Sub { ambient, members } => {
                let a = ambient.index_of(name)?;
                members.binary_search(&a).ok()
            }
        }
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    fn decode(&self, mut i: usize) -> Vec<usize> {
        match &self.carrier {
            Carrier::Product { strides, .. } => strides
                .iter()
                .map(|&s| {
                    let d = i / s;
                    i %= s;
                    d
                })
                .collect(),
            _ => vec![i],
        }
    }

    fn encode(&self, comps: &[usize]) -> usize {
        match &self.carrier {
            Carrier::Product { strides, .. } => {
                comps.iter().zip(strides).map(|(c, s)| c * s).sum()
            }
            _ => comps[0],
        }
    }

    /// The binary operation; panics for set-like tags.
    pub fn op(&self, a: usize, b: usize) -> usize {
        match &self.carrier {
            Carrier::Explicit(e) => {
                let t = e.table.as_ref().expect("object has no operation");
                t[a * self.len + b]
            }
            Carrier::Product { factors, .. } => {
                let (x, y) = (self.decode(a), self.decode(b));
                let c: Vec<usize> = factors
                    .iter()
                    .enumerate()
                    .map(|(k, f)| f.op(x[k], y[k]))
                    .collect();
                self.encode(&c)
            }
            Carrier::Sub { ambient, members } => {
                let p = ambient.op(members[a], members[b]);
                members
                    .binary_search(&p)
                    .expect("subobject closed under the operation")
            }
        }
    }

    pub fn identity(&self) -> Option<usize> {
        if !self.tag.is_algebraic() {
            return None;
        }
        match &self.carrier {
            Carrier::Explicit(e) => e.identity,
            Carrier::Product { factors, .. } => {
                let c: Option<Vec<usize>> = factors.iter().map(|f| f.identity()).collect();
                Some(self.encode(&c?))
            }
            Carrier::Sub { ambient, members } => {
                members.binary_search(&ambient.identity()?).ok()
            }
        }
    }

    /// Order relation; for non-preorder tags this is equality.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        if self.tag != CategoryTag::FinPreord {
            return a == b;
        }
        match &self.carrier {
            Carrier::Explicit(e) => e.leq.as_ref().map_or(a == b, |r| r[a * self.len + b]),
            Carrier::Product { factors, .. } => {
                let (x, y) = (self.decode(a), self.decode(b));
                factors.iter().enumerate().all(|(k, f)| f.leq(x[k], y[k]))
            }
            Carrier::Sub { ambient, members } => ambient.leq(members[a], members[b]),
        }
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        let e = self.identity()?;
        (0..self.len).find(|&b| self.op(a, b) == e && self.op(b, a) == e)
    }

    pub fn is_commutative(&self) -> bool {
        self.tag.is_algebraic()
            && (0..self.len).all(|a| (a + 1..self.len).all(|b| self.op(a, b) == self.op(b, a)))
    }

    pub fn is_group(&self) -> bool {
        self.tag.is_algebraic() && (0..self.len).all(|a| self.inverse(a).is_some())
    }

    /// `a·c = b·c ⟹ a = b` for all elements.
    pub fn is_cancellative(&self) -> bool {
        if !self.tag.is_algebraic() {
            return false;
        }
        (0..self.len).all(|c| {
            let mut seen = vec![false; self.len];
            (0..self.len).all(|a| !std::mem::replace(&mut seen[self.op(a, c)], true))
        }) && (0..self.len).all(|c| {
            let mut seen = vec![false; self.len];
            (0..self.len).all(|a| !std::mem::replace(&mut seen[self.op(c, a)], true))
        })
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.len).all(|a| {
            (0..self.len).all(|b| a == b || !(self.leq(a, b) && self.leq(b, a)))
        })
    }

    /// An explicit copy with materialized tables.
    pub fn materialize(&self) -> AlgObject {
        if let Carrier::Explicit(_) = self.carrier {
            return self.clone();
        }
        let n = self.len;
        let table = self
            .tag
            .is_algebraic()
            .then(|| (0..n * n).map(|k| self.op(k / n, k % n)).collect());
        let leq = (self.tag == CategoryTag::FinPreord)
            .then(|| (0..n * n).map(|k| self.leq(k / n, k % n)).collect());
        AlgObject::explicit_unchecked(self.tag, self.names(), table, self.identity(), leq)
    }

    pub fn to_json(&self) -> ObjectJson {
        let n = self.len;
        ObjectJson {
            tag: Some(self.tag),
            elements: self.names(),
            table: self
                .tag
                .is_algebraic()
                .then(|| (0..n).map(|a| (0..n).map(|b| self.op(a, b)).collect()).collect()),
            identity: self.identity(),
            leq: (self.tag == CategoryTag::FinPreord).then(|| {
                (0..n)
                    .flat_map(|a| (0..n).map(move |b| (a, b)))
                    .filter(|&(a, b)| self.leq(a, b))
                    .map(|(a, b)| [a, b])
                    .collect()
            }),
        }
    }

    /// Name-sensitive structural equality.
    pub fn same_as(&self, other: &AlgObject) -> bool {
        if self.tag != other.tag || self.len != other.len {
            return false;
        }
        let n = self.len;
        (0..n).all(|i| self.name(i) == other.name(i))
            && self.identity() == other.identity()
            && (!self.tag.is_algebraic()
                || (0..n).all(|a| (0..n).all(|b| self.op(a, b) == other.op(a, b))))
            && (self.tag != CategoryTag::FinPreord
                || (0..n).all(|a| (0..n).all(|b| self.leq(a, b) == other.leq(a, b))))
    }
}

impl PartialEq for AlgObject {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for AlgObject {}

fn same_object(a: &Arc<AlgObject>, b: &Arc<AlgObject>) -> bool {
    Arc::ptr_eq(a, b) || a.same_as(b)
}

/// A structure-preserving map between two objects of the same tag.
#[derive(Clone, Debug)]
pub struct AlgMorphism {
    source: Arc<AlgObject>,
    target: Arc<AlgObject>,
    map: Vec<usize>,
}

impl AlgMorphism {
    /// Builds and validates a morphism from an index map.
    pub fn new(source: Arc<AlgObject>, target: Arc<AlgObject>, map: Vec<usize>) -> Result<AlgMorphism> {
        let f = AlgMorphism { source, target, map };
        f.check()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: Arc<AlgObject>,
        target: Arc<AlgObject>,
        map: Vec<usize>,
    ) -> AlgMorphism {
        AlgMorphism { source, target, map }
    }

    pub fn from_fn(
        source: Arc<AlgObject>,
        target: Arc<AlgObject>,
        f: impl Fn(usize) -> usize,
    ) -> Result<AlgMorphism> {
        let map = (0..source.len()).map(f).collect();
        AlgMorphism::new(source, target, map)
    }

    pub fn from_names(
        source: Arc<AlgObject>,
        target: Arc<AlgObject>,
        map: &BTreeMap<String, String>,
    ) -> Result<AlgMorphism> {
        let mut idx = vec![usize::MAX; source.len()];
        for (a, b) in map {
            let i = source.element(a)?;
            idx[i] = target.element(b)?;
        }
        if let Some(i) = idx.iter().position(|&v| v == usize::MAX) {
            return Err(Error::MapNotTotal(source.name(i)));
        }
        AlgMorphism::new(source, target, idx)
    }

    pub fn from_json(
        source: Arc<AlgObject>,
        target: Arc<AlgObject>,
        raw: &MorphismJson,
    ) -> Result<AlgMorphism> {
        AlgMorphism::from_names(source, target, &raw.map)
    }

    pub fn identity(object: Arc<AlgObject>) -> AlgMorphism {
        let map = (0..object.len()).collect();
        AlgMorphism {
            source: object.clone(),
            target: object,
            map,
        }
    }

    /// Verifies totality and preservation of the structure on all pairs.
    pub fn check(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if s.tag() != t.tag() {
            return Err(Error::MixedTags(s.tag().to_string(), t.tag().to_string()));
        }
        if self.map.len() != s.len() {
            return Err(Error::MapNotTotal(
                s.name(self.map.len().min(s.len().saturating_sub(1))),
            ));
        }
        if let Some(i) = self.map.iter().position(|&v| v >= t.len()) {
            return Err(Error::MapNotTotal(s.name(i)));
        }
        if s.tag().is_algebraic() {
            let (es, et) = (s.identity().unwrap(), t.identity().unwrap());
            if self.map[es] != et {
                return Err(Error::IdentityNotPreserved(s.name(es), t.name(self.map[es])));
            }
            for a in 0..s.len() {
                for b in 0..s.len() {
                    if self.map[s.op(a, b)] != t.op(self.map[a], self.map[b]) {
                        return Err(Error::NotHomomorphism(s.name(a), s.name(b)));
                    }
                }
            }
        }
        if s.tag() == CategoryTag::FinPreord {
            for a in 0..s.len() {
                for b in 0..s.len() {
                    if s.leq(a, b) && !t.leq(self.map[a], self.map[b]) {
                        return Err(Error::NotMonotone(s.name(a), s.name(b)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<AlgObject> {
        &self.source
    }

    pub fn target(&self) -> &Arc<AlgObject> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &AlgMorphism) -> Result<AlgMorphism> {
        if !same_object(&self.target, &g.source) {
            return Err(Error::SourceMismatch);
        }
        Ok(AlgMorphism {
            source: self.source.clone(),
            target: g.target.clone(),
            map: self.map.iter().map(|&a| g.map[a]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.iter().all(|&b| !std::mem::replace(&mut seen[b], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &b in &self.map {
            seen[b] = true;
        }
        seen.into_iter().all(|x| x)
    }

    pub fn is_bijective(&self) -> bool {
        self.map.len() == self.target.len() && self.is_injective()
    }

    /// The inverse when the map is bijective and the inverse map is itself a morphism.
    pub fn is_isomorphism(&self) -> Option<AlgMorphism> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b] = a;
        }
        AlgMorphism::new(self.target.clone(), self.source.clone(), inv).ok()
    }

    /// Equal source, target and map.
    pub fn same_as(&self, other: &AlgMorphism) -> bool {
        self.map == other.map
            && same_object(&self.source, &other.source)
            && same_object(&self.target, &other.target)
    }

    pub fn to_json(&self) -> MorphismJson {
        MorphismJson {
            map: self
                .map
                .iter()
                .enumerate()
                .map(|(a, &b)| (self.source.name(a), self.target.name(b)))
                .collect(),
        }
    }
}

impl PartialEq for AlgMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

/// A product object together with the data needed for its projections.
#[derive(Clone, Debug)]
pub struct ProductCone {
    pub object: Arc<AlgObject>,
    factors: Vec<Arc<AlgObject>>,
}

/// Componentwise product; element names are `(a|b|…)` in factor order.
///
/// The empty product is the terminal object `()`.
pub fn product(tag: CategoryTag, objects: &[Arc<AlgObject>]) -> Result<ProductCone> {
    if let Some(bad) = objects.iter().find(|o| o.tag() != tag) {
        return Err(Error::MixedTags(tag.to_string(), bad.tag().to_string()));
    }
    let mut strides = vec![1usize; objects.len()];
    let mut len = 1usize;
    for (k, o) in objects.iter().enumerate().rev() {
        strides[k] = len;
        len = len
            .checked_mul(o.len())
            .ok_or_else(|| Error::SizeCap("product carrier overflows".into()))?;
    }
    let object = AlgObject {
        tag,
        len,
        carrier: Carrier::Product {
            factors: objects.to_vec(),
            strides,
        },
    };
    Ok(ProductCone {
        object: Arc::new(object),
        factors: objects.to_vec(),
    })
}

impl ProductCone {
    pub fn factors(&self) -> &[Arc<AlgObject>] {
        &self.factors
    }

    pub fn tuple(&self, comps: &[usize]) -> usize {
        self.object.encode(comps)
    }

    pub fn components(&self, element: usize) -> Vec<usize> {
        if self.factors.is_empty() {
            return Vec::new();
        }
        self.object.decode(element)
    }

    /// The projection `π_k`.
    pub fn projection(&self, k: usize) -> AlgMorphism {
        let map = (0..self.object.len())
            .map(|e| self.components(e)[k])
            .collect();
        AlgMorphism::new_unchecked(self.object.clone(), self.factors[k].clone(), map)
    }

    /// The pairing `⟨f_1, …, f_k⟩` of maps out of a common source.
    pub fn pairing(&self, source: Arc<AlgObject>, maps: &[AlgMorphism]) -> Result<AlgMorphism> {
        if maps.len() != self.factors.len()
            || maps
                .iter()
                .zip(&self.factors)
                .any(|(f, o)| !same_object(&f.source, &source) || !same_object(&f.target, o))
        {
            return Err(Error::SourceMismatch);
        }
        let map = (0..source.len())
            .map(|a| {
                let c: Vec<usize> = maps.iter().map(|f| f.map[a]).collect();
                self.tuple(&c)
            })
            .collect();
        Ok(AlgMorphism::new_unchecked(source, self.object.clone(), map))
    }

    /// `∏ f_k : ∏ A_k → ∏ B_k`.
    pub fn product_map(&self, target: &ProductCone, maps: &[AlgMorphism]) -> Result<AlgMorphism> {
        if maps.len() != self.factors.len() || target.factors.len() != maps.len() {
            return Err(Error::SourceMismatch);
        }
        let map = (0..self.object.len())
            .map(|e| {
                let c: Vec<usize> = self
                    .components(e)
                    .iter()
                    .zip(maps)
                    .map(|(&x, f)| f.map[x])
                    .collect();
                target.tuple(&c)
            })
            .collect();
        Ok(AlgMorphism::new_unchecked(
            self.object.clone(),
            target.object.clone(),
            map,
        ))
    }
}

/// A subset of an object closed under its structure, with its inclusion.
#[derive(Clone, Debug)]
pub struct SubobjectWitness {
    pub ambient: Arc<AlgObject>,
    pub members: Vec<usize>,
    pub object: Arc<AlgObject>,
    pub inclusion: AlgMorphism,
}

/// Checks closure of `members` and returns the induced subobject.
pub fn subobject(ambient: &Arc<AlgObject>, mut members: Vec<usize>) -> Result<SubobjectWitness> {
    members.sort_unstable();
    members.dedup();
    if ambient.tag().is_algebraic() {
        let e = ambient.identity().unwrap();
        if members.binary_search(&e).is_err() {
            return Err(Error::NotClosed(format!("identity `{}` missing", ambient.name(e))));
        }
        for &a in &members {
            for &b in &members {
                let p = ambient.op(a, b);
                if members.binary_search(&p).is_err() {
                    return Err(Error::NotClosed(format!(
                        "{}·{} = {}",
                        ambient.name(a),
                        ambient.name(b),
                        ambient.name(p)
                    )));
                }
            }
            if ambient.tag().requires_inverses() {
                let inv = ambient.inverse(a).unwrap();
                if members.binary_search(&inv).is_err() {
                    return Err(Error::NotClosed(format!("inverse of `{}`", ambient.name(a))));
                }
            }
        }
    }
    let object = Arc::new(AlgObject {
        tag: ambient.tag(),
        len: members.len(),
        carrier: Carrier::Sub {
            ambient: ambient.clone(),
            members: members.clone(),
        },
    });
    let inclusion = AlgMorphism::new_unchecked(object.clone(), ambient.clone(), members.clone());
    Ok(SubobjectWitness {
        ambient: ambient.clone(),
        members,
        object,
        inclusion,
    })
}

/// The equalizer of a parallel pair together with its universal property.
#[derive(Clone, Debug)]
pub struct Equalizer {
    pub witness: SubobjectWitness,
    f: AlgMorphism,
    g: AlgMorphism,
}

/// `E = {a : f(a) = g(a)}` with the inclusion `e`.
pub fn equalizer(f: &AlgMorphism, g: &AlgMorphism) -> Result<Equalizer> {
    if !same_object(&f.source, &g.source) || !same_object(&f.target, &g.target) {
        return Err(Error::SourceMismatch);
    }
    let members = (0..f.source.len()).filter(|&a| f.map[a] == g.map[a]).collect();
    let witness = subobject(&f.source, members)
        .map_err(|e| Error::Internal(format!("equalizer of morphisms not closed: {e}")))?;
    Ok(Equalizer {
        witness,
        f: f.clone(),
        g: g.clone(),
    })
}

impl Equalizer {
    pub fn inclusion(&self) -> &AlgMorphism {
        &self.witness.inclusion
    }

    /// The unique `u` with `e ∘ u = h`, for `h` equalizing the pair.
    pub fn mediate(&self, h: &AlgMorphism) -> Result<AlgMorphism> {
        if !same_object(&h.target, &self.f.source) {
            return Err(Error::SourceMismatch);
        }
        let members = &self.witness.members;
        let map = h
            .map
            .iter()
            .enumerate()
            .map(|(m, &a)| {
                if self.f.map[a] != self.g.map[a] {
                    return Err(Error::MediatingPreconditionFailed(h.source.name(m)));
                }
                Ok(members.binary_search(&a).expect("equalized element is a member"))
            })
            .collect::<Result<Vec<_>>>()?;
        AlgMorphism::new(h.source.clone(), self.witness.object.clone(), map)
    }
}

/// Quotient of an object by the partition `class_of`, with the projection.
///
/// Classes are renumbered by first occurrence and named `[rep]` after their
/// first element. Fails when the partition is not a congruence.
pub fn quotient(object: &Arc<AlgObject>, class_of: &[usize]) -> Result<(Arc<AlgObject>, AlgMorphism)> {
    let n = object.len();
    let mut renumber = HashMap::new();
    let mut reps = Vec::new();
    let mut classes = Vec::with_capacity(n);
    for (a, &c) in class_of.iter().enumerate() {
        let id = *renumber.entry(c).or_insert_with(|| {
            reps.push(a);
            reps.len() - 1
        });
        classes.push(id);
    }
    let k = reps.len();
    let names: Vec<String> = reps.iter().map(|&r| format!("[{}]", object.name(r))).collect();
    let tag = object.tag();
    let mut table = None;
    let mut identity = None;
    if tag.is_algebraic() {
        let mut t = vec![usize::MAX; k * k];
        for a in 0..n {
            for b in 0..n {
                let slot = &mut t[classes[a] * k + classes[b]];
                let c = classes[object.op(a, b)];
                if *slot == usize::MAX {
                    *slot = c;
                } else if *slot != c {
                    return Err(Error::NotClosed(format!(
                        "partition is not a congruence at ({}, {})",
                        object.name(a),
                        object.name(b)
                    )));
                }
            }
        }
        table = Some(t);
        identity = Some(classes[object.identity().unwrap()]);
    }
    let mut leq = None;
    if tag == CategoryTag::FinPreord {
        let mut r = vec![false; k * k];
        for a in 0..n {
            for b in 0..n {
                if object.leq(a, b) {
                    r[classes[a] * k + classes[b]] = true;
                }
            }
        }
        leq = Some(r);
    }
    let q = AlgObject::explicit_unchecked(tag, names, table, identity, leq).revalidate()?;
    let q = Arc::new(q);
    let proj = AlgMorphism::new(object.clone(), q.clone(), classes)?;
    Ok((q, proj))
}

/// Every morphism `source → target`, by backtracking with early pruning.
///
/// `cap` bounds the number of search nodes visited.
pub fn enumerate_morphisms(
    source: &Arc<AlgObject>,
    target: &Arc<AlgObject>,
    cap: usize,
) -> Result<Vec<AlgMorphism>> {
    if source.tag() != target.tag() {
        return Err(Error::MixedTags(source.tag().to_string(), target.tag().to_string()));
    }
    let n = source.len();
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; n];
    let mut nodes = 0usize;
    let forced = source.identity().zip(target.identity());

    fn consistent(s: &AlgObject, t: &AlgObject, map: &[usize], i: usize) -> bool {
        if s.tag().is_algebraic() {
            for j in 0..=i {
                for (a, b) in [(i, j), (j, i)] {
                    let p = s.op(a, b);
                    if p <= i && map[p] != t.op(map[a], map[b]) {
                        return false;
                    }
                }
            }
        }
        if s.tag() == CategoryTag::FinPreord {
            for j in 0..=i {
                if s.leq(i, j) && !t.leq(map[i], map[j]) {
                    return false;
                }
                if s.leq(j, i) && !t.leq(map[j], map[i]) {
                    return false;
                }
            }
        }
        true
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        s: &Arc<AlgObject>,
        t: &Arc<AlgObject>,
        map: &mut Vec<usize>,
        forced: Option<(usize, usize)>,
        nodes: &mut usize,
        cap: usize,
        out: &mut Vec<AlgMorphism>,
    ) -> Result<()> {
        if i == map.len() {
            out.push(AlgMorphism::new_unchecked(s.clone(), t.clone(), map.clone()));
            return Ok(());
        }
        let candidates: Vec<usize> = match forced {
            Some((e, f)) if e == i => vec![f],
            _ => (0..t.len()).collect(),
        };
        for c in candidates {
            *nodes += 1;
            if *nodes > cap {
                return Err(Error::SizeCap(format!(
                    "morphism search exceeded {cap} nodes"
                )));
            }
            map[i] = c;
            if consistent(s, t, map, i) {
                go(i + 1, s, t, map, forced, nodes, cap, out)?;
            }
        }
        map[i] = usize::MAX;
        Ok(())
    }

    go(0, source, target, &mut map, forced, &mut nodes, cap, &mut out)?;
    Ok(out)
}
