//! Finite topological spaces stored extensionally.
//!
//! Points are kept in lexicographic order and every open set is a bitmask
//! over those points, so closure checks are exact and cheap. Opens are
//! listed by `(size, key)`; index 0 is always the empty set and the last
//! index is the whole space.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an open set inside its [`FinSpace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpenId(pub usize);

/// An open set: its members in canonical point order and its canonical key.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Open {
    mask: u64,
    members: Vec<String>,
    key: String,
}

impl Open {
    pub fn members(&self) -> &[String] {
        &self.members
    }

    /// Members joined by commas; the empty set has the empty key.
    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl fmt::Display for Open {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key)
    }
}

/// How the quantifier "any open cover" is enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CoverMode {
    /// Only the cover by minimal opens of the points of the target.
    #[default]
    Canonical,
    /// Every family of opens whose union is the target.
    Exhaustive,
}

impl fmt::Display for CoverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoverMode::Canonical => "canonical",
            CoverMode::Exhaustive => "exhaustive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cover {
    pub target: OpenId,
    pub parts: Vec<OpenId>,
}

/// The covers of one open together with whether the list is complete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverList {
    pub covers: Vec<Cover>,
    pub exhaustive: bool,
}

/// Default bound on the number of opens for exhaustive cover enumeration.
pub const DEFAULT_EXHAUSTIVE_OPENS: usize = 8;

/// Raw space in its JSON form: `{"points": [...], "opens": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSpace {
    points: Vec<String>,
    opens: Vec<Open>,
    by_mask: HashMap<u64, OpenId>,
    min_opens: Vec<OpenId>,
}

fn key_of(points: &[String], mask: u64) -> String {
    members_of(points, mask).join(",")
}

fn members_of(points: &[String], mask: u64) -> Vec<String> {
    (0..points.len())
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| points[i].clone())
        .collect()
}

impl FinSpace {
    /// Validates a topology given by its points and the full list of opens.
    pub fn validate(points: &[String], raw_opens: &[Vec<String>]) -> Result<FinSpace> {
        if points.len() > 64 {
            return Err(Error::TooManyPoints(points.len()));
        }
        let mut sorted: Vec<String> = points.to_vec();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicatePoint(w[0].clone()));
            }
        }
        let index: HashMap<&str, usize> = sorted
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_str(), i))
            .collect();

        let mut masks = BTreeSet::new();
        for raw in raw_opens {
            let mut mask = 0u64;
            for p in raw {
                let i = *index
                    .get(p.as_str())
                    .ok_or_else(|| Error::UnknownPoint(p.clone()))?;
                mask |= 1 << i;
            }
            masks.insert(mask);
        }
        let full = if sorted.len() == 64 {
            u64::MAX
        } else {
            (1u64 << sorted.len()) - 1
        };
        if !masks.contains(&0) {
            return Err(Error::MissingEmptyOrTotal("∅".into()));
        }
        if !masks.contains(&full) {
            return Err(Error::MissingEmptyOrTotal(key_of(&sorted, full)));
        }
        let list: Vec<u64> = masks.iter().copied().collect();
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                if !masks.contains(&(a | b)) {
                    return Err(Error::NotClosedUnderUnion(
                        key_of(&sorted, a),
                        key_of(&sorted, b),
                    ));
                }
            }
        }
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                if !masks.contains(&(a & b)) {
                    return Err(Error::NotClosedUnderIntersection(
                        key_of(&sorted, a),
                        key_of(&sorted, b),
                    ));
                }
            }
        }

        let mut opens: Vec<Open> = list
            .iter()
            .map(|&mask| Open {
                mask,
                members: members_of(&sorted, mask),
                key: key_of(&sorted, mask),
            })
            .collect();
        opens.sort_by(|a, b| (a.len(), &a.key).cmp(&(b.len(), &b.key)));
        let by_mask = opens
            .iter()
            .enumerate()
            .map(|(i, o)| (o.mask, OpenId(i)))
            .collect::<HashMap<_, _>>();
        let min_opens = (0..sorted.len())
            .map(|x| {
                let m = opens
                    .iter()
                    .filter(|o| o.mask & (1 << x) != 0)
                    .fold(full, |acc, o| acc & o.mask);
                by_mask[&m]
            })
            .collect();
        Ok(FinSpace {
            points: sorted,
            opens,
            by_mask,
            min_opens,
        })
    }

    pub fn from_json(raw: &SpaceJson) -> Result<FinSpace> {
        FinSpace::validate(&raw.points, &raw.opens)
    }

    pub fn to_json(&self) -> SpaceJson {
        SpaceJson {
            points: self.points.clone(),
            opens: self.opens.iter().map(|o| o.members.clone()).collect(),
        }
    }

    /// Convenience constructor from string slices.
    pub fn from_strs(points: &[&str], opens: &[&[&str]]) -> Result<FinSpace> {
        let points: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        let opens: Vec<Vec<String>> = opens
            .iter()
            .map(|o| o.iter().map(|s| s.to_string()).collect())
            .collect();
        FinSpace::validate(&points, &opens)
    }

    /// The discrete topology on the given points.
    pub fn discrete(points: &[&str]) -> Result<FinSpace> {
        let n = points.len();
        let opens: Vec<Vec<String>> = (0..(1u64 << n))
            .map(|m| {
                (0..n)
                    .filter(|i| m & (1 << i) != 0)
                    .map(|i| points[i].to_string())
                    .collect()
            })
            .collect();
        let points: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        FinSpace::validate(&points, &opens)
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn opens(&self) -> &[Open] {
        &self.opens
    }

    pub fn open_ids(&self) -> impl DoubleEndedIterator<Item = OpenId> + ExactSizeIterator {
        (0..self.opens.len()).map(OpenId)
    }

    pub fn open(&self, id: OpenId) -> &Open {
        &self.opens[id.0]
    }

    pub fn key(&self, id: OpenId) -> &str {
        &self.opens[id.0].key
    }

    pub fn empty(&self) -> OpenId {
        OpenId(0)
    }

    pub fn whole(&self) -> OpenId {
        OpenId(self.opens.len() - 1)
    }

    pub fn point_index(&self, name: &str) -> Result<usize> {
        self.points
            .binary_search_by(|p| p.as_str().cmp(name))
            .map_err(|_| Error::UnknownPoint(name.to_string()))
    }

    pub fn by_mask(&self, mask: u64) -> Option<OpenId> {
        self.by_mask.get(&mask).copied()
    }

    /// Resolves an open from a comma-separated key, in any member order.
    pub fn open_by_key(&self, key: &str) -> Result<OpenId> {
        let mut mask = 0u64;
        if !key.is_empty() {
            for p in key.split(',') {
                let i = self
                    .point_index(p.trim())
                    .map_err(|_| Error::NotAnOpen(key.to_string()))?;
                mask |= 1 << i;
            }
        }
        self.by_mask(mask)
            .ok_or_else(|| Error::NotAnOpen(key.to_string()))
    }

    pub fn open_by_members(&self, members: &[&str]) -> Result<OpenId> {
        self.open_by_key(&members.join(","))
    }

    pub fn contains(&self, id: OpenId, point: usize) -> bool {
        self.opens[id.0].mask & (1 << point) != 0
    }

    pub fn is_subset(&self, small: OpenId, big: OpenId) -> bool {
        let (s, b) = (self.opens[small.0].mask, self.opens[big.0].mask);
        s & !b == 0
    }

    pub fn intersection(&self, a: OpenId, b: OpenId) -> OpenId {
        self.by_mask[&(self.opens[a.0].mask & self.opens[b.0].mask)]
    }

    pub fn union(&self, a: OpenId, b: OpenId) -> OpenId {
        self.by_mask[&(self.opens[a.0].mask | self.opens[b.0].mask)]
    }

    /// Indices of the points of an open, in canonical order.
    pub fn points_of(&self, id: OpenId) -> Vec<usize> {
        let mask = self.opens[id.0].mask;
        (0..self.points.len())
            .filter(|i| mask & (1 << i) != 0)
            .collect()
    }

    /// All opens contained in `id`, in canonical order.
    pub fn opens_within(&self, id: OpenId) -> Vec<OpenId> {
        self.open_ids().filter(|&v| self.is_subset(v, id)).collect()
    }

    /// Open neighborhoods of a point, sorted by `(size, key)`.
    pub fn neighborhoods(&self, point: usize) -> Vec<OpenId> {
        self.open_ids().filter(|&u| self.contains(u, point)).collect()
    }

    pub fn neighborhoods_of(&self, name: &str) -> Result<Vec<OpenId>> {
        Ok(self.neighborhoods(self.point_index(name)?))
    }

    /// The least open neighborhood of a point.
    pub fn min_open(&self, point: usize) -> OpenId {
        self.min_opens[point]
    }

    pub fn min_open_of(&self, name: &str) -> Result<OpenId> {
        Ok(self.min_open(self.point_index(name)?))
    }

    /// The cover of `target` by the minimal opens of its points.
    pub fn canonical_cover(&self, target: OpenId) -> Cover {
        let parts: BTreeSet<OpenId> = self
            .points_of(target)
            .into_iter()
            .map(|x| self.min_open(x))
            .collect();
        Cover {
            target,
            parts: parts.into_iter().collect(),
        }
    }

    /// Enumerates covers of `target`.
    ///
    /// Exhaustive enumeration is only attempted when the space has at most
    /// `exhaustive_cap` opens; otherwise the canonical cover is returned and
    /// the list is flagged as not exhaustive.
    pub fn covers(&self, target: OpenId, mode: CoverMode, exhaustive_cap: usize) -> CoverList {
        if mode == CoverMode::Canonical || self.opens.len() > exhaustive_cap {
            return CoverList {
                covers: vec![self.canonical_cover(target)],
                exhaustive: false,
            };
        }
        let inside = self.opens_within(target);
        let goal = self.opens[target.0].mask;
        let mut irredundant = Vec::new();
        let mut redundant = Vec::new();
        for subset in 0u64..(1u64 << inside.len()) {
            let parts: Vec<OpenId> = (0..inside.len())
                .filter(|i| subset & (1 << i) != 0)
                .map(|i| inside[i])
                .collect();
            let union = parts.iter().fold(0u64, |acc, p| acc | self.opens[p.0].mask);
            if union != goal {
                continue;
            }
            let minimal = (0..parts.len()).all(|skip| {
                parts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .fold(0u64, |acc, (_, p)| acc | self.opens[p.0].mask)
                    != goal
            });
            let cover = Cover { target, parts };
            if minimal {
                irredundant.push(cover);
            } else {
                redundant.push(cover);
            }
        }
        irredundant.sort_by(|a, b| (a.parts.len(), &a.parts).cmp(&(b.parts.len(), &b.parts)));
        redundant.sort_by(|a, b| (a.parts.len(), &a.parts).cmp(&(b.parts.len(), &b.parts)));
        irredundant.extend(redundant);
        CoverList {
            covers: irredundant,
            exhaustive: true,
        }
    }

    /// Checks that `parts` are opens whose union is `target`.
    pub fn check_cover(&self, cover: &Cover) -> Result<()> {
        let union = cover
            .parts
            .iter()
            .fold(0u64, |acc, p| acc | self.opens[p.0].mask);
        if union != self.opens[cover.target.0].mask {
            return Err(Error::NotACover {
                target: self.key(cover.target).to_string(),
                parts: cover.parts.iter().map(|p| self.key(*p).to_string()).collect(),
            });
        }
        Ok(())
    }

    pub fn cover_keys(&self, cover: &Cover) -> Vec<String> {
        cover.parts.iter().map(|p| self.key(*p).to_string()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sierpinski() -> FinSpace {
        FinSpace::from_strs(&["p", "q"], &[&[], &["q"], &["p", "q"]]).unwrap()
    }

    fn keys(space: &FinSpace, ids: &[OpenId]) -> Vec<String> {
        ids.iter().map(|i| space.key(*i).to_string()).collect()
    }

    #[test]
    fn sierpinski_and_discrete_validate() {
        let s = sierpinski();
        assert_eq!(s.opens().len(), 3);
        let d = FinSpace::from_strs(&["p", "q"], &[&[], &["p"], &["q"], &["p", "q"]]).unwrap();
        assert_eq!(d.opens().len(), 4);
        assert_eq!(d, FinSpace::discrete(&["q", "p"]).unwrap());
    }

    #[test]
    fn missing_whole_space_is_rejected() {
        let err = FinSpace::from_strs(&["p", "q"], &[&[], &["q"]]).unwrap_err();
        assert_eq!(err, Error::MissingEmptyOrTotal("p,q".into()));
        let err = FinSpace::from_strs(&["p"], &[&["p"]]).unwrap_err();
        assert!(matches!(err, Error::MissingEmptyOrTotal(_)));
    }

    #[test]
    fn closure_failures_report_the_pair() {
        let err = FinSpace::from_strs(&["a", "b", "c"], &[&[], &["a"], &["b"], &["a", "b", "c"]])
            .unwrap_err();
        assert_eq!(err, Error::NotClosedUnderUnion("a".into(), "b".into()));
        let err = FinSpace::from_strs(
            &["a", "b", "c"],
            &[&[], &["a", "b"], &["b", "c"], &["a", "b", "c"]],
        )
        .unwrap_err();
        assert_eq!(err, Error::NotClosedUnderIntersection("a,b".into(), "b,c".into()));
        let err = FinSpace::from_strs(&["a"], &[&[], &["z"], &["a"]]).unwrap_err();
        assert_eq!(err, Error::UnknownPoint("z".into()));
    }

    #[test]
    fn neighborhoods_and_min_opens() {
        let s = sierpinski();
        assert_eq!(keys(&s, &s.neighborhoods_of("q").unwrap()), ["q", "p,q"]);
        assert_eq!(keys(&s, &s.neighborhoods_of("p").unwrap()), ["p,q"]);
        assert_eq!(s.key(s.min_open_of("q").unwrap()), "q");
        assert_eq!(s.key(s.min_open_of("p").unwrap()), "p,q");
        let d = FinSpace::discrete(&["p", "q"]).unwrap();
        assert_eq!(keys(&d, &d.neighborhoods_of("p").unwrap()), ["p", "p,q"]);
        assert_eq!(d.key(d.min_open_of("p").unwrap()), "p");
        assert_eq!(s.neighborhoods_of("r"), Err(Error::UnknownPoint("r".into())));
    }

    #[test]
    fn canonical_covers() {
        let s = sierpinski();
        let whole = s.covers(s.whole(), CoverMode::Canonical, 8);
        assert_eq!(whole.covers.len(), 1);
        assert_eq!(keys(&s, &whole.covers[0].parts), ["q", "p,q"]);
        let q = s.open_by_key("q").unwrap();
        assert_eq!(keys(&s, &s.covers(q, CoverMode::Canonical, 8).covers[0].parts), ["q"]);
        assert!(s.canonical_cover(s.empty()).parts.is_empty());
    }

    #[test]
    fn exhaustive_covers_of_discrete_space() {
        let d = FinSpace::discrete(&["p", "q"]).unwrap();
        let list = d.covers(d.whole(), CoverMode::Exhaustive, 8);
        assert!(list.exhaustive);
        let all: Vec<Vec<String>> = list.covers.iter().map(|c| d.cover_keys(c)).collect();
        // Brute force: subsets of the four opens with union {p,q}.
        let opens = ["", "p", "q", "p,q"];
        let mut expected = 0;
        for m in 0u32..16 {
            let parts: Vec<&str> = (0..4).filter(|i| m & (1 << i) != 0).map(|i| opens[i]).collect();
            let hits_p = parts.iter().any(|k| k.contains('p'));
            let hits_q = parts.iter().any(|k| k.contains('q'));
            if hits_p && hits_q {
                expected += 1;
            }
        }
        assert_eq!(all.len(), expected);
        assert_eq!(all[0], ["p,q"]);
        assert_eq!(all[1], ["p", "q"]);
        assert!(all.contains(&vec!["".to_string(), "p".into(), "q".into(), "p,q".into()]));
        for c in &list.covers {
            d.check_cover(c).unwrap();
        }
    }

    #[test]
    fn exhaustive_cap_falls_back_to_canonical() {
        let d = FinSpace::discrete(&["a", "b", "c", "d"]).unwrap();
        let list = d.covers(d.whole(), CoverMode::Exhaustive, 8);
        assert!(!list.exhaustive);
        assert_eq!(list.covers.len(), 1);
    }

    #[test]
    fn open_keys_are_order_insensitive() {
        let s = FinSpace::from_strs(&["q", "p"], &[&["q", "p"], &[], &["q"]]).unwrap();
        assert_eq!(s.points(), ["p", "q"]);
        assert_eq!(s.open_by_key("q,p").unwrap(), s.whole());
        assert_eq!(s.to_json().opens, vec![vec![], vec!["q".to_string()], vec!["p".into(), "q".into()]]);
        assert!(s.open_by_key("p").is_err());
    }
}
