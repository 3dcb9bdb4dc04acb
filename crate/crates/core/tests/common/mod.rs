//! Brute-force oracles shared by the integration tests. They use only the
//! raw data of a presheaf (sections, restriction tables, open masks) and
//! never the library's stalk, plus or sheaf-checking code.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use sheaflab::{AlgObject, CategoryTag, FinSpace, OpenId, Presheaf};

pub fn mask(sp: &FinSpace, u: OpenId) -> u64 {
    sp.opens()[u.0].mask()
}

pub fn subset(sp: &FinSpace, a: OpenId, b: OpenId) -> bool {
    mask(sp, a) & !mask(sp, b) == 0
}

pub fn has_point(sp: &FinSpace, u: OpenId, x: usize) -> bool {
    mask(sp, u) >> x & 1 == 1
}

pub fn opens(sp: &FinSpace) -> Vec<OpenId> {
    (0..sp.opens().len()).map(OpenId).collect()
}

/// Germs at `x` straight from the colimit definition: nodes `(U, a)` with
/// `x ∈ U`, identified when some open `W ∋ x` inside both sees equal restrictions.
pub struct OracleStalk {
    pub nodes: Vec<(OpenId, usize)>,
    pub class: Vec<usize>,
    pub count: usize,
}

impl OracleStalk {
    pub fn class_of(&self, u: OpenId, a: usize) -> usize {
        let i = self.nodes.iter().position(|&n| n == (u, a)).expect("node exists");
        self.class[i]
    }
}

pub fn oracle_stalk(f: &Presheaf, x: usize) -> OracleStalk {
    let sp = f.space();
    let nbhd: Vec<OpenId> = opens(sp).into_iter().filter(|&u| has_point(sp, u, x)).collect();
    let nodes: Vec<(OpenId, usize)> = nbhd
        .iter()
        .flat_map(|&u| (0..f.section(u).len()).map(move |a| (u, a)))
        .collect();
    let k = nodes.len();
    let mut rel = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            let ((u, a), (v, b)) = (nodes[i], nodes[j]);
            rel[i][j] = nbhd.iter().any(|&w| {
                subset(sp, w, u) && subset(sp, w, v) && f.restrict(u, w, a) == f.restrict(v, w, b)
            });
        }
    }
    // transitive closure, in case the one-step relation is not transitive
    for m in 0..k {
        for i in 0..k {
            if rel[i][m] {
                let row = rel[m].clone();
                for (dst, src) in rel[i].iter_mut().zip(row) {
                    *dst |= src;
                }
            }
        }
    }
    let mut class = vec![usize::MAX; k];
    let mut count = 0;
    for i in 0..k {
        if class[i] == usize::MAX {
            for j in 0..k {
                if rel[i][j] {
                    class[j] = count;
                }
            }
            count += 1;
        }
    }
    OracleStalk { nodes, class, count }
}

/// `F⁺(U)` from the definition: families of germs over the points of `U`
/// such that every point has some open `V ∋ x` inside `U` and a section
/// over `V` whose germs agree with the family on all of `V`.
pub fn oracle_plus(f: &Presheaf, stalks: &[OracleStalk], u: OpenId) -> BTreeSet<Vec<usize>> {
    let sp = f.space();
    let pts: Vec<usize> = (0..sp.points().len()).filter(|&x| has_point(sp, u, x)).collect();
    let mut out = BTreeSet::new();
    let mut family = vec![0; pts.len()];
    fn rec(
        f: &Presheaf,
        stalks: &[OracleStalk],
        u: OpenId,
        pts: &[usize],
        depth: usize,
        family: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if depth == pts.len() {
            if representable(f, stalks, u, pts, family) {
                out.insert(family.clone());
            }
            return;
        }
        for g in 0..stalks[pts[depth]].count {
            family[depth] = g;
            rec(f, stalks, u, pts, depth + 1, family, out);
        }
    }
    rec(f, stalks, u, &pts, 0, &mut family, &mut out);
    out
}

fn representable(f: &Presheaf, stalks: &[OracleStalk], u: OpenId, pts: &[usize], family: &[usize]) -> bool {
    let sp = f.space();
    pts.iter().all(|&x| {
        opens(sp).into_iter().any(|v| {
            has_point(sp, v, x)
                && subset(sp, v, u)
                && (0..f.section(v).len()).any(|t| {
                    pts.iter()
                        .enumerate()
                        .filter(|&(_, &y)| has_point(sp, v, y))
                        .all(|(i, &y)| stalks[y].class_of(v, t) == family[i])
                })
        })
    })
}

/// The sheaf condition over every family of subopens covering each open:
/// `F(U)` maps bijectively onto matching families.
pub fn oracle_is_sheaf(f: &Presheaf) -> bool {
    let sp = f.space();
    for u in opens(sp) {
        // a cover containing U holds trivially, and ∅ adds no constraint
        // beyond what the other parts already restrict to
        let subs: Vec<OpenId> = opens(sp)
            .into_iter()
            .filter(|&v| v != u && mask(sp, v) != 0 && subset(sp, v, u))
            .collect();
        for pick in 0u64..(1 << subs.len()) {
            let parts: Vec<OpenId> = (0..subs.len()).filter(|&i| pick >> i & 1 == 1).map(|i| subs[i]).collect();
            let union = parts.iter().fold(0, |acc, &p| acc | mask(sp, p));
            if union != mask(sp, u) {
                continue;
            }
            let restrict_all = |s: usize| -> Vec<usize> { parts.iter().map(|&p| f.restrict(u, p, s)).collect() };
            let images: BTreeSet<Vec<usize>> = (0..f.section(u).len()).map(restrict_all).collect();
            if images.len() != f.section(u).len() {
                return false;
            }
            // count matching families
            let mut matching = 0usize;
            let mut fam = vec![0usize; parts.len()];
            fn count(
                f: &Presheaf,
                sp: &FinSpace,
                parts: &[OpenId],
                depth: usize,
                fam: &mut Vec<usize>,
                matching: &mut usize,
            ) {
                if depth == parts.len() {
                    *matching += 1;
                    return;
                }
                for s in 0..f.section(parts[depth]).len() {
                    fam[depth] = s;
                    let ok = (0..depth).all(|j| {
                        let w = (0..sp.opens().len())
                            .map(OpenId)
                            .find(|&w| mask(sp, w) == mask(sp, parts[j]) & mask(sp, parts[depth]))
                            .expect("intersection is open");
                        f.restrict(parts[j], w, fam[j]) == f.restrict(parts[depth], w, s)
                    });
                    if ok {
                        count(f, sp, parts, depth + 1, fam, matching);
                    }
                }
            }
            count(f, sp, &parts, 0, &mut fam, &mut matching);
            if matching != images.len() {
                return false;
            }
        }
    }
    true
}

/// Whether `map` is a morphism `a → b` of the shared tag, checked from tables.
pub fn is_hom(a: &AlgObject, b: &AlgObject, map: &[usize]) -> bool {
    let n = a.len();
    if a.tag().is_algebraic() {
        (0..n).all(|x| (0..n).all(|y| map[a.op(x, y)] == b.op(map[x], map[y])))
            && map[a.identity().unwrap()] == b.identity().unwrap()
    } else if a.tag() == CategoryTag::FinPreord {
        (0..n).all(|x| (0..n).all(|y| !a.leq(x, y) || b.leq(map[x], map[y])))
    } else {
        true
    }
}

/// Every function `a → b` passing `keep`.
pub fn all_maps(a: &AlgObject, b: &AlgObject, keep: impl Fn(&[usize]) -> bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if b.is_empty() && !a.is_empty() {
        return out;
    }
    let mut cur = vec![0; a.len()];
    loop {
        if keep(&cur) {
            out.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == cur.len() {
                return out;
            }
            cur[i] += 1;
            if cur[i] < b.len() {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Natural transformations `f → g` by brute force, with `keep(u, map)`
/// filtering candidate components.
pub fn brute_nattrans(
    f: &Presheaf,
    g: &Presheaf,
    keep: impl Fn(OpenId, &[usize]) -> bool,
) -> Vec<Vec<Vec<usize>>> {
    let sp = f.space();
    let ids = opens(sp);
    let cands: Vec<Vec<Vec<usize>>> = ids
        .iter()
        .map(|&u| {
            let (a, b) = (f.section(u), g.section(u));
            all_maps(a, b, |m| is_hom(a, b, m) && keep(u, m))
        })
        .collect();
    let mut out = Vec::new();
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    fn rec(
        f: &Presheaf,
        g: &Presheaf,
        ids: &[OpenId],
        cands: &[Vec<Vec<usize>>],
        chosen: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let k = chosen.len();
        if k == ids.len() {
            out.push(chosen.clone());
            return;
        }
        let sp = f.space();
        for c in &cands[k] {
            let natural = (0..k).all(|j| {
                let (u, v) = (ids[j], ids[k]);
                let (big, small, mb, ms) = if subset(sp, u, v) {
                    (v, u, c, &chosen[j])
                } else if subset(sp, v, u) {
                    (u, v, &chosen[j], c)
                } else {
                    return true;
                };
                (0..f.section(big).len()).all(|s| ms[f.restrict(big, small, s)] == g.restrict(big, small, mb[s]))
            });
            if natural {
                chosen.push(c.clone());
                rec(f, g, ids, cands, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(f, g, &ids, &cands, &mut chosen, &mut out);
    out
}

/// A finite space from a preorder on `n` points: opens are the up-sets.
pub fn space_from_relation(n: usize, edges: &[(usize, usize)]) -> Arc<FinSpace> {
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        leq[a % n][b % n] = true;
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][m] && leq[m][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut up_sets = Vec::new();
    for m in 0u64..(1 << n) {
        let closed = (0..n).all(|i| m >> i & 1 == 0 || (0..n).all(|j| !leq[i][j] || m >> j & 1 == 1));
        if closed {
            up_sets.push((0..n).filter(|&i| m >> i & 1 == 1).map(|i| names[i].as_str()).collect::<Vec<_>>());
        }
    }
    let points: Vec<&str> = names.iter().map(String::as_str).collect();
    let opens: Vec<&[&str]> = up_sets.iter().map(Vec::as_slice).collect();
    Arc::new(FinSpace::from_strs(&points, &opens).expect("up-sets form a topology"))
}

/// A set-valued presheaf: sections over `U` are the tuples over the points
/// of `U` obtained by truncating the `seeds` that live on larger opens,
/// paired with a label that collapses only on the empty open.
pub fn truncation_presheaf(
    sp: Arc<FinSpace>,
    alphabet: usize,
    labels: usize,
    seeds: &[(usize, Vec<usize>)],
) -> Presheaf {
    let n = sp.points().len();
    let ids = opens(&sp);
    let whole = *ids.last().unwrap();
    let full = |seed: &[usize]| -> Vec<usize> { (0..n).map(|i| seed.get(i).copied().unwrap_or(0) % alphabet).collect() };
    // each seed lives on some open; the first one always lives on the whole space
    let mut tuples: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); ids.len()];
    for (k, (pick, seed)) in seeds.iter().enumerate() {
        let home = if k == 0 { whole } else { ids[pick % ids.len()] };
        let t = full(seed);
        for &u in &ids {
            if subset(&sp, u, home) {
                tuples[u.0].insert((0..n).map(|i| if has_point(&sp, u, i) { t[i] } else { 0 }).collect());
            }
        }
    }
    let elements: Vec<Vec<(Vec<usize>, usize)>> = ids
        .iter()
        .map(|&u| {
            let ls = if mask(&sp, u) == 0 { 1 } else { labels };
            tuples[u.0]
                .iter()
                .flat_map(|t| (0..ls).map(move |l| (t.clone(), l)))
                .collect()
        })
        .collect();
    let name = |u: OpenId, (t, l): &(Vec<usize>, usize)| -> String {
        let digits: String = (0..n)
            .filter(|&i| has_point(&sp, u, i))
            .map(|i| char::from(b'0' + t[i] as u8))
            .collect();
        format!("{digits}/{l}")
    };
    let sections: Vec<Arc<AlgObject>> = ids
        .iter()
        .map(|&u| {
            let names: Vec<String> = elements[u.0].iter().map(|e| name(u, e)).collect();
            Arc::new(AlgObject::set(&names).expect("distinct names"))
        })
        .collect();
    let sp2 = sp.clone();
    Presheaf::from_fn(
        sp,
        CategoryTag::FinSet,
        |_, u| sections[u.0].clone(),
        |_, big, small, s| {
            let (t, l) = &elements[big.0][s];
            let cut: Vec<usize> = (0..n).map(|i| if has_point(&sp2, small, i) { t[i] } else { 0 }).collect();
            let l = if mask(&sp2, small) == 0 { 0 } else { *l };
            elements[small.0].iter().position(|e| e.0 == cut && e.1 == l).expect("closed under truncation")
        },
    )
    .expect("truncation is functorial")
}
