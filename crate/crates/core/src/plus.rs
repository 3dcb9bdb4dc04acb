//! Sheafification by the plus construction: locally representable families
//! of germs, the unit `p : F → F⁺`, induced maps `θ⁺`, and the factorization
//! through `p` of maps into sheaves.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{product, subobject, AlgMorphism, AlgObject};
use crate::error::{Error, Result};
use crate::finspace::OpenId;
use crate::presheaf::{enumerate_nattrans, NatTrans, Presheaf, SheafReport};
use crate::stalks::{stalk_at, stalk_structured_at, Stalk};
use crate::Caps;

/// A map between the stalks of two presheaves at one point, on class ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermMap {
    pub point: String,
    pub map: Vec<usize>,
}

impl GermMap {
    pub fn is_bijective(&self, target_len: usize) -> bool {
        let mut seen = vec![false; target_len];
        self.map.len() == target_len && self.map.iter().all(|&g| !std::mem::replace(&mut seen[g], true))
    }
}

/// `F⁺` together with the data it was built from.
#[derive(Clone, Debug)]
pub struct PlusResult {
    pub source: Arc<Presheaf>,
    pub plus: Arc<Presheaf>,
    pub p: NatTrans,
    /// Structured stalks of `F`, indexed by point.
    pub stalks: Vec<Stalk>,
    /// Germ families of each `F⁺(U)`: class ids over the points of `U`.
    pub families: Vec<Vec<Vec<usize>>>,
    /// The germ maps `F_x → (F⁺)_x` induced by `p`.
    pub stalk_isos: Vec<GermMap>,
}

/// Plus-construction JSON written by `sheafify`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlusJson {
    pub plus: crate::presheaf::PresheafJson,
    pub unit: crate::presheaf::NatTransJson,
}

impl PlusResult {
    pub fn to_json(&self) -> PlusJson {
        PlusJson {
            plus: self.plus.to_json(),
            unit: self.p.to_json(),
        }
    }
}

/// The families `(s_x)_{x∈U}` in `∏ F_x` such that every `x` has a section
/// over its minimal open whose germs reproduce the family there.
///
/// Any local representative over `V ∋ x` restricts to one over `min_open(x) ⊆ V`,
/// so checking the minimal opens is enough.
fn representable_families(
    f: &Presheaf,
    stalks: &[Stalk],
    u: OpenId,
    caps: &Caps,
) -> Result<Vec<Vec<usize>>> {
    let space = f.space();
    let pts = space.points_of(u);
    pts.iter()
        .try_fold(1usize, |acc, &x| acc.checked_mul(stalks[x].len()))
        .filter(|&t| t <= caps.families)
        .ok_or_else(|| {
            Error::SizeCap(format!(
                "∏ F_x over `{}` exceeds {} candidate families",
                space.key(u),
                caps.families
            ))
        })?;
    let pos: HashMap<usize, usize> = pts.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // shadows[i]: the germ tuples over min_open(x_i) of sections there
    let mut shadows = Vec::with_capacity(pts.len());
    let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); pts.len()];
    for (i, &x) in pts.iter().enumerate() {
        let m = space.min_open(x);
        let inside: Vec<usize> = space.points_of(m).iter().map(|y| pos[y]).collect();
        let shadow: Vec<Vec<usize>> = (0..f.section(m).len())
            .map(|t| {
                inside
                    .iter()
                    .map(|&j| stalks[pts[j]].rho(m, t).expect("min open is a neighborhood"))
                    .collect()
            })
            .collect();
        let last = *inside.iter().max().expect("x lies in its minimal open");
        check_at[last].push(i);
        shadows.push((inside, shadow));
    }

    let mut out = Vec::new();
    let mut family = vec![0usize; pts.len()];
    fn go(
        d: usize,
        pts: &[usize],
        stalks: &[Stalk],
        shadows: &[(Vec<usize>, Vec<Vec<usize>>)],
        check_at: &[Vec<usize>],
        family: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if d == pts.len() {
            out.push(family.clone());
            return;
        }
        for g in 0..stalks[pts[d]].len() {
            family[d] = g;
            let ok = check_at[d].iter().all(|&i| {
                let (inside, shadow) = &shadows[i];
                shadow
                    .iter()
                    .any(|tuple| inside.iter().zip(tuple).all(|(&j, &h)| family[j] == h))
            });
            if ok {
                go(d + 1, pts, stalks, shadows, check_at, family, out);
            }
        }
    }
    go(0, &pts, stalks, &shadows, &check_at, &mut family, &mut out);
    Ok(out)
}

/// Builds `F⁺` and the unit `p`, validating both.
pub fn plus(f: &Arc<Presheaf>, caps: &Caps) -> Result<PlusResult> {
    let space = f.space().clone();
    let tag = f.tag();
    let stalks = (0..space.points().len())
        .map(|x| stalk_structured_at(f, x))
        .collect::<Result<Vec<_>>>()?;

    let mut families = Vec::with_capacity(space.opens().len());
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::new();
    let mut sections = Vec::with_capacity(space.opens().len());
    for u in space.open_ids() {
        let fams = representable_families(f, &stalks, u, caps)?;
        let factors: Vec<Arc<AlgObject>> = space
            .points_of(u)
            .iter()
            .map(|&x| stalks[x].object().clone())
            .collect();
        let cone = product(tag, &factors)?;
        let members: Vec<usize> = fams.iter().map(|fam| cone.tuple(fam)).collect();
        let sub = subobject(&cone.object, members.clone()).map_err(|e| {
            Error::Internal(format!("F⁺({}) is not a subobject: {e}", space.key(u)))
        })?;
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let object = Arc::new(sub.object.materialize());
        index.push(fams.iter().enumerate().map(|(i, fam)| (fam.clone(), i)).collect());
        families.push(fams);
        sections.push(object);
    }

    let mut restrictions = BTreeMap::new();
    for big in space.open_ids() {
        let big_pts = space.points_of(big);
        for small in space.opens_within(big) {
            let keep: Vec<usize> = big_pts
                .iter()
                .enumerate()
                .filter(|(_, &x)| space.contains(small, x))
                .map(|(i, _)| i)
                .collect();
            let map = families[big.0]
                .iter()
                .map(|fam| {
                    let truncated: Vec<usize> = keep.iter().map(|&i| fam[i]).collect();
                    index[small.0].get(&truncated).copied().ok_or_else(|| {
                        Error::Internal(format!(
                            "truncation of a family over `{}` is not representable over `{}`",
                            space.key(big),
                            space.key(small)
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            restrictions.insert(
                (big, small),
                AlgMorphism::new(sections[big.0].clone(), sections[small.0].clone(), map)?,
            );
        }
    }
    let plus = Arc::new(Presheaf::new(space.clone(), tag, sections, restrictions)?);

    let components = space
        .open_ids()
        .map(|u| {
            let pts = space.points_of(u);
            let map = (0..f.section(u).len())
                .map(|s| {
                    let fam: Vec<usize> = pts.iter().map(|&x| stalks[x].rho(u, s).unwrap()).collect();
                    index[u.0].get(&fam).copied().ok_or_else(|| {
                        Error::Internal(format!("germ family of a section over `{}` is missing", space.key(u)))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            AlgMorphism::new(f.section(u).clone(), plus.section(u).clone(), map)
        })
        .collect::<Result<Vec<_>>>()?;
    let p = NatTrans::new(f.clone(), plus.clone(), components)?;

    let stalk_isos = (0..space.points().len())
        .map(|x| {
            let target = stalk_at(&plus, x)?;
            induced_germ_map(&stalks[x], &target, f, |u, s| p.component(u).apply(s))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(PlusResult {
        source: f.clone(),
        plus,
        p,
        stalks,
        families,
        stalk_isos,
    })
}

/// `[U, s] ↦ [U, θ_U(s)]`, checked to be independent of the representative.
fn induced_germ_map(
    source: &Stalk,
    target: &Stalk,
    f: &Presheaf,
    theta: impl Fn(OpenId, usize) -> usize,
) -> Result<GermMap> {
    let mut map = vec![usize::MAX; source.len()];
    for &u in source.neighborhoods() {
        for s in 0..f.section(u).len() {
            let g = source.rho(u, s).unwrap();
            let image = target.rho(u, theta(u, s)).unwrap();
            if map[g] == usize::MAX {
                map[g] = image;
            } else if map[g] != image {
                return Err(Error::WellDefinednessFailure(format!(
                    "{}: induced germ map depends on the representative over `{}`",
                    source.point_name(),
                    f.space().key(u)
                )));
            }
        }
    }
    Ok(GermMap {
        point: source.point_name().to_string(),
        map,
    })
}

/// The germ map `m_x : F_x → G_x` induced by `θ`.
pub fn stalk_map(theta: &NatTrans, x: &str) -> Result<GermMap> {
    let (f, g) = (theta.source(), theta.target());
    let point = f.space().point_index(x)?;
    let sf = stalk_at(f, point)?;
    let sg = stalk_at(g, point)?;
    induced_germ_map(&sf, &sg, f, |u, s| theta.component(u).apply(s))
}

/// `θ⁺ : F⁺ → G⁺`, `(s_x) ↦ (m_x(s_x))`, with `θ⁺ ∘ p^F = p^G ∘ θ` checked.
pub fn theta_plus(theta: &NatTrans, pf: &PlusResult, pg: &PlusResult) -> Result<NatTrans> {
    let space = pf.plus.space().clone();
    let maps = (0..space.points().len())
        .map(|x| induced_germ_map(&pf.stalks[x], &pg.stalks[x], theta.source(), |u, s| theta.component(u).apply(s)))
        .collect::<Result<Vec<_>>>()?;
    let components = space
        .open_ids()
        .map(|u| {
            let pts = space.points_of(u);
            let lookup: HashMap<&[usize], usize> = pg.families[u.0]
                .iter()
                .enumerate()
                .map(|(i, fam)| (fam.as_slice(), i))
                .collect();
            let map = pf.families[u.0]
                .iter()
                .map(|fam| {
                    let image: Vec<usize> = fam.iter().zip(&pts).map(|(&g, &x)| maps[x].map[g]).collect();
                    lookup.get(image.as_slice()).copied().ok_or_else(|| {
                        Error::Internal(format!("image family over `{}` is not in G⁺", space.key(u)))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            AlgMorphism::new(pf.plus.section(u).clone(), pg.plus.section(u).clone(), map)
        })
        .collect::<Result<Vec<_>>>()?;
    let tp = NatTrans::new(pf.plus.clone(), pg.plus.clone(), components)?;
    let left = pf.p.then(&tp)?;
    let right = theta.then(&pg.p)?;
    if !left.same_maps(&right) {
        return Err(Error::Internal("θ⁺ ∘ p^F ≠ p^G ∘ θ".into()));
    }
    Ok(tp)
}

/// `σ_θ = (p^G)⁻¹ ∘ θ⁺ : F⁺ → G` for `G` a sheaf; checks `σ_θ ∘ p^F = θ`.
pub fn sheafify_factor(theta: &NatTrans, g_report: &SheafReport, caps: &Caps) -> Result<NatTrans> {
    if !g_report.is_sheaf {
        return Err(Error::TargetNotASheaf);
    }
    let pf = plus(theta.source(), caps)?;
    let pg = plus(theta.target(), caps)?;
    sheafify_factor_with(theta, &pf, &pg)
}

/// [`sheafify_factor`] with precomputed plus constructions of source and target.
pub fn sheafify_factor_with(theta: &NatTrans, pf: &PlusResult, pg: &PlusResult) -> Result<NatTrans> {
    let g = theta.target();
    let space = g.space();
    let inverse = space
        .open_ids()
        .map(|u| {
            pg.p
                .component(u)
                .is_isomorphism()
                .ok_or_else(|| Error::PNotInvertible(space.key(u).to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let tp = theta_plus(theta, pf, pg)?;
    let components = space
        .open_ids()
        .map(|u| {
            let map = tp.component(u).map().iter().map(|&t| inverse[u.0].apply(t)).collect();
            AlgMorphism::new(pf.plus.section(u).clone(), g.section(u).clone(), map)
        })
        .collect::<Result<Vec<_>>>()?;
    let sigma = NatTrans::new(pf.plus.clone(), g.clone(), components)?;
    if !pf.p.then(&sigma)?.same_maps(theta) {
        return Err(Error::Internal("σ_θ ∘ p ≠ θ".into()));
    }
    Ok(sigma)
}

/// Every natural transformation `σ : F⁺ → G` with `σ ∘ p^F = θ`.
pub fn all_factorizations(theta: &NatTrans, pf: &PlusResult, caps: &Caps) -> Result<Vec<NatTrans>> {
    let candidates = enumerate_nattrans(&pf.plus, theta.target(), caps)?;
    let mut out = Vec::new();
    for sigma in candidates {
        if pf.p.then(&sigma)?.same_maps(theta) {
            out.push(sigma);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspace::CoverMode;
    use crate::fixtures;
    use crate::presheaf::{check_sheaf_axioms, check_sheaf_equalizer};

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn discrete_nonsheaf_plus_sizes() {
        let f = Arc::new(fixtures::discrete_nonsheaf());
        let r = plus(&f, &caps()).unwrap();
        let sp = f.space();
        let size = |k: &str| r.plus.section(sp.open_by_key(k).unwrap()).len();
        assert_eq!(size("p,q"), 2);
        assert_eq!(size("p"), 2);
        assert_eq!(size("q"), 1);
        assert_eq!(size(""), 1);
        assert_eq!(r.plus.section(sp.whole()).names(), ["(a|c)", "(b|c)"]);
        assert_eq!(r.plus.section(sp.empty()).names(), ["()"]);
        for mode in [CoverMode::Canonical, CoverMode::Exhaustive] {
            assert!(check_sheaf_axioms(&r.plus, mode, &caps()).unwrap().is_sheaf);
            assert!(check_sheaf_equalizer(&r.plus, mode, &caps()).unwrap().is_sheaf);
        }
    }

    #[test]
    fn sheaf_input_has_invertible_unit() {
        for f in [fixtures::sierpinski_set(), fixtures::sheaf_z2(), fixtures::vee_set()] {
            let f = Arc::new(f);
            let r = plus(&f, &caps()).unwrap();
            for c in r.p.components() {
                assert!(c.is_isomorphism().is_some());
            }
            for (iso, st) in r.stalk_isos.iter().zip(&r.stalks) {
                assert!(iso.is_bijective(st.len()));
            }
        }
    }

    #[test]
    fn vee_ab_gains_the_missing_gluings() {
        let f = Arc::new(fixtures::vee_ab());
        let r = plus(&f, &caps()).unwrap();
        let ab = f.space().open_by_key("a,b").unwrap();
        assert_eq!(r.plus.section(ab).len(), 4);
        assert_eq!(r.plus.section(f.space().whole()).len(), 2);
        assert!(check_sheaf_axioms(&r.plus, CoverMode::Exhaustive, &caps()).unwrap().is_sheaf);
    }

    #[test]
    fn theta_plus_of_identity_and_sign() {
        let f = Arc::new(fixtures::const_s3());
        let pf = plus(&f, &caps()).unwrap();
        let id = NatTrans::identity(f.clone());
        let tp = theta_plus(&id, &pf, &pf).unwrap();
        assert!(tp.same_maps(&NatTrans::identity(pf.plus.clone())));

        let g = Arc::new(fixtures::const_z2());
        let pg = plus(&g, &caps()).unwrap();
        let sign = fixtures::sign_transformation(&f, &g);
        let tp = theta_plus(&sign, &pf, &pg).unwrap();
        let x = f.space().whole();
        // families over X are (g|g); sign acts on each component
        let c = tp.component(x);
        for (i, name) in pf.plus.section(x).names().iter().enumerate() {
            let img = pg.plus.section(x).name(c.apply(i));
            let s = fixtures::objects::symmetric3().index_of(&name[1..name.find('|').unwrap()]).unwrap();
            assert_eq!(img, format!("({0}|{0})", s / 3));
        }
        let m = stalk_map(&sign, "p").unwrap();
        assert_eq!(m.map, [0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn sign_factors_through_the_constant_sheaf() {
        let f = Arc::new(fixtures::const_s3());
        let g = Arc::new(fixtures::sheaf_z2());
        let report = check_sheaf_axioms(&g, CoverMode::Exhaustive, &caps()).unwrap();
        let theta = fixtures::sign_transformation(&f, &g);
        let sigma = sheafify_factor(&theta, &report, &caps()).unwrap();
        let pf = plus(&f, &caps()).unwrap();
        assert!(pf.p.then(&sigma).unwrap().same_maps(&theta));
        let all = all_factorizations(&theta, &pf, &caps()).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].same_maps(&sigma));

        let bad = check_sheaf_axioms(&f, CoverMode::Canonical, &caps()).unwrap();
        let id = NatTrans::identity(f.clone());
        assert_eq!(sheafify_factor(&id, &bad, &caps()).unwrap_err(), Error::TargetNotASheaf);
    }

    #[test]
    fn p_factors_as_identity() {
        let f = Arc::new(fixtures::discrete_nonsheaf());
        let pf = plus(&f, &caps()).unwrap();
        let ppf = plus(&pf.plus, &caps()).unwrap();
        let report = check_sheaf_axioms(&pf.plus, CoverMode::Exhaustive, &caps()).unwrap();
        assert!(report.is_sheaf);
        let sigma = sheafify_factor_with(&pf.p, &pf, &ppf).unwrap();
        assert!(sigma.same_maps(&NatTrans::identity(pf.plus.clone())));
    }

    #[test]
    fn size_cap_is_enforced() {
        let f = Arc::new(fixtures::const_q8());
        let tight = Caps {
            families: 10,
            ..Caps::default()
        };
        assert!(matches!(plus(&f, &tight), Err(Error::SizeCap(_))));
    }
}
