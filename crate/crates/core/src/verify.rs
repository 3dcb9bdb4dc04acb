//! Built-in property suites run by `sheaflab verify`.
//!
//! Every check prints one deterministic line; a suite passes when all of
//! its lines do.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::algebra::{enumerate_morphisms, equalizer, product, AlgMorphism, AlgObject, CategoryTag};
use crate::error::{Error, Result};
use crate::finspace::{CoverMode, FinSpace};
use crate::fixtures::{self, objects::*};
use crate::plus::{all_factorizations, plus, sheafify_factor_with};
use crate::presheaf::{check_sheaf_axioms, check_sheaf_equalizer, enumerate_nattrans, NatTrans, Presheaf};
use crate::reflect::{
    compare_reflections, factor_through_reflection, preserves_finite_products, reflect_nattrans_via,
    reflect_object, reflect_presheaf, sheaf_reflect_303, sheaf_reflect_3031, valued_in, ComparisonMethod,
    ReflectionTarget,
};
use crate::stalks::{forget, germs_equal, stalk, stalk_commutes_with_forget, stalk_operation};
use crate::Caps;

pub const SUITES: [&str; 6] = ["finspace", "algebra", "presheaf", "stalks", "plus", "reflect"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub subject: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "{} {}/{}[{}]: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.subject,
            self.detail
        )
    }
}

struct Suite {
    name: &'static str,
    results: Vec<CheckResult>,
}

impl Suite {
    fn new(name: &'static str) -> Suite {
        Suite {
            name,
            results: Vec::new(),
        }
    }

    fn check(&mut self, name: &'static str, subject: impl Into<String>, outcome: Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.results.push(CheckResult {
            suite: self.name,
            name,
            subject: subject.into(),
            passed,
            detail,
        });
    }
}

/// Runs one suite, or every suite for `"all"`.
pub fn run(suite: &str, caps: &Caps) -> Result<Vec<CheckResult>> {
    let names: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        other => return Err(Error::Parse(format!("unknown suite `{other}`"))),
    };
    let mut out = Vec::new();
    for name in names {
        let mut s = Suite::new(SUITES.iter().copied().find(|n| *n == name).unwrap());
        match name {
            "finspace" => finspace_suite(&mut s, caps),
            "algebra" => algebra_suite(&mut s),
            "presheaf" => presheaf_suite(&mut s, caps),
            "stalks" => stalks_suite(&mut s),
            "plus" => plus_suite(&mut s, caps),
            _ => reflect_suite(&mut s, caps),
        }
        out.extend(s.results);
    }
    Ok(out)
}

/// The report text: one line per check and a closing summary.
pub fn render(results: &[CheckResult]) -> String {
    let mut text = String::new();
    for r in results {
        text.push_str(&r.line());
        text.push('\n');
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(text, "{} checks, {} passed, {} failed", results.len(), results.len() - failed, failed);
    text
}

fn spaces() -> Vec<(&'static str, Arc<FinSpace>)> {
    vec![
        ("sierpinski", fixtures::sierpinski()),
        ("discrete2", fixtures::discrete2()),
        ("vee3", fixtures::vee3()),
    ]
}

fn finspace_suite(s: &mut Suite, caps: &Caps) {
    for (name, sp) in spaces() {
        s.check("min_open_below_neighborhoods", name, {
            let ok = (0..sp.points().len()).all(|x| {
                let m = sp.min_open(x);
                sp.neighborhoods(x).iter().all(|&u| sp.is_subset(m, u)) && sp.neighborhoods(x)[0] == m
            });
            Ok((ok, format!("{} points", sp.points().len())))
        });
        s.check("covers_union_exactly", name, {
            let mut count = 0;
            let mut ok = true;
            for u in sp.open_ids() {
                for mode in [CoverMode::Canonical, CoverMode::Exhaustive] {
                    for c in sp.covers(u, mode, caps.exhaustive_opens).covers {
                        count += 1;
                        let union = c.parts.iter().fold(sp.empty(), |acc, &p| sp.union(acc, p));
                        ok &= union == c.target && sp.check_cover(&c).is_ok();
                    }
                }
            }
            Ok((ok, format!("{count} covers")))
        });
        s.check("specialization_consistent", name, {
            let n = sp.points().len();
            let ok = (0..n).all(|x| {
                (0..n).all(|y| {
                    let every = sp.open_ids().filter(|&u| sp.contains(u, y)).all(|u| sp.contains(u, x));
                    sp.contains(sp.min_open(y), x) == every
                })
            });
            Ok((ok, format!("{} pairs", n * n)))
        });
    }
}

fn algebra_suite(s: &mut Suite) {
    let objects: Vec<(&str, AlgObject)> = vec![
        ("Z4", cyclic(4, CategoryTag::FinAb)),
        ("Z6", cyclic(6, CategoryTag::FinAb)),
        ("S3", symmetric3()),
        ("Q8", quaternion()),
        ("B", boolean_monoid()),
        ("chain2", chain2()),
        ("abc", preorder_abc()),
    ];
    for (name, o) in &objects {
        s.check("object_revalidates", *name, o.revalidate().map(|_| (true, format!("{} {}", o.tag(), o.len()))));
        if o.tag() == CategoryTag::FinAb {
            s.check(
                "abelian_is_group",
                *name,
                o.validate_as(CategoryTag::FinGrp).map(|_| (true, "FinGrp validation".into())),
            );
        }
    }

    let factors = [
        Arc::new(cyclic(2, CategoryTag::FinGrp)),
        Arc::new(symmetric3()),
        Arc::new(cyclic(3, CategoryTag::FinGrp)),
    ];
    s.check("projections_recover_components", "Z2×S3×Z3", {
        product(CategoryTag::FinGrp, &factors).map(|cone| {
            let ok = (0..cone.object.len()).all(|e| {
                let comps = cone.components(e);
                cone.tuple(&comps) == e
                    && (0..3).all(|k| cone.projection(k).apply(e) == comps[k])
                    && cone.object.index_of(&cone.object.name(e)) == Some(e)
            }) && (0..3).all(|k| cone.projection(k).check().is_ok());
            (ok, format!("{} elements", cone.object.len()))
        })
    });

    let set4 = Arc::new(AlgObject::set(&["a", "b", "c", "d"]).unwrap());
    let z4 = Arc::new(cyclic(4, CategoryTag::FinAb));
    let z2 = Arc::new(cyclic(2, CategoryTag::FinAb));
    let pairs = vec![
        (
            "id,swap on 4-set",
            AlgMorphism::identity(set4.clone()),
            AlgMorphism::from_fn(set4.clone(), set4.clone(), |a| [1, 0, 2, 3][a]).unwrap(),
            (1..=4)
                .map(|k| Arc::new(AlgObject::set(&(0..k).map(|i| format!("h{i}")).collect::<Vec<_>>()).unwrap()))
                .collect::<Vec<_>>(),
        ),
        (
            "mod2,zero on Z4",
            AlgMorphism::from_fn(z4.clone(), z2.clone(), |a| a % 2).unwrap(),
            AlgMorphism::from_fn(z4.clone(), z2.clone(), |_| 0).unwrap(),
            (1..=4).map(|k| Arc::new(cyclic(k, CategoryTag::FinAb))).collect(),
        ),
    ];
    for (name, f, g, probes) in pairs {
        s.check("equalizer_universal", name, (|| {
            let eq = equalizer(&f, &g)?;
            let e = eq.inclusion();
            let mut tested = 0;
            for src in &probes {
                for h in enumerate_morphisms(src, f.source(), 1 << 20)? {
                    if h.then(&f)?.map() != h.then(&g)?.map() {
                        continue;
                    }
                    tested += 1;
                    let u = eq.mediate(&h)?;
                    let hits = enumerate_morphisms(src, &eq.witness.object, 1 << 20)?
                        .into_iter()
                        .filter(|v| v.then(e).map(|c| c.map() == h.map()).unwrap_or(false))
                        .count();
                    if hits != 1 || u.then(e)?.map() != h.map() {
                        return Ok((false, format!("mediating map for {:?} not unique", h.map())));
                    }
                }
            }
            Ok((true, format!("{} equalizing probes, |E| = {}", tested, eq.witness.members.len())))
        })());
    }

    let groups: Vec<Arc<AlgObject>> = vec![
        Arc::new(cyclic(2, CategoryTag::FinGrp)),
        Arc::new(cyclic(3, CategoryTag::FinGrp)),
        Arc::new(cyclic(6, CategoryTag::FinGrp)),
        Arc::new(symmetric3()),
    ];
    let sets: Vec<Arc<AlgObject>> = (1..=3)
        .map(|k| Arc::new(AlgObject::set(&(0..k).map(|i| i.to_string()).collect::<Vec<_>>()).unwrap()))
        .collect();
    for (label, family) in [("FinGrp", &groups), ("FinSet", &sets)] {
        s.check("iso_iff_bijective", label, (|| {
            let mut n = 0;
            for a in family {
                for b in family {
                    for f in enumerate_morphisms(a, b, 1 << 20)? {
                        n += 1;
                        if f.is_isomorphism().is_some() != f.is_bijective() {
                            return Ok((false, format!("{:?}", f.map())));
                        }
                    }
                }
            }
            Ok((true, format!("{n} morphisms")))
        })());
    }
    s.check("preorder_bijection_not_iso", "antichain→chain", (|| {
        let anti = Arc::new(AlgObject::preorder(&["x", "y"], &[(0, 0), (1, 1)])?);
        let f = AlgMorphism::new(anti, Arc::new(chain2()), vec![0, 1])?;
        Ok((f.is_bijective() && f.is_isomorphism().is_none(), "bijective, inverse not monotone".into()))
    })());
}

fn presheaf_suite(s: &mut Suite, caps: &Caps) {
    for (name, f) in fixtures::all() {
        s.check("validates", name, {
            Presheaf::from_json(&f.to_json()).map(|g| (g.same_as(&f), format!("{} over {} opens", f.tag(), f.space().opens().len())))
        });
        for mode in [CoverMode::Canonical, CoverMode::Exhaustive] {
            s.check("checkers_agree", format!("{name}/{mode}"), (|| {
                let a = check_sheaf_axioms(&f, mode, caps)?;
                let b = check_sheaf_equalizer(&f, mode, caps)?;
                Ok((
                    a.is_sheaf == b.is_sheaf && a.failure_sites() == b.failure_sites(),
                    format!("sheaf={}", a.is_sheaf),
                ))
            })());
        }
        s.check("modes_agree", name, (|| {
            let a = check_sheaf_axioms(&f, CoverMode::Canonical, caps)?;
            let b = check_sheaf_axioms(&f, CoverMode::Exhaustive, caps)?;
            Ok((a.is_sheaf == b.is_sheaf, format!("sheaf={}", a.is_sheaf)))
        })());
        let f = Arc::new(f);
        s.check("identity_laws", name, (|| {
            let id = NatTrans::identity(f.clone());
            let twice = id.then(&id)?;
            Ok((twice.same_maps(&id), "id ∘ id = id".into()))
        })());
    }
    s.check("composition_associative", "const_s3→const_z2", (|| {
        let f = Arc::new(fixtures::const_s3());
        let g = Arc::new(fixtures::const_z2());
        let t = fixtures::sign_transformation(&f, &g);
        let ends = enumerate_nattrans(&g, &g, caps)?;
        let mut n = 0;
        for a in &ends {
            for b in &ends {
                n += 1;
                let left = t.then(a)?.then(b)?;
                let right = t.then(&a.then(b)?)?;
                if !left.same_maps(&right) {
                    return Ok((false, "composites differ".into()));
                }
            }
        }
        Ok((true, format!("{n} composable pairs")))
    })());
}

fn point_names(f: &Presheaf) -> Vec<String> {
    f.space().points().to_vec()
}

fn stalks_suite(s: &mut Suite) {
    for (name, f) in fixtures::all() {
        for x in point_names(&f) {
            let subject = format!("{name}@{x}");
            s.check("min_open_oracle", subject.clone(), (|| {
                let st = stalk(&f, &x)?;
                let m = st.min_open();
                let rho = st.rho_map(m).unwrap();
                let mut seen = vec![false; st.len()];
                let injective = rho.iter().all(|&g| !std::mem::replace(&mut seen[g], true));
                Ok((
                    injective && seen.iter().all(|&b| b),
                    format!("{} germs ↔ F({})", st.len(), f.space().key(m)),
                ))
            })());
            s.check("cocone", subject.clone(), (|| {
                let st = stalk(&f, &x)?;
                let sp = f.space();
                let mut n = 0;
                for &v in st.neighborhoods() {
                    for &u in st.neighborhoods().iter().filter(|&&u| sp.is_subset(u, v)) {
                        for t in 0..f.section(v).len() {
                            n += 1;
                            if st.rho(u, f.restrict(v, u, t)) != st.rho(v, t) {
                                return Ok((false, format!("{}|{}", sp.key(u), sp.key(v))));
                            }
                        }
                    }
                }
                Ok((true, format!("{n} triples")))
            })());
            s.check("germ_equivalence", subject.clone(), (|| {
                let st = stalk(&f, &x)?;
                let nodes: Vec<_> = st
                    .neighborhoods()
                    .iter()
                    .flat_map(|&u| (0..f.section(u).len()).map(move |a| (u, a)))
                    .collect();
                let k = nodes.len();
                let mut rel = vec![false; k * k];
                for i in 0..k {
                    for j in 0..k {
                        rel[i * k + j] = germs_equal(&f, &x, nodes[i], nodes[j])?.is_some();
                    }
                }
                let refl = (0..k).all(|i| rel[i * k + i]);
                let sym = (0..k).all(|i| (0..k).all(|j| rel[i * k + j] == rel[j * k + i]));
                let trans = (0..k).all(|i| {
                    (0..k).all(|j| !rel[i * k + j] || (0..k).all(|l| !rel[j * k + l] || rel[i * k + l]))
                });
                let matches = (0..k).all(|i| {
                    (0..k).all(|j| {
                        rel[i * k + j] == (st.rho(nodes[i].0, nodes[i].1) == st.rho(nodes[j].0, nodes[j].1))
                    })
                });
                Ok((refl && sym && trans && matches, format!("{k} pairs (U, s)")))
            })());
            if f.tag().is_algebraic() {
                s.check("operation_recovers_min_open", subject.clone(), (|| {
                    let st = stalk_operation(&f, &x)?;
                    let fm = f.section(st.min_open());
                    let r = st.representatives();
                    let obj = st.object();
                    let n = obj.len();
                    let iso = (0..n).all(|a| (0..n).all(|b| r[obj.op(a, b)] == fm.op(r[a], r[b])))
                        && r[obj.identity().unwrap()] == fm.identity().unwrap();
                    let hom = st.neighborhoods().iter().all(|&u| {
                        let fu = f.section(u);
                        (0..fu.len()).all(|a| {
                            (0..fu.len()).all(|b| {
                                st.rho(u, fu.op(a, b)) == Some(obj.op(st.rho(u, a).unwrap(), st.rho(u, b).unwrap()))
                            })
                        })
                    });
                    Ok((iso && hom, format!("({}, ∗) ≅ F({})", n, f.space().key(st.min_open()))))
                })());
            }
            if f.tag() != CategoryTag::FinSet {
                s.check("commutes_with_forget", subject, stalk_commutes_with_forget(&f, &x).map(|b| (b, "set-level germs carry the structure".into())));
            }
        }
        if f.tag() != CategoryTag::FinSet {
            s.check("forget_valid", name, forget(&f).map(|g| (g.tag() == CategoryTag::FinSet, "retagged FinSet".into())));
        }
    }
}

/// Fixture pairs `(F, G)` over the same space and tag with `G` a sheaf and
/// every carrier of size at most 6.
type Pair = (String, Arc<Presheaf>, Arc<Presheaf>);

fn factorization_pairs(caps: &Caps) -> Result<Vec<Pair>> {
    let all: Vec<(&str, Arc<Presheaf>)> = fixtures::all()
        .into_iter()
        .filter(|(_, f)| f.sections().iter().all(|s| s.len() <= 6))
        .map(|(n, f)| (n, Arc::new(f)))
        .collect();
    let mut out = Vec::new();
    for (gname, g) in &all {
        if !check_sheaf_axioms(g, CoverMode::Exhaustive, caps)?.is_sheaf {
            continue;
        }
        for (fname, f) in &all {
            if f.tag() == g.tag() && f.space() == g.space() {
                out.push((format!("{fname}→{gname}"), f.clone(), g.clone()));
            }
        }
    }
    Ok(out)
}

fn plus_suite(s: &mut Suite, caps: &Caps) {
    for (name, f) in fixtures::all() {
        let f = Arc::new(f);
        let pf = match plus(&f, caps) {
            Ok(pf) => pf,
            Err(e) => {
                s.check("plus_builds", name, Err(e));
                continue;
            }
        };
        s.check("plus_is_sheaf", name, (|| {
            let a = check_sheaf_axioms(&pf.plus, CoverMode::Exhaustive, caps)?;
            let b = check_sheaf_equalizer(&pf.plus, CoverMode::Exhaustive, caps)?;
            Ok((a.is_sheaf && b.is_sheaf, format!("|F⁺(X)| = {}", pf.plus.section(f.space().whole()).len())))
        })());
        s.check("unit_natural", name, NatTrans::new(f.clone(), pf.plus.clone(), pf.p.components().to_vec()).map(|_| (true, "p validated".into())));
        s.check("stalks_preserved", name, {
            let ok = pf.stalk_isos.iter().zip(&pf.stalks).all(|(m, st)| m.is_bijective(st.len()));
            Ok((ok, format!("{} points", pf.stalks.len())))
        });
        let is_sheaf = check_sheaf_axioms(&f, CoverMode::Exhaustive, caps).map(|r| r.is_sheaf).unwrap_or(false);
        if is_sheaf {
            s.check("unit_iso_on_sheaf", name, {
                Ok((pf.p.is_natural_isomorphism(), "every p_U invertible".into()))
            });
        }
        s.check("idempotent", name, (|| {
            let ppf = plus(&pf.plus, caps)?;
            Ok((ppf.p.is_natural_isomorphism(), "p for F⁺ invertible".into()))
        })());
    }
    let pairs = match factorization_pairs(caps) {
        Ok(p) => p,
        Err(e) => {
            s.check("universal_property", "pairs", Err(e));
            return;
        }
    };
    for (label, f, g) in pairs {
        s.check("universal_property", label, (|| {
            let pf = plus(&f, caps)?;
            let pg = plus(&g, caps)?;
            let thetas = enumerate_nattrans(&f, &g, caps)?;
            for theta in &thetas {
                let sigma = sheafify_factor_with(theta, &pf, &pg)?;
                let all = all_factorizations(theta, &pf, caps)?;
                if all.len() != 1 || !all[0].same_maps(&sigma) {
                    return Ok((false, format!("{} factorizations", all.len())));
                }
            }
            Ok((true, format!("{} transformations, each with one factorization", thetas.len())))
        })());
    }
}

fn reflect_suite(s: &mut Suite, caps: &Caps) {
    type Probe = (&'static str, Arc<AlgObject>, ReflectionTarget, Vec<Arc<AlgObject>>);
    let probes: Vec<Probe> = vec![
        (
            "S3",
            Arc::new(symmetric3()),
            ReflectionTarget::IntoAb,
            (1..=6).map(|k| Arc::new(cyclic(k, CategoryTag::FinGrp))).collect(),
        ),
        (
            "Q8",
            Arc::new(quaternion()),
            ReflectionTarget::IntoAb,
            (1..=4).map(|k| Arc::new(cyclic(k, CategoryTag::FinGrp))).collect(),
        ),
        (
            "Z4",
            Arc::new(cyclic(4, CategoryTag::FinAb)),
            ReflectionTarget::IntoAb,
            (1..=4).map(|k| Arc::new(cyclic(k, CategoryTag::FinAb))).collect(),
        ),
        (
            "B",
            Arc::new(boolean_monoid()),
            ReflectionTarget::IntoGrp,
            (1..=4).map(|k| Arc::new(cyclic(k, CategoryTag::FinCMon))).collect(),
        ),
        (
            "B",
            Arc::new(boolean_monoid()),
            ReflectionTarget::IntoCancellative,
            (1..=4).map(|k| Arc::new(cyclic(k, CategoryTag::FinCMon))).collect(),
        ),
        (
            "abc",
            Arc::new(preorder_abc()),
            ReflectionTarget::IntoPoset,
            vec![Arc::new(chain2()), Arc::new(preorder_abc_target())],
        ),
    ];
    for (name, a, target, targets) in probes {
        s.check("factorization_unique", format!("{name}/{target}"), (|| {
            let r = reflect_object(&a, target)?;
            let mut n = 0;
            for b in targets.iter().filter(|b| target.admits(b)) {
                for f in enumerate_morphisms(&a, b, caps.search_nodes)? {
                    n += 1;
                    let g = factor_through_reflection(&r, &f)?;
                    let hits: Vec<_> = enumerate_morphisms(&r.reflected, b, caps.search_nodes)?
                        .into_iter()
                        .filter(|h| r.unit.then(h).map(|c| c.map() == f.map()).unwrap_or(false))
                        .collect();
                    if hits.len() != 1 || hits[0].map() != g.map() {
                        return Ok((false, format!("{} factorizations", hits.len())));
                    }
                }
            }
            Ok((true, format!("{n} probes into |r| = {}", r.reflected.len())))
        })());
    }

    let targets_for = |tag: CategoryTag| -> Vec<ReflectionTarget> {
        ReflectionTarget::ALL.into_iter().filter(|t| t.accepts(tag)).collect()
    };
    for (name, f) in fixtures::all() {
        let f = Arc::new(f);
        for target in targets_for(f.tag()) {
            let subject = format!("{name}/{target}");
            s.check("presheaf_unit_natural", subject.clone(), (|| {
                let rf = reflect_presheaf(&f, target)?;
                let ok = valued_in(&rf.presheaf, target);
                let id = reflect_nattrans_via(&rf.unit, &rf)?;
                let is_id = id
                    .components()
                    .iter()
                    .all(|c| c.map().iter().enumerate().all(|(i, &j)| i == j));
                Ok((ok && is_id, "θ natural, 𝒞(θ^F) = id".into()))
            })());
            s.check("route_303_sheaf", subject.clone(), (|| {
                let r = sheaf_reflect_303(&f, target, caps)?;
                Ok((r.route.is_sheaf && r.route.in_subcategory, format!("|(rF)⁺(X)| = {}", r.route.presheaf.section(f.space().whole()).len())))
            })());
            s.check("route_comparison", subject, (|| {
                let c = compare_reflections(&f, target, caps)?;
                let green = c.route_3031.hypotheses.all_green();
                let ok = !green || (c.route_3031.route.is_sheaf && c.natural_iso_found);
                let method = match c.method {
                    ComparisonMethod::Universal => "universal",
                    ComparisonMethod::Search => "search",
                    ComparisonMethod::SearchCapped => "search-capped",
                };
                Ok((ok, format!("hypotheses {}, iso {} ({method})", if green { "green" } else { "flagged" }, c.natural_iso_found)))
            })());
        }
    }
    s.check("sign_factorization", "const_s3→sheaf_z2", (|| {
        let f = Arc::new(fixtures::const_s3());
        let g = Arc::new(fixtures::sheaf_z2());
        let theta = fixtures::sign_transformation(&f, &g);
        let rf = reflect_presheaf(&f, ReflectionTarget::IntoAb)?;
        let ct = reflect_nattrans_via(&theta, &rf)?;
        Ok((rf.unit.then(&ct)?.same_maps(&theta), "𝒞(θ) ∘ θ^F = θ".into()))
    })());
    s.check("all_green_path", "cancellative_sheaf/IntoGrp", (|| {
        let f = Arc::new(fixtures::cancellative_sheaf());
        let r = sheaf_reflect_3031(&f, ReflectionTarget::IntoGrp, caps)?;
        Ok((r.hypotheses.all_green() && r.route.is_sheaf, format!("{} product families", r.hypotheses.families_checked)))
    })());
    s.check("flagged_path", "const_s3/IntoAb", (|| {
        let f = Arc::new(fixtures::const_s3());
        let r = sheaf_reflect_3031(&f, ReflectionTarget::IntoAb, caps)?;
        Ok((!r.hypotheses.unit_mono, format!("non-mono over {:?}", r.hypotheses.non_mono_sections)))
    })());
    s.check("abelianization_preserves_products", "groups", (|| {
        let groups = [Arc::new(symmetric3()), Arc::new(quaternion()), Arc::new(cyclic(2, CategoryTag::FinGrp))];
        let mut n = 0;
        for a in &groups {
            for b in &groups {
                n += 1;
                if !preserves_finite_products(ReflectionTarget::IntoAb, CategoryTag::FinGrp, &[a.clone(), b.clone()])?.preserved {
                    return Ok((false, format!("{} × {}", a.len(), b.len())));
                }
            }
        }
        Ok((true, format!("{n} pairs")))
    })());
    s.check("worked_numbers", "discrete_nonsheaf", (|| {
        let f = Arc::new(fixtures::discrete_nonsheaf());
        let pf = plus(&f, caps)?;
        let n = pf.plus.section(f.space().whole()).len();
        Ok((n == 2, format!("|F⁺(X)| = {n}")))
    })());
    for (name, a, target, expect) in [
        ("S3", symmetric3(), ReflectionTarget::IntoAb, 2),
        ("Q8", quaternion(), ReflectionTarget::IntoAb, 4),
        ("B", boolean_monoid(), ReflectionTarget::IntoGrp, 1),
        ("abc", preorder_abc(), ReflectionTarget::IntoPoset, 2),
    ] {
        s.check("worked_numbers", format!("{name}/{target}"), (|| {
            let r = reflect_object(&Arc::new(a), target)?;
            Ok((r.reflected.len() == expect, format!("|r| = {}", r.reflected.len())))
        })());
    }
}

/// A three-element poset `x ≤ y`, `z` for posetal probes.
fn preorder_abc_target() -> AlgObject {
    AlgObject::preorder(&["x", "y", "z"], &[(0, 0), (1, 1), (2, 2), (0, 1)]).expect("poset")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finspace_and_algebra_suites_pass() {
        let caps = Caps::default();
        for suite in ["finspace", "algebra"] {
            let results = run(suite, &caps).unwrap();
            assert!(!results.is_empty());
            for r in &results {
                assert!(r.passed, "{}", r.line());
            }
        }
        assert!(run("nope", &caps).is_err());
    }
}
