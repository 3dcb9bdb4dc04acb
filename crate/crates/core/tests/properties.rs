mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use sheaflab::presheaf::{check_sheaf_axioms, check_sheaf_equalizer};
use sheaflab::reflect::reflect_object;
use sheaflab::stalks::{stalk_commutes_with_forget, stalk_operation};
use sheaflab::{plus, stalk, SheafReport, AlgObject, Caps, CategoryTag, CoverMode, Error, FinSpace, Presheaf, ReflectionTarget};

fn arb_space(max_points: usize) -> impl Strategy<Value = Arc<FinSpace>> {
    (1usize..=max_points, prop::collection::vec((0usize..4, 0usize..4), 0..4))
        .prop_map(|(n, edges)| space_from_relation(n, &edges))
}

fn arb_presheaf(max_points: usize) -> impl Strategy<Value = Presheaf> {
    (
        arb_space(max_points),
        1usize..=2,
        1usize..=2,
        prop::collection::vec((0usize..16, prop::collection::vec(0usize..2, 4)), 1..4),
    )
        .prop_map(|(sp, alphabet, labels, seeds)| truncation_presheaf(sp, alphabet, labels, &seeds))
}

fn cyclic(n: usize, tag: CategoryTag) -> AlgObject {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    AlgObject::from_fn(tag, &names, |a, b| (a + b) % n).unwrap()
}

/// `x^a` for `a` below `index + period`, with `x^index = x^(index + period)`.
fn cyclic_monoid(index: usize, period: usize) -> AlgObject {
    let n = index + period;
    let reduce = |k: usize| if k < n { k } else { index + (k - index) % period };
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    AlgObject::from_fn(CategoryTag::FinCMon, &names, |a, b| reduce(a + b)).unwrap()
}

/// Both checkers, or `None` when either hits a size cap.
fn checks(f: &Presheaf, mode: CoverMode, caps: &Caps) -> Option<(SheafReport, SheafReport)> {
    let run = |r: Result<SheafReport, Error>| match r {
        Ok(report) => Some(report),
        Err(Error::SizeCap(_)) => None,
        Err(e) => panic!("{e}"),
    };
    Some((run(check_sheaf_axioms(f, mode, caps))?, run(check_sheaf_equalizer(f, mode, caps))?))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stalks_match_the_oracle(f in arb_presheaf(4)) {
        let sp = f.space();
        for x in 0..sp.points().len() {
            let st = stalk(&f, &sp.points()[x]).unwrap();
            let oracle = oracle_stalk(&f, x);
            prop_assert_eq!(st.len(), oracle.count);
            prop_assert_eq!(st.len(), f.section(st.min_open()).len());
            for (i, &(u, a)) in oracle.nodes.iter().enumerate() {
                for (j, &(v, b)) in oracle.nodes.iter().enumerate() {
                    prop_assert_eq!(st.rho(u, a) == st.rho(v, b), oracle.class[i] == oracle.class[j]);
                }
            }
        }
    }

    #[test]
    fn plus_is_a_sheaf_with_the_same_stalks(f in arb_presheaf(3)) {
        let caps = Caps::default();
        let f = Arc::new(f);
        let pf = match plus(&f, &caps) {
            Ok(pf) => pf,
            Err(Error::SizeCap(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(oracle_is_sheaf(&pf.plus));
        for mode in [CoverMode::Canonical, CoverMode::Exhaustive] {
            let (a, b) = match checks(&pf.plus, mode, &caps) {
                Some(pair) => pair,
                None => continue,
            };
            prop_assert!(a.is_sheaf && b.is_sheaf);
        }
        for (m, st) in pf.stalk_isos.iter().zip(&pf.stalks) {
            prop_assert!(m.is_bijective(st.len()));
        }
        let again = plus(&pf.plus, &caps).unwrap();
        prop_assert!(again.p.is_natural_isomorphism());
    }

    #[test]
    fn checkers_agree_with_each_other_and_the_oracle(f in arb_presheaf(4)) {
        let caps = Caps::default();
        let oracle = oracle_is_sheaf(&f);
        for mode in [CoverMode::Canonical, CoverMode::Exhaustive] {
            let a = check_sheaf_axioms(&f, mode, &caps).unwrap();
            prop_assert_eq!(a.is_sheaf, oracle);
            if let Some((_, b)) = checks(&f, mode, &caps) {
                prop_assert_eq!(a.is_sheaf, b.is_sheaf);
                prop_assert_eq!(a.failure_sites(), b.failure_sites());
            }
        }
    }

    #[test]
    fn sheaves_are_fixed_by_plus(f in arb_presheaf(4)) {
        prop_assume!(oracle_is_sheaf(&f));
        let pf = plus(&Arc::new(f), &Caps::default()).unwrap();
        prop_assert!(pf.p.is_natural_isomorphism());
    }

    #[test]
    fn constant_cyclic_stalks_carry_the_group(sp in arb_space(3), n in 1usize..=4) {
        let g = Arc::new(cyclic(n, CategoryTag::FinAb));
        let f = Presheaf::constant(sp.clone(), g).unwrap();
        for x in sp.points() {
            let st = stalk_operation(&f, x).unwrap();
            prop_assert_eq!(st.len(), n);
            prop_assert!(stalk_commutes_with_forget(&f, x).unwrap());
        }
        let pf = plus(&Arc::new(f), &Caps::default()).unwrap();
        prop_assert!(oracle_is_sheaf(&pf.plus));
    }

    #[test]
    fn cyclic_monoid_completions_have_the_period(index in 0usize..4, period in 1usize..5) {
        let m = Arc::new(cyclic_monoid(index, period));
        for target in [ReflectionTarget::IntoGrp, ReflectionTarget::IntoCancellative, ReflectionTarget::IntoAb] {
            let r = reflect_object(&m, target).unwrap();
            prop_assert_eq!(r.reflected.len(), period);
            prop_assert!(r.reflected.is_group());
            prop_assert!(is_hom(&m, &r.reflected, r.unit.map()));
        }
    }

    #[test]
    fn posetal_quotient_counts_strong_components(
        n in 1usize..6,
        edges in prop::collection::vec((0usize..6, 0usize..6), 0..8),
    ) {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in &edges {
            leq[a % n][b % n] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| leq[i][j])
            .collect();
        let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let p = Arc::new(AlgObject::preorder(&names, &pairs).unwrap());
        let components: BTreeSet<Vec<bool>> =
            (0..n).map(|i| (0..n).map(|j| leq[i][j] && leq[j][i]).collect()).collect();
        let r = reflect_object(&p, ReflectionTarget::IntoPoset).unwrap();
        prop_assert_eq!(r.reflected.len(), components.len());
        prop_assert!(r.reflected.is_antisymmetric());
        prop_assert!(is_hom(&p, &r.reflected, r.unit.map()));
    }

    #[test]
    fn abelian_products_are_their_own_abelianization(a in 1usize..4, b in 1usize..4) {
        let g = Arc::new(cyclic(a, CategoryTag::FinGrp));
        let h = Arc::new(cyclic(b, CategoryTag::FinGrp));
        let cone = sheaflab::algebra::product(CategoryTag::FinGrp, &[g, h]).unwrap();
        let r = reflect_object(&cone.object, ReflectionTarget::IntoAb).unwrap();
        prop_assert_eq!(r.reflected.len(), a * b);
        prop_assert!(r.unit.is_bijective());
    }
}
