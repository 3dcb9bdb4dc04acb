mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use common::*;
use sheaflab::fixtures;
use sheaflab::{plus, stalk, Caps, OpenId, Presheaf};

/// Translates the library's germ ids at each point to oracle class ids and
/// checks both partitions agree.
fn translation(f: &Presheaf, oracle: &[OracleStalk]) -> Vec<Vec<usize>> {
    let sp = f.space();
    (0..sp.points().len())
        .map(|x| {
            let st = stalk(f, &sp.points()[x]).unwrap();
            assert_eq!(st.len(), oracle[x].count, "germ count at {}", sp.points()[x]);
            let mut to_oracle = vec![usize::MAX; st.len()];
            for (i, &(u, a)) in oracle[x].nodes.iter().enumerate() {
                let g = st.rho(u, a).expect("neighborhood node");
                assert!(to_oracle[g] == usize::MAX || to_oracle[g] == oracle[x].class[i]);
                to_oracle[g] = oracle[x].class[i];
            }
            let distinct: BTreeSet<_> = to_oracle.iter().collect();
            assert_eq!(distinct.len(), st.len(), "partitions differ at {}", sp.points()[x]);
            to_oracle
        })
        .collect()
}

fn check_against_oracle(name: &str, f: &Arc<Presheaf>) {
    let caps = Caps::default();
    let sp = f.space();
    let oracle: Vec<OracleStalk> = (0..sp.points().len()).map(|x| oracle_stalk(f, x)).collect();
    let tr = translation(f, &oracle);
    let pf = plus(f, &caps).unwrap();
    for u in opens(sp) {
        let pts: Vec<usize> = (0..sp.points().len()).filter(|&x| has_point(sp, u, x)).collect();
        let expected = oracle_plus(f, &oracle, u);
        let got: Vec<Vec<usize>> = pf.families[u.0]
            .iter()
            .map(|fam| fam.iter().zip(&pts).map(|(&g, &x)| tr[x][g]).collect())
            .collect();
        let got_set: BTreeSet<_> = got.iter().cloned().collect();
        assert_eq!(got_set.len(), got.len(), "{name}: duplicate families over {}", sp.key(u));
        assert_eq!(got_set, expected, "{name}: F⁺({})", sp.key(u));
        assert_eq!(pf.plus.section(u).len(), expected.len());

        // restrictions truncate families
        for v in opens(sp).into_iter().filter(|&v| subset(sp, v, u)) {
            let vpts: Vec<usize> = pts.iter().copied().filter(|&x| has_point(sp, v, x)).collect();
            for (i, fam) in got.iter().enumerate() {
                let j = pf.plus.restrict(u, v, i);
                let cut: Vec<usize> = pts
                    .iter()
                    .zip(fam)
                    .filter(|(x, _)| vpts.contains(x))
                    .map(|(_, &g)| g)
                    .collect();
                let target: Vec<usize> = pf.families[v.0][j].iter().zip(&vpts).map(|(&g, &x)| tr[x][g]).collect();
                assert_eq!(cut, target, "{name}: restriction {}|{}", sp.key(v), sp.key(u));
            }
        }

        // p_U sends a section to its germ family
        for s in 0..f.section(u).len() {
            let fam: Vec<usize> = pts.iter().map(|&x| oracle[x].class_of(u, s)).collect();
            let image = pf.p.component(u).apply(s);
            let lib: Vec<usize> = pf.families[u.0][image].iter().zip(&pts).map(|(&g, &x)| tr[x][g]).collect();
            assert_eq!(fam, lib, "{name}: p over {}", sp.key(u));
        }
    }
    assert_eq!(pf.plus.section(OpenId(0)).len(), 1, "{name}: F⁺(∅) is a singleton");
}

#[test]
fn plus_matches_brute_force_on_every_fixture() {
    for (name, f) in fixtures::all() {
        check_against_oracle(name, &Arc::new(f));
    }
}

#[test]
fn plus_is_a_sheaf_by_brute_force() {
    let caps = Caps::default();
    for (name, f) in fixtures::all() {
        let pf = plus(&Arc::new(f), &caps).unwrap();
        assert!(oracle_is_sheaf(&pf.plus), "{name}");
    }
}

#[test]
fn sheaf_fixtures_agree_with_brute_force_condition() {
    let expected_sheaves = [
        "sierpinski_set",
        "sierpinski_z4",
        "sierpinski_z2_zero",
        "sheaf_z2",
        "boolean_monoid_sheaf",
        "cancellative_sheaf",
        "preorder_sierpinski",
        "vee_set",
    ];
    for (name, f) in fixtures::all() {
        assert_eq!(oracle_is_sheaf(&f), expected_sheaves.contains(&name), "{name}");
    }
}

#[test]
fn plus_on_generated_truncation_presheaves() {
    let sp = space_from_relation(3, &[(0, 1)]);
    let f = truncation_presheaf(sp, 2, 2, &[(0, vec![0, 1, 1]), (1, vec![1, 0, 0]), (3, vec![1, 1, 0])]);
    check_against_oracle("generated", &Arc::new(f));
}
