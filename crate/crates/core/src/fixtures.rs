//! Built-in spaces, objects and presheaves used by `verify`, the tests and
//! the browser demo.

use std::sync::Arc;

use crate::algebra::{AlgObject, CategoryTag};
use crate::finspace::FinSpace;
use crate::presheaf::{NatTrans, Presheaf};

pub mod objects {
    use std::sync::Arc;

    use crate::algebra::{AlgMorphism, AlgObject, CategoryTag};

    /// `Z/n` with elements `"0"…"n-1"`.
    pub fn cyclic(n: usize, tag: CategoryTag) -> AlgObject {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        AlgObject::from_fn(tag, &names, |a, b| (a + b) % n).expect("cyclic group")
    }

    /// `S3` as `s^i r^j`, named `e r r2 s sr sr2`.
    pub fn symmetric3() -> AlgObject {
        let names = ["e", "r", "r2", "s", "sr", "sr2"];
        // r s = s r⁻¹, so (s^i r^j)(s^k r^l) = s^(i+k) r^(±j + l)
        AlgObject::from_fn(CategoryTag::FinGrp, &names, |a, b| {
            let (i, j) = (a / 3, a % 3);
            let (k, l) = (b / 3, b % 3);
            let j = if k == 1 { (3 - j) % 3 } else { j };
            ((i + k) % 2) * 3 + (j + l) % 3
        })
        .expect("S3")
    }

    /// The quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> AlgObject {
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
        // unit products as (negated, unit) with units 1, i, j, k = 0..4
        const UNITS: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        AlgObject::from_fn(CategoryTag::FinGrp, &names, |a, b| {
            let (neg, u) = UNITS[a / 2][b / 2];
            let negative = neg ^ (a % 2 == 1) ^ (b % 2 == 1);
            2 * u + usize::from(negative)
        })
        .expect("Q8")
    }

    /// `({0, 1}, max)`.
    pub fn boolean_monoid() -> AlgObject {
        AlgObject::from_fn(CategoryTag::FinCMon, &["0", "1"], |a, b| a.max(b)).expect("boolean monoid")
    }

    /// The chain `lo ≤ hi`.
    pub fn chain2() -> AlgObject {
        AlgObject::preorder(&["lo", "hi"], &[(0, 0), (1, 1), (0, 1)]).expect("chain")
    }

    /// The preorder with `a ≡ b` and `c` incomparable to both.
    pub fn preorder_abc() -> AlgObject {
        AlgObject::preorder(&["a", "b", "c"], &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)])
            .expect("preorder")
    }

    /// The sign homomorphism `S3 → Z/2`.
    pub fn sign_map(s3: &Arc<AlgObject>, z2: &Arc<AlgObject>) -> AlgMorphism {
        AlgMorphism::from_fn(s3.clone(), z2.clone(), |a| a / 3).expect("sign map")
    }
}

use objects::*;

/// Points `p, q`; opens `∅, {q}, {p,q}`.
pub fn sierpinski() -> Arc<FinSpace> {
    Arc::new(FinSpace::from_strs(&["p", "q"], &[&[], &["q"], &["p", "q"]]).expect("Sierpiński space"))
}

pub fn discrete2() -> Arc<FinSpace> {
    Arc::new(FinSpace::discrete(&["p", "q"]).expect("discrete space"))
}

/// Points `a, b, c`; opens `∅, {a}, {b}, {a,b}, X`.
pub fn vee3() -> Arc<FinSpace> {
    Arc::new(
        FinSpace::from_strs(
            &["a", "b", "c"],
            &[&[], &["a"], &["b"], &["a", "b"], &["a", "b", "c"]],
        )
        .expect("vee space"),
    )
}

fn arc(o: AlgObject) -> Arc<AlgObject> {
    Arc::new(o)
}

/// Presheaf from sections keyed by open key and a name-level restriction
/// `restrict(big, small, element)`.
fn by_keys(
    space: Arc<FinSpace>,
    tag: CategoryTag,
    sections: &[(&str, Arc<AlgObject>)],
    restrict: impl Fn(&str, &str, &str) -> String,
) -> Presheaf {
    let lookup = |key: &str| {
        sections
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, o)| o.clone())
            .unwrap_or_else(|| panic!("fixture lacks section `{key}`"))
    };
    Presheaf::from_fn(
        space,
        tag,
        |sp, u| lookup(sp.key(u)),
        |sp, big, small, s| {
            let (b, sm) = (lookup(sp.key(big)), lookup(sp.key(small)));
            if big == small {
                return s;
            }
            let image = restrict(sp.key(big), sp.key(small), &b.name(s));
            sm.index_of(&image)
                .unwrap_or_else(|| panic!("fixture restriction lands outside `{}`", sp.key(small)))
        },
    )
    .expect("fixture presheaf")
}

/// FinSet on Sierpiński: `F(X) = {a,b}`, `F({q}) = {u}`, `F(∅) = {*}`.
pub fn sierpinski_set() -> Presheaf {
    let space = sierpinski();
    by_keys(
        space,
        CategoryTag::FinSet,
        &[
            ("p,q", arc(AlgObject::set(&["a", "b"]).unwrap())),
            ("q", arc(AlgObject::set(&["u"]).unwrap())),
            ("", arc(AlgObject::set(&["*"]).unwrap())),
        ],
        |_, small, _| if small == "q" { "u".into() } else { "*".into() },
    )
}

/// FinAb on Sierpiński: `Z/4 → Z/2 → 0` by reduction mod 2.
pub fn sierpinski_z4() -> Presheaf {
    by_keys(
        sierpinski(),
        CategoryTag::FinAb,
        &[
            ("p,q", arc(cyclic(4, CategoryTag::FinAb))),
            ("q", arc(cyclic(2, CategoryTag::FinAb))),
            ("", arc(cyclic(1, CategoryTag::FinAb))),
        ],
        |_, small, s| {
            if small == "q" {
                (s.parse::<usize>().unwrap() % 2).to_string()
            } else {
                "0".into()
            }
        },
    )
}

/// FinGrp on Sierpiński: `Z/2` over `X` and `{q}` with the zero restriction.
pub fn sierpinski_z2_zero() -> Presheaf {
    by_keys(
        sierpinski(),
        CategoryTag::FinGrp,
        &[
            ("p,q", arc(cyclic(2, CategoryTag::FinGrp))),
            ("q", arc(cyclic(2, CategoryTag::FinGrp))),
            ("", arc(cyclic(1, CategoryTag::FinGrp))),
        ],
        |_, _, _| "0".into(),
    )
}

/// FinSet on the discrete 2-point space with no gluing for `(b, c)`.
pub fn discrete_nonsheaf() -> Presheaf {
    by_keys(
        discrete2(),
        CategoryTag::FinSet,
        &[
            ("p,q", arc(AlgObject::set(&["*"]).unwrap())),
            ("p", arc(AlgObject::set(&["a", "b"]).unwrap())),
            ("q", arc(AlgObject::set(&["c"]).unwrap())),
            ("", arc(AlgObject::set(&["*"]).unwrap())),
        ],
        |_, small, _| match small {
            "p" => "a".into(),
            "q" => "c".into(),
            _ => "*".into(),
        },
    )
}

/// FinGrp on the discrete 2-point space: trivial over `X`, `S3` and `Z/2` on the points.
pub fn discrete_nonsheaf_grp() -> Presheaf {
    by_keys(
        discrete2(),
        CategoryTag::FinGrp,
        &[
            ("p,q", arc(cyclic(1, CategoryTag::FinGrp))),
            ("p", arc(symmetric3())),
            ("q", arc(cyclic(2, CategoryTag::FinGrp))),
            ("", arc(cyclic(1, CategoryTag::FinGrp))),
        ],
        |_, small, _| if small == "p" { "e".into() } else { "0".into() },
    )
}

fn constant_on_sierpinski(object: AlgObject) -> Presheaf {
    Presheaf::constant(sierpinski(), arc(object)).expect("constant presheaf")
}

/// The literal constant presheaf (including `F(∅)`), not the constant sheaf.
pub fn const_s3() -> Presheaf {
    constant_on_sierpinski(symmetric3())
}

pub fn const_z2() -> Presheaf {
    constant_on_sierpinski(cyclic(2, CategoryTag::FinGrp))
}

pub fn const_z4() -> Presheaf {
    constant_on_sierpinski(cyclic(4, CategoryTag::FinAb))
}

pub fn const_q8() -> Presheaf {
    constant_on_sierpinski(quaternion())
}

/// The constant sheaf `Z/2` on Sierpiński (trivial over `∅`).
pub fn sheaf_z2() -> Presheaf {
    by_keys(
        sierpinski(),
        CategoryTag::FinGrp,
        &[
            ("p,q", arc(cyclic(2, CategoryTag::FinGrp))),
            ("q", arc(cyclic(2, CategoryTag::FinGrp))),
            ("", arc(cyclic(1, CategoryTag::FinGrp))),
        ],
        |_, small, s| if small == "q" { s.into() } else { "0".into() },
    )
}

/// The constant sheaf on the boolean monoid over Sierpiński.
pub fn boolean_monoid_sheaf() -> Presheaf {
    by_keys(
        sierpinski(),
        CategoryTag::FinCMon,
        &[
            ("p,q", arc(boolean_monoid())),
            ("q", arc(boolean_monoid())),
            ("", arc(cyclic(1, CategoryTag::FinCMon))),
        ],
        |_, small, s| if small == "q" { s.into() } else { "0".into() },
    )
}

/// A cancellative commutative-monoid sheaf: `Z/3 → Z/3 → 0`.
pub fn cancellative_sheaf() -> Presheaf {
    by_keys(
        sierpinski(),
        CategoryTag::FinCMon,
        &[
            ("p,q", arc(cyclic(3, CategoryTag::FinCMon))),
            ("q", arc(cyclic(3, CategoryTag::FinCMon))),
            ("", arc(cyclic(1, CategoryTag::FinCMon))),
        ],
        |_, small, s| if small == "q" { s.into() } else { "0".into() },
    )
}

/// FinPreord on Sierpiński: `{a ≡ b, c} → (lo ≤ hi) → 1`.
pub fn preorder_sierpinski() -> Presheaf {
    by_keys(
        sierpinski(),
        CategoryTag::FinPreord,
        &[
            ("p,q", arc(preorder_abc())),
            ("q", arc(chain2())),
            ("", arc(AlgObject::terminal(CategoryTag::FinPreord))),
        ],
        |_, small, s| match (small, s) {
            ("q", "c") => "hi".into(),
            ("q", _) => "lo".into(),
            _ => "()".into(),
        },
    )
}

fn bits(len: usize) -> Vec<String> {
    if len == 0 {
        return vec!["-".into()];
    }
    (0..1usize << len)
        .map(|m| (0..len).map(|i| if m >> (len - 1 - i) & 1 == 1 { '1' } else { '0' }).collect())
        .collect()
}

/// Locally constant `{0,1}`-valued functions on the vee space.
///
/// Elements list values at the points of the open in point order; `X` is
/// connected so only `000` and `111` survive there.
pub fn vee_set() -> Presheaf {
    let all = |n| arc(AlgObject::set(&bits(n)).unwrap());
    by_keys(
        vee3(),
        CategoryTag::FinSet,
        &[
            ("a,b,c", arc(AlgObject::set(&["000", "111"]).unwrap())),
            ("a,b", all(2)),
            ("a", all(1)),
            ("b", all(1)),
            ("", all(0)),
        ],
        |big, small, s| {
            if small.is_empty() {
                return "-".into();
            }
            let pts: Vec<&str> = big.split(',').collect();
            small
                .split(',')
                .map(|pt| s.as_bytes()[pts.iter().position(|q| *q == pt).unwrap()] as char)
                .collect()
        },
    )
}

/// FinAb on the vee space: `Z/2` everywhere except `∅`, all restrictions identities.
///
/// Not a sheaf: the family `(1, 0)` over `{{a},{b}}` has no gluing.
pub fn vee_ab() -> Presheaf {
    let z2 = arc(cyclic(2, CategoryTag::FinAb));
    by_keys(
        vee3(),
        CategoryTag::FinAb,
        &[
            ("a,b,c", z2.clone()),
            ("a,b", z2.clone()),
            ("a", z2.clone()),
            ("b", z2),
            ("", arc(cyclic(1, CategoryTag::FinAb))),
        ],
        |_, small, s| if small.is_empty() { "0".into() } else { s.into() },
    )
}

/// Componentwise sign (or the trivial map into one-element sections).
pub fn sign_transformation(source: &Arc<Presheaf>, target: &Arc<Presheaf>) -> NatTrans {
    NatTrans::from_fn(source.clone(), target.clone(), |u, s| {
        if target.section(u).len() == 1 {
            0
        } else {
            s / 3
        }
    })
    .expect("sign transformation")
}

/// Names of every built-in presheaf, in a fixed order.
pub const NAMES: [&str; 15] = [
    "sierpinski_set",
    "sierpinski_z4",
    "sierpinski_z2_zero",
    "discrete_nonsheaf",
    "discrete_nonsheaf_grp",
    "const_s3",
    "const_z2",
    "const_z4",
    "const_q8",
    "sheaf_z2",
    "boolean_monoid_sheaf",
    "cancellative_sheaf",
    "preorder_sierpinski",
    "vee_set",
    "vee_ab",
];

pub fn by_name(name: &str) -> Option<Presheaf> {
    Some(match name {
        "sierpinski_set" => sierpinski_set(),
        "sierpinski_z4" => sierpinski_z4(),
        "sierpinski_z2_zero" => sierpinski_z2_zero(),
        "discrete_nonsheaf" => discrete_nonsheaf(),
        "discrete_nonsheaf_grp" => discrete_nonsheaf_grp(),
        "const_s3" => const_s3(),
        "const_z2" => const_z2(),
        "const_z4" => const_z4(),
        "const_q8" => const_q8(),
        "sheaf_z2" => sheaf_z2(),
        "boolean_monoid_sheaf" => boolean_monoid_sheaf(),
        "cancellative_sheaf" => cancellative_sheaf(),
        "preorder_sierpinski" => preorder_sierpinski(),
        "vee_set" => vee_set(),
        "vee_ab" => vee_ab(),
        _ => return None,
    })
}

/// Every built-in presheaf with its name.
pub fn all() -> Vec<(&'static str, Presheaf)> {
    NAMES.iter().map(|&n| (n, by_name(n).unwrap())).collect()
}

/// The presheaf JSON of a built-in fixture.
pub fn json_fixture(name: &str) -> Option<String> {
    by_name(name).map(|f| crate::json::to_string(&f.to_json(), true))
}
