//! Exact presheaves, stalks, sheafification and reflections over finite
//! topological spaces.
//!
//! Everything is computed by finite enumeration: stalks as germ classes,
//! the plus construction as locally representable families of germs, and
//! reflections (abelianization, group completion, cancellative and posetal
//! quotients) as explicit quotients. Universal properties are checked by
//! exhaustive search on small instances.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod finspace;
pub mod fixtures;
pub mod json;
pub mod plus;
pub mod presheaf;
pub mod reflect;
pub mod stalks;
pub mod verify;

pub use algebra::{AlgMorphism, AlgObject, CategoryTag};
pub use error::{Error, Result};
pub use finspace::{Cover, CoverMode, FinSpace, Open, OpenId};
pub use plus::{plus, PlusResult};
pub use presheaf::{NatTrans, Presheaf, SheafReport};
pub use reflect::ReflectionTarget;
pub use stalks::{stalk, Stalk};

/// Enumeration bounds shared by every exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Exhaustive cover enumeration is only done on spaces with at most this many opens.
    pub exhaustive_opens: usize,
    /// Bound on candidate families (plus construction, gluing searches).
    pub families: usize,
    /// Bound on search nodes when enumerating morphisms and natural transformations.
    pub search_nodes: usize,
    /// Bound on product carriers built while checking product preservation.
    pub reflect_product: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            exhaustive_opens: finspace::DEFAULT_EXHAUSTIVE_OPENS,
            families: 1_000_000,
            search_nodes: 4_000_000,
            reflect_product: 256,
        }
    }
}

/// Environment variable overriding the family and search caps.
pub const SIZE_CAP_ENV: &str = "SHEAFLAB_SIZE_CAP";

impl Caps {
    /// Defaults, with `SHEAFLAB_SIZE_CAP` (a positive integer) overriding
    /// the family and search-node bounds.
    pub fn from_env() -> Result<Caps> {
        let mut caps = Caps::default();
        if let Ok(raw) = std::env::var(SIZE_CAP_ENV) {
            let n: usize = raw
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| Error::Parse(format!("{SIZE_CAP_ENV} must be a positive integer, got `{raw}`")))?;
            caps.families = n;
            caps.search_nodes = n;
        }
        Ok(caps)
    }
}
