use thiserror::Error;

/// Every failure the workbench can report.
///
/// Variants carry canonical names (open keys, element names) so that
/// diagnostics are stable across runs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // finite spaces
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("too many points ({0}); at most 64 are supported")]
    TooManyPoints(usize),
    #[error("the topology must contain the empty set and the whole space (missing `{0}`)")]
    MissingEmptyOrTotal(String),
    #[error("opens not closed under union: `{0}` ∪ `{1}` is not open")]
    NotClosedUnderUnion(String, String),
    #[error("opens not closed under intersection: `{0}` ∩ `{1}` is not open")]
    NotClosedUnderIntersection(String, String),
    #[error("`{0}` is not an open set")]
    NotAnOpen(String),
    #[error("`{0}` is not an open neighborhood of `{1}`")]
    NotANeighborhood(String, String),
    #[error("parts {parts:?} do not cover `{target}`")]
    NotACover { target: String, parts: Vec<String> },

    // finite structures
    #[error("table is malformed: {0}")]
    MalformedTable(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("not associative: ({0}·{1})·{2} ≠ {0}·({1}·{2})")]
    NotAssociative(String, String, String),
    #[error("no identity element{}", .0.as_ref().map(|e| format!(" (`{e}` fails the identity law)")).unwrap_or_default())]
    NoIdentity(Option<String>),
    #[error("`{0}` has no two-sided inverse")]
    NoInverse(String),
    #[error("not commutative: {0}·{1} ≠ {1}·{0}")]
    NotCommutative(String, String),
    #[error("order is not reflexive at `{0}`")]
    NotReflexive(String),
    #[error("order is not transitive: {0} ≤ {1} ≤ {2} but not {0} ≤ {2}")]
    NotTransitive(String, String, String),
    #[error("objects of different categories ({0} vs {1})")]
    MixedTags(String, String),
    #[error("map is not total: no image for `{0}`")]
    MapNotTotal(String),
    #[error("not a homomorphism at ({0}, {1})")]
    NotHomomorphism(String, String),
    #[error("not monotone: {0} ≤ {1} but the images are not comparable")]
    NotMonotone(String, String),
    #[error("identity not preserved: `{0}` ↦ `{1}`")]
    IdentityNotPreserved(String, String),
    #[error("morphisms do not share source and target")]
    SourceMismatch,
    #[error("morphism does not equalize the pair (at `{0}`)")]
    MediatingPreconditionFailed(String),
    #[error("subset is not closed under the operation: {0}")]
    NotClosed(String),
    #[error("carrier too large: {0}")]
    SizeCap(String),

    // presheaves
    #[error("missing section over `{0}`")]
    MissingSection(String),
    #[error("missing restriction `{0}|{1}`")]
    MissingRestriction(String, String),
    #[error("restriction `{open}|{open}` is not the identity at `{element}`")]
    IdentityLawViolated { open: String, element: String },
    #[error("composition law violated for `{u}` ⊆ `{v}` ⊆ `{w}` at `{element}`")]
    CompositionLawViolated { u: String, v: String, w: String, element: String },
    #[error("naturality violated for `{small}` ⊆ `{big}` at `{element}`")]
    NaturalityViolated { small: String, big: String, element: String },
    #[error("presheaves live over different spaces or categories")]
    PresheafMismatch,
    #[error("invalid morphism `{context}`: {source}")]
    InContext { context: String, source: Box<Error> },

    // stalks and sheafification
    #[error("operation requires an algebraic category, got {0}")]
    NotAlgebraic(String),
    #[error("presheaf is already set-valued")]
    AlreadySet,
    #[error("stalk operation ill-defined at `{0}`")]
    WellDefinednessFailure(String),
    #[error("unsupported category {0}")]
    UnsupportedTag(String),
    #[error("target presheaf is not a sheaf")]
    TargetNotASheaf,
    #[error("unit component over `{0}` is not an isomorphism")]
    PNotInvertible(String),

    // reflections
    #[error("target {target} cannot reflect objects of {tag}")]
    IncompatibleTarget { target: String, tag: String },
    #[error("object does not lie in the {0} subcategory")]
    TargetNotInSubcategory(String),
    #[error("morphism does not factor through the reflection unit (at `{0}`)")]
    NoFactorization(String),

    // plumbing
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn context(self, context: impl Into<String>) -> Error {
        Error::InContext {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// Strips any [`Error::InContext`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::InContext { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
