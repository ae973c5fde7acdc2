use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty specification")]
    EmptySpecification,
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state label `{0}`")]
    DuplicateState(String),
    #[error("incompatible specifications: {0}")]
    Incompatible(String),
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("map is not an endomorphism")]
    NotEndomorphism,
    #[error("monoid cap exceeded after {0} distinct elements")]
    CapExceeded(usize),
    #[error("not an order embedding: {0}")]
    NotOrderEmbedding(String),
    #[error("singleton images overlap: {0}")]
    OverlappingImages(String),
    #[error("not a lumping: {0}")]
    NotLumping(String),
    #[error("not a Galois insertion: {0}")]
    NotInsertion(String),
    #[error("embedding is not intensive: {0}")]
    NotIntensive(String),
    #[error("lumping containment violated: {0}")]
    LumpingOrderViolated(String),
    #[error("not a submonoid: {0}")]
    NotSubmonoid(String),
    #[error("map `{0}` is not an element of the monoid")]
    NotInMonoid(String),
    #[error("subsystem is not complete")]
    NotComplete,
    #[error("subsystems are not independent: {0}")]
    NotIndependent(String),
    #[error("side resource is not compatible with the embedding: {0}")]
    IncompatibleSideResource(String),
    #[error("empty intersection with side resource at state `{0}`")]
    EmptyIntersection(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("W does not meet e_A(V_A)")]
    IncompatibleW,
    #[error("not a monoid isomorphism: {0}")]
    NotIsomorphism(String),
    #[error("swap map `{0}` is not in the joint subsystem")]
    NotInJoin(String),
    #[error("theory is not contained in the mother theory: {0}")]
    NotSubtheory(String),
    #[error("unknown approximation index `{0}`")]
    UnknownIndex(String),
    #[error("invalid approximation index: {0}")]
    InvalidIndex(String),
    #[error("no chains with addition declared")]
    NoChainsDeclared,
    #[error("probability {0} outside [0, 1]")]
    BadProbability(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("length mismatch: {0} weights for {1} points")]
    LengthMismatch(usize, usize),
    #[error("invalid distribution: {0}")]
    BadDistribution(String),
    #[error("instance too large for the oracle: {0}")]
    TooLarge(String),
    #[error("{line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("duplicate name: {0}")]
    DuplicateName(String),
    #[error("unknown reference: {0}")]
    UnknownReference(String),
}

pub type Result<T> = std::result::Result<T, Error>;
