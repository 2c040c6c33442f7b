use thiserror::Error;

/// Every failure the verification pipeline can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in Q(zeta_20)")]
    DivisionByZero,
    #[error("zeta -> zeta^{0} is not an automorphism (gcd({0}, 20) != 1)")]
    InvalidAutomorphism(i64),
    #[error("eigenvalue outside Q(zeta_20): permutation {0} has a cycle of length 3")]
    UnsupportedEigenvalue(String),
    #[error("classes are linearly dependent")]
    DependentClasses,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,

    #[error("projective point with all coordinates zero")]
    ZeroPoint,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("lines coincide")]
    CoincidentLines,
    #[error("lines are skew")]
    SkewLines,
    #[error("line does not lie on the surface")]
    NotOnSurface,
    #[error("residual factorization left a nonzero remainder")]
    FactorizationFailure,
    #[error("not a line: {0}")]
    NotALine(String),
    #[error("form is not homogeneous of degree {0}")]
    NotHomogeneous(u32),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("fixed locus of {0} meets the surface in positive dimension")]
    PositiveDimensionalFixedLocus(String),
    #[error("line enumeration stabilized at {0} lines, expected 27")]
    EnumerationIncomplete(usize),
    #[error("group element {0} maps a line outside the configuration")]
    ActionNotClosed(String),
    #[error("duplicate points")]
    DuplicatePoints,
    #[error("unsupported surface shape: {0}")]
    UnsupportedShape(String),

    #[error("no six pairwise disjoint lines found")]
    NoSixer,
    #[error("inconsistent incidence: {0}")]
    InconsistentIncidence(String),
    #[error("family is not contractible: {0}")]
    NotContractible(String),
    #[error("relation failed: {name}, difference {difference:?}")]
    RelationFailed { name: String, difference: Vec<String> },
    #[error("the two length-5 orbits on the quadric intersect")]
    OrbitsNotDisjoint,

    #[error("wrong group: {0}")]
    WrongGroup(String),
    #[error("projective closure exceeded {0} elements")]
    ClosureExplosion(usize),

    #[error("unknown check id: {0}")]
    UnknownCheckId(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
