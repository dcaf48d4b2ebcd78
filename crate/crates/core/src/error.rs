use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("mixed quadratic fields Q(sqrt {0}) and Q(sqrt {1})")]
    MixedFields(i64, i64),
    #[error("{0} is not a square-free integer >= 2")]
    BadRadicand(i64),
    #[error("linear part must be integral, entry ({row}, {col}) is {value}")]
    NotIntegral { row: usize, col: usize, value: String },
    #[error("translation part is irrational; orbit tracking is exact only over Q")]
    IrrationalTranslation,
    #[error("point has irrational coordinates")]
    IrrationalPoint,
    #[error("operation requires a linear map (zero translation)")]
    NotLinear,
    #[error("determinant is zero; {0}")]
    Singular(&'static str),
    #[error("no periodic point found with period up to {0}")]
    UnknownUpTo(u64),
    #[error("orbit did not close within {0} steps")]
    OrbitBound(u64),
    #[error("bracket is not class <= 2: {0}")]
    NotClass2(String),
    #[error("bracket is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("map does not respect the bracket on basis pair ({0}, {1})")]
    BracketViolation(usize, usize),
    #[error("image of lattice basis element {0} is not in the lattice")]
    LatticeNotPreserved(usize),
    #[error("generated subgroup is not a full lattice: {0}")]
    NotFullRank(String),
    #[error("lattice basis is not closed under products: {0}")]
    NotClosed(String),
    #[error("subgroup validation failed, counterexample {0}")]
    Validation(String),
    #[error("basis element {0} of the first subgroup is not contained in the second")]
    NotContained(usize),
    #[error("relative order search exceeded bound {0}")]
    OrderBound(u64),
    #[error("holonomy data not closed: {0}")]
    HolonomyNotClosed(String),
    #[error("group has torsion: representative {0} has an element of finite order")]
    Torsion(usize),
    #[error("affine map is not compatible with representative {0}")]
    IncompatibleEndo(usize),
    #[error("upstairs map is not a lift of the downstairs map: {0}")]
    LiftMismatch(String),
    #[error("sublattice has infinite index")]
    InfiniteIndex,
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}
