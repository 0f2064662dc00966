use thiserror::Error;

/// Errors raised when constructing or combining graded algebras.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("generator `{0}` has degree 0; presentation generators must have degree >= 1")]
    GeneratorDegreeZero(String),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("relation {index} is not homogeneous")]
    InhomogeneousRelation { index: usize },
    #[error("relation {index} has degree {degree}, above the truncation degree {truncation}")]
    RelationAboveTruncation {
        index: usize,
        degree: usize,
        truncation: usize,
    },
    #[error("differential on `{generator}` must raise degree by exactly 1 (got a term of degree {degree})")]
    DifferentialDegree { generator: String, degree: usize },
    #[error("inconsistent differential: d(d({generator})) != 0 modulo the relations")]
    InconsistentDifferential { generator: String },
    #[error("element refers to basis id {id}, which does not belong to this algebra")]
    ForeignBasisElement { id: usize },
    #[error("element term at basis `{name}` has degree {found}, but the element is marked homogeneous of degree {expected}")]
    MixedDegrees {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("automorphism does not have order {order}: fails on basis element `{witness}`")]
    WrongOrder { order: usize, witness: String },
    #[error("automorphism is not multiplicative on pair (`{a}`, `{b}`)")]
    NotMultiplicative { a: String, b: String },
    #[error("automorphism does not commute with the differential on `{witness}`")]
    NotChainMap { witness: String },
    #[error("group order must be positive")]
    ZeroOrder,
    #[error("class `{label}` is not invariant under the group action")]
    NotInvariant { label: String },
    #[error("expected `{label}` to be a homogeneous class of degree {expected}")]
    WrongClassDegree { label: String, expected: usize },
    #[error("top degree {top} has dimension {dim}; Poincare duality check needs a one-dimensional top degree")]
    TopNotLine { top: usize, dim: usize },
    #[error("Lefschetz degree p={p} is out of range 0..={n}")]
    LefschetzDegreeOutOfRange { p: usize, n: usize },
    #[error("derivation degree must be negative, got {0}")]
    DerivationDegreeNotNegative(i64),
    #[error("algebra is not structurally B (x) exterior(eta) with eta = `{eta}`: {reason}")]
    NotCoKahlerShape { eta: String, reason: String },
    #[error("minimal model construction did not converge in degree 1; offending classes: {classes:?}")]
    DegreeOneNonConvergence { classes: Vec<String> },
    #[error("model degree bound {n} exceeds the truncation degree {truncation} of an algebra that is not known to vanish above it")]
    ModelDegreeAboveTruncation { n: usize, truncation: usize },
    #[error("algebra fails a structural invariant: {0}")]
    MalformedAlgebra(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
