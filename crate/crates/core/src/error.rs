use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot parse rational literal {0:?}")]
    Parse(String),
    #[error("truncation orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("series is not invertible (constant term is zero)")]
    NotInvertible,
    #[error("exp needs a zero constant term")]
    NonzeroConstantTerm,
    #[error("log needs constant term 1")]
    LogConstantTerm,
    #[error("scaling factor must be nonzero")]
    ZeroScalar,
    #[error("word index error: {0}")]
    Index(String),
    #[error("word longer than 64 letters")]
    WordTooLong,
    #[error("family generated to depth {have}, suite needs {need}")]
    InsufficientFamilyDepth { have: usize, need: usize },
    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ambient dimensions differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("spectrum is not rational: found {found} of {degree} roots")]
    NotRationalSpectrum { found: usize, degree: usize },
    #[error("matrix is not diagonalizable over the rationals")]
    NotDiagonalizable,
    #[error("repeated eigenvalue {0}")]
    RepeatedEigenvalue(String),
    #[error("not tridiagonal at (i, j) = ({0}, {1})")]
    NotTridiagonal(usize, usize),
    #[error("pair is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("nonstandard ordering: {0}")]
    NonstandardOrdering(String),
    #[error("split decomposition check failed: {0}")]
    SplitCheckFailed(String),
    #[error("catalog check failed: {0}")]
    CatalogCheckFailed(String),
    #[error("transition check failed: {0}")]
    TransitionCheckFailed(String),
    #[error("inconsistent eigenvalue sequences: {0}")]
    InconsistentSequences(String),
    #[error("block violation: {0}")]
    BlockViolation(String),
    #[error("no common eigenbasis: {0}")]
    NoCommonEigenbasis(String),
    #[error("eigenvalue ratio mismatch: {0}")]
    EigenvalueRatioMismatch(String),
    #[error("xi = {0} is excluded (it lies in q^(d-1), q^(d-3), ..., q^(1-d))")]
    ForbiddenXi(String),
    #[error("linear system for the superdiagonal is singular")]
    LinearSolveSingular,
    #[error("identity {0} fails")]
    VerificationFailed(String),
    #[error("matrix is not a scalar multiple of the identity at n = {0}")]
    NotScalarMultiple(usize),
    #[error("coefficient mismatch in {check} at order {order}")]
    CoefficientMismatch { check: String, order: usize },
    #[error("graph too large: {0}")]
    TooLarge(String),
    #[error("graph is not distance-regular (witness x = {x}, y = {y})")]
    NotDistanceRegular { x: usize, y: usize },
    #[error("eigenvalues admit no affine fit r b^-i + s")]
    NoAffineFit,
    #[error("classical parameter fit failed: {0}")]
    ClassicalFit(String),
    #[error("q-Serre relation fails: {0}")]
    QSerreViolation(String),
    #[error("module decomposition incomplete: {got} of {want} dimensions")]
    DecompositionIncomplete { got: usize, want: usize },
    #[error("theorem violation ({tag}): {detail}")]
    TheoremViolation { tag: String, detail: String },
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
