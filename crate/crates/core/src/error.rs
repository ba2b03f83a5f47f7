use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("undefined order")]
    UndefinedOrder,
    #[error("empty family")]
    EmptyFamily,
    #[error("zero polynomial input")]
    ZeroPolynomial,
    #[error("constant polynomial has no discriminant")]
    ConstantPolynomial,
    #[error("order at infinity needs deg f <= ambient degree, got deg {deg} > {ambient}")]
    AmbientDegreeExceeded { deg: usize, ambient: usize },
    #[error("not a partition: {0}")]
    InvalidPartition(String),
    #[error("root index {index} out of range 1..={rank}")]
    RootIndexOutOfRange { index: usize, rank: usize },
    #[error("k not admissible for these weights")]
    InadmissibleK,
    #[error("invalid Schubert problem: {0}")]
    InvalidProblem(String),
    #[error("empty intersection")]
    EmptyIntersection,
    #[error("degenerate basis")]
    DegenerateBasis,
    #[error("plane has a base point")]
    BasePoint,
    #[error("splitting degenerate")]
    SplittingDegenerate,
    #[error("truncation orders must be strictly increasing and below the ambient degree")]
    BadTruncationOrders,
    #[error("index set size {got} does not match d - m - N = {expected}")]
    IndexSetSize { got: usize, expected: usize },
    #[error("inconsistent Wronskian tuple")]
    InconsistentWronskians,
    #[error("coincident coordinates")]
    CoincidentCoordinates,
    #[error("frame mismatch: {0}")]
    FrameMismatch(String),
    #[error("marked points must be distinct")]
    EqualMarkedPoints,
    #[error("module dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("zero vector input")]
    ZeroVector,
    #[error("letter counts do not match the k-vector")]
    WordCountMismatch,
    #[error("cannot parse scalar: {0}")]
    ScalarParse(String),
    #[error("numeric root finding did not converge")]
    RootsDidNotConverge,
    #[error("internal check failed: {0}")]
    Internal(String),
}
