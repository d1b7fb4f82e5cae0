use thiserror::Error;

/// Errors raised by field construction, graph building and the analyses on top.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must be monic of degree {expected}, got {found} coefficients")]
    DegreeMismatch { expected: u32, found: usize },
    #[error("modulus coefficient {0} is not reduced mod p")]
    CoefficientOutOfRange(u64),
    #[error("modulus polynomial is reducible over Z_p")]
    ReduciblePolynomial,
    #[error("field order {order} exceeds the configured cap {cap}")]
    OrderTooLarge { order: u128, cap: u64 },
    #[error("element index {index} out of range for field of order {q}")]
    IndexOutOfRange { index: usize, q: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("square enumeration and Euler criterion disagree at index {0}")]
    CharacterMismatch(usize),
    #[error("q = {0} is not congruent to 1 mod 4")]
    NotOneModFour(u64),
    #[error("q = {0} has even extension degree")]
    EvenExtensionDegree(u64),
    #[error("{0} is not an odd prime power")]
    NotPrimePower(u64),
    #[error("vertex set is not a clique")]
    NotAClique,
    #[error("graph of order {q} exceeds the naive oracle cap {cap}")]
    TooLarge { q: u64, cap: u64 },
    #[error("clique must be nonempty")]
    EmptyClique,
    #[error("translate t = {0} lies in the clique")]
    TIsInB(usize),
    #[error("D-set size must be positive")]
    ZeroR,
    #[error("polynomial check needs a prime field, got extension degree {0}")]
    ExtensionField(u32),
    #[error("malformed cache: {0}")]
    Cache(String),
    #[error("cache is empty")]
    EmptyCache,
}

pub type Result<T> = std::result::Result<T, Error>;
