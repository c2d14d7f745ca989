use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("alphabet has {0} letters, at most 255 supported")]
    AlphabetTooLarge(usize),
    #[error("invalid letter name {0:?}")]
    BadLetterName(String),
    #[error("letter {0:?} declared twice")]
    DuplicateLetter(String),
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("letter index {0} is not in the alphabet")]
    LetterOutOfRange(u8),
    #[error("letter {0:?} has no declared inverse")]
    MissingInverse(String),
    #[error("letter {0:?} is paired with two different inverses")]
    InconsistentInverse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("rule has an empty left-hand side")]
    EmptyLhs,
    #[error("rule {lhs:?} -> {rhs:?} is not shortlex-reducing")]
    NonReducing { lhs: String, rhs: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BallError {
    #[error("rewriting system is not confluent: {word:?} has normal forms {left:?} and {right:?}")]
    NotConfluent {
        word: String,
        left: String,
        right: String,
    },
    #[error("normal form {word:?} has length {len} but lies at distance {dist}; normal forms must be geodesic")]
    NonGeodesicNormalForm { word: String, len: usize, dist: usize },
    #[error("ball exceeds {limit} vertices (complete up to radius {complete_radius}, {vertices} vertices)")]
    TooLarge {
        limit: usize,
        complete_radius: usize,
        vertices: usize,
    },
    #[error("ball of radius {actual} is too small; radius {required} required")]
    RadiusTooSmall { required: usize, actual: usize },
    #[error("word {0:?} is not in the ball")]
    OutsideBall(String),
    #[error("enumeration depth {given} too small: depth >= {required} required")]
    DepthTooSmall { required: usize, given: usize },
    #[error("parabolic membership violated: product {word:?} has normal form {normal_form:?} outside the declared letters")]
    ParabolicViolation { word: String, normal_form: String },
    #[error("subgraph must contain the identity")]
    MissingIdentity,
    #[error("subgraph has diameter {diameter} > {bound}")]
    DiameterTooLarge { diameter: usize, bound: usize },
    #[error("path is not a walk in the ball at step {0}")]
    NotAPath(usize),
    #[error("{count} translates are not divisible by the orbit size {orbit}")]
    OrbitDivisibility { count: usize, orbit: usize },
    #[error("malformed ball cache at line {line}: {msg}")]
    Cache { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error("automaton parameter must be at least 1")]
    ZeroParameter,
    #[error("parameter K={k} too small: state after {word:?} has offset {value} at {vertex:?}, outside [-K, K]")]
    ParameterTooSmall {
        k: usize,
        word: String,
        vertex: String,
        value: i64,
    },
    #[error("state semantics violated after {word:?}: {detail}")]
    SemanticsViolated { word: String, detail: String },
    #[error("unknown accept set {0:?}")]
    UnknownAcceptSet(String),
    #[error("alphabet mismatch: automaton has {expected} letters, other machine has {got}")]
    AlphabetMismatch { expected: usize, got: usize },
    #[error("ft_const {ft_const} too small: transversal check failed at {word:?}")]
    FellowConstantTooSmall { ft_const: usize, word: String },
    #[error("malformed DFA text at line {line}: {msg}")]
    DfaFormat { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("{got} terms supplied, at least {needed} required")]
    InsufficientTerms { needed: usize, got: usize },
    #[error("no linear recurrence of order <= {max_order} fits (minimal order {found})")]
    NoRecurrence { max_order: usize, found: usize },
    #[error("series coefficient {index} is {computed} but the oracle gives {oracle}")]
    PrefixMismatch {
        index: usize,
        computed: String,
        oracle: String,
    },
    #[error("denominator vanishes at t = 0")]
    SingularDenominator,
    #[error("embedding count {0} is not divisible by the orbit size")]
    NonIntegralCount(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {msg}")]
pub struct ConfigError {
    pub line: usize,
    pub column: usize,
    pub msg: String,
}

/// Any failure raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Ball(#[from] BallError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
