use thiserror::Error;

/// Errors raised by the library. Findings (disagreements between a stated
/// claim and a brute-force computation) are never errors; they are reported
/// as data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("depth must be at least 1, got {0}")]
    InvalidDepth(u32),

    #[error("depth {depth} exceeds the configured cap {cap}")]
    DepthExceedsCap { depth: u32, cap: u32 },

    #[error("invalid letter {0:?}: words are over the alphabet {{0,1}}")]
    InvalidLetter(char),

    #[error("empty word")]
    EmptyWord,

    #[error("truncation level {trunc} is below the starting level {level}")]
    TruncationBelowLevel { level: u32, trunc: u32 },

    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: i64, hi: i64 },

    #[error("cylinder with word {word} does not occur in the depth-{depth} window")]
    EmptyCylinder { word: String, depth: u32 },

    #[error(
        "shift {shift} needs a pattern span of {span} letters, but the depth-{depth} window \
         only certifies spans up to {reach}"
    )]
    UnreachableRange {
        shift: i64,
        span: i64,
        depth: u32,
        reach: i64,
    },

    #[error("no certified territory left: {0}")]
    NotCertified(String),

    #[error("no fixed-offset block cover for {word} at any level up to {depth}")]
    NoCoverFound { word: String, depth: u32 },

    #[error("no run of length {len} found for level {level} within the certified range")]
    RunNotFound { level: u32, len: u64 },

    #[error("empty intersection at level {level} within the certified range")]
    EmptyIntersection { level: u32 },

    #[error("shifts must differ (got {0} twice)")]
    EqualShifts(i64),

    #[error("claim falsified: {0}")]
    ClaimFalsified(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("matrix is not in SL(2,Z): determinant {0}")]
    NotUnimodular(i64),

    #[error("invalid rectangle: {0}")]
    InvalidRect(String),

    #[error("search budget of {0} candidates exhausted")]
    BudgetExhausted(u64),

    #[error("certificate not applicable: {0}")]
    PreconditionViolated(String),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("points are not pairwise distinct")]
    PointsNotDistinct,

    #[error("a point at infinity was given where a finite point is required")]
    InfinitePoint,

    #[error("invalid homogeneous point (0 : 0)")]
    ZeroPoint,

    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
