use thiserror::Error;

/// Errors shared by the whole crate. Variants carry enough context to
/// name the failing stage from the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty set")]
    EmptySet,

    #[error("degenerate query: point lies on the curve")]
    DegenerateQuery,

    #[error("not simple: curve self-intersects")]
    NotSimple,

    #[error("thickness violated: sigma {sigma} >= Delta {delta}")]
    ThicknessViolated { sigma: f64, delta: f64 },

    #[error("degenerate arrangement: ambiguous arc endpoint near ({x}, {y})")]
    DegenerateArrangement { x: f64, y: f64 },

    #[error("empty EDT region (delta too small for this boundary)")]
    EmptyEdtRegion,

    #[error("not a closed-tube topology: expected 2 boundary loops, found {0}")]
    NotClosedTube(usize),

    #[error("cap separation failed: {0}")]
    CapSeparation(String),

    #[error("net not connected: {0} components")]
    NetNotConnected(usize),

    #[error("unexpected topology: {0} components after cut")]
    UnexpectedTopology(usize),

    #[error("completion not simple: midpoint segments {0} and {1} intersect")]
    CompletionNotSimple(usize, usize),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("pipeline failure rate too high at n={n}: {failed}/{total} failed; first: {first}")]
    TooManyFailures {
        n: usize,
        failed: usize,
        total: usize,
        first: String,
    },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
