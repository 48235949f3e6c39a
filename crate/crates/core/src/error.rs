use thiserror::Error;

use crate::convex::Chord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("need at least 4 points in convex position, got {0}")]
    TooFewPoints(usize),

    #[error("point index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("chord endpoints must be distinct, got ({0}, {0})")]
    DegenerateChord(usize),

    #[error("point counts differ: {0} vs {1}")]
    PointCountMismatch(usize, usize),

    #[error("edge set is not a thrackle: {0} and {1} are disjoint")]
    NotThrackle(Chord, Chord),

    #[error("thrackle with {0} edges is not maximal")]
    NotMaximal(usize),

    #[error("cycle support must have odd size at least 3, got {0}")]
    BadSupport(usize),

    #[error("point {0} is a cycle vertex")]
    CycleVertex(usize),

    #[error("thrackle cycles share vertex {0}")]
    CyclesIntersect(usize),

    #[error("malformed structure: {0}")]
    MalformedStructure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("graph with {0} vertices exceeds the solver width of 128")]
    TooLarge(usize),

    /// An outcome the underlying theorem rules out. Reaching this means either
    /// a bug or a counterexample; either way it must be reported, not masked.
    #[error("falsified: {0}")]
    Falsified(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
