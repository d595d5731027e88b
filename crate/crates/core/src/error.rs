use num_bigint::BigInt;
use thiserror::Error;

use crate::cone::WalkTrace;
use crate::lattice::LatVec;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("gram matrix is not square: {0}")]
    MalformedGram(String),
    #[error("gram matrix is not symmetric (entry ({row},{col}))")]
    NonSymmetricGram { row: usize, col: usize },
    #[error("gram matrix has inertia (pos={pos}, neg={neg}, zero={zero}); expected (1, rank-1, 0)")]
    WrongSignature { pos: usize, neg: usize, zero: usize },
    #[error("no vector of positive square found with sup-norm <= {bound}")]
    NoOrientationFound { bound: i64 },
    #[error("wall_squares must be nonempty")]
    EmptyWallSquares,
    #[error("wall square {0} is not negative")]
    InvalidWallSquare(BigInt),
    #[error("orientation {0} does not have positive square")]
    InvalidOrientation(LatVec),
    #[error("dimension mismatch: lattice rank {expected}, vector length {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero vector has no primitive part")]
    ZeroVector,
    #[error("mirror {0} does not have negative square")]
    NonNegativeMirror(LatVec),
    #[error("reflection of {vector} in {mirror} is not integral")]
    NonIntegralReflection { mirror: LatVec, vector: LatVec },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("base class {0} is not in the positive cone")]
    NotPositiveBase(LatVec),
    #[error("class {0} is not in the closed positive cone")]
    XOutsideClosedCone(LatVec),
    #[error("walls through the isotropic class {0} form an infinite set; use strict mode")]
    UnboundedWallSet(LatVec),
    #[error("class {0} is not in the positive cone")]
    NotPositive(LatVec),
    #[error("class {0} is not a nonzero isotropic class of the positive cone closure")]
    NotIsotropic(LatVec),
    #[error("base class lies on the wall {wall}")]
    NotAmpleBase { wall: LatVec },
    #[error("class lies on the wall {wall}")]
    OnWall { wall: LatVec },
    #[error("could not move the reflected representative off the walls after {attempts} attempts")]
    NudgeFailed { attempts: usize },
    #[error("chamber exploration exceeded {limit} representatives")]
    ExplorationLimit { limit: usize },
    #[error("nef walk aborted after {} steps: reflection in {mirror} is not integral", trace.steps.len())]
    WalkAborted { trace: Box<WalkTrace>, mirror: LatVec },
    #[error("unknown lattice {name:?}; available: {}", available.join(", "))]
    UnknownLattice { name: String, available: Vec<String> },
    #[error("rendering needs a rank-3 lattice, got rank {0}")]
    RankNotThree(usize),
    #[error("cannot write {path}: {reason}")]
    UnwritablePath { path: String, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    InvariantBreach(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvariantBreach(_) => 3,
            _ => 2,
        }
    }
}
