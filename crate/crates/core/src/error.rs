use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice size L={0}: L must be even and at least 4 (odd L breaks the parity condition under wrap-around, L=2 collapses opposite neighbours)")]
    InvalidLatticeSize(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("lattice construction failed: {0}")]
    Lattice(String),

    #[error("code construction failed: {0}")]
    Construction(String),

    #[error("nodes {0} and {1} are not connected")]
    Disconnected(usize, usize),

    #[error("syndrome has an odd number of defects ({0})")]
    OddDefectCount(usize),

    #[error("residual has a nonzero syndrome on the {0} side")]
    NonzeroSyndrome(&'static str),

    #[error("invalid probability {0}: must lie in [0, 1]")]
    InvalidProbability(f64),

    #[error("trial count must be at least 1")]
    NoTrials,
}

pub type Result<T> = std::result::Result<T, Error>;
