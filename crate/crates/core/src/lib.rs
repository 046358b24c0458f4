//! CSS quantum code on the face-centred cubic lattice: construction,
//! parameter verification, an exact distance certificate and a
//! minimum-weight perfect matching decoder with a seeded Monte Carlo
//! harness.

pub mod blossom;
pub mod cli;
pub mod code;
pub mod decoder;
pub mod distance;
pub mod error;
pub mod gf2;
pub mod lattice;
pub mod montecarlo;

pub use code::CssCode;
pub use error::{Error, Result};
pub use gf2::{BinaryMatrix, BitVec};
pub use lattice::{FccLattice, Side};
