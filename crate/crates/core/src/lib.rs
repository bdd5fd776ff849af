//! Correlation-space simulation of measurement-based quantum computation on
//! translation-invariant matrix product states: qudit cluster states and
//! AKLT-type states with SU(N), SO(2ℓ+1) and Sp(2n) symmetry.

pub mod aklt;
pub mod cluster;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod mps;
pub mod ops;
pub mod par;

pub use error::{MbqcError, Result};
pub use linalg::{Matrix, C64, EPS};
pub use par::Exec;
