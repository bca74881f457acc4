//! Finite branched covers of surfaces described by monodromy, the checkable
//! properties that bear on the Birman–Hilden property, and certificates for
//! the verdicts they imply.

pub mod coloring;
pub mod cover;
pub mod enumerate;
pub mod error;
pub mod graphcover;
pub mod io;
pub mod lifting;
pub mod orbit;
pub mod perm;
pub mod presentation;
pub mod report;
pub mod verdict;

pub use cover::{FiberData, MonodromyCover, RawCover};
pub use error::{CoverViolation, Error, Result};
pub use perm::{CycleSet, Perm};
pub use presentation::{Automorphism, Generator, GroupWord, Signature};
