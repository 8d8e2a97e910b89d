//! Detectors for time-reversal violation in finite-dimensional quantum toy models.
//!
//! Three independent routes are implemented, each paired with a brute-force
//! cross-check:
//!
//! * [`curie`]: an asymmetry of states under a linear symmetry that survives
//!   unitary evolution (or scattering) implies the law breaks that symmetry.
//! * [`kabir`]: unequal forward and time-reversed amplitudes of a unitary
//!   S-matrix imply `T S T⁻¹ ≠ S⁻¹`.
//! * [`wigner`]: a non-degenerate energy eigenstate that time reversal moves to
//!   a different ray implies `[T, H] ≠ 0`.
//!
//! [`models`] builds the spin, electric-dipole and neutral-kaon toys;
//! [`scenario_io`] and [`cli`] provide the file formats and command line.

pub mod cli;
pub mod curie;
pub mod error;
pub mod kabir;
pub mod linalg;
pub mod models;
pub mod scenario_io;
pub mod selftest;
pub mod symmetry;
pub mod tolerance;
pub mod verdict;
pub mod wigner;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, EigenDecomposition, StateVector, C64};
pub use symmetry::{InvarianceMargin, SymmetryTransform};
pub use tolerance::Tolerances;
pub use verdict::{Outcome, Reason, Verdict};
