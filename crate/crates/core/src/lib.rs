//! Quantum estimation of the width of a one-dimensional infinite square well.
//!
//! The crate computes Fisher information (FI), quantum Fisher information
//! (QFI) and the quantum signal-to-noise ratio `Q = a² H(a)` for probes
//! confined in a well of width `a`, in natural units (`ħ = m = 1`):
//!
//! * [`well`]: eigenpairs, their width derivatives and the two overlap
//!   families every series expansion is built on.
//! * [`probe`]: single-particle preparations (eigenstates, two-level
//!   superpositions, flat polynomial states, the parabolic state, explicit
//!   amplitude vectors).
//! * [`metrology`]: static QFI, position/energy FI, QSNR closed forms and
//!   the symmetric logarithmic derivative.
//! * [`dynamics`]: free evolution inside the well and the time-dependent QFI.
//! * [`entangled`]: two-particle, W-like and GHZ-like multi-particle probes.
//! * [`inference`]: Monte Carlo position measurements and maximum-likelihood
//!   estimation checked against the Cramér-Rao bound.
//! * [`cli`]: descriptor grammar and CSV tables behind the `wellprobe` binary.

pub mod cli;
pub mod diagnostics;
pub mod dynamics;
pub mod entangled;
pub mod error;
pub mod inference;
pub mod metrology;
pub mod probe;
pub mod quadrature;
pub mod well;

pub use diagnostics::Diagnostic;
pub use error::{Error, Result};
pub use probe::ProbeState;
pub use well::{EigenIndex, OverlapTable, WellConfig};
