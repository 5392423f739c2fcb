//! Eigenpairs of the infinite square well and their width derivatives.
//!
//! With `ħ = m = 1` the eigenfunctions on `[0, a]` are
//! `ψ_n(x) = √(2/a) sin(nπx/a)` with energies `E_n = n²π²/(2a²)`.
//! Everything downstream (static QFI, time evolution, entangled probes) is
//! expressed through two overlap families, `⟨ψ_m|∂ψ_n⟩` and `⟨∂ψ_m|∂ψ_n⟩`,
//! where `∂` is the derivative with respect to the width `a`.

use std::f64::consts::PI;
use std::fmt;

use ndarray::Array2;

use crate::error::{Error, Result};

/// Default basis size, enough for the parabolic state to lose < 1e-9 norm.
pub const DEFAULT_TRUNCATION: usize = 50;

/// Width of the well together with the basis truncation used by series code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellConfig {
    width: f64,
    truncation: usize,
}

impl WellConfig {
    pub fn new(width: f64, truncation: usize) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::invalid(format!("well width must be positive and finite, got {width}")));
        }
        if truncation == 0 {
            return Err(Error::invalid("truncation order must be at least 1"));
        }
        Ok(Self { width, truncation })
    }

    /// Width `a` with the default truncation order.
    pub fn with_width(width: f64) -> Result<Self> {
        Self::new(width, DEFAULT_TRUNCATION)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn at_width(&self, width: f64) -> Result<Self> {
        Self::new(width, self.truncation)
    }

    pub fn at_truncation(&self, truncation: usize) -> Result<Self> {
        Self::new(self.width, truncation)
    }

    pub(crate) fn check_position(&self, x: f64) -> Result<()> {
        if (0.0..=self.width).contains(&x) {
            Ok(())
        } else {
            Err(Error::Domain { x, width: self.width })
        }
    }
}

/// Quantum number `n ≥ 1` of a well eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EigenIndex(u32);

impl EigenIndex {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("eigen index must be >= 1 (psi_0 vanishes identically)"));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub(crate) fn as_f64(self) -> f64 {
        f64::from(self.0)
    }
}

impl fmt::Display for EigenIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u32> for EigenIndex {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        Self::new(n)
    }
}

// Unchecked kernels shared by the series code. `n` is the real-valued index.

#[inline]
pub(crate) fn energy(n: f64, a: f64) -> f64 {
    n * n * PI * PI / (2.0 * a * a)
}

#[inline]
pub(crate) fn d_energy(n: f64, a: f64) -> f64 {
    -n * n * PI * PI / (a * a * a)
}

#[inline]
pub(crate) fn psi(n: f64, a: f64, x: f64) -> f64 {
    (2.0 / a).sqrt() * (n * PI * x / a).sin()
}

#[inline]
pub(crate) fn d_psi(n: f64, a: f64, x: f64) -> f64 {
    let phase = n * PI * x / a;
    -0.5 * (2.0 / (a * a * a)).sqrt() * (phase.sin() + 2.0 * phase * phase.cos())
}

#[inline]
fn parity(m: u32, n: u32) -> f64 {
    if (m + n).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[inline]
pub(crate) fn psi_dpsi(m: u32, n: u32, a: f64) -> f64 {
    if m == n {
        return 0.0;
    }
    let (mf, nf) = (f64::from(m), f64::from(n));
    (2.0 / a) * parity(m, n) * (mf * nf) / (mf * mf - nf * nf)
}

#[inline]
pub(crate) fn dpsi_dpsi(m: u32, n: u32, a: f64) -> f64 {
    let (mf, nf) = (f64::from(m), f64::from(n));
    if m == n {
        return (nf * nf * PI * PI / 3.0 + 0.25) / (a * a);
    }
    let gap = mf * mf - nf * nf;
    parity(m, n) / (a * a) * 4.0 * (nf * mf) * (mf * mf + nf * nf) / (gap * gap)
}

/// `E_n = n²π²/(2a²)`.
pub fn eigen_energy(n: EigenIndex, cfg: &WellConfig) -> f64 {
    energy(n.as_f64(), cfg.width)
}

/// `ψ_n(x) = √(2/a) sin(nπx/a)` for `0 ≤ x ≤ a`.
pub fn eigen_wavefunction(n: EigenIndex, cfg: &WellConfig, x: f64) -> Result<f64> {
    cfg.check_position(x)?;
    Ok(psi(n.as_f64(), cfg.width, x))
}

/// `∂E_n/∂a = −n²π²/a³ = −2E_n/a`.
pub fn d_eigen_energy(n: EigenIndex, cfg: &WellConfig) -> f64 {
    d_energy(n.as_f64(), cfg.width)
}

/// `∂ψ_n/∂a` at fixed `x`.
pub fn d_eigen_wavefunction(n: EigenIndex, cfg: &WellConfig, x: f64) -> Result<f64> {
    cfg.check_position(x)?;
    Ok(d_psi(n.as_f64(), cfg.width, x))
}

/// `⟨ψ_m|∂ψ_n⟩ = (2/a)(1−δ_mn)(−1)^{m+n} mn/(m²−n²)`; antisymmetric.
pub fn overlap_psi_dpsi(m: EigenIndex, n: EigenIndex, cfg: &WellConfig) -> f64 {
    psi_dpsi(m.get(), n.get(), cfg.width)
}

/// `⟨∂ψ_m|∂ψ_n⟩`; symmetric, `(n²π²/3 + 1/4)/a²` on the diagonal.
pub fn overlap_dpsi_dpsi(m: EigenIndex, n: EigenIndex, cfg: &WellConfig) -> f64 {
    dpsi_dpsi(m.get(), n.get(), cfg.width)
}

/// Both overlap families tabulated for `1 ≤ m, n ≤ N_max` at one width.
///
/// Entry `[(m-1, n-1)]` holds the value for the 1-based pair `(m, n)`.
/// Immutable after construction; share it behind a reference or `Arc`.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapTable {
    width: f64,
    psi_dpsi: Array2<f64>,
    dpsi_dpsi: Array2<f64>,
}

impl OverlapTable {
    pub fn new(cfg: &WellConfig) -> Self {
        Self::with_size(cfg.width, cfg.truncation)
    }

    pub(crate) fn with_size(width: f64, size: usize) -> Self {
        let idx = |i: usize| u32::try_from(i + 1).expect("truncation fits in u32");
        let psi_dpsi = Array2::from_shape_fn((size, size), |(i, j)| psi_dpsi(idx(i), idx(j), width));
        let dpsi_dpsi = Array2::from_shape_fn((size, size), |(i, j)| dpsi_dpsi(idx(i), idx(j), width));
        Self {
            width,
            psi_dpsi,
            dpsi_dpsi,
        }
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn size(&self) -> usize {
        self.psi_dpsi.nrows()
    }

    /// `⟨ψ_m|∂ψ_n⟩` matrix, 0-based.
    pub fn psi_dpsi(&self) -> &Array2<f64> {
        &self.psi_dpsi
    }

    /// `⟨∂ψ_m|∂ψ_n⟩` matrix, 0-based.
    pub fn dpsi_dpsi(&self) -> &Array2<f64> {
        &self.dpsi_dpsi
    }
}
