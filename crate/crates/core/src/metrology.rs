//! Static estimation of the width: QFI, position and energy FI, QSNR.
//!
//! For a real, normalized wavefunction `f(x; a)` the QFI is
//! `H(a) = 4[⟨∂f|∂f⟩ − |⟨f|∂f⟩|²]` with `⟨f|∂f⟩ = 0`, and the position
//! measurement has `F(a) = ∫ (∂|f|²)² / |f|² dx = 4 ∫ (∂f)² dx = H(a)`.
//! The QSNR `Q = a² H(a)` is dimensionless.

use std::f64::consts::PI;

use ndarray::Array2;

use crate::diagnostics::Diagnostic;
use crate::error::{Error, Result};
use crate::probe::{self, ProbeState};
use crate::quadrature;
use crate::well::{self, EigenIndex, OverlapTable, WellConfig};

/// Amplitudes with `|f_n|` at or below this are zero-probability outcomes.
pub const ZERO_AMPLITUDE: f64 = 1e-14;

/// Relative tail size of `|∂f⟩` above which the SLD carries a diagnostic.
pub const SLD_TAIL_WARN: f64 = 1e-6;

const REL_TOL: f64 = 1e-13;

/// Everything the static analysis reports for one state and width.
#[derive(Debug, Clone, PartialEq)]
pub struct MetrologyReport {
    pub qfi: f64,
    pub fi_position: f64,
    pub fi_energy: f64,
    pub qsnr: f64,
    pub truncation: usize,
    /// Norm deficit of the truncated amplitudes used by the energy FI.
    pub residual_estimate: f64,
}

/// Absolute quadrature tolerance scaled to the expected QFI magnitude.
fn quad_tol(state: &ProbeState, cfg: &WellConfig) -> Result<f64> {
    let a = cfg.width();
    let scale = (1.0 + a * a * probe::mean_energy(state, cfg)?) / (a * a);
    Ok(REL_TOL * scale)
}

/// `⟨∂f|∂f⟩` and `⟨f|∂f⟩` for a static real state.
fn derivative_overlaps(state: &ProbeState, cfg: &WellConfig) -> Result<(f64, f64)> {
    let a = cfg.width();
    match state {
        ProbeState::Custom(c) => {
            let table = OverlapTable::with_size(a, c.len());
            let (o, d) = (table.psi_dpsi(), table.dpsi_dpsi());
            let mut dd = 0.0;
            let mut fd = 0.0;
            for (i, fi) in c.iter().enumerate() {
                for (j, fj) in c.iter().enumerate() {
                    dd += fi * fj * d[(i, j)];
                    fd += fi * fj * o[(i, j)];
                }
            }
            Ok((dd, fd))
        }
        _ => {
            let tol = quad_tol(state, cfg)?;
            let dd = quadrature::quad(|x| probe::derivative_unchecked(state, a, x).powi(2), 0.0, a, tol)?;
            let fd = quadrature::quad(
                |x| probe::value_unchecked(state, a, x) * probe::derivative_unchecked(state, a, x),
                0.0,
                a,
                tol,
            )?;
            Ok((dd, fd))
        }
    }
}

/// Static QFI `H(a) = 4[⟨∂f|∂f⟩ − ⟨f|∂f⟩²]`.
///
/// Closed-form families are integrated in position space; explicit amplitude
/// vectors go through the overlap table.
pub fn qfi_static(state: &ProbeState, cfg: &WellConfig) -> Result<f64> {
    state.validate()?;
    let (dd, fd) = derivative_overlaps(state, cfg)?;
    Ok(4.0 * (dd - fd * fd))
}

/// FI of a position measurement, `∫ (∂p)²/p dx` with `p = |f|²`.
pub fn fi_position(state: &ProbeState, cfg: &WellConfig) -> Result<f64> {
    state.validate()?;
    let a = cfg.width();
    let tol = quad_tol(state, cfg)?;
    // Gauss–Kronrod never samples the walls, where p vanishes.
    quadrature::quad(
        |x| {
            let f = probe::value_unchecked(state, a, x);
            let p = f * f;
            if p == 0.0 {
                return 0.0;
            }
            let dp = 2.0 * f * probe::derivative_unchecked(state, a, x);
            dp * dp / p
        },
        0.0,
        a,
        tol,
    )
}

/// `∂f_n/∂a` for `n ≤ N_max`.
///
/// Zero for every family whose eigenbasis amplitudes are width independent
/// by construction; the polynomial family is integrated explicitly via
/// `∂⟨ψ_n|f⟩ = ⟨∂ψ_n|f⟩ + ⟨ψ_n|∂f⟩` (the boundary term vanishes at `x = a`).
pub fn amplitude_derivatives(state: &ProbeState, cfg: &WellConfig) -> Result<Vec<f64>> {
    state.validate()?;
    let size = cfg.truncation();
    match state {
        ProbeState::Polynomial(_) => {
            let a = cfg.width();
            let tol = quad_tol(state, cfg)? * 1e-2;
            (1..=size)
                .map(|n| {
                    let n = n as f64;
                    quadrature::quad(
                        |x| {
                            well::d_psi(n, a, x) * probe::value_unchecked(state, a, x)
                                + well::psi(n, a, x) * probe::derivative_unchecked(state, a, x)
                        },
                        0.0,
                        a,
                        tol,
                    )
                })
                .collect()
        }
        _ => Ok(vec![0.0; size]),
    }
}

/// FI of an energy measurement, `4 Σ_n (∂|f_n|)²` over outcomes with `f_n ≠ 0`.
pub fn fi_energy(state: &ProbeState, cfg: &WellConfig) -> Result<f64> {
    let amp = probe::amplitudes(state, cfg)?;
    let deriv = amplitude_derivatives(state, cfg)?;
    Ok(4.0
        * amp
            .coefficients()
            .iter()
            .zip(&deriv)
            .filter(|(f, _)| f.abs() > ZERO_AMPLITUDE)
            .map(|(f, df)| (f.signum() * df).powi(2))
            .sum::<f64>())
}

/// Computes all static quantities in one go.
pub fn report(state: &ProbeState, cfg: &WellConfig) -> Result<MetrologyReport> {
    let qfi = qfi_static(state, cfg)?;
    let amp = probe::amplitudes(state, cfg)?;
    let a = cfg.width();
    Ok(MetrologyReport {
        qfi,
        fi_position: fi_position(state, cfg)?,
        fi_energy: fi_energy(state, cfg)?,
        qsnr: a * a * qfi,
        truncation: cfg.truncation(),
        residual_estimate: amp.truncation_loss(),
    })
}

/// Symmetric logarithmic derivative of a pure state in the truncated eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct SldMatrix {
    pub matrix: Array2<f64>,
    /// Components `⟨ψ_k|f⟩`.
    pub state: Vec<f64>,
    /// Components `⟨ψ_k|∂f⟩`.
    pub derivative: Vec<f64>,
    /// Estimated fraction of `⟨∂f|∂f⟩` outside the basis.
    pub tail_estimate: f64,
    pub diagnostics: Vec<Diagnostic>,
}

impl SldMatrix {
    /// `⟨v|L|w⟩`.
    pub fn bilinear(&self, v: &[f64], w: &[f64]) -> f64 {
        let n = self.matrix.nrows();
        (0..n)
            .map(|i| v[i] * (0..n).map(|j| self.matrix[(i, j)] * w[j]).sum::<f64>())
            .sum()
    }

    /// `⟨f|L²|f⟩`, the QFI as seen by the truncated basis.
    pub fn qfi(&self) -> f64 {
        let n = self.matrix.nrows();
        let lf: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| self.matrix[(i, j)] * self.state[j]).sum())
            .collect();
        lf.iter().map(|v| v * v).sum()
    }
}

/// `L = 2(|f⟩⟨∂f| + |∂f⟩⟨f|)` with `⟨ψ_k|∂f⟩ = ∂f_k + Σ_n f_n ⟨ψ_k|∂ψ_n⟩`.
///
/// `|∂f⟩` violates the wall boundary condition, so its sine series decays
/// only like `1/k`; the tail estimate reports the missing norm fraction.
pub fn sld_matrix(state: &ProbeState, cfg: &WellConfig) -> Result<SldMatrix> {
    let amp = probe::amplitudes(state, cfg)?;
    let d_amp = amplitude_derivatives(state, cfg)?;
    let table = OverlapTable::new(cfg);
    let o = table.psi_dpsi();
    let f = amp.coefficients().to_vec();
    let n = f.len();
    let derivative: Vec<f64> = (0..n)
        .map(|k| d_amp[k] + (0..n).map(|j| f[j] * o[(k, j)]).sum::<f64>())
        .collect();
    let matrix = Array2::from_shape_fn((n, n), |(i, j)| {
        2.0 * (f[i] * derivative[j] + derivative[i] * f[j])
    });

    let norm2: f64 = derivative.iter().map(|d| d * d).sum();
    let last = derivative[n.saturating_sub(2)..]
        .iter()
        .map(|d| d * d)
        .fold(0.0, f64::max);
    // For components decaying like C/k the tail Σ_{k>N} C²/k² ≈ N d_N².
    let tail_estimate = if norm2 > 0.0 { n as f64 * last / norm2 } else { 0.0 };
    let mut diagnostics = amp.diagnostics().to_vec();
    if tail_estimate > SLD_TAIL_WARN {
        diagnostics.push(Diagnostic::DerivativeTail {
            tail: tail_estimate,
            truncation: n,
        });
    }
    Ok(SldMatrix {
        matrix,
        state: f,
        derivative,
        tail_estimate,
        diagnostics,
    })
}

/// `Q_n = 1 + (4/3) n²π²`, independent of the width.
pub fn qsnr_eigen(n: EigenIndex) -> f64 {
    let n = n.as_f64();
    1.0 + 4.0 / 3.0 * n * n * PI * PI
}

/// QSNR of `cos α |ψ_n⟩ + sin α |ψ_m⟩`:
/// `cos²α Q_n + sin²α Q_m + 4a² sin 2α ⟨∂ψ_n|∂ψ_m⟩`.
///
/// The `1/a²` of the overlap cancels, so the value is width independent.
pub fn qsnr_superposition(n: EigenIndex, m: EigenIndex, alpha: f64, cfg: &WellConfig) -> Result<f64> {
    if n == m {
        return Err(Error::invalid("superposition needs distinct indices"));
    }
    let a = cfg.width();
    Ok(alpha.cos().powi(2) * qsnr_eigen(n)
        + alpha.sin().powi(2) * qsnr_eigen(m)
        + 4.0 * a * a * (2.0 * alpha).sin() * well::overlap_dpsi_dpsi(n, m, cfg))
}

/// First-order coefficient `g_nd > 0` of `Q_{n,n+d}(α)/Q_n` in `α`.
pub fn superposition_gain_coefficient(n: EigenIndex, d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::invalid("index gap d must be >= 1"));
    }
    let n = n.as_f64();
    let d = f64::from(d);
    Ok(96.0 * n * (n + d) * (d * d + 2.0 * n * d + 2.0 * n * n)
        / (d * d * (d + 2.0 * n).powi(2) * (3.0 + 4.0 * n * n * PI * PI)))
}

/// Small-angle model `1 + (−1)^d g_nd α` of the fixed-energy gain.
pub fn gamma_superposition_smallalpha(n: EigenIndex, d: u32, alpha: f64) -> Result<f64> {
    let g = superposition_gain_coefficient(n, d)?;
    let sign = if d.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(1.0 + sign * g * alpha)
}

/// Exact fixed-energy gain `Q_{n,n+d}(α) / Q_{[[n̄]]}`.
pub fn gamma_superposition(n: EigenIndex, d: u32, alpha: f64) -> Result<f64> {
    let (_, rounded) = probe::nbar(n, d, alpha)?;
    let m = EigenIndex::new(n.get() + d)?;
    // Width independent; evaluate on the unit well.
    let unit = WellConfig::with_width(1.0)?;
    Ok(qsnr_superposition(n, m, alpha, &unit)? / qsnr_eigen(rounded))
}

/// `Q_p = (1 + 4p)(1 + 8p)/(4p − 1)`.
pub fn qsnr_polynomial(p: u32) -> Result<f64> {
    if p == 0 {
        return Err(Error::invalid("polynomial order p must be >= 1"));
    }
    let p = f64::from(p);
    Ok((1.0 + 4.0 * p) * (1.0 + 8.0 * p) / (4.0 * p - 1.0))
}
