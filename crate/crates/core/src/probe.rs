//! Single-particle probe preparations.
//!
//! All families are real in position space and their eigenbasis amplitudes
//! do not depend on the width: eigenstates and superpositions trivially, the
//! polynomial family through the scaling `f_p(x; a) = a^{-1/2} f_p(x/a; 1)`.

use std::f64::consts::PI;
use std::fmt;

use crate::diagnostics::Diagnostic;
use crate::error::{Error, Result};
use crate::quadrature;
use crate::well::{self, EigenIndex, WellConfig};

/// Unit-norm tolerance for explicit amplitude vectors.
pub const CUSTOM_NORM_TOL: f64 = 1e-10;

/// Truncation loss above which [`amplitudes`] attaches a diagnostic.
pub const TRUNCATION_WARN: f64 = 1e-6;

const AMPLITUDE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeState {
    /// Energy eigenstate `ψ_n`.
    Eigen(EigenIndex),
    /// `cos α |ψ_n⟩ + sin α |ψ_m⟩` with `n ≠ m`.
    Superposition {
        n: EigenIndex,
        m: EigenIndex,
        alpha: f64,
    },
    /// `f_p(x) = N [a^{2p} − (2x − a)^{2p}]`, flatter as `p` grows.
    Polynomial(u32),
    /// `f(x) = √(30/a⁵) x(a − x)`; the same function as `Polynomial(1)`.
    Parabolic,
    /// Real amplitudes `f_1, f_2, …` in the eigenbasis, unit norm.
    Custom(Vec<f64>),
}

impl ProbeState {
    pub fn eigen(n: u32) -> Result<Self> {
        Ok(Self::Eigen(EigenIndex::new(n)?))
    }

    pub fn superposition(n: u32, m: u32, alpha: f64) -> Result<Self> {
        let state = Self::Superposition {
            n: EigenIndex::new(n)?,
            m: EigenIndex::new(m)?,
            alpha,
        };
        state.validate()?;
        Ok(state)
    }

    pub fn polynomial(p: u32) -> Result<Self> {
        let state = Self::Polynomial(p);
        state.validate()?;
        Ok(state)
    }

    pub fn custom(coefficients: Vec<f64>) -> Result<Self> {
        let state = Self::Custom(coefficients);
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Eigen(_) | Self::Parabolic => Ok(()),
            Self::Superposition { n, m, alpha } => {
                if n == m {
                    return Err(Error::invalid(format!("superposition needs distinct indices, got n = m = {n}")));
                }
                if !alpha.is_finite() {
                    return Err(Error::invalid("superposition angle must be finite"));
                }
                Ok(())
            }
            Self::Polynomial(p) => {
                if *p == 0 {
                    return Err(Error::invalid("polynomial order p must be >= 1"));
                }
                Ok(())
            }
            Self::Custom(c) => {
                if c.is_empty() {
                    return Err(Error::invalid("custom amplitude vector is empty"));
                }
                if c.iter().any(|v| !v.is_finite()) {
                    return Err(Error::invalid("custom amplitudes must be finite"));
                }
                let norm2: f64 = c.iter().map(|v| v * v).sum();
                if (norm2.sqrt() - 1.0).abs() > CUSTOM_NORM_TOL {
                    return Err(Error::invalid(format!(
                        "custom amplitudes must have unit norm, got |f| = {}",
                        norm2.sqrt()
                    )));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for ProbeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Eigen(n) => write!(f, "eigen:{n}"),
            Self::Superposition { n, m, alpha } => write!(f, "super:{n}:{m}:{alpha}"),
            Self::Polynomial(p) => write!(f, "poly:{p}"),
            Self::Parabolic => f.write_str("parabolic"),
            Self::Custom(c) => write!(f, "custom[{}]", c.len()),
        }
    }
}

/// Eigenbasis amplitudes `f_n = ⟨ψ_n|f⟩`, `n = 1..=N_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    coefficients: Vec<f64>,
    loss: f64,
    diagnostics: Vec<Diagnostic>,
}

impl AmplitudeVector {
    fn from_coefficients(coefficients: Vec<f64>) -> Self {
        let kept: f64 = coefficients.iter().map(|c| c * c).sum();
        let loss = (1.0 - kept).max(0.0);
        let truncation = coefficients.len();
        let mut diagnostics = Vec::new();
        if loss > TRUNCATION_WARN {
            log::warn!("amplitude truncation loss {loss:.3e} at N_max = {truncation}");
            diagnostics.push(Diagnostic::TruncationLoss { loss, truncation });
        }
        Self {
            coefficients,
            loss,
            diagnostics,
        }
    }

    /// `f_1..f_{N_max}` (index 0 holds `f_1`).
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len()
    }

    /// Norm deficit `1 − Σ f_n²` left outside the truncated basis.
    pub fn truncation_loss(&self) -> f64 {
        self.loss
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    pub fn into_coefficients(self) -> Vec<f64> {
        self.coefficients
    }
}

fn polynomial_norm(p: u32) -> f64 {
    let p = f64::from(p);
    ((1.0 + 6.0 * p + 8.0 * p * p) / (8.0 * p * p)).sqrt()
}

/// `f_p(u; 1)` and its derivative in `u` on the unit well.
fn polynomial_unit(p: u32, u: f64) -> (f64, f64) {
    let norm = polynomial_norm(p);
    let s = 2.0 * u - 1.0;
    let k = 2 * p as i32;
    let value = norm * (1.0 - s.powi(k));
    let slope = -2.0 * f64::from(k) * norm * s.powi(k - 1);
    (value, slope)
}

/// Position-space amplitude without the domain check.
pub(crate) fn value_unchecked(state: &ProbeState, a: f64, x: f64) -> f64 {
    match state {
        ProbeState::Eigen(n) => well::psi(n.as_f64(), a, x),
        ProbeState::Superposition { n, m, alpha } => {
            alpha.cos() * well::psi(n.as_f64(), a, x) + alpha.sin() * well::psi(m.as_f64(), a, x)
        }
        ProbeState::Polynomial(p) => polynomial_unit(*p, x / a).0 / a.sqrt(),
        ProbeState::Parabolic => (30.0 / a.powi(5)).sqrt() * x * (a - x),
        ProbeState::Custom(c) => c
            .iter()
            .enumerate()
            .map(|(k, f)| f * well::psi((k + 1) as f64, a, x))
            .sum(),
    }
}

/// `∂f/∂a` at fixed `x` without the domain check.
pub(crate) fn derivative_unchecked(state: &ProbeState, a: f64, x: f64) -> f64 {
    match state {
        ProbeState::Eigen(n) => well::d_psi(n.as_f64(), a, x),
        ProbeState::Superposition { n, m, alpha } => {
            alpha.cos() * well::d_psi(n.as_f64(), a, x) + alpha.sin() * well::d_psi(m.as_f64(), a, x)
        }
        ProbeState::Polynomial(p) => {
            let u = x / a;
            let (g, dg) = polynomial_unit(*p, u);
            -(0.5 * g + u * dg) / (a * a.sqrt())
        }
        ProbeState::Parabolic => {
            // d/da [√30 a^{-5/2} (a x − x²)]
            30f64.sqrt() * (-1.5 * x * a.powf(-2.5) + 2.5 * x * x * a.powf(-3.5))
        }
        ProbeState::Custom(c) => c
            .iter()
            .enumerate()
            .map(|(k, f)| f * well::d_psi((k + 1) as f64, a, x))
            .sum(),
    }
}

/// Eigenbasis amplitudes up to the configured truncation.
pub fn amplitudes(state: &ProbeState, cfg: &WellConfig) -> Result<AmplitudeVector> {
    state.validate()?;
    let size = cfg.truncation();
    let mut coefficients = vec![0.0; size];
    match state {
        ProbeState::Eigen(n) => {
            if let Some(slot) = coefficients.get_mut(n.get() as usize - 1) {
                *slot = 1.0;
            }
        }
        ProbeState::Superposition { n, m, alpha } => {
            if let Some(slot) = coefficients.get_mut(n.get() as usize - 1) {
                *slot = alpha.cos();
            }
            if let Some(slot) = coefficients.get_mut(m.get() as usize - 1) {
                *slot = alpha.sin();
            }
        }
        ProbeState::Parabolic => {
            for (k, slot) in coefficients.iter_mut().enumerate() {
                let n = (k + 1) as f64;
                if (k + 1) % 2 == 1 {
                    *slot = 8.0 * 15f64.sqrt() / (n * PI).powi(3);
                }
            }
        }
        ProbeState::Polynomial(_) => {
            let a = cfg.width();
            for (k, slot) in coefficients.iter_mut().enumerate() {
                let n = (k + 1) as f64;
                *slot = quadrature::quad(
                    |x| well::psi(n, a, x) * value_unchecked(state, a, x),
                    0.0,
                    a,
                    AMPLITUDE_TOL,
                )?;
            }
        }
        ProbeState::Custom(c) => {
            for (slot, value) in coefficients.iter_mut().zip(c) {
                *slot = *value;
            }
        }
    }
    Ok(AmplitudeVector::from_coefficients(coefficients))
}

/// Position-space amplitude `f(x)` on `[0, a]`.
pub fn wavefunction(state: &ProbeState, cfg: &WellConfig, x: f64) -> Result<f64> {
    state.validate()?;
    cfg.check_position(x)?;
    Ok(value_unchecked(state, cfg.width(), x))
}

/// Analytic `∂f/∂a` at fixed `x`.
pub fn d_wavefunction(state: &ProbeState, cfg: &WellConfig, x: f64) -> Result<f64> {
    state.validate()?;
    cfg.check_position(x)?;
    Ok(derivative_unchecked(state, cfg.width(), x))
}

/// Mean energy `⟨f|H|f⟩`.
pub fn mean_energy(state: &ProbeState, cfg: &WellConfig) -> Result<f64> {
    state.validate()?;
    let a = cfg.width();
    Ok(match state {
        ProbeState::Eigen(n) => well::energy(n.as_f64(), a),
        ProbeState::Superposition { n, m, alpha } => {
            alpha.cos().powi(2) * well::energy(n.as_f64(), a) + alpha.sin().powi(2) * well::energy(m.as_f64(), a)
        }
        ProbeState::Polynomial(p) => polynomial_energy(*p) / (a * a),
        ProbeState::Parabolic => polynomial_energy(1) / (a * a),
        ProbeState::Custom(c) => c
            .iter()
            .enumerate()
            .map(|(k, f)| f * f * well::energy((k + 1) as f64, a))
            .sum(),
    })
}

/// `a² ⟨f_p|H|f_p⟩ = (1 + 6p + 8p²)/(4p − 1)`.
pub fn polynomial_energy(p: u32) -> f64 {
    let p = f64::from(p);
    (1.0 + 6.0 * p + 8.0 * p * p) / (4.0 * p - 1.0)
}

/// Effective index `n̄ = √(n² cos²α + (n+d)² sin²α)` of a two-level
/// superposition, and its nearest integer (halves rounded away from zero).
pub fn nbar(n: EigenIndex, d: u32, alpha: f64) -> Result<(f64, EigenIndex)> {
    if d == 0 {
        return Err(Error::invalid("index gap d must be >= 1"));
    }
    let lo = n.as_f64();
    let hi = lo + f64::from(d);
    let value = (lo * lo * alpha.cos().powi(2) + hi * hi * alpha.sin().powi(2)).sqrt();
    let rounded = EigenIndex::new(value.round() as u32)?;
    Ok((value, rounded))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(a: f64) -> WellConfig {
        WellConfig::with_width(a).unwrap()
    }

    fn norm_by_quadrature(state: &ProbeState, a: f64) -> f64 {
        quadrature::quad(|x| value_unchecked(state, a, x).powi(2), 0.0, a, 1e-12).unwrap()
    }

    #[test]
    fn constructors_validate() {
        assert!(ProbeState::superposition(2, 2, 0.1).is_err());
        assert!(ProbeState::superposition(1, 2, f64::NAN).is_err());
        assert!(ProbeState::polynomial(0).is_err());
        assert!(ProbeState::custom(vec![]).is_err());
        assert!(ProbeState::custom(vec![0.6, 0.7]).is_err());
        assert!(ProbeState::custom(vec![0.6, 0.8]).is_ok());
        assert!(ProbeState::eigen(0).is_err());
    }

    #[test]
    fn eigen_amplitudes_are_basis_vectors() {
        let amp = amplitudes(&ProbeState::eigen(3).unwrap(), &cfg(1.0)).unwrap();
        for (k, c) in amp.coefficients().iter().enumerate() {
            assert_eq!(*c, if k == 2 { 1.0 } else { 0.0 });
        }
        assert_eq!(amp.truncation_loss(), 0.0);
        assert!(amp.diagnostics().is_empty());
    }

    #[test]
    fn eigen_beyond_truncation_warns() {
        let amp = amplitudes(&ProbeState::eigen(12).unwrap(), &WellConfig::new(1.0, 10).unwrap()).unwrap();
        assert_eq!(amp.truncation_loss(), 1.0);
        assert!(matches!(amp.diagnostics()[0], Diagnostic::TruncationLoss { .. }));
    }

    #[test]
    fn parabolic_amplitudes() {
        let amp = amplitudes(&ProbeState::Parabolic, &cfg(1.0)).unwrap();
        let c = amp.coefficients();
        let expected = 8.0 * 15f64.sqrt() / PI.powi(3);
        assert!((c[0] - expected).abs() < 1e-15);
        assert!((c[0] - 0.99927).abs() < 1e-5);
        assert_eq!(c[1], 0.0);
        // quadrature oracle for ⟨ψ_1|f⟩
        let q = quadrature::quad(
            |x| well::psi(1.0, 1.0, x) * value_unchecked(&ProbeState::Parabolic, 1.0, x),
            0.0,
            1.0,
            1e-13,
        )
        .unwrap();
        assert!((q - expected).abs() < 1e-12);
        assert!(amp.truncation_loss() <= 1e-9);
    }

    #[test]
    fn polynomial_one_matches_parabolic() {
        for a in [0.4, 1.0, 3.2] {
            let c = cfg(a);
            let poly = amplitudes(&ProbeState::Polynomial(1), &c).unwrap();
            let para = amplitudes(&ProbeState::Parabolic, &c).unwrap();
            for (p, q) in poly.coefficients().iter().zip(para.coefficients()) {
                assert!((p - q).abs() < 1e-12, "{p} vs {q}");
            }
            for x in [0.1, 0.37, 0.5, 0.9] {
                let x = x * a;
                let d1 = derivative_unchecked(&ProbeState::Polynomial(1), a, x);
                let d2 = derivative_unchecked(&ProbeState::Parabolic, a, x);
                assert!((d1 - d2).abs() < 1e-12 * d1.abs().max(1.0));
            }
        }
    }

    #[test]
    fn polynomial_values() {
        let c = cfg(1.0);
        for p in 1..=6 {
            assert_eq!(wavefunction(&ProbeState::Polynomial(p), &c, 0.0).unwrap(), 0.0);
        }
        let mid = wavefunction(&ProbeState::Polynomial(1), &c, 0.5).unwrap();
        assert!((mid - (15.0f64 / 8.0).sqrt()).abs() < 1e-15);
        assert!(wavefunction(&ProbeState::Polynomial(2), &c, 1.01).is_err());
    }

    #[test]
    fn families_are_normalized() {
        for a in [0.3, 1.0, 2.5] {
            for p in 1..=15 {
                let n = norm_by_quadrature(&ProbeState::Polynomial(p), a);
                assert!((n - 1.0).abs() < 1e-8, "p = {p}, a = {a}: {n}");
            }
            let states = [
                ProbeState::Parabolic,
                ProbeState::eigen(4).unwrap(),
                ProbeState::superposition(1, 3, 0.3).unwrap(),
                ProbeState::custom(vec![0.6, 0.0, 0.8]).unwrap(),
            ];
            for s in &states {
                assert!((norm_by_quadrature(s, a) - 1.0).abs() < 1e-8, "{s}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        let states = [
            ProbeState::Polynomial(1),
            ProbeState::Polynomial(4),
            ProbeState::Parabolic,
            ProbeState::eigen(3).unwrap(),
            ProbeState::superposition(2, 5, 0.7).unwrap(),
            ProbeState::custom(vec![0.8, 0.0, -0.6]).unwrap(),
        ];
        for s in &states {
            for (a, x) in [(1.0, 0.25), (1.7, 0.9), (0.8, 0.61)] {
                let fd = (value_unchecked(s, a + h, x) - value_unchecked(s, a - h, x)) / (2.0 * h);
                let exact = d_wavefunction(s, &cfg(a), x).unwrap();
                assert!((fd - exact).abs() < 1e-6, "{s} a={a} x={x}: {fd} vs {exact}");
            }
        }
    }

    #[test]
    fn polynomial_scaling_is_consistent() {
        // f_p(x; a) = a^{-1/2} f_p(x/a; 1) differentiated in a.
        let mut x = 0.123_f64;
        for p in [1, 2, 5] {
            for _ in 0..20 {
                x = (x * 7.31 + 0.17).fract();
                let a = 1.0 + x;
                let xs = x * a;
                let u = xs / a;
                let unit = value_unchecked(&ProbeState::Polynomial(p), 1.0, u);
                let scaled = value_unchecked(&ProbeState::Polynomial(p), a, xs);
                assert!((scaled - unit / a.sqrt()).abs() < 1e-13);
                let h = 1e-6;
                let via_scaling = ((value_unchecked(&ProbeState::Polynomial(p), 1.0, xs / (a + h)) / (a + h).sqrt())
                    - (value_unchecked(&ProbeState::Polynomial(p), 1.0, xs / (a - h)) / (a - h).sqrt()))
                    / (2.0 * h);
                let analytic = derivative_unchecked(&ProbeState::Polynomial(p), a, xs);
                assert!((via_scaling - analytic).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn eigen_derivative_delegates() {
        let c = cfg(1.3);
        let s = ProbeState::eigen(5).unwrap();
        for x in [0.0, 0.2, 0.77, 1.3] {
            let d = d_wavefunction(&s, &c, x).unwrap();
            let e = well::d_eigen_wavefunction(EigenIndex::new(5).unwrap(), &c, x).unwrap();
            assert_eq!(d, e);
        }
    }

    #[test]
    fn reconstruction_within_tail_bound() {
        // Amplitudes decay like n^-3, so the pointwise error after N terms is
        // bounded by sqrt(2/a) * sum_{n>N} |f_n| ~ N^-2, not by a fixed 1e-6.
        let c = WellConfig::new(1.4, 50).unwrap();
        for state in [ProbeState::Parabolic, ProbeState::Polynomial(2)] {
            let amp = amplitudes(&state, &c).unwrap();
            let wide = amplitudes(&state, &WellConfig::new(1.4, 400).unwrap()).unwrap();
            let tail: f64 = wide.coefficients()[50..].iter().map(|f| f.abs()).sum::<f64>()
                * (2.0 / 1.4_f64).sqrt();
            let rebuilt = ProbeState::Custom(amp.coefficients().to_vec());
            let mut x = 0.37_f64;
            for _ in 0..20 {
                x = (x * 3.97 + 0.11).fract();
                let xs = x * 1.4;
                let direct = value_unchecked(&state, 1.4, xs);
                let series = value_unchecked(&rebuilt, 1.4, xs);
                assert!((direct - series).abs() <= 1.05 * tail, "{state} at {xs}: {direct} vs {series}");
            }
        }
    }

    #[test]
    fn parseval_deficit_shrinks() {
        let small = amplitudes(&ProbeState::Parabolic, &WellConfig::new(1.0, 5).unwrap()).unwrap();
        let large = amplitudes(&ProbeState::Parabolic, &WellConfig::new(1.0, 50).unwrap()).unwrap();
        assert!(small.truncation_loss() > large.truncation_loss());
        assert!(large.truncation_loss() <= 1e-9);
    }

    #[test]
    fn mean_energies() {
        let c = cfg(1.0);
        assert!((mean_energy(&ProbeState::Polynomial(1), &c).unwrap() - 5.0).abs() < 1e-14);
        assert!((mean_energy(&ProbeState::Parabolic, &c).unwrap() - 5.0).abs() < 1e-14);
        let s = ProbeState::superposition(1, 3, PI / 4.0).unwrap();
        let expected = 10.0 * PI * PI / 4.0;
        assert!((mean_energy(&s, &c).unwrap() - expected).abs() < 1e-12);
        let e2 = mean_energy(&ProbeState::eigen(2).unwrap(), &cfg(2.0)).unwrap();
        assert!((e2 - PI * PI / 2.0).abs() < 1e-14);
        let custom = ProbeState::custom(vec![0.6, 0.8]).unwrap();
        let expected = 0.36 * PI * PI / 2.0 + 0.64 * 4.0 * PI * PI / 2.0;
        assert!((mean_energy(&custom, &c).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn polynomial_energy_by_quadrature() {
        // ⟨f|H|f⟩ = ½ ∫ (f′)² dx
        for (p, a) in [(1, 1.0), (3, 1.0), (2, 1.9)] {
            let h = 1e-5;
            let s = ProbeState::Polynomial(p);
            let kinetic = quadrature::quad(
                |x| {
                    let xp = (x + h).min(a);
                    let xm = (x - h).max(0.0);
                    let slope = (value_unchecked(&s, a, xp) - value_unchecked(&s, a, xm)) / (xp - xm);
                    0.5 * slope * slope
                },
                0.0,
                a,
                1e-11,
            )
            .unwrap();
            let closed = mean_energy(&s, &cfg(a)).unwrap();
            assert!((kinetic - closed).abs() < 1e-6 * closed, "p={p}: {kinetic} vs {closed}");
        }
    }

    #[test]
    fn nbar_examples() {
        let two = EigenIndex::new(2).unwrap();
        let (v, r) = nbar(two, 2, 0.0).unwrap();
        assert_eq!((v, r.get()), (2.0, 2));
        let (v, r) = nbar(two, 2, PI / 2.0).unwrap();
        assert!((v - 4.0).abs() < 1e-15);
        assert_eq!(r.get(), 4);
        let (v, r) = nbar(EigenIndex::new(1).unwrap(), 2, PI / 4.0).unwrap();
        assert!((v - 5f64.sqrt()).abs() < 1e-14);
        assert_eq!(r.get(), 2);
        assert!(nbar(two, 0, 0.1).is_err());
    }
}
