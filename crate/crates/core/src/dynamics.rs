//! Free evolution in the well and the time-dependent QFI.
//!
//! A state with real, width-independent amplitudes `f_n` evolves into
//! `Σ f_n e^{−iE_n t} |ψ_n⟩`. Both `E_n` and `ψ_n` depend on `a`, so
//! the derivative picks up a term growing linearly in `t` and the QFI a
//! `t²` term:
//!
//! ```text
//! H/4 = t² Σ f_n² ∂E_n²  +  Σ_nm f_n f_m cos(Δ_nm t) ⟨∂ψ_n|∂ψ_m⟩
//!     − t Σ_nm f_n f_m sin(Δ_nm t) (∂E_n + ∂E_m) ⟨ψ_n|∂ψ_m⟩
//!     − [t Σ f_n² ∂E_n − Σ_nm f_n f_m sin(Δ_nm t) ⟨ψ_n|∂ψ_m⟩]²
//! ```
//!
//! with `Δ_nm = E_n − E_m`. Every summand is symmetric under `n ↔ m`, so
//! the double sums run over `n < m` plus the diagonal.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::diagnostics::Diagnostic;
use crate::error::{Error, Result};
use crate::probe::{self, ProbeState};
use crate::well::{self, WellConfig};

/// Relative series residual above which a warning is logged.
pub const RESIDUAL_WARN: f64 = 1e-5;

/// Window used by [`short_time_coefficient`].
pub const SHORT_TIME_WINDOW: (f64, f64) = (1e-3, 1e-2);

/// Relative fit residual tolerated by [`short_time_coefficient`].
pub const FIT_RESIDUAL_LIMIT: f64 = 1e-2;

const FIT_SAMPLES: usize = 41;

/// A static probe state evolved for a time `t` in a well of given width.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedState {
    base: ProbeState,
    time: f64,
    cfg: WellConfig,
}

impl EvolvedState {
    pub fn new(base: ProbeState, time: f64, cfg: WellConfig) -> Result<Self> {
        base.validate()?;
        if !(time.is_finite() && time >= 0.0) {
            return Err(Error::invalid(format!("time must be finite and >= 0, got {time}")));
        }
        Ok(Self { base, time, cfg })
    }

    pub fn base(&self) -> &ProbeState {
        &self.base
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn cfg(&self) -> &WellConfig {
        &self.cfg
    }
}

/// `f_n e^{−iE_n t}` for `n = 1..=N_max`.
pub fn evolved_amplitudes(ev: &EvolvedState) -> Result<Vec<Complex64>> {
    let a = ev.cfg.width();
    let amp = probe::amplitudes(&ev.base, &ev.cfg)?;
    Ok(amp
        .coefficients()
        .iter()
        .enumerate()
        .map(|(k, &f)| Complex64::from_polar(f, -well::energy((k + 1) as f64, a) * ev.time))
        .collect())
}

/// Time-dependent QFI together with its truncation control.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeQfi {
    pub qfi: f64,
    pub qsnr: f64,
    pub truncation: usize,
    /// `|H_N − H_{N/2}| / H_N`.
    pub residual_estimate: f64,
    pub diagnostics: Vec<Diagnostic>,
}

/// QFI of the evolved state from its truncated amplitudes.
pub fn qfi_time(ev: &EvolvedState) -> Result<f64> {
    let amp = probe::amplitudes(&ev.base, &ev.cfg)?;
    Ok(series_qfi(amp.coefficients(), ev.cfg.width(), ev.time))
}

/// [`qfi_time`] plus a residual estimate from halving the cutoff.
pub fn qfi_time_report(ev: &EvolvedState) -> Result<TimeQfi> {
    let a = ev.cfg.width();
    let amp = probe::amplitudes(&ev.base, &ev.cfg)?;
    let f = amp.coefficients();
    let qfi = series_qfi(f, a, ev.time);
    let half = series_qfi(&f[..f.len().div_ceil(2)], a, ev.time);
    let residual_estimate = relative_change(qfi, half);
    let truncation = f.len();
    let mut diagnostics = amp.diagnostics().to_vec();
    if residual_estimate > RESIDUAL_WARN {
        log::warn!("time QFI residual {residual_estimate:.3e} at N_max = {truncation}, t = {}", ev.time);
        diagnostics.push(Diagnostic::SeriesResidual {
            residual: residual_estimate,
            truncation,
        });
    }
    Ok(TimeQfi {
        qfi,
        qsnr: a * a * qfi,
        truncation,
        residual_estimate,
        diagnostics,
    })
}

fn relative_change(reference: f64, other: f64) -> f64 {
    if reference == 0.0 {
        (reference - other).abs()
    } else {
        ((reference - other) / reference).abs()
    }
}

/// The real-form series with `n < m` pairs counted twice.
pub(crate) fn series_qfi(f: &[f64], a: f64, t: f64) -> f64 {
    let n_max = f.len();
    let energy: Vec<f64> = (1..=n_max).map(|n| well::energy(n as f64, a)).collect();
    let d_energy: Vec<f64> = (1..=n_max).map(|n| well::d_energy(n as f64, a)).collect();

    let mut quadratic = 0.0;
    let mut linear = 0.0;
    let mut overlap = 0.0;
    let mut mixed = 0.0;
    let mut phase = 0.0;
    for i in 0..n_max {
        let fi = f[i];
        if fi == 0.0 {
            continue;
        }
        let n = (i + 1) as u32;
        quadratic += fi * fi * d_energy[i] * d_energy[i];
        linear += fi * fi * d_energy[i];
        overlap += fi * fi * well::dpsi_dpsi(n, n, a);
        for j in i + 1..n_max {
            let fj = f[j];
            if fj == 0.0 {
                continue;
            }
            let m = (j + 1) as u32;
            let w = 2.0 * fi * fj;
            let (s, c) = ((energy[i] - energy[j]) * t).sin_cos();
            let o = well::psi_dpsi(n, m, a);
            overlap += w * c * well::dpsi_dpsi(n, m, a);
            mixed += w * s * (d_energy[i] + d_energy[j]) * o;
            phase += w * s * o;
        }
    }
    let imaginary = t * linear - phase;
    4.0 * (t * t * quadratic + overlap - t * mixed - imaginary * imaginary)
}

/// Time-dependent QFI of the parabolic state `√(30/a⁵) x(a − x)`, whose
/// amplitudes `8√15/(nπ)³` live on odd `n`, summed over odd `n, m ≤ N_max`.
pub fn qfi_parabolic_time(cfg: &WellConfig, t: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid(format!("time must be finite and >= 0, got {t}")));
    }
    let a = cfg.width();
    let odd: Vec<f64> = (1..=cfg.truncation()).step_by(2).map(|n| n as f64).collect();
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    let pi6 = pi4 * pi2;

    let mut quadratic = 0.0;
    let mut linear = 0.0;
    let mut diagonal = 0.0;
    for &n in &odd {
        let weight = 960.0 / (pi6 * n.powi(6));
        let de = -n * n * pi2 / a.powi(3);
        quadratic += weight * de * de;
        linear += weight * de;
        diagonal += weight * (n * n * pi2 / 3.0 + 0.25) / (a * a);
    }

    let mut cosine = 0.0;
    let mut sine = 0.0;
    let mut phase = 0.0;
    for &n in &odd {
        for &m in &odd {
            if n == m {
                continue;
            }
            let (n2, m2) = (n * n, m * m);
            let delta = (n2 - m2) * pi2 / (2.0 * a * a);
            let (s, c) = (delta * t).sin_cos();
            cosine += 3840.0 * (m2 + n2) * c / (a * a * pi6 * n2 * m2 * (m2 - n2).powi(2));
            sine -= 1920.0 * (m2 + n2) * t * s / (pi4 * a.powi(4) * n2 * m2 * (m2 - n2));
            phase += 1920.0 * s / (a * pi6 * n2 * m2 * (m2 - n2));
        }
    }
    let imaginary = t * linear + phase;
    Ok(4.0 * (t * t * quadratic + diagonal + cosine + sine - imaginary * imaginary))
}

/// `|Q_{N2}(a,t) − Q_{N1}(a,t)| / Q_{N2}(a,t)` for the parabolic state.
pub fn truncation_residual(cfg: &WellConfig, t: f64, n1: usize, n2: usize) -> Result<f64> {
    if n1 > n2 {
        return Err(Error::invalid(format!("need N1 <= N2, got N1 = {n1}, N2 = {n2}")));
    }
    let coarse = qfi_parabolic_time(&cfg.at_truncation(n1)?, t)?;
    let fine = qfi_parabolic_time(&cfg.at_truncation(n2)?, t)?;
    Ok(relative_change(fine, coarse))
}

/// Least-squares fit of `Q(a,t) ≈ C t²/a⁴` for the parabolic state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T2Fit {
    pub coefficient: f64,
    /// RMS misfit relative to the RMS of the data.
    pub residual: f64,
}

fn log_grid(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let step = (hi / lo).ln() / (samples - 1) as f64;
    (0..samples).map(|k| lo * (step * k as f64).exp()).collect()
}

fn check_window(t_lo: f64, t_hi: f64, samples: usize) -> Result<()> {
    if !(t_lo > 0.0 && t_hi > t_lo && t_hi.is_finite()) {
        return Err(Error::invalid(format!("need 0 < t_lo < t_hi, got [{t_lo}, {t_hi}]")));
    }
    if samples < 2 {
        return Err(Error::invalid("need at least two samples"));
    }
    Ok(())
}

/// Fits `C` on `samples` log-spaced times in `[t_lo, t_hi]`.
pub fn fit_t2_coefficient(cfg: &WellConfig, t_lo: f64, t_hi: f64, samples: usize) -> Result<T2Fit> {
    check_window(t_lo, t_hi, samples)?;
    let a = cfg.width();
    let mut data = Vec::with_capacity(samples);
    for t in log_grid(t_lo, t_hi, samples) {
        data.push((t * t / a.powi(4), a * a * qfi_parabolic_time(cfg, t)?));
    }
    let coefficient = data.iter().map(|(x, q)| x * q).sum::<f64>() / data.iter().map(|(x, _)| x * x).sum::<f64>();
    let misfit: f64 = data.iter().map(|(x, q)| (q - coefficient * x).powi(2)).sum();
    let scale: f64 = data.iter().map(|(_, q)| q * q).sum();
    Ok(T2Fit {
        coefficient,
        residual: (misfit / scale).sqrt(),
    })
}

/// `C` in `Q(a,t) ≈ C t²/a⁴` fitted over [`SHORT_TIME_WINDOW`].
///
/// Fails with [`Error::FitResidual`] (carrying the best `C`) when the data
/// are not described by a pure `t²` law to [`FIT_RESIDUAL_LIMIT`].
pub fn short_time_coefficient(cfg: &WellConfig) -> Result<f64> {
    let fit = fit_t2_coefficient(cfg, SHORT_TIME_WINDOW.0, SHORT_TIME_WINDOW.1, FIT_SAMPLES)?;
    if fit.residual > FIT_RESIDUAL_LIMIT {
        return Err(Error::FitResidual {
            coefficient: fit.coefficient,
            residual: fit.residual,
            limit: FIT_RESIDUAL_LIMIT,
        });
    }
    Ok(fit.coefficient)
}

/// Slope of `ln Q(a,t)` against `ln t` for the parabolic state.
pub fn fit_time_exponent(cfg: &WellConfig, t_lo: f64, t_hi: f64, samples: usize) -> Result<f64> {
    check_window(t_lo, t_hi, samples)?;
    let a = cfg.width();
    let mut points = Vec::with_capacity(samples);
    for t in log_grid(t_lo, t_hi, samples) {
        points.push((t.ln(), (a * a * qfi_parabolic_time(cfg, t)?).ln()));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Exact large-time coefficient `C = 16 a⁴ Var(E)` of `Q ≈ C t²/a⁴`.
///
/// Since `∂E_n = −2E_n/a`, the `t²` part of `H` is `16 t² Var(E)/a²`.
/// Closed-form families use `⟨E²⟩ = ¼∫(f″)²`; the value is width free.
pub fn asymptotic_t2_coefficient(state: &ProbeState) -> Result<f64> {
    state.validate()?;
    let unit = WellConfig::with_width(1.0)?;
    let mean = probe::mean_energy(state, &unit)?;
    let second = match state {
        ProbeState::Polynomial(p) => polynomial_second_moment(*p),
        ProbeState::Parabolic => polynomial_second_moment(1),
        ProbeState::Eigen(n) => well::energy(n.as_f64(), 1.0).powi(2),
        ProbeState::Superposition { n, m, alpha } => {
            alpha.cos().powi(2) * well::energy(n.as_f64(), 1.0).powi(2)
                + alpha.sin().powi(2) * well::energy(m.as_f64(), 1.0).powi(2)
        }
        ProbeState::Custom(c) => c
            .iter()
            .enumerate()
            .map(|(k, f)| f * f * well::energy((k + 1) as f64, 1.0).powi(2))
            .sum(),
    };
    Ok(16.0 * (second - mean * mean).max(0.0))
}

/// `⟨E²⟩` of `f_p` on the unit well: `N₁² 16 p²(2p−1)²/(4p−3)`.
fn polynomial_second_moment(p: u32) -> f64 {
    let p = f64::from(p);
    let norm2 = (1.0 + 6.0 * p + 8.0 * p * p) / (8.0 * p * p);
    norm2 * 16.0 * p * p * (2.0 * p - 1.0).powi(2) / (4.0 * p - 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrology;
    use crate::quadrature;
    use crate::well::EigenIndex;

    fn cfg(a: f64) -> WellConfig {
        WellConfig::with_width(a).unwrap()
    }

    fn evolve(state: ProbeState, t: f64, a: f64) -> EvolvedState {
        EvolvedState::new(state, t, cfg(a)).unwrap()
    }

    /// Straight complex assembly over all ordered pairs.
    fn naive_complex(f: &[f64], a: f64, t: f64) -> Complex64 {
        let i = Complex64::i();
        let c: Vec<Complex64> = f
            .iter()
            .enumerate()
            .map(|(k, &v)| Complex64::from_polar(v, -well::energy((k + 1) as f64, a) * t))
            .collect();
        let mut dd = Complex64::new(0.0, 0.0);
        let mut fd = Complex64::new(0.0, 0.0);
        for (p, cp) in c.iter().enumerate() {
            let n = (p + 1) as u32;
            let den = well::d_energy(n as f64, a);
            for (q, cq) in c.iter().enumerate() {
                let m = (q + 1) as u32;
                let dem = well::d_energy(m as f64, a);
                let delta = if p == q { 1.0 } else { 0.0 };
                // ⟨∂f| = Σ conj(c_n)(i t ∂E_n ⟨ψ_n| + ⟨∂ψ_n|), |∂f⟩ = Σ c_m(−i t ∂E_m |ψ_m⟩ + |∂ψ_m⟩)
                let bra_ket = t * t * den * dem * delta
                    + i * t * den * well::psi_dpsi(n, m, a)
                    - i * t * dem * well::psi_dpsi(m, n, a)
                    + well::dpsi_dpsi(n, m, a);
                dd += cp.conj() * cq * bra_ket;
                fd += cp.conj() * cq * (-i * t * dem * delta + well::psi_dpsi(n, m, a));
            }
        }
        4.0 * (dd - fd.norm_sqr())
    }

    #[test]
    fn evolution_is_unitary() {
        for t in [0.0, 0.3, 1.0, 7.5] {
            let amp = evolved_amplitudes(&evolve(ProbeState::Parabolic, t, 1.3)).unwrap();
            let norm: f64 = amp.iter().map(|c| c.norm_sqr()).sum();
            let norm0: f64 = probe::amplitudes(&ProbeState::Parabolic, &cfg(1.3))
                .unwrap()
                .coefficients()
                .iter()
                .map(|f| f * f)
                .sum();
            assert!((norm - norm0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_time_is_identity() {
        let amp = evolved_amplitudes(&evolve(ProbeState::Parabolic, 0.0, 2.0)).unwrap();
        let base = probe::amplitudes(&ProbeState::Parabolic, &cfg(2.0)).unwrap();
        for (c, f) in amp.iter().zip(base.coefficients()) {
            assert_eq!(c.re, *f);
            assert_eq!(c.im, 0.0);
        }
        let one = evolved_amplitudes(&evolve(ProbeState::Parabolic, 1.0, 1.0)).unwrap();
        assert!((one[0].norm() - 8.0 * 15f64.sqrt() / PI.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn eigenstate_only_acquires_phase() {
        let amp = evolved_amplitudes(&evolve(ProbeState::eigen(3).unwrap(), 2.2, 1.0)).unwrap();
        assert!((amp[2].norm() - 1.0).abs() < 1e-15);
        assert!(amp.iter().enumerate().all(|(k, c)| k == 2 || c.norm() == 0.0));
    }

    #[test]
    fn eigenstate_qfi_is_constant() {
        for n in [1, 2, 5] {
            let a = 1.7;
            let h0 = (3.0 + 4.0 * f64::from(n * n) * PI * PI) / (3.0 * a * a);
            for k in 0..=40 {
                let t = 0.25 * f64::from(k);
                let h = qfi_time(&evolve(ProbeState::eigen(n).unwrap(), t, a)).unwrap();
                assert!(((h - h0) / h0).abs() <= 1e-12, "n={n} t={t}: {h} vs {h0}");
            }
        }
    }

    #[test]
    fn static_limit_matches_static_qfi() {
        for state in [ProbeState::superposition(1, 3, 0.4).unwrap(), ProbeState::eigen(2).unwrap()] {
            let h = qfi_time(&evolve(state.clone(), 0.0, 1.4)).unwrap();
            let h_static = metrology::qfi_static(&state, &cfg(1.4)).unwrap();
            assert!(((h - h_static) / h_static).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_grouping_matches_naive_complex_loop() {
        let f = probe::amplitudes(&ProbeState::Parabolic, &WellConfig::new(1.0, 30).unwrap()).unwrap();
        for (a, t) in [(1.0, 0.0), (1.0, 0.37), (2.0, 1.0), (0.6, 3.1)] {
            let fast = series_qfi(f.coefficients(), a, t);
            let slow = naive_complex(f.coefficients(), a, t);
            assert!(slow.im.abs() <= 1e-10 * slow.re.abs());
            assert!(((fast - slow.re) / slow.re).abs() < 1e-12, "a={a} t={t}: {fast} vs {}", slow.re);
        }
    }

    #[test]
    fn general_series_agrees_with_parabolic_specialization() {
        for a in [1.0, 2.0] {
            for t in [0.0, 0.1, 0.5, 1.0] {
                let general = qfi_time(&evolve(ProbeState::Parabolic, t, a)).unwrap();
                let special = qfi_parabolic_time(&cfg(a), t).unwrap();
                assert!(((general - special) / special).abs() < 1e-8, "a={a} t={t}");
            }
        }
    }

    #[test]
    fn parabolic_static_limit() {
        let q = qfi_parabolic_time(&cfg(1.0), 0.0).unwrap();
        assert!((q - 15.0).abs() < 1e-3);
    }

    #[test]
    fn superposition_time_qfi_matches_direct_quadrature() {
        // Oracle: differentiate the evolved wavefunction by central
        // differences in a and integrate |∂f|² and f*∂f directly.
        let (n, m, alpha, t, a) = (1u32, 2u32, 0.6_f64, 0.8_f64, 1.3_f64);
        let psi_t = |w: f64, x: f64| -> Complex64 {
            let c1 = Complex64::from_polar(alpha.cos(), -well::energy(f64::from(n), w) * t);
            let c2 = Complex64::from_polar(alpha.sin(), -well::energy(f64::from(m), w) * t);
            c1 * well::psi(f64::from(n), w, x) + c2 * well::psi(f64::from(m), w, x)
        };
        let h = 1e-5;
        // The sine formula extends past the wall, so a central difference in
        // the width at fixed x is well defined.
        let d = |x: f64| (psi_t(a, x), (psi_t(a + h, x) - psi_t(a - h, x)) / (2.0 * h));
        let dd = quadrature::quad(|x| d(x).1.norm_sqr(), 0.0, a, 1e-9).unwrap();
        let re = quadrature::quad(|x| (d(x).0.conj() * d(x).1).re, 0.0, a, 1e-9).unwrap();
        let im = quadrature::quad(|x| (d(x).0.conj() * d(x).1).im, 0.0, a, 1e-9).unwrap();
        let oracle = 4.0 * (dd - re * re - im * im);
        let mut c = vec![0.0; 50];
        c[0] = alpha.cos();
        c[1] = alpha.sin();
        let series = qfi_time(&evolve(ProbeState::custom(c).unwrap(), t, a)).unwrap();
        assert!(((series - oracle) / oracle).abs() < 1e-5, "{series} vs {oracle}");
    }

    #[test]
    fn qsnr_falls_with_width_at_unit_time() {
        let q: Vec<f64> = [1.0, 2.0, 3.0]
            .iter()
            .map(|&a| a * a * qfi_parabolic_time(&cfg(a), 1.0).unwrap())
            .collect();
        assert!(q[0] > q[1] && q[1] > q[2], "{q:?}");
    }

    #[test]
    fn residual_properties() {
        let c = cfg(1.0);
        assert_eq!(truncation_residual(&c, 0.7, 50, 50).unwrap(), 0.0);
        assert!(truncation_residual(&c, 0.7, 60, 50).is_err());
        let r: Vec<f64> = [10, 20, 50].iter().map(|&n| truncation_residual(&c, 0.5, n, 150).unwrap()).collect();
        assert!(r[0] > r[1] && r[1] > r[2], "{r:?}");
    }

    #[test]
    fn report_flags_large_residual() {
        let r = qfi_time_report(&evolve(ProbeState::Parabolic, 1.0, 1.0)).unwrap();
        assert!(r.residual_estimate > RESIDUAL_WARN);
        assert!(r.diagnostics.iter().any(|d| matches!(d, Diagnostic::SeriesResidual { .. })));
        let r = qfi_time_report(&evolve(ProbeState::eigen(2).unwrap(), 1.0, 1.0)).unwrap();
        assert_eq!(r.residual_estimate, 0.0);
        assert!(r.diagnostics.is_empty());
        assert!((r.qsnr - metrology::qsnr_eigen(EigenIndex::new(2).unwrap())).abs() < 1e-10);
    }

    #[test]
    fn asymptotic_coefficient_values() {
        assert!((asymptotic_t2_coefficient(&ProbeState::Parabolic).unwrap() - 80.0).abs() < 1e-12);
        assert_eq!(asymptotic_t2_coefficient(&ProbeState::eigen(4).unwrap()).unwrap(), 0.0);
        // Against the truncated amplitude sums, which converge like 1/N.
        let f = probe::amplitudes(&ProbeState::Polynomial(3), &WellConfig::new(1.0, 2000).unwrap()).unwrap();
        let (m1, m2) = f.coefficients().iter().enumerate().fold((0.0, 0.0), |(m1, m2), (k, c)| {
            let e = well::energy((k + 1) as f64, 1.0);
            (m1 + c * c * e, m2 + c * c * e * e)
        });
        let exact = asymptotic_t2_coefficient(&ProbeState::Polynomial(3)).unwrap();
        assert!(((16.0 * (m2 - m1 * m1) - exact) / exact).abs() < 1e-2);
    }

    #[test]
    fn late_time_growth_matches_asymptotic_coefficient() {
        let c = WellConfig::new(1.0, 400).unwrap();
        let fit = fit_t2_coefficient(&c, 20.0, 40.0, 21).unwrap();
        assert!((fit.coefficient / 80.0 - 1.0).abs() < 0.05, "{fit:?}");
    }

    #[test]
    fn short_time_window_is_not_quadratic() {
        match short_time_coefficient(&cfg(1.0)) {
            Err(Error::FitResidual { residual, .. }) => assert!(residual > FIT_RESIDUAL_LIMIT),
            other => panic!("expected fit diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn rejects_negative_time() {
        assert!(EvolvedState::new(ProbeState::Parabolic, -1.0, cfg(1.0)).is_err());
        assert!(qfi_parabolic_time(&cfg(1.0), f64::NAN).is_err());
    }
}
