//! Monte Carlo check of the Cramér-Rao chain for position measurements.
//!
//! Positions are drawn from `|f(x; a)|²` by inverting a tabulated CDF, the
//! width is estimated by maximum likelihood, and the spread of the estimates
//! over independent replicas is compared with `1/(M F(a))`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diagnostics::Diagnostic;
use crate::error::{Error, Result};
use crate::metrology;
use crate::probe::{self, ProbeState};
use crate::quadrature;
use crate::well::WellConfig;

/// Number of CDF cells on the unit well.
pub const CDF_CELLS: usize = 4096;

/// Fewest replicas [`crlb_experiment`] accepts.
pub const MIN_REPLICAS: usize = 30;

/// Relative tolerance of the golden-section refinement.
pub const MLE_TOL: f64 = 1e-8;

const SCAN_POINTS: usize = 256;

/// Upper end of the default search interval, as a multiple of `max(x)`.
const SEARCH_SPAN: f64 = 1.5;

/// Inverse-CDF sampler for `|f(x; a)|²`.
///
/// Every supported state has width-independent amplitudes, so the density
/// is `g(x/a)²/a` and one table on the unit well serves every width.
#[derive(Debug, Clone)]
pub struct PositionSampler {
    state: ProbeState,
    nodes: Vec<f64>,
    cdf: Vec<f64>,
    density: Vec<f64>,
}

impl PositionSampler {
    pub fn new(state: &ProbeState) -> Result<Self> {
        state.validate()?;
        let h = 1.0 / CDF_CELLS as f64;
        let nodes: Vec<f64> = (0..=CDF_CELLS).map(|k| k as f64 * h).collect();
        let density: Vec<f64> = nodes.iter().map(|&u| probe::value_unchecked(state, 1.0, u).powi(2)).collect();
        let mut cdf = Vec::with_capacity(nodes.len());
        cdf.push(0.0);
        let mut acc = 0.0;
        for w in nodes.windows(2) {
            acc += quadrature::quad(|u| probe::value_unchecked(state, 1.0, u).powi(2), w[0], w[1], 1e-15)?;
            cdf.push(acc);
        }
        if acc.is_nan() || acc <= 0.0 {
            return Err(Error::Internal(format!("CDF table has total mass {acc}")));
        }
        for c in &mut cdf {
            *c /= acc;
        }
        let density = density.into_iter().map(|d| d / acc).collect();
        if cdf.windows(2).any(|w| w[1].is_nan() || w[1] < w[0]) {
            return Err(Error::Internal("CDF table is not monotone".into()));
        }
        Ok(Self {
            state: state.clone(),
            nodes,
            cdf,
            density,
        })
    }

    pub fn state(&self) -> &ProbeState {
        &self.state
    }

    /// Hermite slopes limited so each cell stays monotone (Fritsch–Carlson).
    fn cell_slopes(&self, k: usize) -> (f64, f64, f64) {
        let h = self.nodes[k + 1] - self.nodes[k];
        let secant = (self.cdf[k + 1] - self.cdf[k]) / h;
        if secant <= 0.0 {
            return (h, 0.0, 0.0);
        }
        let (mut m0, mut m1) = (self.density[k], self.density[k + 1]);
        let (alpha, beta) = (m0 / secant, m1 / secant);
        let r = alpha * alpha + beta * beta;
        if r > 9.0 {
            let tau = 3.0 / r.sqrt();
            m0 *= tau;
            m1 *= tau;
        }
        (h, m0, m1)
    }

    /// Cell cubic and its derivative with respect to the local coordinate `s`.
    fn hermite(&self, k: usize, s: f64, h: f64, m0: f64, m1: f64) -> (f64, f64) {
        let (c0, c1) = (self.cdf[k], self.cdf[k + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        let value = (2.0 * s3 - 3.0 * s2 + 1.0) * c0
            + (s3 - 2.0 * s2 + s) * h * m0
            + (-2.0 * s3 + 3.0 * s2) * c1
            + (s3 - s2) * h * m1;
        let slope = (6.0 * s2 - 6.0 * s) * c0
            + (3.0 * s2 - 4.0 * s + 1.0) * h * m0
            + (-6.0 * s2 + 6.0 * s) * c1
            + (3.0 * s2 - 2.0 * s) * h * m1;
        (value, slope)
    }

    /// Position on the unit well with `CDF(u) = r`.
    pub fn quantile(&self, r: f64) -> f64 {
        let r = r.clamp(0.0, 1.0);
        let k = self.cdf.partition_point(|&c| c <= r).clamp(1, CDF_CELLS) - 1;
        let (h, m0, m1) = self.cell_slopes(k);
        if self.cdf[k + 1] <= self.cdf[k] {
            return self.nodes[k];
        }
        // Safeguarded Newton on the cell's monotone cubic.
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut s = (r - self.cdf[k]) / (self.cdf[k + 1] - self.cdf[k]);
        for _ in 0..60 {
            let (v, d) = self.hermite(k, s, h, m0, m1);
            let f = v - r;
            if f.abs() <= 1e-15 {
                break;
            }
            if f > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let step = if d > 0.0 { s - f / d } else { f64::NAN };
            s = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
            if hi - lo < 1e-16 {
                break;
            }
        }
        (self.nodes[k] + s * h).clamp(0.0, 1.0)
    }

    /// `count` positions in `[0, width]` from `rng`.
    pub fn sample<R: Rng>(&self, width: f64, count: usize, rng: &mut R) -> Vec<f64> {
        (0..count).map(|_| width * self.quantile(rng.gen::<f64>())).collect()
    }
}

/// Outcomes of `M` position measurements on one prepared state.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    outcomes: Vec<f64>,
    true_width: f64,
    state: ProbeState,
    seed: u64,
}

impl SampleBatch {
    /// Wraps externally obtained outcomes; all must lie in `[0, true_width]`.
    pub fn new(outcomes: Vec<f64>, true_width: f64, state: ProbeState, seed: u64) -> Result<Self> {
        if let Some(&x) = outcomes.iter().find(|&&x| !(0.0..=true_width).contains(&x)) {
            return Err(Error::Domain { x, width: true_width });
        }
        Ok(Self {
            outcomes,
            true_width,
            state,
            seed,
        })
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn true_width(&self) -> f64 {
        self.true_width
    }

    pub fn state(&self) -> &ProbeState {
        &self.state
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Largest outcome (0 for an empty batch).
    pub fn max_outcome(&self) -> f64 {
        self.outcomes.iter().copied().fold(0.0, f64::max)
    }
}

fn replica_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `M` independent draws from `|f(x; a)|²`, reproducible from `seed`.
pub fn sample_positions(state: &ProbeState, cfg: &WellConfig, m: usize, seed: u64) -> Result<SampleBatch> {
    if m == 0 {
        return Err(Error::invalid("need at least one measurement"));
    }
    let sampler = PositionSampler::new(state)?;
    Ok(batch_from(&sampler, cfg.width(), m, seed, 0))
}

fn batch_from(sampler: &PositionSampler, width: f64, m: usize, seed: u64, stream: u64) -> SampleBatch {
    let mut rng = replica_rng(seed, stream);
    SampleBatch {
        outcomes: sampler.sample(width, m, &mut rng),
        true_width: width,
        state: sampler.state.clone(),
        seed,
    }
}

/// `Σ_k log |f(x_k; c)|²`; `−∞` when some outcome lies outside `[0, c]`
/// or sits on a node of the candidate wavefunction.
pub fn log_likelihood(batch: &SampleBatch, candidate: f64) -> f64 {
    if candidate.is_nan() || candidate <= 0.0 || batch.max_outcome() > candidate {
        return f64::NEG_INFINITY;
    }
    batch
        .outcomes
        .iter()
        .map(|&x| probe::value_unchecked(&batch.state, candidate, x).powi(2).ln())
        .sum()
}

/// Maximum-likelihood width with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct MleOutcome {
    pub width: f64,
    pub log_likelihood: f64,
    pub diagnostics: Vec<Diagnostic>,
}

/// Maximizes [`log_likelihood`] over `[max(search_lo, max x), search_hi]` by a
/// grid scan followed by golden-section refinement to `MLE_TOL · search_hi`.
pub fn mle_estimate(batch: &SampleBatch, search_lo: f64, search_hi: f64) -> Result<MleOutcome> {
    let lo = search_lo.max(batch.max_outcome());
    if !(search_hi > lo && search_hi.is_finite()) {
        return Err(Error::invalid(format!("empty search interval [{lo}, {search_hi}]")));
    }
    let ll = |c: f64| log_likelihood(batch, c);
    let step = (search_hi - lo) / SCAN_POINTS as f64;
    let grid: Vec<(f64, f64)> = (0..=SCAN_POINTS)
        .map(|k| {
            let c = if k == SCAN_POINTS { search_hi } else { lo + step * k as f64 };
            (c, ll(c))
        })
        .collect();
    let (best, &(_, best_ll)) = grid
        .iter()
        .enumerate()
        .max_by(|x, y| x.1 .1.total_cmp(&y.1 .1))
        .expect("non-empty grid");
    if best_ll == f64::NEG_INFINITY {
        return Err(Error::FlatLikelihood);
    }

    let (mut a, mut b) = (grid[best.saturating_sub(1)].0, grid[(best + 1).min(SCAN_POINTS)].0);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (ll(c), ll(d));
    let tol = MLE_TOL * search_hi;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = ll(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = ll(d);
        }
    }
    let (mut width, mut value) = if fc >= fd { (c, fc) } else { (d, fd) };
    if best_ll > value {
        (width, value) = (grid[best].0, best_ll);
    }

    let mut diagnostics = Vec::new();
    if search_hi - width <= 2.0 * tol.max(step * 1e-6) || best == SCAN_POINTS {
        log::warn!("likelihood maximum {width} on the search boundary {search_hi}");
        diagnostics.push(Diagnostic::BoundaryMaximum {
            estimate: width,
            search_hi,
        });
    }
    Ok(MleOutcome {
        width,
        log_likelihood: value,
        diagnostics,
    })
}

/// Replicated estimation summary.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub estimates: Vec<f64>,
    pub mean: f64,
    /// Unbiased sample variance of the estimates.
    pub variance: f64,
    /// `M · Var · F(a)`; at or above 1 up to replication noise.
    pub crlb_ratio: f64,
    pub measurements: usize,
    pub fisher: f64,
    /// Replicas whose maximum hit the search boundary.
    pub boundary_hits: usize,
}

/// Runs `replicas` independent sample-estimate cycles. Replica `r` uses
/// stream `r` of the seeded generator, so the result does not depend on
/// the number of worker threads.
pub fn crlb_experiment(
    state: &ProbeState,
    cfg: &WellConfig,
    m: usize,
    replicas: usize,
    seed: u64,
) -> Result<EstimationResult> {
    if replicas < MIN_REPLICAS {
        return Err(Error::invalid(format!("need at least {MIN_REPLICAS} replicas, got {replicas}")));
    }
    if m == 0 {
        return Err(Error::invalid("need at least one measurement"));
    }
    let sampler = PositionSampler::new(state)?;
    let fisher = metrology::fi_position(state, cfg)?;
    let width = cfg.width();
    let outcomes: Vec<MleOutcome> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let batch = batch_from(&sampler, width, m, seed, r);
            let top = batch.max_outcome();
            mle_estimate(&batch, top, SEARCH_SPAN * top)
        })
        .collect::<Result<_>>()?;

    let boundary_hits = outcomes.iter().filter(|o| !o.diagnostics.is_empty()).count();
    let estimates: Vec<f64> = outcomes.into_iter().map(|o| o.width).collect();
    let k = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / k;
    let variance = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (k - 1.0);
    Ok(EstimationResult {
        crlb_ratio: m as f64 * variance * fisher,
        estimates,
        mean,
        variance,
        measurements: m,
        fisher,
        boundary_hits,
    })
}
