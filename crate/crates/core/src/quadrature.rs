//! Adaptive Gauss–Kronrod (7/15) quadrature with global interval bisection.
//!
//! Each panel is integrated with the 15-point Kronrod rule; the difference to
//! the embedded 7-point Gauss rule is the panel error estimate. The panel with
//! the largest estimate is halved until the summed estimate drops below the
//! requested absolute tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Default absolute tolerance used throughout the crate.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Maximum number of bisections before giving up.
pub const MAX_SUBDIVISIONS: usize = 4000;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    /// Kronrod estimate of ∫|f|, the scale of rounding noise.
    magnitude: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut magnitude = fc.abs() * WGK[7];
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let (left, right) = (f(center - dx), f(center + dx));
        let pair = left + right;
        kronrod += wk * pair;
        magnitude += wk * (left.abs() + right.abs());
        // Gauss nodes are the odd-indexed Kronrod nodes.
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Panel {
        lo,
        hi,
        value,
        error,
        magnitude: magnitude * half.abs(),
    }
}

/// Integrates `f` over `[lo, hi]` to absolute tolerance `tol`.
///
/// Fails with [`Error::Quadrature`] (carrying the best estimate) if the
/// tolerance is not met within [`MAX_SUBDIVISIONS`] bisections.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<Integral> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid(format!("quadrature tolerance must be positive, got {tol}")));
    }
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid("quadrature bounds must be finite"));
    }
    if lo == hi {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    let (lo, hi, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };

    let mut heap = BinaryHeap::new();
    heap.push(gauss_kronrod(&mut f, lo, hi));
    let mut subdivisions = 0;

    loop {
        let (value, error, magnitude) = heap.iter().fold((0.0, 0.0, 0.0), |(v, e, m), p| {
            (v + p.value, e + p.error, m + p.magnitude)
        });
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Quadrature {
                estimate: sign * value,
                error,
                subdivisions,
            });
        }
        if converged(error, magnitude, tol) {
            return Ok(Integral {
                value: sign * value,
                error,
                subdivisions,
            });
        }
        if subdivisions >= MAX_SUBDIVISIONS {
            return Err(Error::Quadrature {
                estimate: sign * value,
                error,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.lo + worst.hi);
        heap.push(gauss_kronrod(&mut f, worst.lo, mid));
        heap.push(gauss_kronrod(&mut f, mid, worst.hi));
        subdivisions += 1;
    }
}

fn converged(error: f64, magnitude: f64, tol: f64) -> bool {
    // Below ~50 ulp of ∫|f| the Kronrod/Gauss gap is rounding noise.
    error <= tol.max(50.0 * f64::EPSILON * magnitude)
}

/// Convenience wrapper returning only the value.
pub fn quad<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    integrate(f, lo, hi, tol).map(|i| i.value)
}

/// Tensor-product integral over a rectangle: an adaptive outer rule whose
/// integrand is itself an adaptive inner integral.
///
/// `tol` is applied to each axis; the inner tolerance is scaled by the outer
/// interval length so the combined absolute error stays near `tol`.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    (x_lo, x_hi): (f64, f64),
    (y_lo, y_hi): (f64, f64),
    tol: f64,
) -> Result<f64> {
    let inner_tol = tol / (x_hi - x_lo).abs().max(1.0);
    let mut inner_failure: Option<Error> = None;
    let outer = integrate(
        |x| match quad(|y| f(x, y), y_lo, y_hi, inner_tol) {
            Ok(v) => v,
            Err(e) => {
                inner_failure.get_or_insert(e);
                0.0
            }
        },
        x_lo,
        x_hi,
        tol,
    )?;
    match inner_failure {
        Some(e) => Err(e),
        None => Ok(outer.value),
    }
}
