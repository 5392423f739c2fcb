//! Multi-particle probes: symmetrized pairs, the three-particle W state and
//! N-particle GHZ states. Particles are identical but distinguishable and
//! do not interact, so every QSNR is built from single-particle overlaps.

use std::fmt;

use crate::error::{Error, Result};
use crate::metrology;
use crate::probe::{self, ProbeState};
use crate::quadrature;
use crate::well::{EigenIndex, WellConfig};

/// Which single-particle family a pair is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Eigen,
    Polynomial,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Eigen => "eigen",
            Family::Polynomial => "poly",
        })
    }
}

/// `φ_i(x₁)φ_j(x₂) + φ_i(x₂)φ_j(x₁)` with `i ≠ j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetrizedPair {
    family: Family,
    first: u32,
    second: u32,
}

impl SymmetrizedPair {
    pub fn new(family: Family, first: u32, second: u32) -> Result<Self> {
        if first == 0 || second == 0 {
            return Err(Error::invalid("pair indices start at 1"));
        }
        if first == second {
            return Err(Error::invalid(format!("pair indices must differ, got ({first}, {second})")));
        }
        Ok(Self { family, first, second })
    }

    pub fn eigen(n1: EigenIndex, n2: EigenIndex) -> Result<Self> {
        Self::new(Family::Eigen, n1.get(), n2.get())
    }

    pub fn polynomial(p1: u32, p2: u32) -> Result<Self> {
        Self::new(Family::Polynomial, p1, p2)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn indices(&self) -> (u32, u32) {
        (self.first, self.second)
    }

    /// The two single-particle states.
    pub fn constituents(&self) -> (ProbeState, ProbeState) {
        let make = |k: u32| match self.family {
            Family::Eigen => ProbeState::Eigen(EigenIndex::new(k).expect("validated index")),
            Family::Polynomial => ProbeState::Polynomial(k),
        };
        (make(self.first), make(self.second))
    }

    /// Closed-form two-particle QSNR.
    pub fn qsnr(&self) -> Result<f64> {
        Ok(self.qsnr_sum()? + self.bonus()?)
    }

    /// `Q_i + Q_j` of the separate particles.
    pub fn qsnr_sum(&self) -> Result<f64> {
        Ok(single_qsnr(self.family, self.first)? + single_qsnr(self.family, self.second)?)
    }

    /// The superadditive term of the closed form.
    pub fn bonus(&self) -> Result<f64> {
        let (i, j) = (f64::from(self.first), f64::from(self.second));
        Ok(match self.family {
            Family::Eigen => eigen_pair_bonus(self.first, self.second),
            Family::Polynomial => {
                (1.0 + 4.0 * i) * (1.0 + 4.0 * j) * (1.0 + 4.0 * i + 4.0 * j)
                    / (2.0 * (4.0 * i * i + 4.0 * j * j + 8.0 * i * j - 1.0))
            }
        })
    }

    /// `γ = Q^(2) / (Q_i + Q_j)`.
    pub fn gamma(&self) -> Result<f64> {
        Ok(self.qsnr()? / self.qsnr_sum()?)
    }
}

fn single_qsnr(family: Family, k: u32) -> Result<f64> {
    match family {
        Family::Eigen => Ok(metrology::qsnr_eigen(EigenIndex::new(k)?)),
        Family::Polynomial => metrology::qsnr_polynomial(k),
    }
}

/// `32 n₁²n₂²/(n₁²−n₂²)²`, i.e. `16 a² |⟨∂ψ_{n₁}|ψ_{n₂}⟩|²` counted twice.
fn eigen_pair_bonus(n1: u32, n2: u32) -> f64 {
    let (a, b) = (f64::from(n1), f64::from(n2));
    32.0 * (a * b / (a * a - b * b)).powi(2)
}

/// `Q_{n₁} + Q_{n₂} + 32 n₁²n₂²/(n₁²−n₂²)²`.
pub fn qsnr_two_eigen(n1: EigenIndex, n2: EigenIndex) -> Result<f64> {
    SymmetrizedPair::eigen(n1, n2)?.qsnr()
}

/// Closed form `Q_{p₁} + Q_{p₂} + (1+4p₁)(1+4p₂)(1+4p₁+4p₂)/(2(4p₁²+4p₂²+8p₁p₂−1))`.
///
/// This is not the QFI of the normalized symmetrized state, since `f_{p₁}` and
/// `f_{p₂}` overlap; see [`qsnr_two_polynomial_exact`].
pub fn qsnr_two_polynomial(p1: u32, p2: u32) -> Result<f64> {
    SymmetrizedPair::polynomial(p1, p2)?.qsnr()
}

/// Single-particle overlaps of a pair of real states on the unit well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairOverlaps {
    /// `⟨f₁|f₂⟩`
    pub overlap: f64,
    /// `⟨∂f₁|∂f₁⟩`, `⟨∂f₂|∂f₂⟩`, `⟨∂f₁|∂f₂⟩`
    pub d11: f64,
    pub d22: f64,
    pub d12: f64,
    /// `⟨∂f₁|f₂⟩` and `⟨f₁|∂f₂⟩`
    pub c12: f64,
    pub c21: f64,
}

const PAIR_TOL: f64 = 1e-12;

/// Overlaps entering the QFI of a symmetrized pair, computed at `a = 1`.
pub fn pair_overlaps(pair: &SymmetrizedPair) -> Result<PairOverlaps> {
    let (s1, s2) = pair.constituents();
    let f = |s: &ProbeState, x: f64| probe::value_unchecked(s, 1.0, x);
    let d = |s: &ProbeState, x: f64| probe::derivative_unchecked(s, 1.0, x);
    let scale = 1.0 + probe::mean_energy(&s1, &WellConfig::with_width(1.0)?)?
        + probe::mean_energy(&s2, &WellConfig::with_width(1.0)?)?;
    let tol = PAIR_TOL * scale;
    Ok(PairOverlaps {
        overlap: quadrature::quad(|x| f(&s1, x) * f(&s2, x), 0.0, 1.0, PAIR_TOL)?,
        d11: quadrature::quad(|x| d(&s1, x).powi(2), 0.0, 1.0, tol)?,
        d22: quadrature::quad(|x| d(&s2, x).powi(2), 0.0, 1.0, tol)?,
        d12: quadrature::quad(|x| d(&s1, x) * d(&s2, x), 0.0, 1.0, tol)?,
        c12: quadrature::quad(|x| d(&s1, x) * f(&s2, x), 0.0, 1.0, tol)?,
        c21: quadrature::quad(|x| f(&s1, x) * d(&s2, x), 0.0, 1.0, tol)?,
    })
}

/// QSNR of the normalized symmetrized pair from 1D overlaps:
/// `4(D₁₁ + D₂₂ + 2sD₁₂ + c₁₂² + c₂₁²)/(1 + s²)` with `s = ⟨f₁|f₂⟩`.
///
/// For eigenstates `s = 0` and this equals [`qsnr_two_eigen`].
pub fn qsnr_pair_exact(pair: &SymmetrizedPair) -> Result<f64> {
    let o = pair_overlaps(pair)?;
    let s = o.overlap;
    Ok(4.0 * (o.d11 + o.d22 + 2.0 * s * o.d12 + o.c12 * o.c12 + o.c21 * o.c21) / (1.0 + s * s))
}

/// [`qsnr_pair_exact`] for the polynomial family.
pub fn qsnr_two_polynomial_exact(p1: u32, p2: u32) -> Result<f64> {
    qsnr_pair_exact(&SymmetrizedPair::polynomial(p1, p2)?)
}

/// `2Q_{n₁} + Q_{n₂} + 64 n₁²n₂²/(n₁²−n₂²)²` for the W-like state with two
/// particles in `ψ_{n₁}` and one excitation `ψ_{n₂}` shared symmetrically.
pub fn qsnr_w3(n1: EigenIndex, n2: EigenIndex) -> Result<f64> {
    if n1 == n2 {
        return Err(Error::invalid(format!("W-state indices must differ, got ({n1}, {n2})")));
    }
    Ok(2.0 * metrology::qsnr_eigen(n1) + metrology::qsnr_eigen(n2) + 2.0 * eigen_pair_bonus(n1.get(), n2.get()))
}

/// `(|ψ_{n₁}…ψ_{n_N}⟩ + |ψ_{m₁}…ψ_{m_N}⟩)/√2` with `m` a permutation of `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhzSpec {
    n: Vec<EigenIndex>,
    m: Vec<EigenIndex>,
}

impl GhzSpec {
    /// Requires `N ≥ 2`, distinct entries in `n`, and `m ≠ n` a permutation
    /// of `n` so that the two branches are orthogonal.
    pub fn new(n: Vec<EigenIndex>, m: Vec<EigenIndex>) -> Result<Self> {
        if n.len() < 2 {
            return Err(Error::invalid(format!("GHZ state needs N >= 2 particles, got {}", n.len())));
        }
        if m.len() != n.len() {
            return Err(Error::invalid("GHZ branches must have equal length"));
        }
        let mut sorted_n: Vec<u32> = n.iter().map(|k| k.get()).collect();
        sorted_n.sort_unstable();
        if sorted_n.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("GHZ indices must be distinct"));
        }
        let mut sorted_m: Vec<u32> = m.iter().map(|k| k.get()).collect();
        sorted_m.sort_unstable();
        if sorted_m != sorted_n {
            return Err(Error::invalid("second GHZ branch must permute the first"));
        }
        if m == n {
            return Err(Error::invalid("GHZ branches must differ"));
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> &[EigenIndex] {
        &self.n
    }

    pub fn m(&self) -> &[EigenIndex] {
        &self.m
    }
}

/// Entanglement term `16 Σ_{k≠j} δ_{m_k n_j} δ_{m_j n_k} (n_k n_j/(n_k²−n_j²))² Π_{l≠k,j} δ_{n_l m_l}`.
///
/// Nonzero only when `m` swaps exactly one pair of slots.
pub fn ghz_bonus(spec: &GhzSpec) -> f64 {
    let (n, m) = (&spec.n, &spec.m);
    let len = n.len();
    let mut total = 0.0;
    for k in 0..len {
        for j in 0..len {
            if k == j || m[k] != n[j] || m[j] != n[k] {
                continue;
            }
            if (0..len).any(|l| l != k && l != j && n[l] != m[l]) {
                continue;
            }
            let (a, b) = (n[k].as_f64(), n[j].as_f64());
            total += 16.0 * (a * b / (a * a - b * b)).powi(2);
        }
    }
    total
}

/// `Σ_j Q_{n_j}` plus [`ghz_bonus`].
pub fn qsnr_ghz(spec: &GhzSpec) -> f64 {
    spec.n.iter().map(|&k| metrology::qsnr_eigen(k)).sum::<f64>() + ghz_bonus(spec)
}

/// γ for every ordered pair of indices in a range; the diagonal is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct GainGrid {
    family: Family,
    indices: Vec<u32>,
    gamma: Vec<Vec<Option<f64>>>,
}

impl GainGrid {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    /// γ at grid positions `(row, col)`; `None` on the diagonal.
    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.gamma.get(row)?.get(col).copied().flatten()
    }

    pub fn rows(&self) -> &[Vec<Option<f64>>] {
        &self.gamma
    }

    /// Column of the largest γ in `row`.
    pub fn row_argmax(&self, row: usize) -> Option<usize> {
        self.gamma
            .get(row)?
            .iter()
            .enumerate()
            .filter_map(|(c, g)| g.map(|g| (c, g)))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(c, _)| c)
    }

    /// Largest γ and its index pair.
    pub fn max(&self) -> Option<(f64, u32, u32)> {
        let mut best: Option<(f64, u32, u32)> = None;
        for (r, row) in self.gamma.iter().enumerate() {
            for (c, g) in row.iter().enumerate() {
                if let Some(g) = *g {
                    if best.is_none_or(|b| g > b.0) {
                        best = Some((g, self.indices[r], self.indices[c]));
                    }
                }
            }
        }
        best
    }
}

/// γ matrix over `lo..=hi` using the closed-form pair QSNRs.
pub fn entanglement_gain_grid(family: Family, lo: u32, hi: u32) -> Result<GainGrid> {
    if lo == 0 || hi < lo {
        return Err(Error::invalid(format!("need 1 <= lo <= hi, got {lo}..={hi}")));
    }
    let indices: Vec<u32> = (lo..=hi).collect();
    let mut gamma = vec![vec![None; indices.len()]; indices.len()];
    for (r, &i) in indices.iter().enumerate() {
        for (c, &j) in indices.iter().enumerate().skip(r + 1) {
            let g = SymmetrizedPair::new(family, i, j)?.gamma()?;
            gamma[r][c] = Some(g);
            gamma[c][r] = Some(g);
        }
    }
    Ok(GainGrid { family, indices, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::well;
    use std::f64::consts::PI;

    fn ix(n: u32) -> EigenIndex {
        EigenIndex::new(n).unwrap()
    }

    fn ixs(v: &[u32]) -> Vec<EigenIndex> {
        v.iter().map(|&k| ix(k)).collect()
    }

    /// A normalized superposition of eigenstate product branches.
    type Branches = Vec<(f64, Vec<u32>)>;

    /// QFI via product-state algebra: for products `A = ⊗a_k`, `B = ⊗b_k`,
    /// `⟨∂A|∂B⟩ = Σ_{k,l}` of single-slot overlaps times `Π⟨a_i|b_i⟩`.
    fn product_state_qfi(state: &Branches, a: f64) -> f64 {
        let ov = |p: u32, q: u32| if p == q { 1.0 } else { 0.0 };
        let mut dd = 0.0;
        let mut fd = 0.0;
        for (ca, sa) in state {
            for (cb, sb) in state {
                let len = sa.len();
                let mut pair_dd = 0.0;
                let mut pair_fd = 0.0;
                for k in 0..len {
                    let rest_k: f64 = (0..len).filter(|&i| i != k).map(|i| ov(sa[i], sb[i])).product();
                    pair_dd += well::dpsi_dpsi(sa[k], sb[k], a) * rest_k;
                    pair_fd += well::psi_dpsi(sa[k], sb[k], a) * rest_k;
                    for l in 0..len {
                        if l == k {
                            continue;
                        }
                        let rest: f64 = (0..len).filter(|&i| i != k && i != l).map(|i| ov(sa[i], sb[i])).product();
                        // ⟨∂a_k|b_k⟩ = ⟨b_k|∂a_k⟩ for real states
                        pair_dd += well::psi_dpsi(sb[k], sa[k], a) * well::psi_dpsi(sa[l], sb[l], a) * rest;
                    }
                }
                dd += ca * cb * pair_dd;
                fd += ca * cb * pair_fd;
            }
        }
        4.0 * (dd - fd * fd)
    }

    #[test]
    fn two_eigen_example() {
        let q = qsnr_two_eigen(ix(1), ix(2)).unwrap();
        let expected = (1.0 + 4.0 * PI * PI / 3.0) + (1.0 + 16.0 * PI * PI / 3.0) + 128.0 / 9.0;
        assert!((q - expected).abs() < 1e-12);
        assert!((q - 82.020).abs() < 1e-3);
        assert_eq!(q, qsnr_two_eigen(ix(2), ix(1)).unwrap());
        assert!(qsnr_two_eigen(ix(3), ix(3)).is_err());
    }

    #[test]
    fn pair_matches_product_algebra() {
        let r = 0.5_f64.sqrt();
        for (n1, n2) in [(1, 2), (1, 3), (2, 5), (4, 7)] {
            for a in [0.8, 1.9] {
                let state = vec![(r, vec![n1, n2]), (r, vec![n2, n1])];
                let oracle = a * a * product_state_qfi(&state, a);
                let q = qsnr_two_eigen(ix(n1), ix(n2)).unwrap();
                assert!(((q - oracle) / oracle).abs() < 1e-12, "({n1},{n2}) a={a}: {q} vs {oracle}");
            }
        }
    }

    #[test]
    fn exact_pair_reduces_to_closed_form_for_eigenstates() {
        for (n1, n2) in [(1, 2), (2, 5)] {
            let exact = qsnr_pair_exact(&SymmetrizedPair::eigen(ix(n1), ix(n2)).unwrap()).unwrap();
            let closed = qsnr_two_eigen(ix(n1), ix(n2)).unwrap();
            assert!(((exact - closed) / closed).abs() < 1e-10);
        }
    }

    #[test]
    fn w3_matches_product_algebra() {
        let r = (1.0_f64 / 3.0).sqrt();
        for (n1, n2) in [(1, 2), (2, 3), (3, 1)] {
            let state = vec![(r, vec![n1, n1, n2]), (r, vec![n1, n2, n1]), (r, vec![n2, n1, n1])];
            let oracle = product_state_qfi(&state, 1.0);
            let q = qsnr_w3(ix(n1), ix(n2)).unwrap();
            assert!(((q - oracle) / oracle).abs() < 1e-12, "({n1},{n2}): {q} vs {oracle}");
        }
    }

    #[test]
    fn w3_bonus_doubles_pair_bonus() {
        let w = qsnr_w3(ix(1), ix(2)).unwrap() - 2.0 * metrology::qsnr_eigen(ix(1)) - metrology::qsnr_eigen(ix(2));
        assert!((w - 256.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_examples() {
        let pair = GhzSpec::new(ixs(&[1, 2]), ixs(&[2, 1])).unwrap();
        assert!((qsnr_ghz(&pair) - qsnr_two_eigen(ix(1), ix(2)).unwrap()).abs() < 1e-12);
        let base: f64 = [1, 2, 3].iter().map(|&k| metrology::qsnr_eigen(ix(k))).sum();
        let swap = GhzSpec::new(ixs(&[1, 2, 3]), ixs(&[2, 1, 3])).unwrap();
        assert!((qsnr_ghz(&swap) - base - 128.0 / 9.0).abs() < 1e-12);
        let cycle = GhzSpec::new(ixs(&[1, 2, 3]), ixs(&[2, 3, 1])).unwrap();
        assert_eq!(ghz_bonus(&cycle), 0.0);
    }

    #[test]
    fn ghz_matches_product_algebra() {
        let r = 0.5_f64.sqrt();
        for (n, m) in [
            (vec![1, 2, 3], vec![2, 1, 3]),
            (vec![1, 2, 3], vec![3, 1, 2]),
            (vec![2, 5, 1, 4], vec![2, 1, 5, 4]),
            (vec![2, 5, 1, 4], vec![5, 2, 4, 1]),
        ] {
            let spec = GhzSpec::new(ixs(&n), ixs(&m)).unwrap();
            let oracle = product_state_qfi(&vec![(r, n.clone()), (r, m.clone())], 1.0);
            assert!(((qsnr_ghz(&spec) - oracle) / oracle).abs() < 1e-12, "{n:?} / {m:?}");
        }
    }

    #[test]
    fn ghz_rejects_bad_specs() {
        assert!(GhzSpec::new(ixs(&[1]), ixs(&[1])).is_err());
        assert!(GhzSpec::new(ixs(&[1, 2]), ixs(&[1, 2])).is_err());
        assert!(GhzSpec::new(ixs(&[1, 1, 2]), ixs(&[1, 2, 1])).is_err());
        assert!(GhzSpec::new(ixs(&[1, 2, 3]), ixs(&[2, 1, 4])).is_err());
        assert!(GhzSpec::new(ixs(&[1, 2, 3]), ixs(&[2, 1])).is_err());
    }

    #[test]
    fn polynomial_pair_closed_form_and_exact() {
        let closed = qsnr_two_polynomial(2, 3).unwrap();
        assert!((closed - 63.81).abs() < 1e-2, "{closed}");
        let exact = qsnr_two_polynomial_exact(2, 3).unwrap();
        assert!((exact - 50.657).abs() < 1e-3, "{exact}");
        assert!(qsnr_two_polynomial(4, 4).is_err());
    }

    #[test]
    fn exact_pair_matches_2d_quadrature() {
        let pair = SymmetrizedPair::polynomial(2, 3).unwrap();
        let (s1, s2) = pair.constituents();
        let a = 1.3;
        let norm2 = 2.0 * (1.0 + pair_overlaps(&pair).unwrap().overlap.powi(2));
        let f = |s: &ProbeState, x: f64| probe::value_unchecked(s, a, x);
        let d = |s: &ProbeState, x: f64| probe::derivative_unchecked(s, a, x);
        let dpsi = |x: f64, y: f64| {
            d(&s1, x) * f(&s2, y) + f(&s1, x) * d(&s2, y) + d(&s1, y) * f(&s2, x) + f(&s1, y) * d(&s2, x)
        };
        let integral = quadrature::integrate_2d(|x, y| dpsi(x, y).powi(2), (0.0, a), (0.0, a), 1e-8).unwrap();
        let oracle = a * a * 4.0 * integral / norm2;
        let exact = qsnr_pair_exact(&pair).unwrap();
        assert!(((exact - oracle) / oracle).abs() < 1e-7, "{exact} vs {oracle}");
    }

    #[test]
    fn superadditive_bonuses() {
        for i in 1..=20 {
            for j in 1..=20 {
                if i != j {
                    assert!(SymmetrizedPair::new(Family::Eigen, i, j).unwrap().bonus().unwrap() > 0.0);
                    assert!(SymmetrizedPair::new(Family::Polynomial, i, j).unwrap().bonus().unwrap() > 0.0);
                }
            }
        }
    }

    #[test]
    fn gain_grid_shape() {
        let grid = entanglement_gain_grid(Family::Polynomial, 2, 15).unwrap();
        let len = grid.indices().len();
        for r in 0..len {
            assert!(grid.get(r, r).is_none());
            for c in 0..len {
                if r != c {
                    assert!(grid.get(r, c).unwrap() > 1.0);
                    assert_eq!(grid.get(r, c), grid.get(c, r));
                }
            }
            let best = grid.row_argmax(r).unwrap();
            assert_eq!(best.abs_diff(r), 1, "row {r}");
        }
        let (g, i, j) = grid.max().unwrap();
        assert!((g - 1.25).abs() < 0.025 && i.abs_diff(j) == 1, "{g} at ({i},{j})");
        assert!(entanglement_gain_grid(Family::Eigen, 3, 2).is_err());
    }

    #[test]
    fn high_energy_ratios() {
        let ratio_w = |n: u32| {
            qsnr_w3(ix(n), ix(n + 1)).unwrap()
                / (2.0 * metrology::qsnr_eigen(ix(n)) + metrology::qsnr_eigen(ix(n + 1)))
        };
        let ratio_pair = |n: u32| SymmetrizedPair::eigen(ix(n), ix(n + 1)).unwrap().gamma().unwrap();
        let w_limit = 1.0 + 4.0 / (PI * PI);
        let pair_limit = 1.0 + 3.0 / (PI * PI);
        assert!((ratio_w(400) / w_limit - 1.0).abs() < 1e-2);
        assert!((ratio_pair(400) / pair_limit - 1.0).abs() < 1e-2);
        // Convergence orders: 1/n for W3, 1/n² for the pair.
        let slope = |f: &dyn Fn(u32) -> f64, lim: f64| {
            let e1 = (f(100) - lim).abs();
            let e2 = (f(400) - lim).abs();
            (e2 / e1).ln() / 4f64.ln()
        };
        assert!((slope(&ratio_w, w_limit) + 1.0).abs() < 0.1);
        assert!((slope(&ratio_pair, pair_limit) + 2.0).abs() < 0.1);
    }
}
