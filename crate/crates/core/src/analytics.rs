//! Reduced-state statistics for single qubits and qubit pairs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Mat4, C64};
use crate::state::{PairDensity, QubitDensity, StateVector};

/// Off-diagonals below this leave the phase undefined.
pub const PHASE_EPSILON: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QubitStats {
    pub prob_one: f64,
    /// Relative phase of `|1⟩` against `|0⟩`; `None` when there is no
    /// coherence to measure it from.
    pub phase: Option<f64>,
    pub purity: f64,
    /// `2(1 − purity)`, in `[0, 1]`.
    pub linear_entropy: f64,
    /// Bits, in `[0, 1]`.
    pub von_neumann_entropy: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairStats {
    /// Lower wire.
    pub i: usize,
    /// Higher wire.
    pub j: usize,
    pub correlation: f64,
    pub concurrence: f64,
    /// `(4/3)(1 − Tr ρ²)`, in `[0, 1]`.
    pub linear_entropy: f64,
    /// Bits, in `[0, 2]`.
    pub von_neumann_entropy: f64,
}

/// One cell per unordered pair `(i, j)`, `i < j`, ordered by `i` then `j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HalfMatrix {
    pub num_qubits: usize,
    pub cells: Vec<PairStats>,
}

impl HalfMatrix {
    pub fn cell(&self, i: usize, j: usize) -> Option<&PairStats> {
        let (i, j) = (i.min(j), i.max(j));
        self.cells.iter().find(|c| c.i == i && c.j == j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BarMode {
    #[default]
    Probability,
    Magnitude,
    Log,
}

/// `−Σ λ log₂ λ` with `0·log 0 = 0`.
fn entropy_bits(eigenvalues: &[f64]) -> f64 {
    let h: f64 = eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum();
    h.max(0.0)
}

pub fn qubit_stats(rho: &QubitDensity) -> Result<QubitStats> {
    rho.validate()?;
    let rho10 = rho.get(1, 0);
    let purity = rho.purity();
    // closed-form eigenvalues of a 2×2 Hermitian matrix
    let d = rho.get(0, 0).re - rho.get(1, 1).re;
    let r = (d * d + 4.0 * rho.get(0, 1).norm_sqr()).sqrt();
    let tr = rho.matrix().trace().re;
    let eig = [((tr - r) / 2.0).max(0.0), ((tr + r) / 2.0).max(0.0)];
    Ok(QubitStats {
        prob_one: rho.get(1, 1).re,
        phase: (rho10.norm() > PHASE_EPSILON).then(|| rho10.arg()),
        purity,
        linear_entropy: 2.0 * (1.0 - purity),
        von_neumann_entropy: entropy_bits(&eig),
    })
}

/// Pearson correlation of the two qubits' `z = 1 − 2·bit` outcomes in the
/// computational basis; 0 when either marginal is deterministic.
pub fn correlation(rho: &PairDensity) -> Result<f64> {
    rho.validate()?;
    // local index = 2·b2 + b1
    let p: [f64; 4] = std::array::from_fn(|k| rho.get(k, k).re);
    let z = |bit: usize| 1.0 - 2.0 * bit as f64;
    let mut e1 = 0.0;
    let mut e2 = 0.0;
    let mut e12 = 0.0;
    for (k, &pk) in p.iter().enumerate() {
        let (z1, z2) = (z(k & 1), z(k >> 1));
        e1 += pk * z1;
        e2 += pk * z2;
        e12 += pk * z1 * z2;
    }
    let sigma = (1.0 - e1 * e1).max(0.0).sqrt() * (1.0 - e2 * e2).max(0.0).sqrt();
    if sigma < 1e-12 {
        return Ok(0.0);
    }
    Ok(((e12 - e1 * e2) / sigma).clamp(-1.0, 1.0))
}

fn yy() -> Mat4 {
    let one = C64::new(1.0, 0.0);
    let mut m = Mat4::zeros();
    m.0[0][3] = -one;
    m.0[1][2] = one;
    m.0[2][1] = one;
    m.0[3][0] = -one;
    m
}

/// Eigenvalues of `ρ` below this are rounding noise at f64 precision and are
/// treated as exact zeros when forming `√ρ`.
const RANK_EPSILON: f64 = 64.0 * f64::EPSILON;

/// Two-qubit concurrence via the spin-flip construction.
///
/// The square roots of the eigenvalues of `ρρ̃` equal the singular values of
/// `T = √ρ (Y⊗Y) conj(√ρ)`, since `√ρ ρ̃ √ρ = T T†`. Taking them from `T`
/// directly avoids square-rooting near-zero eigenvalues.
pub fn concurrence(rho: &PairDensity) -> Result<f64> {
    rho.validate()?;
    let sqrt_rho = rho
        .matrix()
        .hermitian_eigen()
        .map_values(|x| if x > RANK_EPSILON { x.sqrt() } else { 0.0 });
    let t = sqrt_rho * yy() * sqrt_rho.conj();
    let l = t.singular_values();
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

pub fn pair_stats(state: &StateVector, i: usize, j: usize) -> Result<PairStats> {
    let (lo, hi) = (i.min(j), i.max(j));
    let rho = state.partial_trace_pair(lo, hi)?;
    let purity = rho.purity();
    Ok(PairStats {
        i: lo,
        j: hi,
        correlation: correlation(&rho)?,
        concurrence: concurrence(&rho)?,
        linear_entropy: (4.0 / 3.0) * (1.0 - purity),
        von_neumann_entropy: entropy_bits(&rho.eigenvalues()),
    })
}

/// Statistics for every qubit of a state.
pub fn all_qubit_stats(state: &StateVector) -> Result<Vec<QubitStats>> {
    (0..state.num_qubits())
        .map(|q| qubit_stats(&state.partial_trace_single(q)?))
        .collect()
}

pub fn half_matrix(state: &StateVector) -> Result<HalfMatrix> {
    let n = state.num_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits { needed: 2, got: n });
    }
    let cells = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .map(|(i, j)| pair_stats(state, i, j))
        .collect::<Result<Vec<_>>>()?;
    Ok(HalfMatrix { num_qubits: n, cells })
}

/// Normalized bar length for a probability under the given display mode.
/// In log mode, `decades` orders of magnitude map onto the full bar.
pub fn bar_length(p: f64, mode: BarMode, decades: u32) -> f64 {
    let p = p.clamp(0.0, 1.0);
    match mode {
        BarMode::Probability => p,
        BarMode::Magnitude => p.sqrt(),
        BarMode::Log => {
            if p == 0.0 || decades == 0 {
                0.0
            } else {
                (1.0 + p.log10() / decades as f64).max(0.0)
            }
        }
    }
}
