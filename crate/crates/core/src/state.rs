//! Dense state vectors, matrix-free gate application and partial traces.
//!
//! Index convention: wire `j` contributes `2^j` to an amplitude index. Wire 0
//! is the top wire of a circuit diagram and the right-most printed bit, so the
//! bitstring `b_{n-1} … b_0` reads with the bottom wire first.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{cis, Mat2, SquareMatrix, C64, ONE, ZERO};

/// Largest supported register.
pub const MAX_QUBITS: usize = 16;

/// Norm drift beyond this is reported, never silently corrected.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Tolerance for accepting a caller-supplied gate matrix as unitary.
pub const UNITARY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    /// Fires when the wire's bit is 1.
    Control,
    /// Fires when the wire's bit is 0.
    Anticontrol,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Control {
    pub wire: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn on(wire: usize) -> Self {
        Self { wire, polarity: Polarity::Control }
    }

    pub fn off(wire: usize) -> Self {
        Self { wire, polarity: Polarity::Anticontrol }
    }
}

/// Set of control and anticontrol wires, kept sorted by wire.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ControlSpec(Vec<Control>);

impl ControlSpec {
    pub fn none() -> Self {
        Self::default()
    }

    /// Rejects repeated wires.
    pub fn new(controls: impl IntoIterator<Item = Control>) -> Result<Self> {
        let mut v: Vec<Control> = controls.into_iter().collect();
        v.sort();
        if let Some(w) = v.windows(2).find(|w| w[0].wire == w[1].wire) {
            return Err(Error::WireCollision(w[0].wire));
        }
        Ok(Self(v))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Control> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn wires(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|c| c.wire)
    }

    pub fn contains_wire(&self, wire: usize) -> bool {
        self.0.iter().any(|c| c.wire == wire)
    }

    /// Bits that take part in the control test.
    pub fn mask(&self) -> usize {
        self.0.iter().fold(0, |m, c| m | (1 << c.wire))
    }

    /// Required values of the masked bits.
    pub fn value(&self) -> usize {
        self.0
            .iter()
            .filter(|c| c.polarity == Polarity::Control)
            .fold(0, |m, c| m | (1 << c.wire))
    }

    #[inline]
    pub fn satisfied_by(&self, index: usize) -> bool {
        index & self.mask() == self.value()
    }

    /// Union of two specs; fails if they disagree on a wire's polarity.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut v = self.0.clone();
        for c in &other.0 {
            match v.iter().find(|d| d.wire == c.wire) {
                Some(d) if d.polarity == c.polarity => {}
                Some(_) => return Err(Error::WireCollision(c.wire)),
                None => v.push(*c),
            }
        }
        Self::new(v)
    }

    pub(crate) fn check(&self, num_qubits: usize, targets: &[usize]) -> Result<()> {
        for c in &self.0 {
            if c.wire >= num_qubits {
                return Err(Error::WireOutOfRange { wire: c.wire, num_qubits });
            }
            if targets.contains(&c.wire) {
                return Err(Error::WireCollision(c.wire));
            }
        }
        Ok(())
    }
}

impl FromIterator<Control> for ControlSpec {
    /// Later entries for an already present wire are dropped.
    fn from_iter<I: IntoIterator<Item = Control>>(iter: I) -> Self {
        let mut v: Vec<Control> = Vec::new();
        for c in iter {
            if !v.iter().any(|d| d.wire == c.wire) {
                v.push(c);
            }
        }
        v.sort();
        Self(v)
    }
}

/// Reduced density matrix of one (`D = 2`) or two (`D = 4`) qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix<const D: usize>(pub SquareMatrix<D>);

pub type QubitDensity = DensityMatrix<2>;
pub type PairDensity = DensityMatrix<4>;

impl<const D: usize> DensityMatrix<D> {
    pub const TOLERANCE: f64 = 1e-9;

    pub fn matrix(&self) -> &SquareMatrix<D> {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0.get(row, col)
    }

    /// `|ψ⟩⟨ψ|` for a normalized local state.
    pub fn pure(psi: [C64; D]) -> Self {
        let mut m = SquareMatrix::zeros();
        for i in 0..D {
            for j in 0..D {
                m.0[i][j] = psi[i] * psi[j].conj();
            }
        }
        Self(m)
    }

    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    /// Ascending eigenvalues with tiny negatives clamped to zero.
    pub fn eigenvalues(&self) -> [f64; D] {
        self.0.hermitian_eigen().values.map(|x| x.max(0.0))
    }

    /// Checks Hermiticity, unit trace and positive semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        let tol = Self::TOLERANCE;
        if self.0 .0.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
        }
        let herm = self.0.hermiticity_error();
        if herm > tol {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = self.0.trace();
        if (tr - ONE).norm() > tol {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} is not 1")));
        }
        let min = self.0.hermitian_eigen().values[0];
        if min < -tol {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }
}

/// `2^n` complex amplitudes.
///
/// Gate methods consume the vector and hand back the updated one, so a state
/// is never observed half-updated.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

fn check_qubits(n: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::QubitCount(n))
    }
}

fn check_wire(wire: usize, num_qubits: usize) -> Result<()> {
    if wire < num_qubits {
        Ok(())
    } else {
        Err(Error::WireOutOfRange { wire, num_qubits })
    }
}

impl StateVector {
    /// `|0…0⟩`
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::from_index(num_qubits, 0)
    }

    /// Computational basis state with amplitude 1 at `index`.
    pub fn from_index(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let len = 1usize << num_qubits;
        if index >= len {
            return Err(Error::WireOutOfRange { wire: index.ilog2() as usize, num_qubits });
        }
        let mut amps = vec![ZERO; len];
        amps[index] = ONE;
        Ok(Self { num_qubits, amps })
    }

    /// Basis state from a printed bitstring `b_{n-1} … b_0`.
    ///
    /// The left-most character is the bottom wire, so `"01"` sets wire 0.
    pub fn from_bitstring(num_qubits: usize, bits: &str) -> Result<Self> {
        check_qubits(num_qubits)?;
        let chars: Vec<char> = bits.chars().collect();
        if chars.len() != num_qubits {
            return Err(Error::BitstringLength { expected: num_qubits, got: chars.len() });
        }
        let mut index = 0;
        for (pos, ch) in chars.iter().enumerate() {
            let wire = num_qubits - 1 - pos;
            match ch {
                '0' => {}
                '1' => index |= 1 << wire,
                other => return Err(Error::BitstringChar(*other)),
            }
        }
        Self::from_index(num_qubits, index)
    }

    /// Wraps raw amplitudes; the vector must be normalized.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::AmplitudeLength(len));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_qubits(num_qubits)?;
        let s = Self { num_qubits, amps };
        s.check_norm()?;
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Fails if the squared norm is off by more than [`NORM_TOLERANCE`] or any
    /// amplitude is not finite.
    pub fn check_norm(&self) -> Result<()> {
        if let Some(i) = self.amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let drift = (self.norm_sqr() - 1.0).abs();
        if drift > NORM_TOLERANCE {
            return Err(Error::NormDrift(drift));
        }
        Ok(())
    }

    /// Applies a 2×2 unitary to `target`, restricted to indices whose control
    /// bits match. Runs in `O(2^n)` without building the full operator.
    pub fn apply_single_qubit_gate(
        mut self,
        matrix: &Mat2,
        target: usize,
        controls: &ControlSpec,
    ) -> Result<Self> {
        check_wire(target, self.num_qubits)?;
        controls.check(self.num_qubits, &[target])?;
        let err = matrix.unitarity_error();
        if err.is_nan() || err > UNITARY_TOLERANCE {
            return Err(Error::NonUnitary(err));
        }
        let [[m00, m01], [m10, m11]] = matrix.0;
        let bit = 1usize << target;
        let (mask, value) = (controls.mask(), controls.value());
        for i in 0..self.amps.len() {
            if i & bit != 0 || i & mask != value {
                continue;
            }
            let j = i | bit;
            let (a, b) = (self.amps[i], self.amps[j]);
            self.amps[i] = m00 * a + m01 * b;
            self.amps[j] = m10 * a + m11 * b;
        }
        Ok(self)
    }

    /// Multiplies every control-matching amplitude by `e^{iθ}`.
    pub fn apply_global_phase(mut self, theta: f64, controls: &ControlSpec) -> Result<Self> {
        controls.check(self.num_qubits, &[])?;
        let phase = cis(theta);
        let (mask, value) = (controls.mask(), controls.value());
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == value {
                *a *= phase;
            }
        }
        Ok(self)
    }

    /// Exchanges the amplitudes of each control-matching pair
    /// `(…0_j…1_i…, …1_j…0_i…)`.
    pub fn apply_swap(mut self, i: usize, j: usize, controls: &ControlSpec) -> Result<Self> {
        check_wire(i, self.num_qubits)?;
        check_wire(j, self.num_qubits)?;
        if i == j {
            return Err(Error::WireCollision(i));
        }
        controls.check(self.num_qubits, &[i, j])?;
        for (a, b) in swap_pairs(self.num_qubits, i, j, controls) {
            self.amps.swap(a, b);
        }
        Ok(self)
    }

    /// 2×2 reduced density matrix of wire `q`.
    pub fn partial_trace_single(&self, q: usize) -> Result<QubitDensity> {
        check_wire(q, self.num_qubits)?;
        let bit = 1usize << q;
        let mut rho = SquareMatrix::<2>::zeros();
        for k in (0..self.amps.len()).filter(|k| k & bit == 0) {
            let local = [self.amps[k], self.amps[k | bit]];
            for a in 0..2 {
                for b in 0..2 {
                    rho.0[a][b] += local[a] * local[b].conj();
                }
            }
        }
        Ok(DensityMatrix(rho))
    }

    /// 4×4 reduced density matrix of wires `(q1, q2)`.
    ///
    /// Local index is `2·bit(q2) + bit(q1)`, so `q1` is the low bit in the
    /// order given. Callers wanting the canonical form pass `q1 < q2`.
    pub fn partial_trace_pair(&self, q1: usize, q2: usize) -> Result<PairDensity> {
        check_wire(q1, self.num_qubits)?;
        check_wire(q2, self.num_qubits)?;
        if q1 == q2 {
            return Err(Error::WireCollision(q1));
        }
        let (b1, b2) = (1usize << q1, 1usize << q2);
        let offsets = [0, b1, b2, b1 | b2];
        let mut rho = SquareMatrix::<4>::zeros();
        for k in (0..self.amps.len()).filter(|k| k & (b1 | b2) == 0) {
            let local = offsets.map(|o| self.amps[k | o]);
            for a in 0..4 {
                for b in 0..4 {
                    rho.0[a][b] += local[a] * local[b].conj();
                }
            }
        }
        Ok(DensityMatrix(rho))
    }
}

/// Index pairs exchanged by a (controlled) SWAP of wires `i` and `j`, listed
/// by ascending first index. The first element has `bit_j = 0, bit_i = 1`.
pub fn swap_pairs(num_qubits: usize, i: usize, j: usize, controls: &ControlSpec) -> Vec<(usize, usize)> {
    let (bi, bj) = (1usize << i, 1usize << j);
    (0..1usize << num_qubits)
        .filter(|&k| k & bi != 0 && k & bj == 0 && controls.satisfied_by(k))
        .map(|k| (k, (k & !bi) | bj))
        .collect()
}
