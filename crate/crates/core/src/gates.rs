//! Gate vocabulary and 2×2 matrix definitions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::linalg::{cis, Mat2, C64, ONE, ZERO};

/// Every gate the circuit model knows.
///
/// The first group is the core set: gates whose effect on the state vector
/// can be annotated directly. The rest are simulated through their matrix and
/// must be expanded before they can be annotated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    /// `Z^k = diag(1, e^{iπk})`
    ZPow(f64),
    /// `diag(1, e^{iθ})`
    Phase(f64),
    GlobalPhase(f64),
    Swap,
    /// `[[e^{ia}, 0], [0, e^{ib}]]`
    ZG(f64, f64),
    /// `[[0, e^{ib}], [e^{ia}, 0]]`
    YG(f64, f64),
    /// `(1/√2)[[e^{ia}, e^{ib}], [e^{ia}, −e^{ib}]]`
    HG(f64, f64),

    XPow(f64),
    YPow(f64),
    SqrtX,
    SqrtXdg,
    SqrtY,
    SqrtYdg,
    RX(f64),
    RY(f64),
    RZ(f64),
}

/// Action of a gate on its target wire(s).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateMatrix {
    Single(Mat2),
    /// Scalar `e^{iθ}` on every control-matching amplitude.
    GlobalPhase(f64),
    Swap,
}

impl GateMatrix {
    /// The 2×2 form; SWAP has none.
    pub fn as_mat2(&self) -> Option<Mat2> {
        match *self {
            GateMatrix::Single(m) => Some(m),
            GateMatrix::GlobalPhase(theta) => Some(Mat2::identity().scale(cis(theta))),
            GateMatrix::Swap => None,
        }
    }
}

/// `diag(1, e^{iπk})`, principal branch.
pub fn z_pow(k: f64) -> Mat2 {
    Mat2::new(ONE, ZERO, ZERO, cis(PI * k))
}

/// `X^k` with the same eigenvalue branch as [`z_pow`].
pub fn x_pow(k: f64) -> Mat2 {
    let e = cis(PI * k);
    let p = (ONE + e) * 0.5;
    let m = (ONE - e) * 0.5;
    Mat2::new(p, m, m, p)
}

/// `Y^k`: eigenvalue 1 on `(|0⟩ + i|1⟩)/√2`, `e^{iπk}` on `(|0⟩ − i|1⟩)/√2`.
pub fn y_pow(k: f64) -> Mat2 {
    let e = cis(PI * k);
    let p = (ONE + e) * 0.5;
    let m = (ONE - e) * 0.5;
    let i = C64::i();
    Mat2::new(p, -i * m, i * m, p)
}

pub fn rx(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    let c = C64::new(c, 0.0);
    let mis = C64::new(0.0, -s);
    Mat2::new(c, mis, mis, c)
}

pub fn ry(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    Mat2::new(C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0))
}

pub fn rz(theta: f64) -> Mat2 {
    Mat2::new(cis(-theta / 2.0), ZERO, ZERO, cis(theta / 2.0))
}

impl GateKind {
    /// Whether the gate belongs to the annotatable core set.
    pub fn is_core(&self) -> bool {
        use GateKind::*;
        matches!(
            self,
            H | X | Y | Z | S | Sdg | T | Tdg | ZPow(_) | Phase(_) | GlobalPhase(_) | Swap | ZG(..) | YG(..) | HG(..)
        )
    }

    /// Number of target wires.
    pub fn arity(&self) -> usize {
        if matches!(self, GateKind::Swap) {
            2
        } else {
            1
        }
    }

    pub fn params(&self) -> Vec<f64> {
        use GateKind::*;
        match *self {
            ZPow(a) | Phase(a) | GlobalPhase(a) | XPow(a) | YPow(a) | RX(a) | RY(a) | RZ(a) => vec![a],
            ZG(a, b) | YG(a, b) | HG(a, b) => vec![a, b],
            _ => Vec::new(),
        }
    }

    pub fn matrix(&self) -> GateMatrix {
        use GateKind::*;
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let i = C64::i();
        let single = match *self {
            H => Mat2::new(h, h, h, -h),
            X => Mat2::new(ZERO, ONE, ONE, ZERO),
            Y => Mat2::new(ZERO, -i, i, ZERO),
            Z => Mat2::new(ONE, ZERO, ZERO, -ONE),
            S => Mat2::new(ONE, ZERO, ZERO, i),
            Sdg => Mat2::new(ONE, ZERO, ZERO, -i),
            T => Mat2::new(ONE, ZERO, ZERO, cis(PI / 4.0)),
            Tdg => Mat2::new(ONE, ZERO, ZERO, cis(-PI / 4.0)),
            ZPow(k) => z_pow(k),
            Phase(theta) => Mat2::new(ONE, ZERO, ZERO, cis(theta)),
            GlobalPhase(theta) => return GateMatrix::GlobalPhase(theta),
            Swap => return GateMatrix::Swap,
            ZG(a, b) => Mat2::new(cis(a), ZERO, ZERO, cis(b)),
            YG(a, b) => Mat2::new(ZERO, cis(b), cis(a), ZERO),
            HG(a, b) => Mat2::new(h * cis(a), h * cis(b), h * cis(a), -h * cis(b)),
            XPow(k) => x_pow(k),
            YPow(k) => y_pow(k),
            SqrtX => x_pow(0.5),
            SqrtXdg => x_pow(-0.5),
            SqrtY => y_pow(0.5),
            SqrtYdg => y_pow(-0.5),
            RX(theta) => rx(theta),
            RY(theta) => ry(theta),
            RZ(theta) => rz(theta),
        };
        GateMatrix::Single(single)
    }
}

/// Free-function form of [`GateKind::matrix`].
pub fn gate_matrix(kind: &GateKind) -> GateMatrix {
    kind.matrix()
}

impl fmt::Display for GateKind {
    /// Human-readable label, as shown on gate boxes.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GateKind::*;
        match *self {
            H => write!(f, "H"),
            X => write!(f, "X"),
            Y => write!(f, "Y"),
            Z => write!(f, "Z"),
            S => write!(f, "S"),
            Sdg => write!(f, "S†"),
            T => write!(f, "T"),
            Tdg => write!(f, "T†"),
            ZPow(k) => write!(f, "Z^{k:.3}"),
            Phase(t) => write!(f, "P({t:.3})"),
            GlobalPhase(t) => write!(f, "GP({t:.3})"),
            Swap => write!(f, "×"),
            ZG(a, b) => write!(f, "ZG({a:.2},{b:.2})"),
            YG(a, b) => write!(f, "YG({a:.2},{b:.2})"),
            HG(a, b) => write!(f, "HG({a:.2},{b:.2})"),
            XPow(k) => write!(f, "X^{k:.3}"),
            YPow(k) => write!(f, "Y^{k:.3}"),
            SqrtX => write!(f, "√X"),
            SqrtXdg => write!(f, "√X†"),
            SqrtY => write!(f, "√Y"),
            SqrtYdg => write!(f, "√Y†"),
            RX(t) => write!(f, "RX({t:.3})"),
            RY(t) => write!(f, "RY({t:.3})"),
            RZ(t) => write!(f, "RZ({t:.3})"),
        }
    }
}
