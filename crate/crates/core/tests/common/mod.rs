//! Test-only oracles and generators. Nothing here calls the qubit-wise
//! application path or the partial-trace routines of the crate.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use qlayers_core::{Circuit, Control, ControlSpec, GateKind, GateMatrix, GatePlacement, Layer};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Dense = Vec<Vec<C64>>;

pub fn identity(dim: usize) -> Dense {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect())
        .collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![C64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Dense, v: &[C64]) -> Vec<C64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

fn controls_match(k: usize, controls: &ControlSpec) -> bool {
    controls.iter().all(|c| {
        let bit = (k >> c.wire) & 1;
        match c.polarity {
            qlayers_core::Polarity::Control => bit == 1,
            qlayers_core::Polarity::Anticontrol => bit == 0,
        }
    })
}

/// Full `2^n × 2^n` operator of one placement, built column by column from
/// the basis-state definition.
pub fn placement_operator(n: usize, p: &GatePlacement) -> Dense {
    let dim = 1usize << n;
    let mut u = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        if !controls_match(col, &p.controls) {
            u[col][col] = C64::new(1.0, 0.0);
            continue;
        }
        match p.kind.matrix() {
            GateMatrix::Single(m) => {
                let t = p.targets[0];
                let b = (col >> t) & 1;
                for a in 0..2 {
                    let row = (col & !(1 << t)) | (a << t);
                    u[row][col] += m.0[a][b];
                }
            }
            GateMatrix::GlobalPhase(theta) => u[col][col] = C64::from_polar(1.0, theta),
            GateMatrix::Swap => {
                let (i, j) = (p.targets[0], p.targets[1]);
                let (bi, bj) = ((col >> i) & 1, (col >> j) & 1);
                let row = (col & !(1 << i) & !(1 << j)) | (bj << i) | (bi << j);
                u[row][col] = C64::new(1.0, 0.0);
            }
        }
    }
    u
}

pub fn circuit_unitary(c: &Circuit) -> Dense {
    let n = c.num_wires();
    let mut u = identity(1 << n);
    for layer in &c.layers {
        for p in &layer.placements {
            u = matmul(&placement_operator(n, p), &u);
        }
    }
    u
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn dense_max_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter().zip(b).map(|(x, y)| max_diff(x, y)).fold(0.0, f64::max)
}

/// Reduced density matrix over `wires` (first wire = lowest local bit),
/// from the full `|ψ⟩⟨ψ|` by brute-force summation over matching indices.
pub fn reduced_density(psi: &[C64], wires: &[usize]) -> Dense {
    let dim = 1usize << wires.len();
    let mask: usize = wires.iter().map(|w| 1 << w).sum();
    let local = |k: usize| wires.iter().enumerate().map(|(pos, w)| ((k >> w) & 1) << pos).sum::<usize>();
    let mut rho = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    for k in 0..psi.len() {
        for l in 0..psi.len() {
            if k & !mask == l & !mask {
                rho[local(k)][local(l)] += psi[k] * psi[l].conj();
            }
        }
    }
    rho
}

pub fn random_angle(rng: &mut impl Rng) -> f64 {
    rng.gen_range(-2.0 * PI..2.0 * PI)
}

pub fn random_core_kind(rng: &mut impl Rng) -> GateKind {
    use GateKind::*;
    match rng.gen_range(0..14) {
        0 => H,
        1 => X,
        2 => Y,
        3 => Z,
        4 => S,
        5 => Sdg,
        6 => T,
        7 => Tdg,
        8 => ZPow(rng.gen_range(-2.0..2.0)),
        9 => Phase(random_angle(rng)),
        10 => GlobalPhase(random_angle(rng)),
        11 => ZG(random_angle(rng), random_angle(rng)),
        12 => YG(random_angle(rng), random_angle(rng)),
        _ => HG(random_angle(rng), random_angle(rng)),
    }
}

pub fn random_noncore_kind(rng: &mut impl Rng) -> GateKind {
    use GateKind::*;
    match rng.gen_range(0..9) {
        0 => XPow(rng.gen_range(-2.0..2.0)),
        1 => YPow(rng.gen_range(-2.0..2.0)),
        2 => SqrtX,
        3 => SqrtXdg,
        4 => SqrtY,
        5 => SqrtYdg,
        6 => RX(random_angle(rng)),
        7 => RY(random_angle(rng)),
        _ => RZ(random_angle(rng)),
    }
}

/// A single placement on `n` wires with random targets and a random set of
/// controls/anticontrols. SWAP appears with probability `swap_p` when n ≥ 2.
pub fn random_placement(rng: &mut impl Rng, n: usize, noncore: bool, swap_p: f64) -> GatePlacement {
    let mut wires: Vec<usize> = (0..n).collect();
    wires.shuffle(rng);
    let (kind, ntargets) = if n >= 2 && rng.gen_bool(swap_p) {
        (GateKind::Swap, 2)
    } else if noncore && rng.gen_bool(0.5) {
        (random_noncore_kind(rng), 1)
    } else {
        (random_core_kind(rng), 1)
    };
    let targets: Vec<usize> = wires[..ntargets].to_vec();
    let spare = &wires[ntargets..];
    let nctl = rng.gen_range(0..=spare.len().min(3));
    let controls = ControlSpec::new(spare[..nctl].iter().map(|&w| {
        if rng.gen_bool(0.5) {
            Control::on(w)
        } else {
            Control::off(w)
        }
    }))
    .unwrap();
    GatePlacement { kind, targets, controls }
}

pub fn random_circuit(rng: &mut impl Rng, n: usize, depth: usize, noncore: bool) -> Circuit {
    let layers = (0..depth).map(|_| Layer::single(random_placement(rng, n, noncore, 0.1))).collect();
    Circuit::with_layers(n, layers).unwrap()
}

/// Random normalized state.
pub fn random_state(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..1 << n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);
    v
}
