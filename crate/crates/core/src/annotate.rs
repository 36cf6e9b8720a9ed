//! Difference annotations: a replayable description of how one layer's gate
//! transforms the state vector.
//!
//! For a gate on wire `j`, the amplitudes it touches (those whose control
//! bits match) split into an *even* subset (bit `j` = 0) and an *odd* subset
//! (bit `j` = 1), paired by flipping bit `j`. Every core gate is then one of:
//! a rotation of a subset, a rotation of both subsets with an optional
//! exchange, an add/subtract butterfly, or a set of swapped pairs.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use serde::Serialize;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates::GateKind;
use crate::linalg::{cis, C64};
use crate::state::{swap_pairs, ControlSpec, StateVector};

/// An angle normalized to `(−π, π]`, with the gate's raw parameter kept.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Angle {
    pub value: f64,
    pub raw: f64,
}

impl Angle {
    pub fn new(raw: f64) -> Self {
        let mut value = raw.rem_euclid(2.0 * PI);
        if value > PI {
            value -= 2.0 * PI;
        }
        Self { value, raw }
    }
}

/// Highlight colour label. Renderers map labels to a palette.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Green,
    Purple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmplitudePartition {
    /// Target bit 0, controls satisfied. Ascending.
    pub even: Vec<usize>,
    /// `even[k] | 1 << target` for every `k`.
    pub odd: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SwapLayoutClass {
    SameColumn,
    SameRow,
    Diagonal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LayerAnnotation {
    /// Multiply `subset` by `e^{i·angle}`.
    Rotation { subset: Vec<usize>, angle: Angle, color: Color },
    /// Rotate the even subset by `angle_even` and the odd one by
    /// `angle_odd`, then exchange paired amplitudes if `exchange`.
    DualRotation { partition: AmplitudePartition, angle_even: Angle, angle_odd: Angle, exchange: bool },
    /// Rotate as above, then `even' = (even + odd)/√2`,
    /// `odd' = (even − odd)/√2`.
    Butterfly { partition: AmplitudePartition, angle_even: Angle, angle_odd: Angle },
    SwapPairs { pairs: Vec<(usize, usize)>, layout_class: SwapLayoutClass },
    Unsupported { reason: String },
}

impl LayerAnnotation {
    pub fn is_supported(&self) -> bool {
        !matches!(self, LayerAnnotation::Unsupported { .. })
    }
}

/// Display wrapping: `2^{n−K}` rows × `2^K` columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GridLayout {
    pub num_qubits: usize,
    pub column_bits: usize,
}

impl GridLayout {
    pub fn new(num_qubits: usize, column_bits: usize) -> Result<Self> {
        if column_bits > num_qubits {
            return Err(Error::Layout { column_bits, num_qubits });
        }
        Ok(Self { num_qubits, column_bits })
    }

    pub fn rows(&self) -> usize {
        1 << (self.num_qubits - self.column_bits)
    }

    pub fn columns(&self) -> usize {
        1 << self.column_bits
    }

    /// `(row, col)`: low `K` bits pick the column, the rest the row.
    pub fn position(&self, index: usize) -> (usize, usize) {
        (index >> self.column_bits, index & (self.columns() - 1))
    }
}

pub fn layout_position(index: usize, layout: &GridLayout) -> (usize, usize) {
    layout.position(index)
}

/// Where the two amplitudes of each swapped pair sit relative to each other.
pub fn swap_layout_class(i: usize, j: usize, layout: &GridLayout) -> Result<SwapLayoutClass> {
    if i == j {
        return Err(Error::WireCollision(i));
    }
    let (lo, hi) = (i.min(j), i.max(j));
    let k = layout.column_bits;
    Ok(if k <= lo {
        SwapLayoutClass::SameColumn
    } else if hi < k {
        SwapLayoutClass::SameRow
    } else {
        SwapLayoutClass::Diagonal
    })
}

/// Indices whose control bits match.
pub fn affected_set(num_qubits: usize, controls: &ControlSpec) -> Vec<usize> {
    (0..1usize << num_qubits).filter(|&k| controls.satisfied_by(k)).collect()
}

pub fn even_odd_partition(num_qubits: usize, target: usize, controls: &ControlSpec) -> Result<AmplitudePartition> {
    if target >= num_qubits {
        return Err(Error::WireOutOfRange { wire: target, num_qubits });
    }
    if controls.contains_wire(target) {
        return Err(Error::WireCollision(target));
    }
    let bit = 1usize << target;
    let even: Vec<usize> = affected_set(num_qubits, controls).into_iter().filter(|k| k & bit == 0).collect();
    let odd = even.iter().map(|k| k | bit).collect();
    Ok(AmplitudePartition { even, odd })
}

fn unsupported(reason: impl Into<String>) -> LayerAnnotation {
    LayerAnnotation::Unsupported { reason: reason.into() }
}

/// Annotation for layer `layer_index`. Layers that are empty, hold more than
/// one gate, or hold a non-core gate come back as `Unsupported`.
pub fn annotate_layer(c: &Circuit, layer_index: usize, layout: &GridLayout) -> Result<LayerAnnotation> {
    let layer = c
        .layers
        .get(layer_index)
        .ok_or(Error::LayerOutOfRange { index: layer_index, depth: c.depth() })?;
    let n = c.num_wires();
    let p = match &layer.placements[..] {
        [] => return Ok(unsupported("empty layer")),
        [p] => p,
        _ => return Ok(unsupported("more than one gate in layer")),
    };
    if !p.kind.is_core() {
        return Ok(unsupported("non-core gate"));
    }
    if p.targets.len() != p.kind.arity() {
        return Err(Error::InvalidCircuit(format!("layer {layer_index}: wrong number of targets")));
    }
    for &t in &p.targets {
        if t >= n {
            return Err(Error::WireOutOfRange { wire: t, num_qubits: n });
        }
    }
    p.controls.check(n, &p.targets)?;

    use GateKind::*;
    let odd_rotation = |raw: f64| -> Result<LayerAnnotation> {
        let part = even_odd_partition(n, p.target(), &p.controls)?;
        Ok(LayerAnnotation::Rotation { subset: part.odd, angle: Angle::new(raw), color: Color::Green })
    };
    let dual = |a: f64, b: f64, exchange: bool| -> Result<LayerAnnotation> {
        Ok(LayerAnnotation::DualRotation {
            partition: even_odd_partition(n, p.target(), &p.controls)?,
            angle_even: Angle::new(a),
            angle_odd: Angle::new(b),
            exchange,
        })
    };
    let butterfly = |a: f64, b: f64| -> Result<LayerAnnotation> {
        Ok(LayerAnnotation::Butterfly {
            partition: even_odd_partition(n, p.target(), &p.controls)?,
            angle_even: Angle::new(a),
            angle_odd: Angle::new(b),
        })
    };

    match p.kind {
        Z => odd_rotation(PI),
        S => odd_rotation(FRAC_PI_2),
        Sdg => odd_rotation(-FRAC_PI_2),
        T => odd_rotation(FRAC_PI_4),
        Tdg => odd_rotation(-FRAC_PI_4),
        ZPow(k) => odd_rotation(k * PI),
        Phase(theta) => odd_rotation(theta),
        GlobalPhase(theta) => Ok(LayerAnnotation::Rotation {
            subset: affected_set(n, &p.controls),
            angle: Angle::new(theta),
            color: Color::Green,
        }),
        X => dual(0.0, 0.0, true),
        Y => dual(FRAC_PI_2, -FRAC_PI_2, true),
        ZG(a, b) => dual(a, b, false),
        YG(a, b) => dual(a, b, true),
        H => butterfly(0.0, 0.0),
        HG(a, b) => butterfly(a, b),
        Swap => {
            let (i, j) = (p.targets[0].min(p.targets[1]), p.targets[0].max(p.targets[1]));
            Ok(LayerAnnotation::SwapPairs {
                pairs: swap_pairs(n, i, j, &p.controls),
                layout_class: swap_layout_class(i, j, layout)?,
            })
        }
        XPow(_) | YPow(_) | SqrtX | SqrtXdg | SqrtY | SqrtYdg | RX(_) | RY(_) | RZ(_) => {
            unreachable!("non-core gates handled above")
        }
    }
}

/// Annotations for every layer of a circuit.
pub fn annotate_circuit(c: &Circuit, layout: &GridLayout) -> Result<Vec<LayerAnnotation>> {
    (0..c.depth()).map(|i| annotate_layer(c, i, layout)).collect()
}

fn check_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Result<()> {
    for i in indices {
        if i >= len {
            return Err(Error::Unsupported(format!("index {i} beyond state length {len}")));
        }
    }
    Ok(())
}

fn check_partition(len: usize, part: &AmplitudePartition) -> Result<()> {
    if part.even.len() != part.odd.len() {
        return Err(Error::Unsupported("even and odd subsets differ in size".into()));
    }
    check_indices(len, part.even.iter().chain(&part.odd).copied())
}

/// Executes an annotation literally. This is independent of the gate
/// matrices, so replaying it against the simulator checks that the
/// annotation tells the whole story.
pub fn apply_annotation(state: StateVector, a: &LayerAnnotation) -> Result<StateVector> {
    let mut amps = state.into_amplitudes();
    let len = amps.len();
    match a {
        LayerAnnotation::Unsupported { reason } => return Err(Error::Unsupported(reason.clone())),
        LayerAnnotation::Rotation { subset, angle, .. } => {
            check_indices(len, subset.iter().copied())?;
            let phase = cis(angle.value);
            for &k in subset {
                amps[k] *= phase;
            }
        }
        LayerAnnotation::DualRotation { partition, angle_even, angle_odd, exchange } => {
            check_partition(len, partition)?;
            let (pe, po) = (cis(angle_even.value), cis(angle_odd.value));
            for (&e, &o) in partition.even.iter().zip(&partition.odd) {
                let (ve, vo) = (amps[e] * pe, amps[o] * po);
                if *exchange {
                    amps[e] = vo;
                    amps[o] = ve;
                } else {
                    amps[e] = ve;
                    amps[o] = vo;
                }
            }
        }
        LayerAnnotation::Butterfly { partition, angle_even, angle_odd } => {
            check_partition(len, partition)?;
            let (pe, po) = (cis(angle_even.value), cis(angle_odd.value));
            let s = C64::new(FRAC_1_SQRT_2, 0.0);
            for (&e, &o) in partition.even.iter().zip(&partition.odd) {
                let (ve, vo) = (amps[e] * pe, amps[o] * po);
                amps[e] = (ve + vo) * s;
                amps[o] = (ve - vo) * s;
            }
        }
        LayerAnnotation::SwapPairs { pairs, .. } => {
            check_indices(len, pairs.iter().flat_map(|&(x, y)| [x, y]))?;
            for &(x, y) in pairs {
                amps.swap(x, y);
            }
        }
    }
    StateVector::from_amplitudes(amps)
}
