//! Circuit structure: wires, layers and gate placements.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::{GateKind, GateMatrix};
use crate::state::{ControlSpec, StateVector, MAX_QUBITS};

/// One gate on its target wire(s), optionally controlled.
#[derive(Clone, Debug, PartialEq)]
pub struct GatePlacement {
    pub kind: GateKind,
    /// One wire, or two for SWAP.
    pub targets: Vec<usize>,
    pub controls: ControlSpec,
}

impl GatePlacement {
    pub fn new(kind: GateKind, target: usize) -> Self {
        Self { kind, targets: vec![target], controls: ControlSpec::none() }
    }

    pub fn swap(i: usize, j: usize) -> Self {
        Self { kind: GateKind::Swap, targets: vec![i, j], controls: ControlSpec::none() }
    }

    pub fn with_controls(mut self, controls: ControlSpec) -> Self {
        self.controls = controls;
        self
    }

    pub fn target(&self) -> usize {
        self.targets[0]
    }

    /// Targets followed by control wires.
    pub fn wires(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets.iter().copied().chain(self.controls.wires())
    }

    /// Applies this placement to a state.
    pub fn apply(&self, state: StateVector) -> Result<StateVector> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::InvalidCircuit(format!(
                "{:?} expects {} target(s), got {}",
                self.kind,
                self.kind.arity(),
                self.targets.len()
            )));
        }
        match self.kind.matrix() {
            GateMatrix::Single(m) => state.apply_single_qubit_gate(&m, self.targets[0], &self.controls),
            GateMatrix::GlobalPhase(theta) => {
                // the target wire only anchors the gate in the diagram
                if self.targets[0] >= state.num_qubits() {
                    return Err(Error::WireOutOfRange { wire: self.targets[0], num_qubits: state.num_qubits() });
                }
                self.controls.check(state.num_qubits(), &self.targets)?;
                state.apply_global_phase(theta, &self.controls)
            }
            GateMatrix::Swap => state.apply_swap(self.targets[0], self.targets[1], &self.controls),
        }
    }
}

/// Gates sharing one column of the diagram.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Layer {
    pub placements: Vec<GatePlacement>,
}

impl Layer {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(placement: GatePlacement) -> Self {
        Self { placements: vec![placement] }
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }
}

impl From<GatePlacement> for Layer {
    fn from(p: GatePlacement) -> Self {
        Layer::single(p)
    }
}

/// Wires × layers.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_wires: usize,
    pub layers: Vec<Layer>,
}

/// One broken structural rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// `None` for circuit-wide problems.
    pub layer: Option<usize>,
    pub wires: Vec<usize>,
    pub reason: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.layer {
            Some(l) => write!(f, "layer {l}, wires {:?}: {}", self.wires, self.reason),
            None => write!(f, "wires {:?}: {}", self.wires, self.reason),
        }
    }
}

impl Circuit {
    /// Empty circuit; zero wires is rejected.
    pub fn new(num_wires: usize) -> Result<Self> {
        if num_wires == 0 {
            return Err(Error::QubitCount(0));
        }
        Ok(Self { num_wires, layers: Vec::new() })
    }

    pub fn with_layers(num_wires: usize, layers: Vec<Layer>) -> Result<Self> {
        let mut c = Self::new(num_wires)?;
        c.layers = layers;
        Ok(c)
    }

    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Appends a single-gate layer.
    pub fn push(&mut self, placement: GatePlacement) -> &mut Self {
        self.layers.push(Layer::single(placement));
        self
    }

    pub fn push_layer(&mut self, layer: Layer) -> &mut Self {
        self.layers.push(layer);
        self
    }

    /// All structural problems; empty iff the circuit is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.num_wires;
        let mut out = Vec::new();
        if n > MAX_QUBITS {
            out.push(Violation {
                layer: None,
                wires: vec![],
                reason: format!("{n} wires exceed the maximum of {MAX_QUBITS}"),
            });
        }
        for (li, layer) in self.layers.iter().enumerate() {
            let mut used_targets: BTreeSet<usize> = BTreeSet::new();
            let mut ctl_wires: BTreeSet<usize> = BTreeSet::new();
            for p in &layer.placements {
                let mut v = |wires: Vec<usize>, reason: String| {
                    out.push(Violation { layer: Some(li), wires, reason })
                };
                if p.targets.len() != p.kind.arity() {
                    v(p.targets.clone(), format!("gate needs {} target(s)", p.kind.arity()));
                }
                if let Some(bad) = p.kind.params().iter().find(|x| !x.is_finite()) {
                    v(p.targets.clone(), format!("non-finite parameter {bad}"));
                }
                let out_of_range: Vec<usize> = p.wires().filter(|&w| w >= n).collect();
                if !out_of_range.is_empty() {
                    v(out_of_range, format!("wire beyond circuit width {n}"));
                }
                let mut seen = BTreeSet::new();
                let dup: Vec<usize> = p.wires().filter(|w| !seen.insert(*w)).collect();
                if !dup.is_empty() {
                    v(dup, "wire used as both target and control".into());
                }
                let clash: Vec<usize> = p.targets.iter().copied().filter(|t| !used_targets.insert(*t)).collect();
                if !clash.is_empty() {
                    v(clash, "wire targeted twice in one layer".into());
                }
                ctl_wires.extend(p.controls.wires());
            }
            let cross: Vec<usize> = used_targets.intersection(&ctl_wires).copied().collect();
            if !cross.is_empty() && layer.placements.len() > 1 {
                out.push(Violation {
                    layer: Some(li),
                    wires: cross,
                    reason: "wire is a target of one gate and a control of another".into(),
                });
            }
            if layer.placements.windows(2).any(|w| w[0].controls != w[1].controls) {
                out.push(Violation {
                    layer: Some(li),
                    wires: ctl_wires.iter().copied().collect(),
                    reason: "gates in one layer must share the same controls".into(),
                });
            }
        }
        out
    }

    fn ensure_valid(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidCircuit(v.to_string())),
        }
    }

    /// Applies one layer. Gates within a layer act on disjoint targets under
    /// shared controls, so they commute and are applied in stored order.
    pub fn apply_layer(&self, index: usize, state: StateVector) -> Result<StateVector> {
        let layer = self
            .layers
            .get(index)
            .ok_or(Error::LayerOutOfRange { index, depth: self.depth() })?;
        let state = layer.placements.iter().try_fold(state, |s, p| p.apply(s))?;
        state.check_norm()?;
        Ok(state)
    }

    /// States before layer 0, after layer 0, …, after the last layer
    /// (`depth + 1` entries), starting from `|0…0⟩`.
    pub fn simulate(&self) -> Result<Vec<StateVector>> {
        self.simulate_from(StateVector::zero(self.num_wires)?)
    }

    pub fn simulate_from(&self, initial: StateVector) -> Result<Vec<StateVector>> {
        self.ensure_valid()?;
        if initial.num_qubits() != self.num_wires {
            return Err(Error::InvalidCircuit(format!(
                "initial state has {} qubits, circuit has {} wires",
                initial.num_qubits(),
                self.num_wires
            )));
        }
        let mut states = Vec::with_capacity(self.depth() + 1);
        states.push(initial);
        for i in 0..self.depth() {
            let next = self.apply_layer(i, states[i].clone())?;
            states.push(next);
        }
        Ok(states)
    }

    /// Final state only.
    pub fn run(&self) -> Result<StateVector> {
        Ok(self.simulate()?.pop().expect("simulate yields at least the initial state"))
    }
}
