//! Rewriting non-core gates as sequences of core gates.
//!
//! The rewrite rules are written as operator products, left to right, exactly
//! as one would write the matrix identity. A product `A B C` acts on a state as
//! `C` first, so the emitted circuit order is the reverse of the listing.

use std::f64::consts::PI;

use crate::circuit::{Circuit, GatePlacement, Layer};
use crate::error::Result;
use crate::gates::GateKind::{self, *};
use crate::linalg::{Mat2, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpansionMode {
    /// Use `Z_G`, `Y_G`, `H_G` for shorter expansions.
    pub use_generalized: bool,
    /// Keep `GlobalPhase` gates. When false they are dropped from
    /// uncontrolled expansions; controlled ones are kept since they are not
    /// global there.
    pub keep_global_phase: bool,
}

impl ExpansionMode {
    pub const BASIC: Self = Self { use_generalized: false, keep_global_phase: true };
    pub const GENERALIZED: Self = Self { use_generalized: true, keep_global_phase: true };
}

impl Default for ExpansionMode {
    fn default() -> Self {
        Self::BASIC
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionResult {
    /// Core gates in circuit order.
    pub gates: Vec<GatePlacement>,
    /// Number of layers that replace the original gate.
    pub cost: usize,
    pub warnings: Vec<String>,
}

/// Rewrite rule for a non-core gate as an operator product (leftmost factor
/// acts last). Core gates have no rule.
pub fn expansion_product(kind: &GateKind, use_generalized: bool) -> Option<Vec<GateKind>> {
    let product = if use_generalized {
        match *kind {
            SqrtX => vec![HG(0.0, PI / 2.0), H],
            SqrtXdg => vec![HG(0.0, -PI / 2.0), H],
            SqrtY => vec![HG(PI / 4.0, 5.0 * PI / 4.0)],
            SqrtYdg => vec![ZG(-PI / 4.0, -5.0 * PI / 4.0), H],
            XPow(k) => vec![HG(0.0, k * PI), H],
            YPow(k) => vec![HG(0.0, -PI / 2.0), HG(0.0, k * PI), HG(0.0, PI / 2.0), H],
            RX(t) => vec![HG(0.0, t), HG(-t / 2.0, -t / 2.0)],
            RY(t) => vec![HG(0.0, -PI / 2.0), HG(0.0, t), HG(0.0, PI / 2.0), HG(-t / 2.0, -t / 2.0)],
            RZ(t) => vec![ZG(-t / 2.0, t / 2.0)],
            _ => return None,
        }
    } else {
        match *kind {
            SqrtX => vec![H, S, H],
            SqrtXdg => vec![H, Sdg, H],
            SqrtY => vec![H, Z, GlobalPhase(PI / 4.0)],
            SqrtYdg => vec![Z, H, GlobalPhase(-PI / 4.0)],
            XPow(k) => vec![H, ZPow(k), H],
            YPow(k) => vec![H, Sdg, H, ZPow(k), H, S, H],
            RX(t) => vec![H, ZPow(t / PI), H, GlobalPhase(-t / 2.0)],
            RY(t) => vec![H, Sdg, H, ZPow(t / PI), H, S, H, GlobalPhase(-t / 2.0)],
            RZ(t) => vec![ZPow(t / PI), GlobalPhase(-t / 2.0)],
            _ => return None,
        }
    };
    Some(product)
}

/// Replaces a non-core gate with core gates, each carrying the original
/// controls. Core gates pass through with cost 1.
pub fn expand_gate(g: &GatePlacement, mode: ExpansionMode) -> ExpansionResult {
    let Some(product) = expansion_product(&g.kind, mode.use_generalized) else {
        return ExpansionResult { gates: vec![g.clone()], cost: 1, warnings: Vec::new() };
    };
    let mut warnings = Vec::new();
    let gates: Vec<GatePlacement> = product
        .into_iter()
        .rev()
        .filter(|kind| {
            if mode.keep_global_phase || !matches!(kind, GlobalPhase(_)) {
                return true;
            }
            if g.controls.is_empty() {
                return false;
            }
            warnings.push(format!(
                "kept controlled {kind:?} while expanding {:?}: with controls it is a relative phase",
                g.kind
            ));
            true
        })
        .map(|kind| GatePlacement {
            kind,
            targets: g.targets.clone(),
            controls: g.controls.clone(),
        })
        .collect();
    let cost = gates.len();
    ExpansionResult { gates, cost, warnings }
}

/// Product of the expansion's matrices, in operator order.
pub fn expansion_matrix(r: &ExpansionResult) -> Option<Mat2> {
    r.gates
        .iter()
        .try_fold(Mat2::identity(), |acc, g| Some(g.kind.matrix().as_mat2()? * acc))
}

/// Spectral-norm distance between the expansion's product and the original
/// gate's matrix. With `keep_global_phase == false` the product is first
/// rotated so that its entry at the position of the original's
/// largest-magnitude entry has the same phase. Two-target gates only compare
/// equal to themselves.
pub fn verify_expansion(g: &GatePlacement, r: &ExpansionResult, keep_global_phase: bool) -> f64 {
    let (Some(target), Some(mut product)) = (g.kind.matrix().as_mat2(), expansion_matrix(r)) else {
        let same = r.gates.len() == 1 && r.gates[0].kind == g.kind;
        return if same { 0.0 } else { f64::INFINITY };
    };
    if !keep_global_phase {
        let (i, j) = target.argmax_abs();
        let p = product.get(i, j);
        if p.norm() > 1e-12 {
            let ratio = target.get(i, j) / p;
            product = product.scale(ratio / ratio.norm());
        }
    }
    (product - target).spectral_norm()
}

/// Expands every non-core placement, one gate per layer. Layers holding only
/// core gates are copied through unchanged.
pub fn expand_circuit(c: &Circuit, mode: ExpansionMode) -> Result<(Circuit, Vec<String>)> {
    let mut layers = Vec::new();
    let mut warnings = Vec::new();
    for layer in &c.layers {
        if layer.placements.iter().all(|p| p.kind.is_core()) {
            layers.push(layer.clone());
            continue;
        }
        for p in &layer.placements {
            let r = expand_gate(p, mode);
            warnings.extend(r.warnings);
            layers.extend(r.gates.into_iter().map(Layer::single));
        }
    }
    Ok((Circuit::with_layers(c.num_wires(), layers)?, warnings))
}

/// `C64` phase factor relating the product to the original, `U ≈ φ·Π`.
pub fn phase_offset(g: &GatePlacement, r: &ExpansionResult) -> Option<C64> {
    let target = g.kind.matrix().as_mat2()?;
    let product = expansion_matrix(r)?;
    let (i, j) = target.argmax_abs();
    let ratio = target.get(i, j) / product.get(i, j);
    Some(ratio / ratio.norm())
}
