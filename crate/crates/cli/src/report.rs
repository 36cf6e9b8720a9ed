//! The simulation report: one JSON document holding every layer's state,
//! its difference annotation, per-qubit statistics and the final pairwise
//! half-matrix.

use serde::Serialize;

use qlayers_core::analytics::{all_qubit_stats, bar_length, half_matrix, BarMode, HalfMatrix, QubitStats};
use qlayers_core::annotate::{annotate_layer, GridLayout, LayerAnnotation};
use qlayers_core::expand::{expand_circuit, ExpansionMode};
use qlayers_core::{serialize_circuit, Circuit, Result};

pub const SCHEMA_VERSION: &str = "1.0";

/// Pair metrics shown as the half-matrix mixedness bars.
pub const MIXEDNESS_METRICS: [&str; 2] = ["linear_entropy", "von_neumann_entropy"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpandMode {
    Basic,
    Generalized,
}

impl ExpandMode {
    pub fn expansion_mode(self, keep_global_phase: bool) -> ExpansionMode {
        ExpansionMode { use_generalized: self == ExpandMode::Generalized, keep_global_phase }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReportOptions {
    pub bars: BarMode,
    pub decades: u32,
    /// Column bits `K`; `None` picks the default for the circuit's width.
    #[serde(skip)]
    pub layout: Option<usize>,
    pub expand: Option<ExpandMode>,
    pub keep_global_phase: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { bars: BarMode::Probability, decades: 6, layout: None, expand: None, keep_global_phase: true }
    }
}

/// `K = max(0, n − 4)`.
pub fn default_column_bits(num_qubits: usize) -> usize {
    num_qubits.saturating_sub(4)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LayerRecord {
    /// 0 is the initial `|0…0⟩`; record `k + 1` is the state after layer `k`.
    pub index: usize,
    pub amplitudes: Vec<[f64; 2]>,
    pub probabilities: Vec<f64>,
    pub bar_lengths: Vec<f64>,
    pub qubit_stats: Vec<QubitStats>,
    /// How layer `index` transforms this state. Null for the final record and
    /// for layers that cannot be annotated.
    pub annotation: Option<LayerAnnotation>,
    pub unsupported_reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub schema_version: &'static str,
    /// Canonical text of the input circuit.
    pub circuit: String,
    /// Canonical text of the circuit actually simulated, when expanded.
    pub expanded_circuit: Option<String>,
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub rows: usize,
    pub columns: usize,
    pub options: ReportOptions,
    pub warnings: Vec<String>,
    pub layers: Vec<LayerRecord>,
    pub mixedness_metrics: [&'static str; 2],
    pub half_matrix: HalfMatrix,
}

impl SimulationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are always serializable");
        s.push('\n');
        s
    }
}

pub fn build_report(input: &Circuit, options: &ReportOptions) -> Result<SimulationReport> {
    let n = input.num_wires();
    let layout = GridLayout::new(n, options.layout.unwrap_or_else(|| default_column_bits(n)))?;

    let (circuit, warnings, expanded_circuit) = match options.expand {
        Some(mode) => {
            let (c, w) = expand_circuit(input, mode.expansion_mode(options.keep_global_phase))?;
            let text = serialize_circuit(&c);
            (c, w, Some(text))
        }
        None => (input.clone(), Vec::new(), None),
    };

    let states = circuit.simulate()?;
    let mut layers = Vec::with_capacity(states.len());
    for (index, state) in states.iter().enumerate() {
        let (annotation, unsupported_reason) = if index < circuit.depth() {
            match annotate_layer(&circuit, index, &layout)? {
                LayerAnnotation::Unsupported { reason } => (None, Some(reason)),
                a => (Some(a), None),
            }
        } else {
            (None, None)
        };
        let probabilities = state.probabilities();
        layers.push(LayerRecord {
            index,
            amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
            bar_lengths: probabilities.iter().map(|&p| bar_length(p, options.bars, options.decades)).collect(),
            probabilities,
            qubit_stats: all_qubit_stats(state)?,
            annotation,
            unsupported_reason,
        });
    }

    let last = states.last().expect("simulate yields at least the initial state");
    let half_matrix = if n >= 2 { half_matrix(last)? } else { HalfMatrix { num_qubits: n, cells: Vec::new() } };

    Ok(SimulationReport {
        schema_version: SCHEMA_VERSION,
        circuit: serialize_circuit(input),
        expanded_circuit,
        n,
        k: layout.column_bits,
        rows: layout.rows(),
        columns: layout.columns(),
        options: *options,
        warnings,
        layers,
        mixedness_metrics: MIXEDNESS_METRICS,
        half_matrix,
    })
}
