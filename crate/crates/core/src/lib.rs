//! Layer-by-layer state-vector simulation with difference annotations.
//!
//! The crate is organised around a few pieces:
//!
//! * [`state`]: dense state vectors, matrix-free gate application and
//!   partial traces.
//! * [`gates`], [`circuit`], [`format`]: the gate vocabulary, circuit
//!   structure and the JSON/query-string text form.
//! * [`expand`]: rewriting of non-core gates into annotatable core gates.
//! * [`annotate`]: per-layer descriptions of how a gate moves, rotates and
//!   mixes amplitudes, plus wrapped-grid coordinates.
//! * [`analytics`]: single-qubit and pairwise statistics (correlation,
//!   concurrence, entropies) and bar scaling.

pub mod analytics;
pub mod annotate;
pub mod circuit;
pub mod error;
pub mod expand;
pub mod format;
pub mod gates;
pub mod linalg;
pub mod state;

pub use circuit::{Circuit, GatePlacement, Layer, Violation};
pub use error::{Error, Result};
pub use format::{parse_any, parse_circuit, serialize_circuit, ParseError};
pub use gates::{GateKind, GateMatrix};
pub use linalg::{Mat2, Mat4, C64};
pub use state::{Control, ControlSpec, DensityMatrix, PairDensity, Polarity, QubitDensity, StateVector};
