//! Circuit text format.
//!
//! A circuit is a JSON object `{"wires": n, "cols": [[token, …], …]}`. Each
//! column lists one token per wire, top wire first; short columns are padded
//! with `"-"`. Controls (`"C"`) and anticontrols (`"A"`) in a column apply to
//! every gate in that column.
//!
//! | token | meaning |
//! |---|---|
//! | `-` | empty |
//! | `C`, `A` | control, anticontrol |
//! | `H X Y Z S Sdg T Tdg SWAP` | fixed gates |
//! | `SX SXdg SY SYdg` | square roots of X and Y and their inverses |
//! | `Z^(k) X^(k) Y^(k)` | powers |
//! | `P(θ) GP(θ) RX(θ) RY(θ) RZ(θ)` | angle gates |
//! | `ZG(a,b) YG(a,b) HG(a,b)` | generalized gates |
//!
//! Angles are radians unless suffixed with `deg`, e.g. `P(120deg)`.
//! Serialization writes radians with the shortest decimal that round-trips.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, GatePlacement, Layer};
use crate::gates::GateKind;
use crate::state::{Control, ControlSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("circuit must have at least one wire")]
    NoWires,

    #[error("column {col}: token on wire {wire} but circuit has {wires} wires")]
    WireCollision { col: usize, wire: usize, wires: usize },

    #[error("column {col}, wire {wire}: unknown token {token:?}")]
    UnknownToken { col: usize, wire: usize, token: String },

    #[error("column {col}, wire {wire}: malformed parameter in {token:?}")]
    MalformedParameter { col: usize, wire: usize, token: String },

    #[error("column {col}: SWAP needs exactly two SWAP tokens, found {count}")]
    SwapCount { col: usize, count: usize },

    #[error("column {col}: controls without a gate")]
    DanglingControl { col: usize },

    #[error("query string has no circuit= parameter")]
    MissingQueryParameter,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    wires: usize,
    cols: Vec<Vec<String>>,
}

enum Cell {
    Empty,
    Control(Control),
    Gate(GateKind),
}

fn parse_angle(arg: &str) -> Option<f64> {
    let arg = arg.trim();
    let (num, degrees) = match arg.strip_suffix("deg") {
        Some(rest) => (rest.trim_end(), true),
        None => (arg, false),
    };
    let v: f64 = num.parse().ok()?;
    let v = if degrees { v.to_radians() } else { v };
    v.is_finite().then_some(v)
}

fn parse_token(token: &str, col: usize, wire: usize) -> Result<Cell, ParseError> {
    let unknown = || ParseError::UnknownToken { col, wire, token: token.to_string() };
    let malformed = || ParseError::MalformedParameter { col, wire, token: token.to_string() };

    let fixed = match token {
        "-" => return Ok(Cell::Empty),
        "C" => return Ok(Cell::Control(Control::on(wire))),
        "A" => return Ok(Cell::Control(Control::off(wire))),
        "H" => Some(GateKind::H),
        "X" => Some(GateKind::X),
        "Y" => Some(GateKind::Y),
        "Z" => Some(GateKind::Z),
        "S" => Some(GateKind::S),
        "Sdg" => Some(GateKind::Sdg),
        "T" => Some(GateKind::T),
        "Tdg" => Some(GateKind::Tdg),
        "SWAP" => Some(GateKind::Swap),
        "SX" => Some(GateKind::SqrtX),
        "SXdg" => Some(GateKind::SqrtXdg),
        "SY" => Some(GateKind::SqrtY),
        "SYdg" => Some(GateKind::SqrtYdg),
        _ => None,
    };
    if let Some(kind) = fixed {
        return Ok(Cell::Gate(kind));
    }

    let open = token.find('(').ok_or_else(unknown)?;
    let name = &token[..open];
    let args = token[open + 1..].strip_suffix(')').ok_or_else(malformed)?;
    let args: Vec<f64> = args.split(',').map(parse_angle).collect::<Option<_>>().ok_or_else(malformed)?;
    let one = |f: fn(f64) -> GateKind| match args[..] {
        [a] => Ok(f(a)),
        _ => Err(malformed()),
    };
    let two = |f: fn(f64, f64) -> GateKind| match args[..] {
        [a, b] => Ok(f(a, b)),
        _ => Err(malformed()),
    };
    let kind = match name {
        "Z^" => one(GateKind::ZPow)?,
        "X^" => one(GateKind::XPow)?,
        "Y^" => one(GateKind::YPow)?,
        "P" => one(GateKind::Phase)?,
        "GP" => one(GateKind::GlobalPhase)?,
        "RX" => one(GateKind::RX)?,
        "RY" => one(GateKind::RY)?,
        "RZ" => one(GateKind::RZ)?,
        "ZG" => two(GateKind::ZG)?,
        "YG" => two(GateKind::YG)?,
        "HG" => two(GateKind::HG)?,
        _ => return Err(unknown()),
    };
    Ok(Cell::Gate(kind))
}

/// Canonical token for a gate kind.
pub fn token(kind: &GateKind) -> String {
    use GateKind::*;
    // `{:?}` on f64 is the shortest round-trip decimal.
    match *kind {
        H => "H".into(),
        X => "X".into(),
        Y => "Y".into(),
        Z => "Z".into(),
        S => "S".into(),
        Sdg => "Sdg".into(),
        T => "T".into(),
        Tdg => "Tdg".into(),
        Swap => "SWAP".into(),
        SqrtX => "SX".into(),
        SqrtXdg => "SXdg".into(),
        SqrtY => "SY".into(),
        SqrtYdg => "SYdg".into(),
        ZPow(k) => format!("Z^({k:?})"),
        XPow(k) => format!("X^({k:?})"),
        YPow(k) => format!("Y^({k:?})"),
        Phase(t) => format!("P({t:?})"),
        GlobalPhase(t) => format!("GP({t:?})"),
        RX(t) => format!("RX({t:?})"),
        RY(t) => format!("RY({t:?})"),
        RZ(t) => format!("RZ({t:?})"),
        ZG(a, b) => format!("ZG({a:?},{b:?})"),
        YG(a, b) => format!("YG({a:?},{b:?})"),
        HG(a, b) => format!("HG({a:?},{b:?})"),
    }
}

/// Parses the JSON circuit format.
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.wires == 0 {
        return Err(ParseError::NoWires);
    }

    let mut layers = Vec::with_capacity(doc.cols.len());
    for (ci, col) in doc.cols.iter().enumerate() {
        if col.len() > doc.wires {
            return Err(ParseError::WireCollision { col: ci, wire: doc.wires, wires: doc.wires });
        }
        let mut controls = Vec::new();
        let mut gates = Vec::new();
        let mut swap_wires = Vec::new();
        for (wire, tok) in col.iter().enumerate() {
            match parse_token(tok.trim(), ci, wire)? {
                Cell::Empty => {}
                Cell::Control(c) => controls.push(c),
                Cell::Gate(GateKind::Swap) => swap_wires.push(wire),
                Cell::Gate(kind) => gates.push((kind, wire)),
            }
        }
        if !swap_wires.is_empty() && swap_wires.len() != 2 {
            return Err(ParseError::SwapCount { col: ci, count: swap_wires.len() });
        }
        if gates.is_empty() && swap_wires.is_empty() && !controls.is_empty() {
            return Err(ParseError::DanglingControl { col: ci });
        }
        // each wire holds one token, so these are distinct
        let controls: ControlSpec = controls.into_iter().collect();
        let mut placements: Vec<GatePlacement> = gates
            .into_iter()
            .map(|(kind, wire)| GatePlacement::new(kind, wire).with_controls(controls.clone()))
            .collect();
        if let [i, j] = swap_wires[..] {
            let swap = GatePlacement::swap(i, j).with_controls(controls.clone());
            let at = placements.iter().position(|p| p.target() > i).unwrap_or(placements.len());
            placements.insert(at, swap);
        }
        layers.push(Layer { placements });
    }
    Circuit::with_layers(doc.wires, layers).map_err(|_| ParseError::NoWires)
}

/// Canonical text: minimal whitespace, full-width columns, top wire first.
///
/// Each column is written from the union of its placements' controls, so a
/// layer whose gates carry different controls does not round-trip; such
/// layers are reported by [`Circuit::validate`].
pub fn serialize_circuit(c: &Circuit) -> String {
    let n = c.num_wires();
    let cols = c
        .layers
        .iter()
        .map(|layer| {
            let mut col = vec!["-".to_string(); n];
            for p in &layer.placements {
                for &t in &p.targets {
                    if t < n {
                        col[t] = token(&p.kind);
                    }
                }
                for ctl in p.controls.iter().filter(|c| c.wire < n) {
                    col[ctl.wire] = match ctl.polarity {
                        crate::state::Polarity::Control => "C".into(),
                        crate::state::Polarity::Anticontrol => "A".into(),
                    };
                }
            }
            col
        })
        .collect();
    serde_json::to_string(&Document { wires: n, cols }).expect("string document serializes")
}

/// `circuit=<percent-encoded canonical text>`
pub fn to_query_string(c: &Circuit) -> String {
    url::form_urlencoded::Serializer::new(String::new())
        .append_pair("circuit", &serialize_circuit(c))
        .finish()
}

/// Accepts a query string (optionally with a leading `?`) holding a
/// `circuit=` parameter.
pub fn parse_query_string(query: &str) -> Result<Circuit, ParseError> {
    let query = query.trim().trim_start_matches('?');
    let value = url::form_urlencoded::parse(query.as_bytes())
        .find(|(k, _)| k == "circuit")
        .map(|(_, v)| v.into_owned())
        .ok_or(ParseError::MissingQueryParameter)?;
    parse_circuit(&value)
}

/// Plain JSON text or a `circuit=` query string.
pub fn parse_any(text: &str) -> Result<Circuit, ParseError> {
    let t = text.trim();
    if t.starts_with("circuit=") || t.starts_with("?circuit=") {
        parse_query_string(t)
    } else {
        parse_circuit(t)
    }
}
