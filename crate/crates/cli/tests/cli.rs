use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use qlayers_core::format::to_query_string;
use qlayers_core::parse_circuit;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn qlayers(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qlayers"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn qlayers");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(args: &[&str], stdin: &str) -> Value {
    let out = qlayers(args, stdin);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn final_probabilities(r: &Value) -> Vec<f64> {
    let layers = r["layers"].as_array().unwrap();
    layers.last().unwrap()["probabilities"].as_array().unwrap().iter().map(|p| p.as_f64().unwrap()).collect()
}

#[test]
fn one_wire_hadamard_from_stdin() {
    let r = report(&["simulate", "-"], r#"{"wires":1,"cols":[["H"]]}"#);
    assert_eq!(r["layers"].as_array().unwrap().len(), 2);
    for p in final_probabilities(&r) {
        assert!((p - 0.5).abs() < 1e-15);
    }
}

#[test]
fn grover_marks_state_five() {
    let r = report(&["simulate", fixture("grover3.json").to_str().unwrap()], "");
    let p = final_probabilities(&r);
    assert!((p[5] - 25.0 / 32.0).abs() <= 1e-9, "{}", p[5]);
    for (k, q) in p.iter().enumerate().filter(|&(k, _)| k != 5) {
        assert!((q - 1.0 / 32.0).abs() <= 1e-9, "{k}: {q}");
    }
}

#[test]
fn w4_spreads_over_single_one_bitstrings() {
    let r = report(&["simulate", fixture("w4.json").to_str().unwrap()], "");
    let p = final_probabilities(&r);
    for (k, q) in p.iter().enumerate() {
        let want = if k.count_ones() == 1 { 0.25 } else { 0.0 };
        assert!((q - want).abs() <= 1e-9, "{k}: {q}");
    }
    // every layer of this circuit is a single core gate
    let layers = r["layers"].as_array().unwrap();
    assert!(layers[..8].iter().all(|l| l["annotation"].is_object()));
}

#[test]
fn query_string_input() {
    let c = parse_circuit(&std::fs::read_to_string(fixture("bell.json")).unwrap()).unwrap();
    let query = to_query_string(&c);
    assert!(query.starts_with("circuit="));
    let from_query = qlayers(&["simulate"], &query);
    let from_json = qlayers(&["simulate", fixture("bell.json").to_str().unwrap()], "");
    assert_eq!(from_query.status.code(), Some(0));
    assert_eq!(from_query.stdout, from_json.stdout);
    // a leading `?` is tolerated as pasted from a URL
    let from_url = qlayers(&["simulate"], &format!("?{query}"));
    assert_eq!(from_url.stdout, from_json.stdout);
}

#[test]
fn parse_error_exits_one_with_message() {
    for bad in [r#"{"wires":2,"cols":[["H","Q"]]}"#, "{", r#"{"wires":2,"cols":[["SWAP","-"]]}"#, ""] {
        let out = qlayers(&["simulate"], bad);
        assert_eq!(out.status.code(), Some(1), "{bad}");
        assert!(out.stdout.is_empty());
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn validation_error_exits_one() {
    let wide = format!(r#"{{"wires":17,"cols":[[{}]]}}"#, [r#""-""#; 17].join(","));
    let out = qlayers(&["simulate"], &wide);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid circuit"));
}

#[test]
fn missing_file_exits_one() {
    let out = qlayers(&["simulate", "/nonexistent/circuit.json"], "");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_flag_exits_one() {
    let out = qlayers(&["simulate", "--frobnicate"], "");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn display_options_reach_the_report() {
    let r = report(&["simulate", "--bars", "log", "--decades", "3", "--layout", "1"], r#"{"wires":2,"cols":[["H","-"]]}"#);
    assert_eq!(r["options"]["bars"], "log");
    assert_eq!(r["options"]["decades"], 3);
    assert_eq!(r["K"], 1);
    assert_eq!(r["rows"], 2);
    assert_eq!(r["columns"], 2);
    let bars: Vec<f64> = r["layers"][1]["bar_lengths"].as_array().unwrap().iter().map(|b| b.as_f64().unwrap()).collect();
    // p = 0.5 over three decades: 1 + log10(0.5)/3
    assert!((bars[0] - (1.0 + 0.5f64.log10() / 3.0)).abs() < 1e-15);
    assert_eq!(bars[2], 0.0);
}

#[test]
fn default_layout_is_n_minus_four() {
    let five = r#"{"wires":5,"cols":[["H","-","-","-","-"]]}"#;
    let r = report(&["simulate"], five);
    assert_eq!(r["K"], 1);
    assert_eq!(r["rows"], 16);
    assert_eq!(r["columns"], 2);
}

#[test]
fn expand_rz_generalized() {
    let theta = 0.7f64;
    let input = format!(r#"{{"wires":1,"cols":[["RZ({theta})"]]}}"#);
    let out = qlayers(&["expand", "--generalized"], &input);
    assert_eq!(out.status.code(), Some(0));
    let c = parse_circuit(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(c.depth(), 1);
    assert_eq!(c.layers[0].placements[0].kind, qlayers_core::GateKind::ZG(-theta / 2.0, theta / 2.0));
    // --mode generalized is the long form
    assert_eq!(qlayers(&["expand", "--mode", "generalized"], &input).stdout, out.stdout);
}

#[test]
fn expand_core_circuit_is_identity_on_text() {
    let text = std::fs::read_to_string(fixture("w4.json")).unwrap();
    let canonical = qlayers_core::serialize_circuit(&parse_circuit(&text).unwrap());
    let out = qlayers(&["expand", "--verify", fixture("w4.json").to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), format!("{canonical}\n"));
}

#[test]
fn expand_ry_basic_adds_seven_layers() {
    let input = r#"{"wires":2,"cols":[["H","-"],["RY(1.1)","C"],["-","X"]]}"#;
    let out = qlayers(&["expand", "--verify"], input);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let c = parse_circuit(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(c.depth(), 3 + 7);
}

#[test]
fn expand_verify_without_global_phase() {
    let input = r#"{"wires":1,"cols":[["RX(0.3)"],["Y^(0.25)"],["SX"]]}"#;
    for mode in ["basic", "generalized"] {
        let out = qlayers(&["expand", "--verify", "--mode", mode, "--keep-global-phase", "false"], input);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(!String::from_utf8_lossy(&out.stdout).contains("GP("));
    }
}

#[test]
fn controlled_global_phase_is_kept_with_warning() {
    let input = r#"{"wires":2,"cols":[["RZ(0.3)","C"]]}"#;
    let out = qlayers(&["expand", "--keep-global-phase", "false"], input);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("GP("));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn simulate_with_expansion_echoes_both_circuits() {
    let input = r#"{"wires":1,"cols":[["RY(0.3)"]]}"#;
    let r = report(&["simulate", "--expand", "basic"], input);
    assert_eq!(r["circuit"], r#"{"wires":1,"cols":[["RY(0.3)"]]}"#);
    let expanded = parse_circuit(r["expanded_circuit"].as_str().unwrap()).unwrap();
    assert_eq!(expanded.depth(), 8);
    assert_eq!(r["layers"].as_array().unwrap().len(), 9);
    assert_eq!(r["options"]["expand"], "basic");
}

#[test]
fn render_two_qubits() {
    let out = qlayers(&["render", fixture("bell.json").to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(0));
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches(r#"<g class="layer""#).count(), 5);
    // layer 2 is a Z gate
    let z_layer = svg.split(r#"<g class="layer" data-layer="2">"#).nth(1).unwrap();
    let z_layer = &z_layer[..z_layer.find(r#"<g class="layer""#).unwrap()];
    assert!(z_layer.contains(r#"class="rotation-arc green""#));
}

#[test]
fn render_z_subset_size() {
    // 3 qubits, Z on wire 0 controlled by wire 2: 2^(3-1-1) green cells
    let input = r#"{"wires":3,"cols":[["H","H","H"],["Z","-","C"]]}"#;
    let out = qlayers(&["render", "--layout", "1"], input);
    let svg = String::from_utf8(out.stdout).unwrap();
    let layer = svg.split(r#"<g class="layer" data-layer="1">"#).nth(1).unwrap();
    let layer = &layer[..layer.find("</g>\n</g>").unwrap()];
    assert_eq!(layer.matches(r#"class="cell green""#).count(), 2);
}

#[test]
fn render_skips_discs_for_zero_amplitudes() {
    let out = qlayers(&["render"], r#"{"wires":2,"cols":[["X","-"]]}"#);
    let svg = String::from_utf8(out.stdout).unwrap();
    let fin = svg.split(r#"<g class="final-state""#).nth(1).unwrap();
    let fin = &fin[..fin.find("</g>").unwrap()];
    assert_eq!(fin.matches(r#"<rect class="cell"#).count(), 4);
    assert_eq!(fin.matches(r#"class="disc""#).count(), 1);
}

#[test]
fn render_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.svg");
    let out = qlayers(&["render", "-o", path.to_str().unwrap(), fixture("bell.json").to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let to_stdout = qlayers(&["render", fixture("bell.json").to_str().unwrap()], "");
    assert_eq!(std::fs::read(path).unwrap(), to_stdout.stdout);
}

#[test]
fn render_refuses_nine_qubits() {
    let nine = format!(r#"{{"wires":9,"cols":[[{}]]}}"#, [r#""H""#; 9].join(","));
    let out = qlayers(&["render"], &nine);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("limited to 8 qubits"));
    // simulate has no such limit
    assert_eq!(qlayers(&["simulate"], &nine).status.code(), Some(0));
}

#[test]
fn outputs_are_byte_deterministic() {
    for args in [&["simulate"][..], &["render"][..], &["simulate", "--expand", "generalized"][..]] {
        let input = std::fs::read_to_string(fixture("grover3.json")).unwrap();
        let first = qlayers(args, &input).stdout;
        assert!(!first.is_empty());
        for _ in 0..4 {
            assert_eq!(qlayers(args, &input).stdout, first);
        }
    }
}
