//! Static SVG rendering of a report: circuit on top, wrapped state grids
//! under it, per-wire stats and the half-matrix on the right.

use std::f64::consts::PI;
use std::fmt::Write as _;

use qlayers_core::annotate::{Color, GridLayout, LayerAnnotation};
use qlayers_core::{Circuit, GateKind, Polarity};

use crate::report::SimulationReport;

pub const MAX_RENDER_QUBITS: usize = 8;

const CELL: f64 = 18.0;
const WIRE_GAP: f64 = 28.0;
const MARGIN: f64 = 20.0;
const LABEL_W: f64 = 32.0;
const HM_CELL: f64 = 28.0;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RenderError {
    #[error("rendering is limited to {MAX_RENDER_QUBITS} qubits (circuit has {0}); use `simulate` for the JSON report")]
    TooWide(usize),
}

/// Formats a coordinate with two decimals, never as `-0.00`.
fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Geometry {
    n: usize,
    layout: GridLayout,
    stride: f64,
}

impl Geometry {
    fn wire_y(&self, w: usize) -> f64 {
        MARGIN + WIRE_GAP * (w as f64 + 0.5)
    }

    fn circuit_bottom(&self) -> f64 {
        MARGIN + WIRE_GAP * self.n as f64
    }

    /// Left edge of state record `k`'s column.
    fn column_x(&self, k: usize) -> f64 {
        MARGIN + LABEL_W + self.stride * k as f64
    }

    fn grid_origin(&self, k: usize) -> (f64, f64) {
        let grid_w = CELL * self.layout.columns() as f64;
        (self.column_x(k) + (self.stride - grid_w) / 2.0, self.circuit_bottom() + MARGIN)
    }

    fn cell_center(&self, k: usize, index: usize) -> (f64, f64) {
        let (gx, gy) = self.grid_origin(k);
        let (row, col) = self.layout.position(index);
        (gx + CELL * (col as f64 + 0.5), gy + CELL * (row as f64 + 0.5))
    }
}

pub fn render_svg(circuit: &Circuit, report: &SimulationReport) -> Result<String, RenderError> {
    let n = report.n;
    if n > MAX_RENDER_QUBITS {
        return Err(RenderError::TooWide(n));
    }
    let layout = GridLayout::new(n, report.k).expect("report layouts are valid");
    let stride = (CELL * layout.columns() as f64 + 20.0).max(56.0);
    let g = Geometry { n, layout, stride };

    let records = report.layers.len();
    let right_x = g.column_x(records) + MARGIN;
    let hm_w = HM_CELL * n.saturating_sub(1) as f64;
    let width = right_x + 60.0 + hm_w + MARGIN;
    let grid_h = CELL * layout.rows() as f64;
    let height = (g.circuit_bottom() + 2.0 * MARGIN + grid_h + 16.0).max(MARGIN * 2.0 + HM_CELL * n as f64);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="10">"#,
        w = num(width),
        h = num(height)
    );
    out.push_str(
        "<style>.green{fill:#1b9e77}.purple{fill:#7570b3}.rotation-arc{fill:none;stroke-width:1.5}\
.rotation-arc.green{stroke:#1b9e77}.rotation-arc.purple{stroke:#7570b3}.cell{fill:#fff;stroke:#bbb}\
.cell.green{fill:#1b9e77;fill-opacity:0.35}.cell.purple{fill:#7570b3;fill-opacity:0.35}\
.bar{fill:#4a90d9}.disc{fill:none;stroke:#333}.wire{stroke:#000}.gate{fill:#fff;stroke:#000}\
.exchange-arrow{stroke:#333;marker-end:url(#head);marker-start:url(#head)}.mixed{fill:#888}</style>\n",
    );
    out.push_str(
        r#"<defs><marker id="head" viewBox="0 0 6 6" refX="3" refY="3" markerWidth="5" markerHeight="5" orient="auto-start-reverse"><path d="M0,0L6,3L0,6z"/></marker></defs>"#,
    );
    out.push('\n');

    wires(&mut out, &g, right_x);
    for (k, layer) in circuit.layers.iter().enumerate() {
        let _ = writeln!(out, r#"<g class="layer" data-layer="{k}">"#);
        gate_glyphs(&mut out, &g, k, &layer.placements);
        state_grid(&mut out, &g, report, k);
        out.push_str("</g>\n");
    }
    let _ = writeln!(out, r#"<g class="final-state" data-layer="{}">"#, records - 1);
    state_grid(&mut out, &g, report, records - 1);
    out.push_str("</g>\n");
    qubit_stats(&mut out, &g, report, right_x);
    half_matrix(&mut out, &g, report, right_x + 60.0);
    out.push_str("</svg>\n");
    Ok(out)
}

fn wires(out: &mut String, g: &Geometry, end_x: f64) {
    out.push_str("<g class=\"wires\">\n");
    for w in 0..g.n {
        let y = g.wire_y(w);
        let _ = writeln!(out, r#"<text x="{}" y="{}">q{w}</text>"#, num(MARGIN), num(y + 3.0));
        let _ = writeln!(
            out,
            r#"<line class="wire" x1="{}" y1="{y}" x2="{}" y2="{y}"/>"#,
            num(MARGIN + LABEL_W - 8.0),
            num(end_x - 8.0),
            y = num(y)
        );
    }
    out.push_str("</g>\n");
}

fn gate_glyphs(out: &mut String, g: &Geometry, k: usize, placements: &[qlayers_core::GatePlacement]) {
    // gates sit between the state before and the state after
    let x = g.column_x(k + 1);
    for p in placements {
        let ys: Vec<f64> = p.wires().chain(p.controls.wires()).map(|w| g.wire_y(w)).collect();
        let (top, bottom) = ys.iter().fold((f64::MAX, f64::MIN), |(a, b), &y| (a.min(y), b.max(y)));
        if bottom > top {
            let _ = writeln!(out, r#"<line class="wire" x1="{x}" y1="{}" x2="{x}" y2="{}"/>"#, num(top), num(bottom), x = num(x));
        }
        for c in p.controls.iter() {
            let fill = match c.polarity {
                Polarity::Control => "black",
                Polarity::Anticontrol => "white",
            };
            let _ = writeln!(
                out,
                r#"<circle class="control" cx="{}" cy="{}" r="4" fill="{fill}" stroke="black"/>"#,
                num(x),
                num(g.wire_y(c.wire))
            );
        }
        if p.kind == GateKind::Swap {
            for &t in &p.targets {
                let y = g.wire_y(t);
                let _ = writeln!(
                    out,
                    r#"<path class="swap" d="M{a},{b}L{c},{d}M{a},{d}L{c},{b}" stroke="black"/>"#,
                    a = num(x - 5.0),
                    b = num(y - 5.0),
                    c = num(x + 5.0),
                    d = num(y + 5.0)
                );
            }
            continue;
        }
        let label = escape(&p.kind.to_string());
        let w = (label.chars().count() as f64 * 6.0 + 8.0).max(20.0);
        let y = g.wire_y(p.target());
        let _ = writeln!(
            out,
            r#"<rect class="gate" x="{}" y="{}" width="{}" height="20"/><text x="{}" y="{}" text-anchor="middle">{label}</text>"#,
            num(x - w / 2.0),
            num(y - 10.0),
            num(w),
            num(x),
            num(y + 3.5)
        );
    }
}

fn color_class(c: Color) -> &'static str {
    match c {
        Color::Green => "green",
        Color::Purple => "purple",
    }
}

/// Highlight class for each amplitude index under an annotation.
fn highlights(a: Option<&LayerAnnotation>, len: usize) -> Vec<Option<&'static str>> {
    let mut h = vec![None; len];
    match a {
        Some(LayerAnnotation::Rotation { subset, color, .. }) => subset.iter().for_each(|&k| h[k] = Some(color_class(*color))),
        Some(LayerAnnotation::DualRotation { partition, .. }) | Some(LayerAnnotation::Butterfly { partition, .. }) => {
            partition.even.iter().for_each(|&k| h[k] = Some("purple"));
            partition.odd.iter().for_each(|&k| h[k] = Some("green"));
        }
        Some(LayerAnnotation::SwapPairs { pairs, .. }) => pairs.iter().for_each(|&(a, b)| {
            h[a] = Some("purple");
            h[b] = Some("purple");
        }),
        _ => {}
    }
    h
}

fn rotation_arc(out: &mut String, cx: f64, cy: f64, angle: f64, color: &str) {
    if angle.abs() < 1e-12 {
        return;
    }
    let r = 8.0;
    let (ex, ey) = (cx + r * angle.cos(), cy - r * angle.sin());
    let sweep = if angle > 0.0 { 0 } else { 1 };
    let _ = writeln!(
        out,
        r#"<path class="rotation-arc {color}" d="M{},{} A{r},{r} 0 0 {sweep} {},{}"/><text x="{}" y="{}">{}π</text>"#,
        num(cx + r),
        num(cy),
        num(ex),
        num(ey),
        num(cx + r + 3.0),
        num(cy - r),
        num(angle / PI)
    );
}

fn state_grid(out: &mut String, g: &Geometry, report: &SimulationReport, k: usize) {
    let record = &report.layers[k];
    let annotation = record.annotation.as_ref();
    let marks = highlights(annotation, record.amplitudes.len());
    let (gx, gy) = g.grid_origin(k);
    let _ = writeln!(out, r#"<g class="state" data-index="{k}">"#);
    for (m, amp) in record.amplitudes.iter().enumerate() {
        let (cx, cy) = g.cell_center(k, m);
        let (x0, y0) = (cx - CELL / 2.0, cy - CELL / 2.0);
        let class = marks[m].map_or("cell".to_string(), |c| format!("cell {c}"));
        let _ = writeln!(
            out,
            r#"<rect class="{class}" data-amplitude="{m}" x="{}" y="{}" width="{CELL}" height="{CELL}"/>"#,
            num(x0),
            num(y0)
        );
        let bar = record.bar_lengths[m] * (CELL - 2.0);
        if bar > 0.0 {
            let _ = writeln!(
                out,
                r#"<rect class="bar" x="{}" y="{}" width="3" height="{}"/>"#,
                num(x0 + 1.0),
                num(y0 + CELL - 1.0 - bar),
                num(bar)
            );
        }
        let mag = amp[0].hypot(amp[1]);
        if mag > 1e-12 {
            // no disc for a zero amplitude
            let r = (CELL / 2.0 - 2.0) * mag.max(0.15);
            let phase = amp[1].atan2(amp[0]);
            let _ = writeln!(
                out,
                r#"<circle class="disc" cx="{}" cy="{}" r="{}"/><line class="tick" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
                num(cx + 1.5),
                num(cy),
                num(r),
                num(cx + 1.5),
                num(cy),
                num(cx + 1.5 + r * phase.cos()),
                num(cy - r * phase.sin())
            );
        }
    }
    let grid_right = gx + CELL * g.layout.columns() as f64;
    let arc_y = gy + CELL * g.layout.rows() as f64 + 10.0;
    match annotation {
        Some(LayerAnnotation::Rotation { angle, color, .. }) => {
            rotation_arc(out, gx + 4.0, arc_y, angle.value, color_class(*color));
        }
        Some(LayerAnnotation::DualRotation { partition, angle_even, angle_odd, exchange }) => {
            rotation_arc(out, gx + 4.0, arc_y, angle_even.value, "purple");
            rotation_arc(out, grid_right - 30.0, arc_y, angle_odd.value, "green");
            if *exchange {
                for (&e, &o) in partition.even.iter().zip(&partition.odd) {
                    arrow(out, g, k, e, o);
                }
            }
        }
        Some(LayerAnnotation::Butterfly { angle_even, angle_odd, .. }) => {
            rotation_arc(out, gx + 4.0, arc_y, angle_even.value, "purple");
            rotation_arc(out, grid_right - 30.0, arc_y, angle_odd.value, "green");
            let _ = writeln!(out, r#"<text class="butterfly-badge" x="{}" y="{}">⊕ ⊖</text>"#, num(gx), num(gy - 4.0));
        }
        Some(LayerAnnotation::SwapPairs { pairs, layout_class }) => {
            let _ = writeln!(out, r#"<g class="swap-arrows" data-layout-class="{}">"#, serde_json::to_value(layout_class).unwrap().as_str().unwrap());
            for &(a, b) in pairs {
                arrow(out, g, k, a, b);
            }
            out.push_str("</g>\n");
        }
        _ => {}
    }
    out.push_str("</g>\n");
}

fn arrow(out: &mut String, g: &Geometry, k: usize, a: usize, b: usize) {
    let (x1, y1) = g.cell_center(k, a);
    let (x2, y2) = g.cell_center(k, b);
    // shorten so the heads stay inside the cells
    let (dx, dy) = (x2 - x1, y2 - y1);
    let len = dx.hypot(dy).max(1e-9);
    let s = (CELL * 0.3).min(len / 3.0);
    let _ = writeln!(
        out,
        r#"<line class="exchange-arrow" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
        num(x1 + dx / len * s),
        num(y1 + dy / len * s),
        num(x2 - dx / len * s),
        num(y2 - dy / len * s)
    );
}

fn qubit_stats(out: &mut String, g: &Geometry, report: &SimulationReport, x: f64) {
    let stats = &report.layers.last().expect("at least one record").qubit_stats;
    out.push_str("<g class=\"qubit-stats\">\n");
    for (w, s) in stats.iter().enumerate() {
        let y = g.wire_y(w);
        let h = 20.0 * s.prob_one;
        let _ = writeln!(out, r#"<rect class="bar" x="{}" y="{}" width="6" height="{}"/>"#, num(x), num(y + 10.0 - h), num(h));
        let m = 20.0 * s.linear_entropy;
        let _ = writeln!(out, r#"<rect class="mixed" x="{}" y="{}" width="6" height="{}"/>"#, num(x + 8.0), num(y + 10.0 - m), num(m));
        let _ = writeln!(out, r#"<circle class="disc" cx="{}" cy="{}" r="8"/>"#, num(x + 30.0), num(y));
        if let Some(phase) = s.phase {
            let _ = writeln!(
                out,
                r#"<line class="tick" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
                num(x + 30.0),
                num(y),
                num(x + 30.0 + 8.0 * phase.cos()),
                num(y - 8.0 * phase.sin())
            );
        }
    }
    out.push_str("</g>\n");
}

fn half_matrix(out: &mut String, g: &Geometry, report: &SimulationReport, x: f64) {
    out.push_str("<g class=\"half-matrix\">\n");
    for c in &report.half_matrix.cells {
        let cx = x + HM_CELL * (c.j - 1) as f64;
        let cy = g.wire_y(c.i) - HM_CELL / 2.0;
        let fill = if c.correlation >= 0.0 { "#4a90d9" } else { "#d9534f" };
        let _ = writeln!(
            out,
            r#"<rect class="pair" data-i="{}" data-j="{}" x="{}" y="{}" width="{HM_CELL}" height="{HM_CELL}" fill="{fill}" fill-opacity="{}" stroke="silver"/>"#,
            c.i,
            c.j,
            num(cx),
            num(cy),
            num(c.correlation.abs())
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="8">{}</text>"#,
            num(cx + HM_CELL / 2.0 - 2.0),
            num(cy + HM_CELL / 2.0 + 3.0),
            num(c.concurrence)
        );
        let m = (HM_CELL - 4.0) * c.linear_entropy;
        let _ = writeln!(
            out,
            r#"<rect class="mixed" x="{}" y="{}" width="3" height="{}"/>"#,
            num(cx + HM_CELL - 5.0),
            num(cy + HM_CELL - 2.0 - m),
            num(m)
        );
    }
    out.push_str("</g>\n");
}
