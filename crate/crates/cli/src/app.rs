//! Argument parsing and command dispatch. [`run`] never exits the process, so
//! tests can drive it with in-memory streams.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qlayers_core::analytics::BarMode;
use qlayers_core::expand::{expand_circuit, expand_gate, verify_expansion, ExpansionMode};
use qlayers_core::{parse_any, parse_circuit, serialize_circuit, Circuit, Error};

use crate::render::render_svg;
use crate::report::{build_report, ExpandMode, ReportOptions};

/// Largest `verify_expansion` distance accepted by `expand --verify`.
pub const VERIFY_TOLERANCE: f64 = 1e-10;

pub mod exit {
    pub const OK: i32 = 0;
    /// Usage, I/O, parse or validation error.
    pub const INVALID: i32 = 1;
    /// Numeric invariant breach such as norm drift.
    pub const NUMERIC: i32 = 2;
    pub const VERIFY: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "qlayers", version, about = "Layer-by-layer quantum circuit simulation and reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a circuit and print the JSON report.
    Simulate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        display: DisplayArgs,
    },
    /// Rewrite non-core gates into core gates and print the circuit.
    Expand {
        #[command(flatten)]
        input: InputArgs,
        /// Shorthand for `--mode generalized`.
        #[arg(long, conflicts_with = "mode")]
        generalized: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Basic)]
        mode: ModeArg,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        keep_global_phase: bool,
        /// Check every rewritten gate against the original matrix.
        #[arg(long)]
        verify: bool,
    },
    /// Render the circuit and its states as SVG (at most 8 qubits).
    Render {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        display: DisplayArgs,
        /// Write here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Circuit file, or `-` for standard input. JSON or `circuit=` query form.
    #[arg(default_value = "-")]
    pub path: String,
}

#[derive(Debug, Args)]
pub struct DisplayArgs {
    /// Column bits K of the wrapped grid (default max(0, n - 4)).
    #[arg(long)]
    pub layout: Option<usize>,
    #[arg(long, value_enum, default_value_t = BarsArg::Probability)]
    pub bars: BarsArg,
    /// Decades spanned by log-mode bars.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=300))]
    pub decades: u32,
    /// Expand non-core gates before simulating.
    #[arg(long, value_enum)]
    pub expand: Option<ModeArg>,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub keep_global_phase: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Basic,
    Generalized,
}

impl From<ModeArg> for ExpandMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Basic => ExpandMode::Basic,
            ModeArg::Generalized => ExpandMode::Generalized,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BarsArg {
    Probability,
    Magnitude,
    Log,
}

impl From<BarsArg> for BarMode {
    fn from(b: BarsArg) -> Self {
        match b {
            BarsArg::Probability => BarMode::Probability,
            BarsArg::Magnitude => BarMode::Magnitude,
            BarsArg::Log => BarMode::Log,
        }
    }
}

impl DisplayArgs {
    fn options(&self) -> ReportOptions {
        ReportOptions {
            bars: self.bars.into(),
            decades: self.decades,
            layout: self.layout,
            expand: self.expand.map(Into::into),
            keep_global_phase: self.keep_global_phase,
        }
    }
}

/// A failure carrying the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self { code: exit::INVALID, message: message.into() }
    }
}

/// Exit code for a core error: numeric breaches are 2, everything else 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NormDrift(_) | Error::NonFinite(_) => exit::NUMERIC,
        _ => exit::INVALID,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self { code: exit_code(&e), message: e.to_string() }
    }
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        stdin.read_to_string(&mut text).map_err(|e| Failure::invalid(format!("reading standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{path}: {e}")))?;
    }
    Ok(text)
}

/// Parses and validates, reporting every violation at once.
pub fn load_circuit(text: &str) -> Result<Circuit, Failure> {
    let c = parse_any(text).map_err(|e| Failure::invalid(e.to_string()))?;
    let violations = c.validate();
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure::invalid(format!("invalid circuit:\n  {}", lines.join("\n  "))));
    }
    Ok(c)
}

/// Checks every non-core placement's expansion against its matrix.
pub fn verify_circuit(c: &Circuit, mode: ExpansionMode, tolerance: f64) -> Result<(), Failure> {
    for (k, layer) in c.layers.iter().enumerate() {
        for p in layer.placements.iter().filter(|p| !p.kind.is_core()) {
            let d = verify_expansion(p, &expand_gate(p, mode), mode.keep_global_phase);
            if d.is_nan() || d > tolerance {
                return Err(Failure {
                    code: exit::VERIFY,
                    message: format!("layer {k}: expansion of {} is off by {d:e}", p.kind),
                });
            }
        }
    }
    Ok(())
}

fn execute(command: Command, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let write_err = |e: std::io::Error| Failure::invalid(format!("writing output: {e}"));
    match command {
        Command::Simulate { input, display } => {
            let c = load_circuit(&read_input(&input.path, stdin)?)?;
            let report = build_report(&c, &display.options())?;
            for w in &report.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            stdout.write_all(report.to_json().as_bytes()).map_err(write_err)?;
        }
        Command::Expand { input, generalized, mode, keep_global_phase, verify } => {
            let c = load_circuit(&read_input(&input.path, stdin)?)?;
            let mode = if generalized { ExpandMode::Generalized } else { mode.into() };
            let mode = mode.expansion_mode(keep_global_phase);
            if verify {
                verify_circuit(&c, mode, VERIFY_TOLERANCE)?;
            }
            let (expanded, warnings) = expand_circuit(&c, mode)?;
            for w in &warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            writeln!(stdout, "{}", serialize_circuit(&expanded)).map_err(write_err)?;
        }
        Command::Render { input, display, output } => {
            let c = load_circuit(&read_input(&input.path, stdin)?)?;
            let report = build_report(&c, &display.options())?;
            let simulated = match &report.expanded_circuit {
                Some(text) => parse_circuit(text).map_err(|e| Failure::invalid(e.to_string()))?,
                None => c,
            };
            let svg = render_svg(&simulated, &report).map_err(|e| Failure::invalid(e.to_string()))?;
            match output {
                Some(path) => std::fs::write(&path, svg).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?,
                None => stdout.write_all(svg.as_bytes()).map_err(write_err)?,
            }
        }
    }
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. Usage errors exit with 1, not clap's default 2, which is reserved
/// for numeric failures.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::INVALID } else { exit::OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, stdin, stdout, stderr) {
        Ok(()) => exit::OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
