//! Command-line front end: simulate circuits into JSON reports, expand
//! non-core gates, and render SVG snapshots.

pub mod app;
pub mod render;
pub mod report;

pub use app::{run, Cli};
pub use render::render_svg;
pub use report::{build_report, ReportOptions, SimulationReport, SCHEMA_VERSION};
