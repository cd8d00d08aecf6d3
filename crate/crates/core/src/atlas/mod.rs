//! Scenario files in, CSV tables and SVG diagrams out.

pub mod scenario;
pub mod svg;
pub mod table;

pub use scenario::{parse_scenario, ScenarioConfig, ScenarioError};
pub use svg::{render_svg, Marker, SvgStyle};
pub use table::{emit_cells_csv, emit_csv, RegionRow, RegionTable};
