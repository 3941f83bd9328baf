//! Command-line front end for the `conflict-triad` simulator: experiment
//! files, built-in presets, CSV trajectories, SVG phase plots and one-line
//! phase reports.

pub mod commands;
pub mod config;
pub mod output;
pub mod plot;
pub mod presets;
pub mod report;

pub use commands::{run_cli, Cli, CliError};
pub use config::{load_config, parse_config, ConfigError, ExperimentConfig};
pub use output::{write_trajectory, write_trajectory_to};
pub use plot::{render_phase_plot, render_svg, Axis};
pub use presets::PresetId;
pub use report::format_report;
