//! Scenario files, multi-seed runs and result files for the `coexsim` tool.

pub mod output;
pub mod runner;
pub mod scenario;

pub use output::{write_dir, Format, JsonDocument};
pub use runner::{run_scenario, run_sweep, RunOptions, RunOutput};
pub use scenario::{parse_scenario, parse_scenario_str, parse_sweep, parse_sweep_str, ScenarioSpec, SweepSpec};
