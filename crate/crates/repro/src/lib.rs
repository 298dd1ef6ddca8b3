//! Reference scenarios shipped in `scenarios/`, plus lookup helpers for
//! run summaries.

use coexsim_cli::runner::PointResult;
use coexsim_cli::scenario::{parse_scenario_str, parse_sweep_str, ScenarioError};
use coexsim_cli::{ScenarioSpec, SweepSpec};

pub const FAIRNESS_1V1_GAP: &str = include_str!("../../../scenarios/fairness-1v1-gap.toml");
pub const DENSE_GAP_10V10: &str = include_str!("../../../scenarios/dense-gap-10v10.toml");
pub const SWEEP_MODE_GAP: &str = include_str!("../../../scenarios/sweep-mode-gap.toml");
pub const SWEEP_NODES_GAP_1000: &str = include_str!("../../../scenarios/sweep-nodes-gap-1000.toml");
pub const SWEEP_NODES_RS_1000: &str = include_str!("../../../scenarios/sweep-nodes-rs-1000.toml");
pub const SWEEP_DELTA_GAP: &str = include_str!("../../../scenarios/sweep-delta-gap.toml");

pub const SCENARIOS: [(&str, &str); 2] = [
    ("fairness-1v1-gap", FAIRNESS_1V1_GAP),
    ("dense-gap-10v10", DENSE_GAP_10V10),
];

pub const SWEEPS: [(&str, &str); 4] = [
    ("sweep-mode-gap", SWEEP_MODE_GAP),
    ("sweep-nodes-gap-1000", SWEEP_NODES_GAP_1000),
    ("sweep-nodes-rs-1000", SWEEP_NODES_RS_1000),
    ("sweep-delta-gap", SWEEP_DELTA_GAP),
];

pub fn scenario(text: &str) -> Result<ScenarioSpec, ScenarioError> {
    parse_scenario_str(text)
}

pub fn sweep(text: &str) -> Result<SweepSpec, ScenarioError> {
    parse_sweep_str(text)
}

/// Seed-averaged value of a summary metric at one point.
pub fn mean(point: &PointResult, metric: &str) -> Option<f64> {
    point
        .summary
        .iter()
        .find(|r| r.metric == metric)
        .map(|r| r.estimate.mean)
}
