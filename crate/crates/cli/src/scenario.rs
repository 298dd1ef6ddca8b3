//! Scenario and sweep files.
//!
//! Both are TOML documents carrying `version = 1`. A scenario lists node
//! groups; every group expands to `count` identical nodes, numbered in file
//! order. Durations are given in microseconds.
//!
//! ```toml
//! version = 1
//! name = "wifi-vs-nru"
//! rounds = 100000
//! seeds = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]
//! sync_mode = "desynchronized"
//! ppdu_max_override = true
//!
//! [[group]]
//! kind = "wifi"
//! data_us = 5400
//!
//! [[group]]
//! kind = "nru"
//! delta_us = 9
//! data_us = 6000
//! ```
//!
//! A sweep wraps a scenario under `[scenario]` and names the axis:
//!
//! ```toml
//! version = 1
//! [sweep]
//! axis = "delta"
//! values = [9, 18, 36, 63, 125, 250, 500, 1000]
//! ```

use std::fmt;
use std::fs;
use std::path::Path;

use coexsim_core::metrics::Rates;
use coexsim_core::model::{
    lookup_priority_class, o_max_override, validate_scenario, ConfigError, Direction, NodeConfig,
    PriorityId, Scenario, SimParams, Standard, SyncMode, TechnologyKind,
};
use coexsim_core::Ns;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_ROUNDS: u64 = 100_000;
/// Default 802.11 ACK airtime: 44 µs at 6 Mb/s.
pub const DEFAULT_ACK_US: f64 = 44.0;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unsupported schema version {0} (expected {SCHEMA_VERSION})")]
    Version(u32),
    #[error("missing `seeds`: list at least one seed, e.g. seeds = [0, 1, 2]")]
    MissingSeeds,
    #[error("`seeds` is empty: list at least one seed")]
    EmptySeeds,
    #[error("`rounds` must be at least 1")]
    ZeroRounds,
    #[error("group {group}: {message}")]
    Group { group: usize, message: String },
    #[error("invalid duration for `{0}`: must be a non-negative whole number of nanoseconds")]
    Duration(String),
    #[error("rates must be non-negative")]
    Rates,
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("sweep: {0}")]
    Sweep(String),
}

/// Node technology as written in files; accepts technology names as aliases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    #[serde(alias = "wifi")]
    RandomAccess,
    #[serde(alias = "laa", alias = "laa-rs")]
    SyncRs,
    #[serde(alias = "nru", alias = "nr-u", alias = "laa-gap")]
    SyncGap,
}

impl From<GroupKind> for TechnologyKind {
    fn from(k: GroupKind) -> Self {
        match k {
            GroupKind::RandomAccess => TechnologyKind::RandomAccess,
            GroupKind::SyncRs => TechnologyKind::SyncRs,
            GroupKind::SyncGap => TechnologyKind::SyncGap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default = "one")]
    pub count: usize,
    pub kind: GroupKind,
    /// Defaults to ieee80211 for random access and 3gpp otherwise.
    pub standard: Option<Standard>,
    /// Defaults to AC_BE (802.11) or class 3 (ETSI: 2, 3GPP: 3).
    pub priority: Option<String>,
    #[serde(default = "downlink")]
    pub direction: Direction,
    pub delta_us: Option<f64>,
    /// Grid phase, used only with `sync_mode = "explicit"`.
    pub phase_us: Option<f64>,
    pub data_us: f64,
    pub ack_us: Option<f64>,
    /// Overrides of the looked-up priority class parameters.
    pub p: Option<u32>,
    pub cw_min: Option<u32>,
    pub cw_max: Option<u32>,
    pub o_max_us: Option<f64>,
}

fn one() -> usize {
    1
}

fn downlink() -> Direction {
    Direction::Dl
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingSpec {
    #[serde(default = "default_slot")]
    pub slot_us: f64,
    #[serde(default = "default_sifs")]
    pub sifs_us: f64,
    #[serde(default = "default_cs")]
    pub cs_us: f64,
}

fn default_slot() -> f64 {
    9.0
}
fn default_sifs() -> f64 {
    16.0
}
fn default_cs() -> f64 {
    1.0
}

impl Default for TimingSpec {
    fn default() -> Self {
        TimingSpec {
            slot_us: default_slot(),
            sifs_us: default_sifs(),
            cs_us: default_cs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesSpec {
    pub wifi_mbps: f64,
    pub laa_mbps: f64,
}

/// A scenario exactly as written in a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: Option<u32>,
    #[serde(default = "unnamed")]
    pub name: String,
    pub rounds: Option<u64>,
    pub seeds: Option<Vec<u64>>,
    #[serde(default = "desync")]
    pub sync_mode: SyncMode,
    #[serde(default)]
    pub ppdu_max_override: bool,
    #[serde(default)]
    pub timing: TimingSpec,
    pub rates: Option<RatesSpec>,
    #[serde(default, rename = "group")]
    pub groups: Vec<GroupSpec>,
}

fn unnamed() -> String {
    "scenario".to_string()
}

fn desync() -> SyncMode {
    SyncMode::Desynchronized
}

/// A validated scenario ready to run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub scenario: Scenario,
    pub rounds: u64,
    pub seeds: Vec<u64>,
    pub rates: Option<Rates>,
    pub source: ScenarioFile,
}

fn us(field: &str, value: f64) -> Result<Ns, ScenarioError> {
    Ns::try_from_us_f64(value).ok_or_else(|| ScenarioError::Duration(field.to_string()))
}

fn default_standard(kind: GroupKind) -> Standard {
    match kind {
        GroupKind::RandomAccess => Standard::Ieee80211,
        _ => Standard::ThreeGpp,
    }
}

fn default_priority(standard: Standard) -> PriorityId {
    match standard {
        Standard::Ieee80211 => PriorityId::Ac(coexsim_core::model::AccessCategory::Be),
        Standard::Etsi => PriorityId::Class(2),
        Standard::ThreeGpp => PriorityId::Class(3),
    }
}

impl ScenarioFile {
    pub fn from_toml(text: &str) -> Result<ScenarioFile, ScenarioError> {
        let file: ScenarioFile = toml::from_str(text)?;
        match file.version {
            Some(SCHEMA_VERSION) | None => Ok(file),
            Some(v) => Err(ScenarioError::Version(v)),
        }
    }

    pub fn sim_params(&self) -> Result<SimParams, ScenarioError> {
        Ok(SimParams {
            slot_sigma: us("timing.slot_us", self.timing.slot_us)?,
            sifs: us("timing.sifs_us", self.timing.sifs_us)?,
            sensing_cs: us("timing.cs_us", self.timing.cs_us)?,
        })
    }

    fn group_nodes(&self, index: usize, group: &GroupSpec, first_id: usize) -> Result<Vec<NodeConfig>, ScenarioError> {
        let err = |message: String| ScenarioError::Group { group: index, message };
        let kind: TechnologyKind = group.kind.into();
        let standard = group.standard.unwrap_or_else(|| default_standard(group.kind));
        let priority = match &group.priority {
            Some(p) => p.parse::<PriorityId>().map_err(|e| err(e.to_string()))?,
            None => default_priority(standard),
        };
        let mut class = lookup_priority_class(standard, priority, group.direction)
            .map_err(|e| err(e.to_string()))?;
        if self.ppdu_max_override {
            if let Some(o_max) = o_max_override(standard) {
                class = class.with_o_max(o_max);
            }
        }
        if let Some(p) = group.p {
            class.p = p;
        }
        if let Some(w) = group.cw_min {
            class.cw_min = w;
        }
        if let Some(w) = group.cw_max {
            class.cw_max = w;
        }
        if let Some(o) = group.o_max_us {
            class.o_max = us("o_max_us", o)?;
        }
        let delta = match (kind.is_synchronous(), group.delta_us) {
            (true, Some(d)) => us("delta_us", d)?,
            (true, None) => return Err(err(format!("`delta_us` is required for {kind} nodes"))),
            (false, Some(_)) => return Err(err("random-access nodes take no `delta_us`".into())),
            (false, None) => Ns::ZERO,
        };
        let phase = match (group.phase_us, self.sync_mode) {
            (Some(p), SyncMode::Explicit) => us("phase_us", p)?,
            (Some(_), _) => {
                return Err(err("`phase_us` is only allowed with sync_mode = \"explicit\"".into()))
            }
            (None, _) => Ns::ZERO,
        };
        let ack_duration = match kind {
            TechnologyKind::RandomAccess => us("ack_us", group.ack_us.unwrap_or(DEFAULT_ACK_US))?,
            _ => Ns::ZERO,
        };
        let data_duration = us("data_us", group.data_us)?;
        Ok((0..group.count)
            .map(|i| NodeConfig {
                id: first_id + i,
                kind,
                class,
                delta,
                phase,
                data_duration,
                ack_duration,
            })
            .collect())
    }

    /// Expands the groups and validates the result.
    pub fn into_spec(self) -> Result<ScenarioSpec, ScenarioError> {
        let seeds = match &self.seeds {
            None => return Err(ScenarioError::MissingSeeds),
            Some(s) if s.is_empty() => return Err(ScenarioError::EmptySeeds),
            Some(s) => s.clone(),
        };
        let rounds = self.rounds.unwrap_or(DEFAULT_ROUNDS);
        if rounds == 0 {
            return Err(ScenarioError::ZeroRounds);
        }
        let params = self.sim_params()?;
        let mut nodes = Vec::new();
        for (i, group) in self.groups.iter().enumerate() {
            let more = self.group_nodes(i, group, nodes.len())?;
            nodes.extend(more);
        }
        let scenario = validate_scenario(Scenario {
            params,
            nodes,
            sync_mode: self.sync_mode,
        })?;
        let rates = match self.rates {
            Some(r) if r.wifi_mbps < 0.0 || r.laa_mbps < 0.0 => return Err(ScenarioError::Rates),
            Some(r) => Some(Rates {
                r_w: r.wifi_mbps * 1e6,
                r_l: r.laa_mbps * 1e6,
            }),
            None => None,
        };
        Ok(ScenarioSpec {
            name: self.name.clone(),
            scenario,
            rounds,
            seeds,
            rates,
            source: self,
        })
    }
}

pub fn parse_scenario_str(text: &str) -> Result<ScenarioSpec, ScenarioError> {
    ScenarioFile::from_toml(text)?.into_spec()
}

pub fn parse_scenario(path: &Path) -> Result<ScenarioSpec, ScenarioError> {
    parse_scenario_str(&read(path)?)
}

fn read(path: &Path) -> Result<String, ScenarioError> {
    fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Node count of the targeted groups.
    Nodes,
    /// Synchronization slot Δ (µs) of the targeted groups.
    Delta,
    /// Scenario-wide grid alignment.
    Mode,
    /// Data duration D (µs) of the targeted groups.
    Data,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Nodes => "nodes",
            Axis::Delta => "delta",
            Axis::Mode => "mode",
            Axis::Data => "data",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub axis: Axis,
    pub values: Vec<toml::Value>,
    /// Group indices the axis applies to; defaults to every group (every
    /// synchronous group for `delta`).
    pub groups: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub version: Option<u32>,
    pub sweep: AxisSpec,
    pub scenario: ScenarioFile,
}

/// One expanded sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub label: String,
    pub spec: ScenarioSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub base: ScenarioFile,
    pub points: Vec<SweepPoint>,
}

fn value_label(v: &toml::Value) -> String {
    match v {
        toml::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn as_number(v: &toml::Value) -> Option<f64> {
    match v {
        toml::Value::Integer(i) => Some(*i as f64),
        toml::Value::Float(f) => Some(*f),
        _ => None,
    }
}

impl SweepFile {
    pub fn from_toml(text: &str) -> Result<SweepFile, ScenarioError> {
        let file: SweepFile = toml::from_str(text)?;
        match file.version {
            Some(SCHEMA_VERSION) | None => Ok(file),
            Some(v) => Err(ScenarioError::Version(v)),
        }
    }

    fn targets(&self) -> Result<Vec<usize>, ScenarioError> {
        let groups = &self.scenario.groups;
        let targets = match &self.sweep.groups {
            Some(list) => list.clone(),
            None => (0..groups.len())
                .filter(|&i| self.sweep.axis != Axis::Delta || groups[i].kind != GroupKind::RandomAccess)
                .collect(),
        };
        if let Some(bad) = targets.iter().find(|&&i| i >= groups.len()) {
            return Err(ScenarioError::Sweep(format!("no group {bad}")));
        }
        Ok(targets)
    }

    fn apply(&self, value: &toml::Value, targets: &[usize]) -> Result<ScenarioFile, ScenarioError> {
        let mut file = self.scenario.clone();
        let bad = || {
            ScenarioError::Sweep(format!(
                "value {} does not fit axis `{}`",
                value_label(value),
                self.sweep.axis
            ))
        };
        match self.sweep.axis {
            Axis::Mode => {
                file.sync_mode = value.clone().try_into().map_err(|_| bad())?;
            }
            Axis::Nodes => {
                let n = match value {
                    toml::Value::Integer(i) if *i >= 0 => *i as usize,
                    _ => return Err(bad()),
                };
                targets.iter().for_each(|&g| file.groups[g].count = n);
            }
            Axis::Delta => {
                let d = as_number(value).ok_or_else(bad)?;
                targets.iter().for_each(|&g| file.groups[g].delta_us = Some(d));
            }
            Axis::Data => {
                let d = as_number(value).ok_or_else(bad)?;
                targets.iter().for_each(|&g| file.groups[g].data_us = d);
            }
        }
        Ok(file)
    }

    /// Expands every axis value into a validated scenario.
    pub fn into_spec(self) -> Result<SweepSpec, ScenarioError> {
        if self.sweep.values.is_empty() {
            return Err(ScenarioError::Sweep("axis has no values".into()));
        }
        let targets = self.targets()?;
        let mut points = Vec::with_capacity(self.sweep.values.len());
        for value in &self.sweep.values {
            let label = value_label(value);
            let spec = self
                .apply(value, &targets)?
                .into_spec()
                .map_err(|e| ScenarioError::Sweep(format!("point {label}: {e}")))?;
            points.push(SweepPoint { label, spec });
        }
        Ok(SweepSpec {
            axis: self.sweep.axis,
            base: self.scenario,
            points,
        })
    }
}

pub fn parse_sweep_str(text: &str) -> Result<SweepSpec, ScenarioError> {
    SweepFile::from_toml(text)?.into_spec()
}

pub fn parse_sweep(path: &Path) -> Result<SweepSpec, ScenarioError> {
    parse_sweep_str(&read(path)?)
}
