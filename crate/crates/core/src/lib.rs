//! Monte Carlo model of downlink channel access on one unlicensed channel
//! shared by random-access (Wi-Fi), reservation-signal (LAA) and gap-based
//! (NR-U) nodes.
//!
//! - [`model`]: parameter tables, node configuration and validation
//! - [`sync`]: slot grid arithmetic for synchronous nodes
//! - [`engine`]: contention cycles and seeded runs
//! - [`metrics`]: occupancy, collision probability and throughput figures
//! - [`oracle`]: exact results for small instances

pub mod engine;
pub mod metrics;
pub mod model;
pub mod oracle;
pub mod sync;
pub mod time;

pub use engine::{run, run_with_log, RoundKind, RoundOutcome, RunResult, SimError, World};
pub use metrics::{MetricsReport, Rates, StatsAccumulator};
pub use model::{NodeConfig, Scenario, SimParams, SyncMode, TechGroup, TechnologyKind};
pub use time::Ns;
