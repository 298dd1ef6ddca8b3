//! Domain types, the standardized channel access parameter tables and
//! scenario validation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::time::Ns;

pub type NodeId = usize;

/// Synchronization slot durations an LAA/NR-U node may be configured with.
pub const SYNC_SLOT_DURATIONS: [Ns; 8] = [
    Ns::from_us(9),
    Ns::from_us(18),
    Ns::from_us(36),
    Ns::from_us(63),
    Ns::from_us(125),
    Ns::from_us(250),
    Ns::from_us(500),
    Ns::from_us(1000),
];

/// 802.11 PPDUMaxTime, selectable in place of the TXOP limit.
pub const PPDU_MAX_TIME: Ns = Ns::from_us(5484);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("no {standard} priority class {priority} for {direction}")]
    UnknownPriorityClass {
        standard: Standard,
        priority: PriorityId,
        direction: Direction,
    },
    #[error("unsupported slots per subframe {0} (expected 1, 2, 4 or 8)")]
    UnsupportedNumerology(u32),
    #[error("invalid priority id '{0}'")]
    BadPriorityId(String),
    #[error("invalid scenario:\n{}", format_list(.0))]
    Invalid(Vec<ValidationError>),
}

fn format_list(errors: &[ValidationError]) -> String {
    errors
        .iter()
        .map(|e| format!("  - {e}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// A single violated invariant, located by node and field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationError {
    pub node: Option<NodeId>,
    pub field: String,
    pub message: String,
}

impl ValidationError {
    fn new(node: Option<NodeId>, field: &str, message: impl Into<String>) -> Self {
        ValidationError {
            node,
            field: field.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(id) => write!(f, "node {id}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

/// Global timing constants shared by every node of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimParams {
    /// Backoff (observation) slot σ.
    pub slot_sigma: Ns,
    pub sifs: Ns,
    /// Carrier sensing delay CS.
    pub sensing_cs: Ns,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            slot_sigma: Ns::from_us(9),
            sifs: Ns::from_us(16),
            sensing_cs: Ns::from_us(1),
        }
    }
}

impl SimParams {
    pub fn check(&self) -> Vec<ValidationError> {
        let mut errs = Vec::new();
        if self.slot_sigma == Ns::ZERO {
            errs.push(ValidationError::new(None, "slot_sigma", "must be positive"));
        }
        if self.sifs == Ns::ZERO {
            errs.push(ValidationError::new(None, "sifs", "must be positive"));
        }
        if self.sensing_cs == Ns::ZERO {
            errs.push(ValidationError::new(None, "sensing_cs", "must be positive"));
        } else if self.sensing_cs.0 * 2 >= self.slot_sigma.0 {
            errs.push(ValidationError::new(
                None,
                "sensing_cs",
                format!(
                    "sensing delay {} must be shorter than half a backoff slot ({})",
                    self.sensing_cs, self.slot_sigma
                ),
            ));
        }
        errs
    }
}

/// Listen-before-talk parameters of one priority class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PriorityClassParams {
    /// Fixed number of observation slots preceding the backoff (AIFSN / m / p0).
    pub p: u32,
    pub cw_min: u32,
    pub cw_max: u32,
    /// Maximum channel occupancy per access.
    pub o_max: Ns,
}

fn is_window(w: u32) -> bool {
    (w as u64 + 1).is_power_of_two()
}

/// One binary exponential backoff step: `w -> 2(w + 1) - 1`, capped at `cw_max`.
pub fn double_window(cw: u32, cw_max: u32) -> u32 {
    (2 * (cw as u64 + 1) - 1).min(cw_max as u64) as u32
}

impl PriorityClassParams {
    pub fn with_o_max(self, o_max: Ns) -> Self {
        PriorityClassParams { o_max, ..self }
    }

    /// Every contention window value reachable from `cw_min`.
    pub fn window_ladder(&self) -> Vec<u32> {
        let mut ladder = vec![self.cw_min];
        let mut w = self.cw_min;
        while w < self.cw_max {
            w = double_window(w, self.cw_max);
            ladder.push(w);
        }
        ladder
    }

    pub fn check(&self, node: Option<NodeId>) -> Vec<ValidationError> {
        let mut errs = Vec::new();
        if self.p < 1 {
            errs.push(ValidationError::new(node, "class.p", "must be at least 1"));
        }
        if self.cw_min == 0 || self.cw_min > self.cw_max {
            errs.push(ValidationError::new(
                node,
                "class.cw_min",
                format!("need 0 < cw_min <= cw_max, got {} / {}", self.cw_min, self.cw_max),
            ));
            return errs;
        }
        if !is_window(self.cw_min) {
            errs.push(ValidationError::new(node, "class.cw_min", "must be of form 2^k - 1"));
        }
        if !is_window(self.cw_max) {
            errs.push(ValidationError::new(node, "class.cw_max", "must be of form 2^k - 1"));
        }
        if is_window(self.cw_min)
            && is_window(self.cw_max)
            && self.window_ladder().last() != Some(&self.cw_max)
        {
            errs.push(ValidationError::new(
                node,
                "class.cw_max",
                "not reachable from cw_min by doubling",
            ));
        }
        if self.o_max == Ns::ZERO {
            errs.push(ValidationError::new(node, "class.o_max", "must be positive"));
        }
        errs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Standard {
    Etsi,
    #[serde(rename = "3gpp")]
    ThreeGpp,
    Ieee80211,
}

impl fmt::Display for Standard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Standard::Etsi => "ETSI",
            Standard::ThreeGpp => "3GPP",
            Standard::Ieee80211 => "IEEE 802.11",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Dl,
    Ul,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Dl => "DL",
            Direction::Ul => "UL",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AccessCategory {
    Vo,
    Vi,
    Be,
    Bk,
}

/// Priority identifier: a numbered class (ETSI, 3GPP) or an 802.11 access category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PriorityId {
    Class(u8),
    Ac(AccessCategory),
}

impl fmt::Display for PriorityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PriorityId::Class(n) => write!(f, "{n}"),
            PriorityId::Ac(ac) => write!(
                f,
                "AC_{}",
                match ac {
                    AccessCategory::Vo => "VO",
                    AccessCategory::Vi => "VI",
                    AccessCategory::Be => "BE",
                    AccessCategory::Bk => "BK",
                }
            ),
        }
    }
}

impl FromStr for PriorityId {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        let ac = upper.strip_prefix("AC_").unwrap_or(&upper);
        match ac {
            "VO" => Ok(PriorityId::Ac(AccessCategory::Vo)),
            "VI" => Ok(PriorityId::Ac(AccessCategory::Vi)),
            "BE" => Ok(PriorityId::Ac(AccessCategory::Be)),
            "BK" => Ok(PriorityId::Ac(AccessCategory::Bk)),
            _ => upper
                .parse::<u8>()
                .map(PriorityId::Class)
                .map_err(|_| ConfigError::BadPriorityId(s.to_string())),
        }
    }
}

const fn row(p: u32, cw_min: u32, cw_max: u32, o_max_us: u64) -> PriorityClassParams {
    PriorityClassParams {
        p,
        cw_min,
        cw_max,
        o_max: Ns::from_us(o_max_us),
    }
}

/// Returns the channel access parameters of a priority class.
///
/// ETSI classes are labelled 4 (highest priority) down to 1, 3GPP classes
/// 1 (highest) to 4, and 802.11 uses access categories. For 802.11 the
/// returned `o_max` is the TXOP limit; see [`PPDU_MAX_TIME`] for the PHY
/// limit that can replace it.
pub fn lookup_priority_class(
    standard: Standard,
    priority: PriorityId,
    direction: Direction,
) -> Result<PriorityClassParams, ConfigError> {
    use AccessCategory::*;
    use Direction::*;
    use PriorityId::*;
    use Standard::*;
    let params = match (standard, priority, direction) {
        (Etsi, Class(4), Dl) => row(1, 3, 7, 2000),
        (Etsi, Class(4), Ul) => row(2, 3, 7, 2000),
        (Etsi, Class(3), Dl) => row(1, 7, 15, 4000),
        (Etsi, Class(3), Ul) => row(2, 7, 15, 4000),
        (Etsi, Class(2), Dl) => row(3, 15, 63, 6000),
        (Etsi, Class(2), Ul) => row(3, 15, 1023, 6000),
        (Etsi, Class(1), _) => row(7, 15, 1023, 6000),

        (ThreeGpp, Class(1), Dl) => row(1, 3, 7, 2000),
        (ThreeGpp, Class(1), Ul) => row(2, 3, 7, 2000),
        (ThreeGpp, Class(2), Dl) => row(1, 7, 15, 3000),
        (ThreeGpp, Class(2), Ul) => row(2, 7, 15, 4000),
        (ThreeGpp, Class(3), Dl) => row(3, 15, 63, 8000),
        (ThreeGpp, Class(3), Ul) => row(3, 15, 1023, 6000),
        (ThreeGpp, Class(4), Dl) => row(7, 15, 1023, 8000),
        (ThreeGpp, Class(4), Ul) => row(7, 15, 1023, 6000),

        (Ieee80211, Ac(Vo), Dl) => row(1, 3, 7, 2080),
        (Ieee80211, Ac(Vo), Ul) => row(2, 3, 7, 2080),
        (Ieee80211, Ac(Vi), Dl) => row(1, 7, 15, 4096),
        (Ieee80211, Ac(Vi), Ul) => row(2, 7, 15, 4096),
        (Ieee80211, Ac(Be), Dl) => row(3, 15, 63, 2528),
        (Ieee80211, Ac(Be), Ul) => row(3, 15, 1023, 2528),
        (Ieee80211, Ac(Bk), _) => row(7, 15, 1023, 2528),

        _ => {
            return Err(ConfigError::UnknownPriorityClass {
                standard,
                priority,
                direction,
            })
        }
    };
    Ok(params)
}

/// The alternate occupancy limit a standard allows in place of its table
/// value, if any.
pub fn o_max_override(standard: Standard) -> Option<Ns> {
    match standard {
        Standard::Ieee80211 => Some(PPDU_MAX_TIME),
        _ => None,
    }
}

/// NR-U numerology for a given number of slots per 1 ms subframe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Numerology {
    pub slots_per_subframe: u32,
    pub subcarrier_spacing_khz: u32,
    /// OFDM symbol duration including cyclic prefix, in µs.
    pub symbol_duration_us: f64,
    pub slot_duration: Ns,
}

pub fn numerology(slots_per_subframe: u32) -> Result<Numerology, ConfigError> {
    if !matches!(slots_per_subframe, 1 | 2 | 4 | 8) {
        return Err(ConfigError::UnsupportedNumerology(slots_per_subframe));
    }
    Ok(Numerology {
        slots_per_subframe,
        subcarrier_spacing_khz: 15 * slots_per_subframe,
        symbol_duration_us: 71.35 / slots_per_subframe as f64,
        slot_duration: Ns(1_000_000 / slots_per_subframe as u64),
    })
}

/// Channel access behaviour of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TechnologyKind {
    /// Wi-Fi style: transmits as soon as the backoff expires, in-band ACK.
    RandomAccess,
    /// LAA style: fills the time to the next slot boundary with a reservation signal.
    SyncRs,
    /// NR-U style: idles for a gap before the backoff so it expires on a slot boundary.
    SyncGap,
}

impl TechnologyKind {
    pub fn is_synchronous(self) -> bool {
        !matches!(self, TechnologyKind::RandomAccess)
    }

    /// Whether the synchronization time is spent idle (counts toward the
    /// contention delay) rather than transmitting.
    pub fn idles_for_sync(self) -> bool {
        matches!(self, TechnologyKind::SyncGap)
    }

    pub fn group(self) -> TechGroup {
        match self {
            TechnologyKind::RandomAccess => TechGroup::W,
            _ => TechGroup::L,
        }
    }
}

impl fmt::Display for TechnologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TechnologyKind::RandomAccess => "random-access",
            TechnologyKind::SyncRs => "sync-rs",
            TechnologyKind::SyncGap => "sync-gap",
        })
    }
}

/// Random-access (Wi-Fi) versus scheduled (LAA/NR-U) partition used for
/// per-technology totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TechGroup {
    W,
    L,
}

/// Static configuration of one contending node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeConfig {
    pub id: NodeId,
    pub kind: TechnologyKind,
    pub class: PriorityClassParams,
    /// Synchronization slot duration Δ (zero for random access).
    pub delta: Ns,
    /// Offset of this node's slot grid, in `[0, delta)`.
    pub phase: Ns,
    /// Data transmission duration D.
    pub data_duration: Ns,
    /// In-band acknowledgement duration; only random-access nodes send one.
    pub ack_duration: Ns,
}

impl NodeConfig {
    pub fn check(&self) -> Vec<ValidationError> {
        let id = Some(self.id);
        let mut errs = self.class.check(id);
        if self.data_duration == Ns::ZERO {
            errs.push(ValidationError::new(id, "data_duration", "must be positive"));
        }
        if self.data_duration > self.class.o_max {
            errs.push(ValidationError::new(
                id,
                "data_duration",
                format!(
                    "{} exceeds maximum channel occupancy {}",
                    self.data_duration, self.class.o_max
                ),
            ));
        }
        match self.kind {
            TechnologyKind::RandomAccess => {
                if self.delta != Ns::ZERO {
                    errs.push(ValidationError::new(
                        id,
                        "delta",
                        "random-access nodes have no synchronization grid",
                    ));
                }
                if self.phase != Ns::ZERO {
                    errs.push(ValidationError::new(
                        id,
                        "phase",
                        "random-access nodes have no synchronization grid",
                    ));
                }
            }
            TechnologyKind::SyncRs | TechnologyKind::SyncGap => {
                if !SYNC_SLOT_DURATIONS.contains(&self.delta) {
                    errs.push(ValidationError::new(
                        id,
                        "delta",
                        format!(
                            "{} is not a supported synchronization slot (9, 18, 36, 63, 125, 250, 500 or 1000 us)",
                            self.delta
                        ),
                    ));
                }
                if self.phase >= self.delta {
                    errs.push(ValidationError::new(
                        id,
                        "phase",
                        format!("{} must be below delta {}", self.phase, self.delta),
                    ));
                }
                if self.kind == TechnologyKind::SyncRs && self.data_duration < self.delta {
                    errs.push(ValidationError::new(
                        id,
                        "data_duration",
                        "reservation-signal nodes need data_duration >= delta",
                    ));
                }
            }
        }
        errs
    }
}

/// Dynamic contention state of one node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeState {
    /// Residual backoff counter, in slots.
    pub backoff: u32,
    /// Synchronization time β (gap or reservation signal).
    pub sync_time: Ns,
    pub cw: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimClock {
    pub round: u64,
    pub now: Ns,
}

/// How synchronous nodes place their slot grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyncMode {
    /// All grids aligned at phase 0.
    Synchronized,
    /// Independent uniform phase per node, drawn once per run.
    Desynchronized,
    /// Use the phases stored in the node configs.
    Explicit,
}

/// A complete, self-contained simulation setup.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    pub params: SimParams,
    pub nodes: Vec<NodeConfig>,
    pub sync_mode: SyncMode,
}

/// Checks every node and cross-node invariant, reporting all violations.
pub fn validate_scenario(scenario: Scenario) -> Result<Scenario, ConfigError> {
    let mut errs = scenario.params.check();
    if scenario.nodes.is_empty() {
        errs.push(ValidationError::new(None, "nodes", "at least one node is required"));
    }
    for (idx, node) in scenario.nodes.iter().enumerate() {
        if node.id != idx {
            errs.push(ValidationError::new(
                Some(node.id),
                "id",
                format!("node ids must be 0..N in order, found {} at position {idx}", node.id),
            ));
        }
        errs.extend(node.check());
    }
    if errs.is_empty() {
        Ok(scenario)
    } else {
        Err(ConfigError::Invalid(errs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nru(delta_us: u64, phase_us: u64) -> NodeConfig {
        NodeConfig {
            id: 0,
            kind: TechnologyKind::SyncGap,
            class: lookup_priority_class(Standard::ThreeGpp, PriorityId::Class(3), Direction::Dl)
                .unwrap(),
            delta: Ns::from_us(delta_us),
            phase: Ns::from_us(phase_us),
            data_duration: Ns::from_ms(6),
            ack_duration: Ns::ZERO,
        }
    }

    fn scenario(nodes: Vec<NodeConfig>) -> Scenario {
        Scenario {
            params: SimParams::default(),
            nodes,
            sync_mode: SyncMode::Explicit,
        }
    }

    #[test]
    fn table_rows() {
        let c = lookup_priority_class(Standard::ThreeGpp, PriorityId::Class(3), Direction::Dl)
            .unwrap();
        assert_eq!(c, row(3, 15, 63, 8000));
        let be = lookup_priority_class(Standard::Ieee80211, "AC_BE".parse().unwrap(), Direction::Dl)
            .unwrap();
        assert_eq!(be, row(3, 15, 63, 2528));
        assert_eq!(o_max_override(Standard::Ieee80211), Some(Ns::from_us(5484)));
        assert_eq!(be.with_o_max(PPDU_MAX_TIME).o_max, Ns::from_us(5484));
        let e4 = lookup_priority_class(Standard::Etsi, PriorityId::Class(4), Direction::Dl).unwrap();
        assert_eq!(e4, row(1, 3, 7, 2000));
    }

    #[test]
    fn table_is_total_and_consistent() {
        let acs = [
            AccessCategory::Vo,
            AccessCategory::Vi,
            AccessCategory::Be,
            AccessCategory::Bk,
        ];
        for dir in [Direction::Dl, Direction::Ul] {
            for std in [Standard::Etsi, Standard::ThreeGpp] {
                for n in 1..=4 {
                    let c = lookup_priority_class(std, PriorityId::Class(n), dir).unwrap();
                    assert!(c.check(None).is_empty(), "{std} {n} {dir}");
                    assert!(lookup_priority_class(std, PriorityId::Ac(acs[0]), dir).is_err());
                }
                assert!(lookup_priority_class(std, PriorityId::Class(5), dir).is_err());
            }
            for ac in acs {
                let c = lookup_priority_class(Standard::Ieee80211, PriorityId::Ac(ac), dir).unwrap();
                assert!(c.check(None).is_empty());
            }
            assert!(lookup_priority_class(Standard::Ieee80211, PriorityId::Class(1), dir).is_err());
        }
    }

    #[test]
    fn window_doubling_reaches_cw_max() {
        let be = row(3, 15, 63, 2528);
        assert_eq!(be.window_ladder(), vec![15, 31, 63]);
        assert_eq!(double_window(15, 63), 31);
        assert_eq!(double_window(31, 63), 63);
        assert_eq!(double_window(63, 63), 63);
        assert_eq!(double_window(3, 7), 7);
        assert_eq!(row(7, 15, 1023, 1).window_ladder().len(), 7);
    }

    #[test]
    fn bad_class_params() {
        assert!(!row(0, 15, 63, 1).check(None).is_empty());
        assert!(!row(3, 14, 63, 1).check(None).is_empty());
        assert!(!row(3, 63, 15, 1).check(None).is_empty());
        assert!(!row(3, 0, 15, 1).check(None).is_empty());
    }

    #[test]
    fn numerology_table() {
        let n8 = numerology(8).unwrap();
        assert_eq!(n8.subcarrier_spacing_khz, 120);
        assert_eq!(n8.slot_duration, Ns::from_us(125));
        let n1 = numerology(1).unwrap();
        assert_eq!(n1.subcarrier_spacing_khz, 15);
        assert_eq!(n1.slot_duration, Ns::from_us(1000));
        assert!((n1.symbol_duration_us - 71.35).abs() < 1e-12);
        assert_eq!(numerology(4).unwrap().slot_duration, Ns::from_us(250));
        assert_eq!(numerology(3), Err(ConfigError::UnsupportedNumerology(3)));
    }

    #[test]
    fn six_ms_under_eight_ms_mcot_is_accepted() {
        assert!(validate_scenario(scenario(vec![nru(9, 0)])).is_ok());
    }

    #[test]
    fn off_table_delta_is_rejected() {
        let mut n = nru(9, 0);
        n.delta = Ns::from_us(10);
        let Err(ConfigError::Invalid(errs)) = validate_scenario(scenario(vec![n])) else {
            panic!("expected rejection");
        };
        assert!(errs.iter().any(|e| e.field == "delta" && e.node == Some(0)));
    }

    #[test]
    fn phase_equal_to_delta_is_rejected() {
        let Err(ConfigError::Invalid(errs)) = validate_scenario(scenario(vec![nru(9, 9)])) else {
            panic!("expected rejection");
        };
        assert!(errs.iter().any(|e| e.field == "phase"));
    }

    #[test]
    fn all_violations_reported() {
        let mut wifi = nru(9, 0);
        wifi.id = 1;
        wifi.kind = TechnologyKind::RandomAccess;
        wifi.data_duration = Ns::from_ms(9);
        wifi.phase = Ns::from_us(3);
        let Err(ConfigError::Invalid(errs)) = validate_scenario(scenario(vec![nru(9, 9), wifi]))
        else {
            panic!("expected rejection");
        };
        let fields: Vec<_> = errs.iter().map(|e| (e.node, e.field.as_str())).collect();
        assert!(fields.contains(&(Some(0), "phase")));
        assert!(fields.contains(&(Some(1), "delta")));
        assert!(fields.contains(&(Some(1), "phase")));
        assert!(fields.contains(&(Some(1), "data_duration")));
    }

    #[test]
    fn empty_and_bad_params_rejected() {
        let mut s = scenario(vec![]);
        s.params.sensing_cs = Ns(4_500);
        let Err(ConfigError::Invalid(errs)) = validate_scenario(s) else {
            panic!()
        };
        assert!(errs.iter().any(|e| e.field == "nodes"));
        assert!(errs.iter().any(|e| e.field == "sensing_cs"));
    }
}
