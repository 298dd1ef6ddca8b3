//! Contention-round engine.
//!
//! Channel access is split into cycles. Each cycle starts when the channel
//! becomes idle (time `t(n)`), lasts the contention delay δ·σ until the
//! first node starts transmitting, and ends after the longest transmission
//! of the winner set ξ, including its trailing SIFS (and ACK for Wi-Fi).
//! A node's access offset within the cycle is `(p + b)·σ`, plus its gap β
//! for gap-based nodes; reservation-signal nodes start transmitting as
//! soon as their countdown expires and spend β on the reservation signal.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::StatsAccumulator;
use crate::model::{
    double_window, validate_scenario, ConfigError, NodeConfig, NodeId, NodeState, Scenario,
    SimClock, SimParams, TechGroup, TechnologyKind,
};
use crate::sync::{draw_offsets, sync_time, SlotGrid};
use crate::time::Ns;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("scenario has no nodes")]
    NoNodes,
    #[error("a run needs at least one round")]
    NoRounds,
}

/// Supplier of uniform backoff draws `rand(cw)` in `[0, cw]`.
///
/// The engine requests draws in increasing node id order, so replacing the
/// source replays the exact same model with injected values.
pub trait BackoffSource {
    fn draw(&mut self, node: NodeId, cw: u32) -> u32;
}

/// Backoff source backed by a random number generator.
#[derive(Debug, Clone)]
pub struct RngSource<R>(pub R);

impl<R: Rng> BackoffSource for RngSource<R> {
    fn draw(&mut self, _node: NodeId, cw: u32) -> u32 {
        self.0.gen_range(0..=cw)
    }
}

/// Replays a fixed sequence of draws; panics if it runs out.
#[derive(Debug, Clone)]
pub struct ScriptedSource {
    draws: Vec<u32>,
    next: usize,
}

impl ScriptedSource {
    pub fn new(draws: Vec<u32>) -> Self {
        ScriptedSource { draws, next: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.draws.len() - self.next
    }
}

impl BackoffSource for ScriptedSource {
    fn draw(&mut self, node: NodeId, cw: u32) -> u32 {
        let v = *self
            .draws
            .get(self.next)
            .unwrap_or_else(|| panic!("scripted draws exhausted at node {node}"));
        assert!(v <= cw, "scripted draw {v} exceeds window {cw} of node {node}");
        self.next += 1;
        v
    }
}

/// Records which draws are requested and answers each with zero.
#[derive(Debug, Clone, Default)]
pub struct DrawRecorder {
    pub requests: Vec<(NodeId, u32)>,
}

impl BackoffSource for DrawRecorder {
    fn draw(&mut self, node: NodeId, cw: u32) -> u32 {
        self.requests.push((node, cw));
        0
    }
}

/// Channel occupancy of a node if it transmits in the current cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransmissionProfile {
    /// P_k: airtime including trailing SIFS (and ACK + SIFS for random access).
    pub total_occupancy: Ns,
    /// Leading reservation signal (reservation-signal nodes only).
    pub rs_portion: Ns,
    /// Payload airtime.
    pub payload_portion: Ns,
}

impl TransmissionProfile {
    pub fn for_node(cfg: &NodeConfig, state: &NodeState, params: &SimParams) -> Self {
        let d = cfg.data_duration;
        match cfg.kind {
            TechnologyKind::RandomAccess => TransmissionProfile {
                total_occupancy: d + params.sifs + cfg.ack_duration + params.sifs,
                rs_portion: Ns::ZERO,
                payload_portion: d,
            },
            TechnologyKind::SyncGap => TransmissionProfile {
                total_occupancy: d + params.sifs,
                rs_portion: Ns::ZERO,
                payload_portion: d,
            },
            TechnologyKind::SyncRs => TransmissionProfile {
                total_occupancy: d + params.sifs,
                rs_portion: state.sync_time,
                payload_portion: d - state.sync_time,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum RoundKind {
    Success { node: NodeId },
    Collision { nodes: Vec<NodeId> },
}

/// A transmission started in a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transmission {
    pub node: NodeId,
    /// Absolute time the node's countdown (and gap) expired.
    pub start: Ns,
    pub profile: TransmissionProfile,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundOutcome {
    /// Round index n (0-based).
    pub round: u64,
    /// t(n): start of the cycle.
    pub start: Ns,
    /// δ·σ.
    pub delta: Ns,
    /// Winner set ξ, in node id order.
    pub winners: Vec<NodeId>,
    pub kind: RoundKind,
    pub transmissions: Vec<Transmission>,
    /// δ·σ + max P over ξ; equals t(n+1) − t(n).
    pub airtime_consumed: Ns,
}

impl RoundOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self.kind, RoundKind::Success { .. })
    }

    /// δ in (fractional) backoff slots.
    pub fn delta_slots(&self, params: &SimParams) -> f64 {
        self.delta.in_slots(params.slot_sigma)
    }
}

/// Time from the start of the cycle until node `cfg` would start transmitting.
pub fn access_offset(cfg: &NodeConfig, state: &NodeState, params: &SimParams) -> Ns {
    let countdown = params.slot_sigma * (cfg.class.p as u64 + state.backoff as u64);
    if cfg.kind.idles_for_sync() {
        countdown + state.sync_time
    } else {
        countdown
    }
}

/// Contention delay δ·σ: the smallest access offset over all nodes.
pub fn contention_delay(
    configs: &[NodeConfig],
    states: &[NodeState],
    params: &SimParams,
) -> Result<Ns, SimError> {
    configs
        .iter()
        .zip(states)
        .map(|(c, s)| access_offset(c, s, params))
        .min()
        .ok_or(SimError::NoNodes)
}

/// Winner set ξ: nodes starting before they can sense the first transmission.
pub fn winner_set(
    configs: &[NodeConfig],
    states: &[NodeState],
    params: &SimParams,
    delta: Ns,
) -> Vec<NodeId> {
    configs
        .iter()
        .zip(states)
        .filter(|(c, s)| access_offset(c, s, params) - delta < params.sensing_cs)
        .map(|(c, _)| c.id)
        .collect()
}

/// t(n+1) = t(n) + δ·σ + max P_j over the winners.
pub fn advance_clock(clock: SimClock, delta: Ns, winners: &[TransmissionProfile]) -> SimClock {
    let busy = winners
        .iter()
        .map(|p| p.total_occupancy)
        .max()
        .expect("winner set is never empty");
    SimClock {
        round: clock.round + 1,
        now: clock.now + delta + busy,
    }
}

/// New contention window of a node that transmitted.
pub fn update_cw(cw: u32, cfg: &NodeConfig, collided: bool) -> u32 {
    if collided {
        double_window(cw, cfg.class.cw_max)
    } else {
        cfg.class.cw_min
    }
}

fn ceil_div(num: i64, den: i64) -> i64 {
    num.div_euclid(den) + i64::from(num.rem_euclid(den) != 0)
}

/// Residual backoff of a node that did not transmit in the cycle.
///
/// Random-access and reservation-signal nodes count down `⌈δ⌉ − p` slots;
/// gap nodes only count once their gap has elapsed, `⌈δ − β/σ⌉ − p`.
pub fn residual_backoff(cfg: &NodeConfig, state: &NodeState, params: &SimParams, delta: Ns) -> u32 {
    let idle = if cfg.kind.idles_for_sync() {
        delta.0 as i64 - state.sync_time.0 as i64
    } else {
        delta.0 as i64
    };
    let slots = ceil_div(idle, params.slot_sigma.0 as i64);
    let counted = (slots - cfg.class.p as i64).max(0);
    (state.backoff as i64 - counted).max(0) as u32
}

/// Updates every node's backoff after a cycle: winners redraw from their
/// (already updated) window, the rest keep their residual counter.
pub fn update_backoffs<S: BackoffSource + ?Sized>(
    configs: &[NodeConfig],
    states: &mut [NodeState],
    params: &SimParams,
    delta: Ns,
    winners: &[NodeId],
    source: &mut S,
) {
    for (cfg, state) in configs.iter().zip(states.iter_mut()) {
        state.backoff = if winners.contains(&cfg.id) {
            source.draw(cfg.id, state.cw)
        } else {
            residual_backoff(cfg, state, params, delta)
        };
    }
}

/// Synchronization time for a cycle starting at `now`, aligning the end of
/// the node's countdown with its slot grid.
pub fn cycle_sync_time(cfg: &NodeConfig, state: &NodeState, params: &SimParams, now: Ns) -> Ns {
    match SlotGrid::of(cfg) {
        Some(grid) => {
            let zeta = now + params.slot_sigma * (cfg.class.p as u64 + state.backoff as u64);
            sync_time(grid, zeta)
        }
        None => Ns::ZERO,
    }
}

/// Complete simulation state: configuration, per-node contention state,
/// clock and statistics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct World {
    params: SimParams,
    configs: Vec<NodeConfig>,
    states: Vec<NodeState>,
    clock: SimClock,
    stats: StatsAccumulator,
}

impl World {
    /// Validates the nodes (with their grid phases already resolved) and
    /// draws initial backoffs from `cw_min` in node id order.
    pub fn new<S: BackoffSource + ?Sized>(
        params: SimParams,
        configs: Vec<NodeConfig>,
        source: &mut S,
    ) -> Result<World, SimError> {
        let scenario = validate_scenario(Scenario {
            params,
            nodes: configs,
            sync_mode: crate::model::SyncMode::Explicit,
        })?;
        let configs = scenario.nodes;
        let mut states: Vec<NodeState> = configs
            .iter()
            .map(|c| NodeState {
                backoff: source.draw(c.id, c.class.cw_min),
                sync_time: Ns::ZERO,
                cw: c.class.cw_min,
            })
            .collect();
        for (cfg, state) in configs.iter().zip(states.iter_mut()) {
            state.sync_time = cycle_sync_time(cfg, state, &params, Ns::ZERO);
        }
        Ok(World {
            params,
            stats: StatsAccumulator::new(configs.len()),
            configs,
            states,
            clock: SimClock::default(),
        })
    }

    /// Like [`World::new`] but with explicit initial states, for hand traces.
    pub fn with_states(
        params: SimParams,
        configs: Vec<NodeConfig>,
        states: Vec<NodeState>,
    ) -> Result<World, SimError> {
        assert_eq!(configs.len(), states.len());
        let mut world = World::new(params, configs, &mut DrawRecorder::default())?;
        world.states = states;
        Ok(world)
    }

    pub fn params(&self) -> &SimParams {
        &self.params
    }

    pub fn configs(&self) -> &[NodeConfig] {
        &self.configs
    }

    pub fn states(&self) -> &[NodeState] {
        &self.states
    }

    pub fn clock(&self) -> SimClock {
        self.clock
    }

    pub fn stats(&self) -> &StatsAccumulator {
        &self.stats
    }

    pub fn partition(&self) -> Vec<TechGroup> {
        self.configs.iter().map(|c| c.kind.group()).collect()
    }

    /// Resolves one contention cycle and advances the state.
    pub fn resolve_round<S: BackoffSource + ?Sized>(&mut self, source: &mut S) -> RoundOutcome {
        let params = self.params;
        let start = self.clock.now;
        let delta = contention_delay(&self.configs, &self.states, &params)
            .expect("validated worlds have nodes");
        let winners = winner_set(&self.configs, &self.states, &params, delta);
        let collided = winners.len() > 1;
        let kind = if collided {
            RoundKind::Collision {
                nodes: winners.clone(),
            }
        } else {
            RoundKind::Success { node: winners[0] }
        };

        let transmissions: Vec<Transmission> = winners
            .iter()
            .map(|&k| {
                let (cfg, state) = (&self.configs[k], &self.states[k]);
                Transmission {
                    node: k,
                    start: start + access_offset(cfg, state, &params),
                    profile: TransmissionProfile::for_node(cfg, state, &params),
                }
            })
            .collect();
        let profiles: Vec<_> = transmissions.iter().map(|t| t.profile).collect();
        let clock = advance_clock(self.clock, delta, &profiles);

        for tx in &transmissions {
            let node = &mut self.stats.nodes[tx.node];
            node.attempts += 1;
            node.occupancy_ns += tx.profile.total_occupancy.0;
            if collided {
                node.collisions += 1;
            } else {
                node.successes += 1;
                node.success_occupancy_ns += tx.profile.total_occupancy.0;
                node.effective_ns += tx.profile.payload_portion.0;
                node.reservation_ns += tx.profile.rs_portion.0;
            }
        }
        self.stats.rounds += 1;
        self.stats.collision_rounds += u64::from(collided);
        self.stats.total_elapsed_ns = clock.now.0;

        for &k in &winners {
            self.states[k].cw = update_cw(self.states[k].cw, &self.configs[k], collided);
        }
        update_backoffs(&self.configs, &mut self.states, &params, delta, &winners, source);
        for (cfg, state) in self.configs.iter().zip(self.states.iter_mut()) {
            state.sync_time = cycle_sync_time(cfg, state, &params, clock.now);
        }
        self.clock = clock;

        RoundOutcome {
            round: clock.round - 1,
            start,
            delta,
            winners,
            kind,
            transmissions,
            airtime_consumed: clock.now - start,
        }
    }
}

/// Result of a single seeded run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub seed: u64,
    pub nodes: Vec<NodeConfig>,
    pub stats: StatsAccumulator,
    pub final_clock: SimClock,
}

impl RunResult {
    pub fn partition(&self) -> Vec<TechGroup> {
        self.nodes.iter().map(|c| c.kind.group()).collect()
    }
}

/// Generator behind every run: ChaCha12 seeded through `seed_from_u64`.
pub fn run_rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Runs `rounds` contention cycles. The run is a pure function of its
/// arguments: grid phases are drawn first, then the initial backoffs, then
/// one draw per winner per round, all in node id order.
pub fn run(scenario: &Scenario, rounds: u64, seed: u64) -> Result<RunResult, SimError> {
    run_with_log(scenario, rounds, seed, |_| {})
}

pub fn run_with_log<F: FnMut(&RoundOutcome)>(
    scenario: &Scenario,
    rounds: u64,
    seed: u64,
    mut log: F,
) -> Result<RunResult, SimError> {
    let scenario = validate_scenario(scenario.clone())?;
    if rounds == 0 {
        return Err(SimError::NoRounds);
    }
    let mut rng = run_rng(seed);
    let mut nodes = scenario.nodes;
    let phases = draw_offsets(&nodes, scenario.sync_mode, &mut rng);
    for (node, phase) in nodes.iter_mut().zip(phases) {
        node.phase = phase;
    }
    let mut source = RngSource(rng);
    let mut world = World::new(scenario.params, nodes, &mut source)?;
    for _ in 0..rounds {
        let outcome = world.resolve_round(&mut source);
        log(&outcome);
    }
    Ok(RunResult {
        seed,
        nodes: world.configs,
        stats: world.stats,
        final_clock: world.clock,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PriorityClassParams;

    const SIGMA: u64 = 9_000;

    fn class(p: u32) -> PriorityClassParams {
        PriorityClassParams {
            p,
            cw_min: 15,
            cw_max: 63,
            o_max: Ns::from_ms(8),
        }
    }

    fn cfg(id: NodeId, kind: TechnologyKind, p: u32) -> NodeConfig {
        let sync = kind.is_synchronous();
        NodeConfig {
            id,
            kind,
            class: class(p),
            delta: if sync { Ns::from_us(1000) } else { Ns::ZERO },
            phase: Ns::ZERO,
            data_duration: Ns::from_us(5400),
            ack_duration: if sync { Ns::ZERO } else { Ns::from_us(50) },
        }
    }

    fn st(backoff: u32, sync_ns: u64) -> NodeState {
        NodeState {
            backoff,
            sync_time: Ns(sync_ns),
            cw: 15,
        }
    }

    #[test]
    fn delay_of_single_gap_node() {
        // b = 1 plus a 3.1 slot gap.
        let mut c = cfg(0, TechnologyKind::SyncGap, 0);
        c.class.p = 0;
        let d = contention_delay(&[c], &[st(1, 27_900)], &SimParams::default()).unwrap();
        assert_eq!(d, Ns(36_900));
        assert!((d.in_slots(Ns(SIGMA)) - 4.1).abs() < 1e-12);
    }

    #[test]
    fn delay_of_immediate_random_access() {
        let mut c = cfg(0, TechnologyKind::RandomAccess, 1);
        c.class.p = 0;
        assert_eq!(
            contention_delay(&[c], &[st(0, 0)], &SimParams::default()).unwrap(),
            Ns::ZERO
        );
        assert!(matches!(
            contention_delay(&[], &[], &SimParams::default()),
            Err(SimError::NoNodes)
        ));
    }

    #[test]
    fn reservation_signal_time_is_not_contention_delay() {
        let configs = [
            cfg(0, TechnologyKind::RandomAccess, 3),
            cfg(1, TechnologyKind::SyncRs, 3),
            cfg(2, TechnologyKind::SyncGap, 3),
        ];
        let states = [st(5, 0), st(4, 2 * SIGMA), st(2, 31_500)];
        let params = SimParams::default();
        let d = contention_delay(&configs, &states, &params).unwrap();
        assert_eq!(d, Ns(7 * SIGMA));
        assert_eq!(winner_set(&configs, &states, &params, d), vec![1]);
    }

    #[test]
    fn winner_set_within_sensing_delay() {
        let params = SimParams::default();
        let configs: Vec<_> = (0..3).map(|i| cfg(i, TechnologyKind::SyncGap, 0)).collect();
        let states = [st(2, 0), st(2, 450), st(2, 13_500)];
        let d = contention_delay(&configs, &states, &params).unwrap();
        assert_eq!(winner_set(&configs, &states, &params, d), vec![0, 1]);

        let ties = [cfg(0, TechnologyKind::RandomAccess, 3), cfg(1, TechnologyKind::RandomAccess, 3)];
        let d = contention_delay(&ties, &[st(4, 0), st(4, 0)], &params).unwrap();
        assert_eq!(winner_set(&ties, &[st(4, 0), st(4, 0)], &params, d), vec![0, 1]);
        assert_eq!(winner_set(&ties[..1], &[st(4, 0)], &params, d), vec![0]);
    }

    #[test]
    fn clock_advances_by_longest_winner() {
        let params = SimParams::default();
        let wifi = cfg(0, TechnologyKind::RandomAccess, 3);
        let p = TransmissionProfile::for_node(&wifi, &st(4, 0), &params);
        assert_eq!(p.total_occupancy, Ns::from_us(5482));
        let c = advance_clock(SimClock::default(), Ns(7 * SIGMA), &[p]);
        assert_eq!(c, SimClock { round: 1, now: Ns::from_us(5545) });

        let mut laa = cfg(1, TechnologyKind::SyncRs, 3);
        laa.data_duration = Ns::from_ms(6);
        let rs = TransmissionProfile::for_node(&laa, &st(0, 400_000), &params);
        assert_eq!(rs.total_occupancy, Ns::from_us(6016));
        assert_eq!(rs.rs_portion, Ns::from_us(400));
        assert_eq!(rs.payload_portion, Ns::from_us(5600));
        let start = SimClock { round: 3, now: Ns::from_ms(10) };
        let c = advance_clock(start, Ns::ZERO, &[rs, p]);
        assert_eq!(c.now, Ns::from_ms(10) + Ns::from_us(6016));
        assert_eq!(advance_clock(start, Ns::ZERO, &[p]).now, Ns::from_ms(10) + Ns::from_us(5482));
    }

    #[test]
    fn residual_backoff_follows_ceiling_rule() {
        let params = SimParams::default();
        let delta = Ns(3 * SIGMA + 3_600); // 3.4 slots
        let wifi = cfg(0, TechnologyKind::RandomAccess, 0);
        assert_eq!(residual_backoff(&wifi, &st(5, 0), &params, delta), 1);
        let laa = cfg(0, TechnologyKind::SyncRs, 0);
        assert_eq!(residual_backoff(&laa, &st(5, 2 * SIGMA), &params, delta), 1);
        let nru = cfg(0, TechnologyKind::SyncGap, 0);
        assert_eq!(residual_backoff(&nru, &st(5, 2 * SIGMA), &params, delta), 3);
        // gap still pending: nothing counted
        assert_eq!(residual_backoff(&nru, &st(5, 5 * SIGMA), &params, delta), 5);
        // never below zero
        assert_eq!(residual_backoff(&wifi, &st(2, 0), &params, Ns(9 * SIGMA)), 0);
        // p slots are not part of the backoff countdown
        let wifi3 = cfg(0, TechnologyKind::RandomAccess, 3);
        assert_eq!(residual_backoff(&wifi3, &st(5, 0), &params, Ns(5 * SIGMA)), 3);
        assert_eq!(residual_backoff(&wifi3, &st(5, 0), &params, Ns(2 * SIGMA)), 5);
    }

    #[test]
    fn window_update() {
        let c = cfg(0, TechnologyKind::RandomAccess, 3);
        assert_eq!(update_cw(15, &c, true), 31);
        assert_eq!(update_cw(31, &c, true), 63);
        assert_eq!(update_cw(63, &c, true), 63);
        assert_eq!(update_cw(63, &c, false), 15);
        let mut c4 = c.clone();
        c4.class = PriorityClassParams { p: 1, cw_min: 3, cw_max: 7, o_max: Ns::from_ms(2) };
        assert_eq!(update_cw(3, &c4, true), 7);
    }

    #[test]
    fn winners_redraw_others_count_down() {
        let params = SimParams::default();
        let configs = [cfg(0, TechnologyKind::RandomAccess, 3), cfg(1, TechnologyKind::RandomAccess, 3)];
        let mut states = [st(2, 0), st(6, 0)];
        states[0].cw = 31;
        let mut src = ScriptedSource::new(vec![30]);
        update_backoffs(&configs, &mut states, &params, Ns(5 * SIGMA), &[0], &mut src);
        assert_eq!(states[0].backoff, 30);
        assert_eq!(states[1].backoff, 4);
        assert_eq!(src.remaining(), 0);
    }

    #[test]
    fn single_node_hand_trace() {
        let params = SimParams::default();
        let wifi = cfg(0, TechnologyKind::RandomAccess, 3);
        let mut world = World::new(params, vec![wifi], &mut ScriptedSource::new(vec![4])).unwrap();
        let out = world.resolve_round(&mut ScriptedSource::new(vec![9]));
        assert_eq!(out.delta, Ns(7 * SIGMA));
        assert_eq!(out.kind, RoundKind::Success { node: 0 });
        assert_eq!(world.clock().now, Ns::from_us(5545));
        assert_eq!(out.airtime_consumed, Ns::from_us(5545));
        let s = world.stats().nodes[0];
        assert_eq!((s.attempts, s.successes, s.collisions), (1, 1, 0));
        assert_eq!(s.occupancy_ns, 5_482_000);
        assert_eq!(s.effective_ns, 5_400_000);
        assert_eq!(world.states()[0].backoff, 9);
    }

    #[test]
    fn forced_tie_doubles_both_windows() {
        let params = SimParams::default();
        let configs = vec![cfg(0, TechnologyKind::RandomAccess, 3), cfg(1, TechnologyKind::RandomAccess, 3)];
        let mut world = World::new(params, configs, &mut ScriptedSource::new(vec![5, 5])).unwrap();
        let out = world.resolve_round(&mut ScriptedSource::new(vec![1, 2]));
        assert_eq!(out.kind, RoundKind::Collision { nodes: vec![0, 1] });
        assert!(world.states().iter().all(|s| s.cw == 31));
        assert_eq!(world.stats().collision_rounds, 1);
    }

    #[test]
    fn gap_and_rs_starts_land_on_grid() {
        let params = SimParams::default();
        let mut gap = cfg(0, TechnologyKind::SyncGap, 3);
        gap.phase = Ns::from_us(300);
        let mut rs = cfg(1, TechnologyKind::SyncRs, 3);
        rs.phase = Ns::from_us(700);
        let mut world = World::new(params, vec![gap, rs], &mut ScriptedSource::new(vec![2, 3])).unwrap();
        let s = world.states();
        // zeta = 5 slots = 45 us; next grid point 300 us (gap) / 700 us (rs)
        assert_eq!(s[0].sync_time, Ns::from_us(255));
        assert_eq!(s[1].sync_time, Ns::from_us(646));
        let out = world.resolve_round(&mut ScriptedSource::new(vec![0]));
        assert_eq!(out.winners, vec![1]);
        let tx = out.transmissions[0];
        assert_eq!(tx.start, Ns::from_us(54));
        assert_eq!(tx.start + tx.profile.rs_portion, Ns::from_us(700));
        assert_eq!(world.stats().nodes[1].reservation_ns, 646_000);
    }

    #[test]
    fn runs_are_deterministic() {
        let scenario = Scenario {
            params: SimParams::default(),
            nodes: vec![cfg(0, TechnologyKind::RandomAccess, 3), cfg(1, TechnologyKind::SyncGap, 3)],
            sync_mode: crate::model::SyncMode::Desynchronized,
        };
        let a = run(&scenario, 2_000, 42).unwrap();
        let b = run(&scenario, 2_000, 42).unwrap();
        assert_eq!(a, b);
        let c = run(&scenario, 2_000, 43).unwrap();
        assert_ne!(a.stats, c.stats);
        assert!(matches!(run(&scenario, 0, 1), Err(SimError::NoRounds)));
    }
}
