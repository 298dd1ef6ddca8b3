//! Exact reference results for small instances.
//!
//! [`exhaustive_metrics`] enumerates every backoff draw sequence of a short
//! run and replays the engine on each branch with injected draws, so its
//! output is the exact expectation of what [`crate::engine::run`] estimates.
//! [`two_node_stationary`] solves the Markov chain of two identical
//! random-access nodes with a fixed window for the long-run collision
//! probability.

use indexmap::IndexMap;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{DrawRecorder, ScriptedSource, SimError, World};
use crate::metrics::{MetricsError, MetricsReport};
use crate::model::{validate_scenario, NodeId, Scenario, SyncMode, TechGroup};

/// Largest number of draw branches expanded in one step.
pub const MAX_BRANCHES: u64 = 1_000_000;
pub const MAX_NODES: usize = 3;
pub const MAX_WINDOW: u32 = 7;
/// Horizon limit when contention windows can double.
pub const MAX_DOUBLING_HORIZON: u32 = 3;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("exhaustive enumeration supports at most {MAX_NODES} nodes, got {0}")]
    TooManyNodes(usize),
    #[error("node {node} can reach contention window {cw}; at most {MAX_WINDOW} is supported")]
    WindowTooLarge { node: NodeId, cw: u32 },
    #[error("horizon {0} exceeds {MAX_DOUBLING_HORIZON} rounds while contention windows can double")]
    HorizonTooLong(u32),
    #[error("desynchronized grid phases are continuous random variables; use synchronized or explicit phases")]
    RandomPhases,
    #[error("state space too large: round {round} would expand {estimate} branches (limit {MAX_BRANCHES})")]
    StateSpaceTooLarge { round: u32, estimate: u64 },
    #[error("Markov chain is not irreducible")]
    Reducible,
}

/// Expected per-node figures over all branches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactNodeMetrics {
    pub node: NodeId,
    pub group: TechGroup,
    /// E[O_k].
    pub occupancy: f64,
    /// E[S_k^COT].
    pub s_cot: f64,
    /// E[S_k^EFF].
    pub s_eff: f64,
    pub expected_attempts: f64,
    pub expected_successes: f64,
    pub expected_collisions: f64,
    /// E[collisions] / E[attempts]; `None` if the node never transmits.
    pub collision_probability: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactReport {
    pub horizon: u32,
    /// Distinct end states after merging identical branches.
    pub final_states: usize,
    /// Total draw sequences enumerated.
    pub branches_expanded: u64,
    /// Sum of branch probabilities; 1 up to rounding.
    pub total_probability: f64,
    pub nodes: Vec<ExactNodeMetrics>,
    /// E[O^T].
    pub occupancy_total: f64,
    pub s_cot_w: f64,
    pub s_cot_l: f64,
    /// E[S^COT].
    pub s_cot_total: f64,
    /// Expected fraction of rounds that end in a collision.
    pub collision_round_fraction: f64,
}

/// Every draw combination for a list of `(node, cw)` requests, with its
/// probability under independent uniform draws.
fn combinations(requests: &[(NodeId, u32)]) -> impl Iterator<Item = (Vec<u32>, f64)> + '_ {
    let count: u64 = requests.iter().map(|&(_, cw)| cw as u64 + 1).product();
    let prob = 1.0 / count as f64;
    (0..count).map(move |mut idx| {
        let mut draws = vec![0; requests.len()];
        for (slot, &(_, cw)) in draws.iter_mut().zip(requests).rev() {
            let base = cw as u64 + 1;
            *slot = (idx % base) as u32;
            idx /= base;
        }
        (draws, prob)
    })
}

fn branch_count(requests: &[(NodeId, u32)]) -> u64 {
    requests
        .iter()
        .map(|&(_, cw)| cw as u64 + 1)
        .fold(1u64, |a, b| a.saturating_mul(b))
}

/// Exact expected metrics of `horizon` rounds of `scenario`.
pub fn exhaustive_metrics(scenario: &Scenario, horizon: u32) -> Result<ExactReport, OracleError> {
    let scenario = validate_scenario(scenario.clone()).map_err(SimError::from)?;
    if scenario.nodes.len() > MAX_NODES {
        return Err(OracleError::TooManyNodes(scenario.nodes.len()));
    }
    let mut doubling = false;
    for node in &scenario.nodes {
        if node.class.cw_max > MAX_WINDOW {
            return Err(OracleError::WindowTooLarge {
                node: node.id,
                cw: node.class.cw_max,
            });
        }
        doubling |= node.class.cw_min < node.class.cw_max;
    }
    if doubling && horizon > MAX_DOUBLING_HORIZON {
        return Err(OracleError::HorizonTooLong(horizon));
    }
    let mut nodes = scenario.nodes.clone();
    match scenario.sync_mode {
        SyncMode::Desynchronized if nodes.iter().any(|n| n.kind.is_synchronous()) => {
            return Err(OracleError::RandomPhases)
        }
        SyncMode::Synchronized => nodes.iter_mut().for_each(|n| n.phase = Default::default()),
        _ => {}
    }

    let initial: Vec<_> = nodes.iter().map(|n| (n.id, n.class.cw_min)).collect();
    let mut expanded = branch_count(&initial);
    if expanded > MAX_BRANCHES {
        return Err(OracleError::StateSpaceTooLarge {
            round: 0,
            estimate: expanded,
        });
    }
    let mut frontier: IndexMap<World, f64> = IndexMap::new();
    for (draws, prob) in combinations(&initial) {
        let world = World::new(scenario.params, nodes.clone(), &mut ScriptedSource::new(draws))?;
        *frontier.entry(world).or_insert(0.0) += prob;
    }

    for round in 1..=horizon {
        let mut probes = Vec::with_capacity(frontier.len());
        for world in frontier.keys() {
            let mut recorder = DrawRecorder::default();
            world.clone().resolve_round(&mut recorder);
            probes.push(recorder.requests);
        }
        let estimate: u64 = probes.iter().map(|r| branch_count(r)).sum();
        if estimate > MAX_BRANCHES {
            return Err(OracleError::StateSpaceTooLarge { round, estimate });
        }
        expanded += estimate;
        let mut next: IndexMap<World, f64> = IndexMap::new();
        for ((world, prob), requests) in frontier.iter().zip(&probes) {
            for (draws, p) in combinations(requests) {
                let mut branch = world.clone();
                branch.resolve_round(&mut ScriptedSource::new(draws));
                *next.entry(branch).or_insert(0.0) += prob * p;
            }
        }
        frontier = next;
    }

    let n = nodes.len();
    let partition: Vec<TechGroup> = nodes.iter().map(|c| c.kind.group()).collect();
    let mut report = ExactReport {
        horizon,
        final_states: frontier.len(),
        branches_expanded: expanded,
        total_probability: 0.0,
        nodes: partition
            .iter()
            .enumerate()
            .map(|(node, &group)| ExactNodeMetrics {
                node,
                group,
                occupancy: 0.0,
                s_cot: 0.0,
                s_eff: 0.0,
                expected_attempts: 0.0,
                expected_successes: 0.0,
                expected_collisions: 0.0,
                collision_probability: None,
            })
            .collect(),
        occupancy_total: 0.0,
        s_cot_w: 0.0,
        s_cot_l: 0.0,
        s_cot_total: 0.0,
        collision_round_fraction: 0.0,
    };
    for (world, &prob) in &frontier {
        report.total_probability += prob;
        let stats = world.stats();
        if horizon == 0 {
            continue;
        }
        let m = MetricsReport::compute(stats, &partition, None)?;
        for k in 0..n {
            let e = &mut report.nodes[k];
            e.occupancy += prob * m.nodes[k].occupancy;
            e.s_cot += prob * m.nodes[k].s_cot;
            e.s_eff += prob * m.nodes[k].s_eff;
            e.expected_attempts += prob * stats.nodes[k].attempts as f64;
            e.expected_successes += prob * stats.nodes[k].successes as f64;
            e.expected_collisions += prob * stats.nodes[k].collisions as f64;
        }
        report.occupancy_total += prob * m.total.occupancy;
        report.s_cot_w += prob * m.w.s_cot;
        report.s_cot_l += prob * m.l.s_cot;
        report.s_cot_total += prob * m.total.s_cot;
        report.collision_round_fraction += prob * stats.collision_rounds as f64 / horizon as f64;
    }
    for e in &mut report.nodes {
        e.collision_probability =
            (e.expected_attempts > 0.0).then(|| e.expected_collisions / e.expected_attempts);
    }
    Ok(report)
}

/// Long-run behaviour of two identical random-access nodes with a fixed window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryResult {
    pub cw: u32,
    /// Stationary distribution over chain states: index 0 is "both nodes
    /// draw fresh" (after a collision), index r ≥ 1 is "the last loser holds
    /// residual backoff r while the last winner draws fresh".
    pub distribution: Vec<f64>,
    /// Long-run fraction of rounds that are collisions.
    pub round_collision_probability: f64,
    /// Per-attempt collision probability of either node.
    pub collision_probability: f64,
}

/// Transition matrix of the residual-backoff chain, with the per-state
/// collision probability.
pub fn residual_chain(cw: u32) -> (DMatrix<f64>, Vec<f64>) {
    let states = cw as usize + 1;
    let mut matrix = DMatrix::zeros(states, states);
    let mut collide = vec![0.0; states];
    let u = 1.0 / (cw as f64 + 1.0);
    for x in 0..=cw as usize {
        for y in 0..=cw as usize {
            let to = x.abs_diff(y);
            matrix[(0, to)] += u * u;
            if x == y {
                collide[0] += u * u;
            }
        }
    }
    for r in 1..states {
        for x in 0..=cw as usize {
            // x < r: same winner again, loser left with r - x
            // x == r: tie
            // x > r: the previous loser wins, the redrawn node keeps x - r
            let to = x.abs_diff(r);
            matrix[(r, to)] += u;
            if x == r {
                collide[r] += u;
            }
        }
    }
    (matrix, collide)
}

/// Stationary collision probability of two identical random-access nodes
/// with fixed contention window `cw` (no doubling).
pub fn two_node_stationary(cw: u32) -> Result<StationaryResult, OracleError> {
    let (matrix, collide) = residual_chain(cw);
    let n = matrix.nrows();
    // pi (P - I) = 0 with sum(pi) = 1: transpose and replace the last
    // balance equation by the normalization.
    let mut a = matrix.transpose() - DMatrix::identity(n, n);
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let pi = a.lu().solve(&b).ok_or(OracleError::Reducible)?;
    if pi.iter().any(|&p| !(-1e-12..=1.0 + 1e-12).contains(&p)) {
        return Err(OracleError::Reducible);
    }
    let q: f64 = pi.iter().zip(&collide).map(|(p, c)| p * c).sum();
    Ok(StationaryResult {
        cw,
        distribution: pi.iter().copied().collect(),
        round_collision_probability: q,
        // two attempts per collision round, one per success round
        collision_probability: 2.0 * q / (1.0 + q),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{NodeConfig, PriorityClassParams, SimParams, TechnologyKind};
    use crate::time::Ns;

    fn node(id: NodeId, kind: TechnologyKind, cw: (u32, u32)) -> NodeConfig {
        let sync = kind.is_synchronous();
        NodeConfig {
            id,
            kind,
            class: PriorityClassParams {
                p: 3,
                cw_min: cw.0,
                cw_max: cw.1,
                o_max: Ns::from_ms(8),
            },
            delta: if sync { Ns::from_us(9) } else { Ns::ZERO },
            phase: Ns::ZERO,
            data_duration: Ns::from_us(2100),
            ack_duration: if sync { Ns::ZERO } else { Ns::from_us(44) },
        }
    }

    fn scenario(nodes: Vec<NodeConfig>) -> Scenario {
        Scenario {
            params: SimParams::default(),
            nodes,
            sync_mode: SyncMode::Synchronized,
        }
    }

    #[test]
    fn tie_probability_of_two_identical_nodes() {
        let s = scenario(vec![
            node(0, TechnologyKind::RandomAccess, (3, 3)),
            node(1, TechnologyKind::RandomAccess, (3, 3)),
        ]);
        let r = exhaustive_metrics(&s, 1).unwrap();
        assert!((r.collision_round_fraction - 0.25).abs() < 1e-15);
        assert!((r.total_probability - 1.0).abs() < 1e-12);
        // P(b0 <= b1) = 10/16
        assert!((r.nodes[0].expected_attempts - 10.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn single_node_never_collides() {
        let s = scenario(vec![node(0, TechnologyKind::RandomAccess, (3, 7))]);
        let r = exhaustive_metrics(&s, 3).unwrap();
        assert_eq!(r.nodes[0].collision_probability, Some(0.0));
        assert!((r.nodes[0].s_cot - r.nodes[0].occupancy).abs() < 1e-15);
        assert_eq!(r.collision_round_fraction, 0.0);
    }

    #[test]
    fn aligned_gap_node_is_symmetric_to_wifi() {
        // Slot-aligned start and a 9 us grid: no gap in the first round.
        let mut gap = node(1, TechnologyKind::SyncGap, (3, 3));
        gap.ack_duration = Ns::ZERO;
        let s = scenario(vec![node(0, TechnologyKind::RandomAccess, (3, 3)), gap]);
        let r = exhaustive_metrics(&s, 1).unwrap();
        let (w, l) = (&r.nodes[0], &r.nodes[1]);
        assert!((w.expected_successes - l.expected_successes).abs() < 1e-15);
        assert!((w.expected_successes - 6.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn refuses_large_instances() {
        let four: Vec<_> = (0..4).map(|i| node(i, TechnologyKind::RandomAccess, (3, 3))).collect();
        assert!(matches!(exhaustive_metrics(&scenario(four), 1), Err(OracleError::TooManyNodes(4))));
        let big = vec![node(0, TechnologyKind::RandomAccess, (15, 63))];
        assert!(matches!(
            exhaustive_metrics(&scenario(big), 1),
            Err(OracleError::WindowTooLarge { .. })
        ));
        let doubling = vec![node(0, TechnologyKind::RandomAccess, (3, 7))];
        assert!(matches!(
            exhaustive_metrics(&scenario(doubling), 4),
            Err(OracleError::HorizonTooLong(4))
        ));
        let mut desync = scenario(vec![node(0, TechnologyKind::SyncGap, (3, 3))]);
        desync.sync_mode = SyncMode::Desynchronized;
        assert!(matches!(exhaustive_metrics(&desync, 1), Err(OracleError::RandomPhases)));
        let three: Vec<_> = (0..3).map(|i| node(i, TechnologyKind::RandomAccess, (7, 7))).collect();
        match exhaustive_metrics(&scenario(three), 12) {
            Err(OracleError::StateSpaceTooLarge { estimate, .. }) => assert!(estimate > MAX_BRANCHES),
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn stationary_closed_forms() {
        // Two-state chain for cw = 1: from either state a tie happens with
        // probability 1/2 and otherwise the chain moves to residual 1, so
        // pi = (1/2, 1/2), q = 1/2 and C = 2q / (1 + q) = 2/3.
        let r = two_node_stationary(1).unwrap();
        assert!((r.distribution[0] - 0.5).abs() < 1e-12);
        assert!((r.round_collision_probability - 0.5).abs() < 1e-12);
        assert!((r.collision_probability - 2.0 / 3.0).abs() < 1e-12);

        let zero = two_node_stationary(0).unwrap();
        assert_eq!(zero.distribution, vec![1.0]);
        assert!((zero.collision_probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stationary_matches_distribution_iteration() {
        // Propagate the state distribution directly from the draw rules
        // rather than through the assembled matrix.
        let cw = 3usize;
        let u = 1.0 / (cw as f64 + 1.0);
        let mut dist = vec![0.0; cw + 1];
        dist[0] = 1.0;
        let mut q = 0.0;
        for _ in 0..10_000_000 {
            let mut next = vec![0.0; cw + 1];
            q = 0.0;
            for (state, &p) in dist.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                if state == 0 {
                    for x in 0..=cw {
                        for y in 0..=cw {
                            next[x.abs_diff(y)] += p * u * u;
                            if x == y {
                                q += p * u * u;
                            }
                        }
                    }
                } else {
                    for x in 0..=cw {
                        next[x.abs_diff(state)] += p * u;
                        if x == state {
                            q += p * u;
                        }
                    }
                }
            }
            let diff: f64 = next.iter().zip(&dist).map(|(a, b)| (a - b).abs()).sum();
            dist = next;
            if diff < 1e-15 {
                break;
            }
        }
        let r = two_node_stationary(3).unwrap();
        assert!((r.round_collision_probability - q).abs() < 1e-4);
        assert!((r.collision_probability - 2.0 * q / (1.0 + q)).abs() < 1e-4);
        for (a, b) in r.distribution.iter().zip(&dist) {
            assert!((a - b).abs() < 1e-4);
        }
    }
}
