//! Channel occupancy, successful occupancy, collision probability and
//! throughput figures computed from the running sums of a run.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{NodeId, TechGroup};
use crate::time::Ns;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("no simulated time has elapsed")]
    ZeroElapsed,
    #[error("no node {0} in accumulator")]
    UnknownNode(NodeId),
    #[error("partition covers {partition} nodes but accumulator has {nodes}")]
    PartitionMismatch { partition: usize, nodes: usize },
    #[error("transmission rates must be non-negative")]
    NegativeRate,
}

/// Per-node running sums.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeStats {
    /// Rounds in which the node transmitted (Σ x_k).
    pub attempts: u64,
    /// Rounds in which the node transmitted alone (Σ s_k).
    pub successes: u64,
    /// Σ c_k; always `attempts - successes`.
    pub collisions: u64,
    /// Σ x_k·P_k.
    pub occupancy_ns: u64,
    /// Σ s_k·P_k.
    pub success_occupancy_ns: u64,
    /// Σ s_k·(D_k − reservation signal).
    pub effective_ns: u64,
    /// Reservation signal airtime spent in successful transmissions.
    pub reservation_ns: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StatsAccumulator {
    pub nodes: Vec<NodeStats>,
    /// t(λ): simulated time at the end of the last resolved round.
    pub total_elapsed_ns: u64,
    pub rounds: u64,
    pub collision_rounds: u64,
}

impl StatsAccumulator {
    pub fn new(nodes: usize) -> Self {
        StatsAccumulator {
            nodes: vec![NodeStats::default(); nodes],
            ..Default::default()
        }
    }

    fn node(&self, k: NodeId) -> Result<&NodeStats, MetricsError> {
        self.nodes.get(k).ok_or(MetricsError::UnknownNode(k))
    }

    fn elapsed(&self) -> Result<f64, MetricsError> {
        match self.total_elapsed_ns {
            0 => Err(MetricsError::ZeroElapsed),
            t => Ok(t as f64),
        }
    }

    pub fn elapsed_time(&self) -> Ns {
        Ns(self.total_elapsed_ns)
    }
}

/// Normalized channel occupancy O_k: all airtime of node `k`, successful or not.
pub fn node_occupancy(acc: &StatsAccumulator, k: NodeId) -> Result<f64, MetricsError> {
    let elapsed = acc.elapsed()?;
    Ok(acc.node(k)?.occupancy_ns as f64 / elapsed)
}

/// Normalized successful occupancy `(S_k^COT, S_k^EFF)`.
pub fn success_metrics(acc: &StatsAccumulator, k: NodeId) -> Result<(f64, f64), MetricsError> {
    let elapsed = acc.elapsed()?;
    let node = acc.node(k)?;
    Ok((
        node.success_occupancy_ns as f64 / elapsed,
        node.effective_ns as f64 / elapsed,
    ))
}

/// Collision probability C_k; `None` when the node never transmitted.
pub fn collision_probability(acc: &StatsAccumulator, k: NodeId) -> Result<Option<f64>, MetricsError> {
    let node = acc.node(k)?;
    Ok(ratio(node.collisions, node.attempts))
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Total perceived channel occupancy split by technology.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OccupancyTotals {
    pub total: f64,
    pub w: f64,
    pub l: f64,
}

pub fn technology_totals(
    acc: &StatsAccumulator,
    partition: &[TechGroup],
) -> Result<OccupancyTotals, MetricsError> {
    check_partition(acc, partition)?;
    let mut totals = OccupancyTotals {
        total: 0.0,
        w: 0.0,
        l: 0.0,
    };
    for (k, group) in partition.iter().enumerate() {
        let o = node_occupancy(acc, k)?;
        match group {
            TechGroup::W => totals.w += o,
            TechGroup::L => totals.l += o,
        }
    }
    totals.total = totals.w + totals.l;
    Ok(totals)
}

fn check_partition(acc: &StatsAccumulator, partition: &[TechGroup]) -> Result<(), MetricsError> {
    if partition.len() != acc.nodes.len() {
        return Err(MetricsError::PartitionMismatch {
            partition: partition.len(),
            nodes: acc.nodes.len(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeMetrics {
    pub node: NodeId,
    pub group: TechGroup,
    pub occupancy: f64,
    pub s_cot: f64,
    pub s_eff: f64,
    pub collision_probability: Option<f64>,
}

/// Per-technology (or global) aggregate of per-node metrics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GroupMetrics {
    pub nodes: usize,
    pub occupancy: f64,
    pub s_cot: f64,
    pub s_eff: f64,
    /// Pooled collisions over pooled attempts of the group's nodes.
    pub collision_probability: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    /// Random-access (Wi-Fi) transmission rate, in bit/s.
    pub r_w: f64,
    /// Scheduled (LAA/NR-U) transmission rate, in bit/s.
    pub r_l: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Throughput {
    pub b_w: f64,
    pub b_l: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub rounds: u64,
    pub elapsed_ns: u64,
    pub collision_rounds: u64,
    pub nodes: Vec<NodeMetrics>,
    pub w: GroupMetrics,
    pub l: GroupMetrics,
    pub total: GroupMetrics,
    pub throughput: Option<Throughput>,
}

impl MetricsReport {
    pub fn compute(
        acc: &StatsAccumulator,
        partition: &[TechGroup],
        rates: Option<Rates>,
    ) -> Result<MetricsReport, MetricsError> {
        check_partition(acc, partition)?;
        let mut nodes = Vec::with_capacity(partition.len());
        for (k, &group) in partition.iter().enumerate() {
            let (s_cot, s_eff) = success_metrics(acc, k)?;
            nodes.push(NodeMetrics {
                node: k,
                group,
                occupancy: node_occupancy(acc, k)?,
                s_cot,
                s_eff,
                collision_probability: collision_probability(acc, k)?,
            });
        }
        let group = |filter: &dyn Fn(TechGroup) -> bool| {
            let mut g = GroupMetrics::default();
            let (mut coll, mut att) = (0, 0);
            for m in nodes.iter().filter(|m| filter(m.group)) {
                g.nodes += 1;
                g.occupancy += m.occupancy;
                g.s_cot += m.s_cot;
                g.s_eff += m.s_eff;
                coll += acc.nodes[m.node].collisions;
                att += acc.nodes[m.node].attempts;
            }
            g.collision_probability = ratio(coll, att);
            g
        };
        let w = group(&|g| g == TechGroup::W);
        let l = group(&|g| g == TechGroup::L);
        let total = group(&|_| true);
        let mut report = MetricsReport {
            rounds: acc.rounds,
            elapsed_ns: acc.total_elapsed_ns,
            collision_rounds: acc.collision_rounds,
            nodes,
            w,
            l,
            total,
            throughput: None,
        };
        if let Some(rates) = rates {
            report.throughput = Some(throughput(&report, rates)?);
        }
        Ok(report)
    }

    pub fn collision_round_fraction(&self) -> Option<f64> {
        ratio(self.collision_rounds, self.rounds)
    }
}

/// Effective throughput per technology: rate times effective occupancy.
pub fn throughput(report: &MetricsReport, rates: Rates) -> Result<Throughput, MetricsError> {
    if rates.r_w < 0.0 || rates.r_l < 0.0 || rates.r_w.is_nan() || rates.r_l.is_nan() {
        return Err(MetricsError::NegativeRate);
    }
    Ok(Throughput {
        b_w: rates.r_w * report.w.s_eff,
        b_l: rates.r_l * report.l.s_eff,
    })
}
