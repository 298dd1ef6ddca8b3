//! Seed fan-out and cross-seed summaries.

use coexsim_core::engine::run_with_log;
use coexsim_core::metrics::MetricsError;
use coexsim_core::{MetricsReport, RoundKind, SimError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::scenario::{Axis, ScenarioSpec, SweepSpec};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("seed {seed}: {source}")]
    Sim { seed: u64, source: SimError },
    #[error("seed {seed}: {source}")]
    Metrics { seed: u64, source: MetricsError },
}

/// One line of the optional per-round log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u64,
    pub t_ns: u64,
    pub delta_ns: u64,
    pub delta_slots: f64,
    pub winners: Vec<usize>,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedResult {
    pub seed: u64,
    pub report: MetricsReport,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rounds: Option<Vec<RoundRecord>>,
}

/// Mean and two-sided 95% Student-t interval across seeds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub n_seeds: usize,
    pub mean: f64,
    /// Half-width of the interval; absent with fewer than two seeds.
    pub ci95: Option<f64>,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Option<Estimate> {
        let n = xs.len();
        if n == 0 {
            return None;
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let ci95 = (n > 1).then(|| {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
                .expect("positive degrees of freedom")
                .inverse_cdf(0.975);
            t * (var / n as f64).sqrt()
        });
        Some(Estimate { n_seeds: n, mean, ci95 })
    }

    pub fn low(&self) -> Option<f64> {
        self.ci95.map(|h| self.mean - h)
    }

    pub fn high(&self) -> Option<f64> {
        self.ci95.map(|h| self.mean + h)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub metric: String,
    pub estimate: Estimate,
}

/// Scalar figures summarized across seeds, in output order.
pub fn summary_metrics(r: &MetricsReport) -> Vec<(&'static str, Option<f64>)> {
    vec![
        ("o_w", Some(r.w.occupancy)),
        ("o_l", Some(r.l.occupancy)),
        ("o_total", Some(r.total.occupancy)),
        ("s_cot_w", Some(r.w.s_cot)),
        ("s_cot_l", Some(r.l.s_cot)),
        ("s_cot_total", Some(r.total.s_cot)),
        ("s_eff_w", Some(r.w.s_eff)),
        ("s_eff_l", Some(r.l.s_eff)),
        ("s_eff_total", Some(r.total.s_eff)),
        ("c_w", r.w.collision_probability),
        ("c_l", r.l.collision_probability),
        ("c_total", r.total.collision_probability),
        ("collision_round_fraction", r.collision_round_fraction()),
        ("b_w", r.throughput.map(|b| b.b_w)),
        ("b_l", r.throughput.map(|b| b.b_l)),
    ]
}

/// Column names of [`summary_metrics`].
pub const SUMMARY_METRICS: [&str; 15] = [
    "o_w",
    "o_l",
    "o_total",
    "s_cot_w",
    "s_cot_l",
    "s_cot_total",
    "s_eff_w",
    "s_eff_l",
    "s_eff_total",
    "c_w",
    "c_l",
    "c_total",
    "collision_round_fraction",
    "b_w",
    "b_l",
];

pub fn summarize(seeds: &[SeedResult]) -> Vec<SummaryRow> {
    let per_seed: Vec<_> = seeds.iter().map(|s| summary_metrics(&s.report)).collect();
    SUMMARY_METRICS
        .iter()
        .enumerate()
        .filter_map(|(i, name)| {
            let xs: Vec<f64> = per_seed.iter().filter_map(|m| m[i].1).collect();
            Estimate::from_samples(&xs).map(|estimate| SummaryRow {
                metric: name.to_string(),
                estimate,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub axis_value: String,
    pub seeds: Vec<SeedResult>,
    pub summary: Vec<SummaryRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub name: String,
    /// Sweep axis, or `None` for a single scenario.
    pub axis: Option<Axis>,
    pub rounds: u64,
    pub points: Vec<PointResult>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub log_rounds: bool,
}

pub fn run_seed(spec: &ScenarioSpec, seed: u64, opts: RunOptions) -> Result<SeedResult, RunError> {
    let sigma = spec.scenario.params.slot_sigma;
    let mut log = opts.log_rounds.then(Vec::new);
    let result = run_with_log(&spec.scenario, spec.rounds, seed, |o| {
        if let Some(log) = log.as_mut() {
            log.push(RoundRecord {
                round: o.round,
                t_ns: o.start.as_nanos(),
                delta_ns: o.delta.as_nanos(),
                delta_slots: o.delta.in_slots(sigma),
                winners: o.winners.clone(),
                success: matches!(o.kind, RoundKind::Success { .. }),
            });
        }
    })
    .map_err(|source| RunError::Sim { seed, source })?;
    let report = MetricsReport::compute(&result.stats, &result.partition(), spec.rates)
        .map_err(|source| RunError::Metrics { seed, source })?;
    Ok(SeedResult {
        seed,
        report,
        rounds: log,
    })
}

fn run_points(points: &[(String, &ScenarioSpec)], opts: RunOptions) -> Result<Vec<PointResult>, RunError> {
    let jobs: Vec<(usize, &ScenarioSpec, u64)> = points
        .iter()
        .enumerate()
        .flat_map(|(i, (_, spec))| spec.seeds.iter().map(move |&s| (i, *spec, s)))
        .collect();
    let results: Vec<(usize, SeedResult)> = jobs
        .par_iter()
        .map(|&(i, spec, seed)| run_seed(spec, seed, opts).map(|r| (i, r)))
        .collect::<Result<_, _>>()?;
    let mut out: Vec<PointResult> = points
        .iter()
        .map(|(label, _)| PointResult {
            axis_value: label.clone(),
            seeds: Vec::new(),
            summary: Vec::new(),
        })
        .collect();
    for (i, r) in results {
        out[i].seeds.push(r);
    }
    for p in &mut out {
        p.summary = summarize(&p.seeds);
    }
    Ok(out)
}

pub fn run_scenario(spec: &ScenarioSpec, opts: RunOptions) -> Result<RunOutput, RunError> {
    Ok(RunOutput {
        name: spec.name.clone(),
        axis: None,
        rounds: spec.rounds,
        points: run_points(&[(String::new(), spec)], opts)?,
    })
}

pub fn run_sweep(sweep: &SweepSpec, opts: RunOptions) -> Result<RunOutput, RunError> {
    let points: Vec<(String, &ScenarioSpec)> =
        sweep.points.iter().map(|p| (p.label.clone(), &p.spec)).collect();
    Ok(RunOutput {
        name: sweep.base.name.clone(),
        axis: Some(sweep.axis),
        rounds: sweep.points[0].spec.rounds,
        points: run_points(&points, opts)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimate_matches_hand_computation() {
        // mean 2, sample sd 1, t(0.975; 2) = 4.302653
        let e = Estimate::from_samples(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(e.mean, 2.0);
        assert!((e.ci95.unwrap() - 4.302653 / 3f64.sqrt()).abs() < 1e-5);
        let single = Estimate::from_samples(&[0.5]).unwrap();
        assert_eq!(single.ci95, None);
        assert!(Estimate::from_samples(&[]).is_none());
    }
}
