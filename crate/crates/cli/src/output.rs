//! CSV and JSON writers.
//!
//! Column sets are fixed per [`FORMAT_VERSION`]; every CSV starts with the
//! sweep `axis` and `axis_value` columns (both empty for a single scenario).
//! Floats are written in shortest round-trip form, so reruns with the same
//! seeds produce byte-identical files.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::runner::{summary_metrics, RunOutput, SUMMARY_METRICS};

pub const FORMAT_VERSION: u32 = 1;

pub const NODE_COLUMNS: [&str; 9] = [
    "axis",
    "axis_value",
    "seed",
    "node",
    "group",
    "occupancy",
    "s_cot",
    "s_eff",
    "collision_probability",
];

pub const SUMMARY_COLUMNS: [&str; 8] = [
    "axis",
    "axis_value",
    "metric",
    "n_seeds",
    "mean",
    "ci95",
    "low",
    "high",
];

pub const ROUND_COLUMNS: [&str; 9] = [
    "axis",
    "axis_value",
    "seed",
    "round",
    "t_ns",
    "delta_ns",
    "delta_slots",
    "winners",
    "kind",
];

pub fn seed_columns() -> Vec<&'static str> {
    let mut cols = vec!["axis", "axis_value", "seed", "rounds", "elapsed_ns", "collision_rounds"];
    cols.extend(SUMMARY_METRICS);
    cols
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// JSON document written by `--format json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonDocument {
    pub format_version: u32,
    #[serde(flatten)]
    pub output: RunOutput,
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn axis_name(out: &RunOutput) -> String {
    out.axis.map(|a| a.to_string()).unwrap_or_default()
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| io::Error::other(e.to_string()))
}

pub fn nodes_csv(out: &RunOutput) -> io::Result<Vec<u8>> {
    let axis = axis_name(out);
    let rows = out.points.iter().flat_map(|p| {
        let axis = axis.clone();
        p.seeds.iter().flat_map(move |s| {
            let axis = axis.clone();
            s.report.nodes.iter().map(move |m| {
                vec![
                    axis.clone(),
                    p.axis_value.clone(),
                    s.seed.to_string(),
                    m.node.to_string(),
                    format!("{:?}", m.group),
                    m.occupancy.to_string(),
                    m.s_cot.to_string(),
                    m.s_eff.to_string(),
                    opt(m.collision_probability),
                ]
            })
        })
    });
    csv_bytes(&NODE_COLUMNS, rows)
}

pub fn seeds_csv(out: &RunOutput) -> io::Result<Vec<u8>> {
    let axis = axis_name(out);
    let rows = out.points.iter().flat_map(|p| {
        let axis = axis.clone();
        p.seeds.iter().map(move |s| {
            let r = &s.report;
            let mut row = vec![
                axis.clone(),
                p.axis_value.clone(),
                s.seed.to_string(),
                r.rounds.to_string(),
                r.elapsed_ns.to_string(),
                r.collision_rounds.to_string(),
            ];
            row.extend(summary_metrics(r).into_iter().map(|(_, v)| opt(v)));
            row
        })
    });
    csv_bytes(&seed_columns(), rows)
}

pub fn summary_csv(out: &RunOutput) -> io::Result<Vec<u8>> {
    let axis = axis_name(out);
    let rows = out.points.iter().flat_map(|p| {
        let axis = axis.clone();
        p.summary.iter().map(move |row| {
            let e = row.estimate;
            vec![
                axis.clone(),
                p.axis_value.clone(),
                row.metric.clone(),
                e.n_seeds.to_string(),
                e.mean.to_string(),
                opt(e.ci95),
                opt(e.low()),
                opt(e.high()),
            ]
        })
    });
    csv_bytes(&SUMMARY_COLUMNS, rows)
}

/// `None` when no round log was recorded.
pub fn rounds_csv(out: &RunOutput) -> io::Result<Option<Vec<u8>>> {
    let logged = out
        .points
        .iter()
        .any(|p| p.seeds.iter().any(|s| s.rounds.is_some()));
    if !logged {
        return Ok(None);
    }
    let axis = axis_name(out);
    let rows = out.points.iter().flat_map(|p| {
        let axis = axis.clone();
        p.seeds.iter().flat_map(move |s| {
            let axis = axis.clone();
            s.rounds.iter().flatten().map(move |r| {
                let winners: Vec<String> = r.winners.iter().map(|w| w.to_string()).collect();
                vec![
                    axis.clone(),
                    p.axis_value.clone(),
                    s.seed.to_string(),
                    r.round.to_string(),
                    r.t_ns.to_string(),
                    r.delta_ns.to_string(),
                    r.delta_slots.to_string(),
                    winners.join(" "),
                    if r.success { "success" } else { "collision" }.to_string(),
                ]
            })
        })
    });
    csv_bytes(&ROUND_COLUMNS, rows).map(Some)
}

pub fn json_string(out: &RunOutput) -> serde_json::Result<String> {
    let doc = JsonDocument {
        format_version: FORMAT_VERSION,
        output: out.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json(text: &str) -> serde_json::Result<JsonDocument> {
    serde_json::from_str(text)
}

/// Writes the result files into `dir` and returns their paths.
pub fn write_dir(out: &RunOutput, dir: &Path, format: Format) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files: Vec<(&str, Vec<u8>)> = match format {
        Format::Csv => vec![
            ("nodes.csv", nodes_csv(out)?),
            ("seeds.csv", seeds_csv(out)?),
            ("summary.csv", summary_csv(out)?),
        ],
        Format::Json => vec![("results.json", json_string(out)?.into_bytes())],
    };
    if let Some(rounds) = rounds_csv(out)? {
        files.push(("rounds.csv", rounds));
    }
    let mut written = Vec::new();
    for (name, bytes) in files {
        let path = dir.join(name);
        fs::write(&path, bytes)?;
        written.push(path);
    }
    Ok(written)
}

/// Writes the summary (CSV) or the whole document (JSON) to `w`.
pub fn write_stdout<W: Write>(out: &RunOutput, format: Format, mut w: W) -> io::Result<()> {
    match format {
        Format::Csv => w.write_all(&summary_csv(out)?),
        Format::Json => w.write_all(json_string(out)?.as_bytes()),
    }
}
