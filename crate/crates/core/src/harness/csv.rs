//! CSV emission. All floats go through one fixed-precision formatter so that
//! identical runs produce byte-identical files.

use std::io::Write;
use std::path::Path;

use crate::error::Result;
use crate::radio::EpochMetrics;
use crate::sfc::FlowRecord;

use super::{ComparisonReport, RunSummary, Scenario};

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.9}")
    }
}

pub const RADIO_METRIC_KEYS: [&str; 6] =
    ["se", "qoe_volte", "qoe_video", "qoe_urllc", "qoe_aggregate", "reward"];

pub const SFC_METRIC_KEYS: [&str; 9] = [
    "mean_queue_s",
    "mean_sojourn_s",
    "weighted_sojourn",
    "sojourn_a_s",
    "sojourn_b_s",
    "sojourn_c_s",
    "weighted_sojourn_a",
    "cpu_util",
    "mean_reward",
];

/// Per-epoch radio metrics:
/// `epoch,w_volte_hz,w_video_hz,w_urllc_hz,se,qoe_volte,qoe_video,qoe_urllc,qoe_aggregate,reward`.
pub fn write_epochs(path: &Path, epochs: &[(u64, EpochMetrics)]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        out,
        "epoch,w_volte_hz,w_video_hz,w_urllc_hz,se,qoe_volte,qoe_video,qoe_urllc,qoe_aggregate,reward"
    )?;
    for (epoch, m) in epochs {
        let w = |i: usize| m.allocated.0.get(i).copied().unwrap_or(0.0);
        let q = |i: usize| m.qoe_per_slice.get(i).copied().unwrap_or(f64::NAN);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            epoch,
            format_float(w(0)),
            format_float(w(1)),
            format_float(w(2)),
            format_float(m.se),
            format_float(q(0)),
            format_float(q(1)),
            format_float(q(2)),
            format_float(m.qoe_aggregate),
            format_float(m.reward),
        )?;
    }
    Ok(())
}

/// Per-flow records:
/// `arrival_time_s,category,sfc,queue_time_s,processing_time_s,reward`.
pub fn write_flows(path: &Path, flows: &[(FlowRecord, f64)]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "arrival_time_s,category,sfc,queue_time_s,processing_time_s,reward")?;
    for (r, reward) in flows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            format_float(r.arrival_time_s),
            r.category,
            r.assigned_sfc,
            format_float(r.queue_time_s),
            format_float(r.processing_time_s),
            format_float(*reward),
        )?;
    }
    Ok(())
}

/// Windowed waiting-time / CPU pairs: `window_start_s,mean_waiting_s,utilized_cpus`.
pub fn write_windows(path: &Path, windows: &[(f64, f64, f64)]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "window_start_s,mean_waiting_s,utilized_cpus")?;
    for (start, wait, cpus) in windows {
        writeln!(
            out,
            "{},{},{}",
            format_float(*start),
            format_float(*wait),
            format_float(*cpus)
        )?;
    }
    Ok(())
}

/// One row per `(scheme, seed)` with the scenario's metric columns.
pub fn write_summary(path: &Path, runs: &[RunSummary]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    let keys: &[&str] = match runs.first().map(|r| r.scenario) {
        Some(Scenario::Sfc) => &SFC_METRIC_KEYS,
        _ => &RADIO_METRIC_KEYS,
    };
    writeln!(out, "scenario,scheme,trace_seed,agent_seed,{},trace_checksum", keys.join(","))?;
    for run in runs {
        let values: Vec<String> =
            keys.iter().map(|k| format_float(run.metric(k))).collect();
        writeln!(
            out,
            "{},{},{},{},{},{:016x}",
            run.scenario,
            run.scheme,
            run.trace_seed,
            run.agent_seed,
            values.join(","),
            run.trace_checksum,
        )?;
    }
    Ok(())
}

/// Long-format comparison table: `scheme,metric,mean,std`.
pub fn write_report(path: &Path, report: &ComparisonReport) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "scheme,metric,mean,std")?;
    for row in &report.rows {
        for (metric, &(mean, std)) in &row.stats {
            writeln!(
                out,
                "{},{},{},{}",
                row.scheme,
                metric,
                format_float(mean),
                format_float(std)
            )?;
        }
    }
    Ok(())
}
