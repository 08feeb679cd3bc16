//! Experiment orchestration: configuration, seeded runs, scheme comparisons,
//! parameter sweeps, and CSV emission.
//!
//! Two seeds drive every run: the trace seed fixes the exogenous world
//! (traffic and user placement) and the agent seed fixes the controller side
//! (weight init, exploration, fading). Comparisons run every scheme against
//! identical trace seeds so scheme differences are paired.

mod csv;
mod radio_run;
mod sfc_run;

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::baselines::RequiredRates;
use crate::channel::LinkConfig;
use crate::dqn::{AgentConfig, OptimizerKind};
use crate::error::{Error, Result};
use crate::radio::{QoeAggregate, RewardConfig};
use crate::sfc::{SfcRewardConfig, SfcSpec};
use crate::traffic::{InterArrivalModel, PacketSizeModel, SlaSpec, SliceConfig, SliceKind};

pub use csv::format_float;

// ---------------------------------------------------------------------------
// Config types
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Radio,
    Sfc,
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scenario::Radio => "radio",
            Scenario::Sfc => "sfc",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Dql,
    DpNo,
    DpBw,
    Hard,
    NoSlicing,
    NoPriority,
}

impl Scheme {
    pub fn valid_for(self, scenario: Scenario) -> bool {
        match scenario {
            Scenario::Radio => !matches!(self, Scheme::NoPriority),
            Scenario::Sfc => matches!(self, Scheme::Dql | Scheme::NoPriority),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Dql => "dql",
            Scheme::DpNo => "dp_no",
            Scheme::DpBw => "dp_bw",
            Scheme::Hard => "hard",
            Scheme::NoSlicing => "none",
            Scheme::NoPriority => "no_priority",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// Minutes-scale runs: 20 users (9/9/2), 5000 agent updates.
    Desk,
    /// Reference scale: 100 users (46/46/8), 50000 agent updates.
    Full,
}

/// Which demand predictor backs the DP baselines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum PredictorConfig {
    ExponentialSmoothing { factor: f64 },
    SlidingWindow { width: usize },
}

impl Default for PredictorConfig {
    fn default() -> Self {
        PredictorConfig::ExponentialSmoothing { factor: 0.3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RadioParams {
    pub slices: Vec<SliceConfig>,
    pub link: LinkConfig,
    pub total_bandwidth_hz: f64,
    pub granularity_hz: f64,
    pub epoch_slots: usize,
    pub reward: RewardConfig,
    pub drop_expired: bool,
    pub cell_radius_m: f64,
    pub required_rates: RequiredRates,
    pub predictor: PredictorConfig,
    /// DQL training epochs (one bandwidth decision per epoch).
    pub train_epochs: usize,
    /// Evaluation window applied to every scheme.
    pub eval_epochs: usize,
}

impl Default for RadioParams {
    fn default() -> Self {
        desk_radio_params()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SfcParams {
    pub chains: [SfcSpec; 3],
    pub reward: SfcRewardConfig,
    pub flow_models: [InterArrivalModel; 3],
    pub cpu_budget: Option<f64>,
    pub train_flows: usize,
    pub eval_flows: usize,
    /// Aggregation window for the waiting-time / CPU density CSV.
    pub window_s: f64,
}

impl Default for SfcParams {
    fn default() -> Self {
        desk_sfc_params()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub scheme: Scheme,
    pub profile: Profile,
    pub trace_seed: u64,
    pub agent_seed: u64,
    pub agent: AgentConfig,
    pub radio: RadioParams,
    pub sfc: SfcParams,
    pub out_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scenario: Scenario::Radio,
            scheme: Scheme::Dql,
            profile: Profile::Desk,
            trace_seed: 1,
            agent_seed: pair_agent_seed(1),
            agent: desk_agent_config(),
            radio: desk_radio_params(),
            sfc: desk_sfc_params(),
            out_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.scheme.valid_for(self.scenario) {
            return Err(Error::config(format!(
                "scheme {} is not valid for the {} scenario",
                self.scheme, self.scenario
            )));
        }
        self.agent.validate()?;
        match self.scenario {
            Scenario::Radio => {
                for s in &self.radio.slices {
                    s.validate()?;
                }
                self.radio.link.validate()?;
                self.radio.reward.validate()?;
                if self.radio.eval_epochs == 0 {
                    return Err(Error::config("eval_epochs must be positive"));
                }
            }
            Scenario::Sfc => {
                for c in &self.sfc.chains {
                    c.validate()?;
                }
                self.sfc.reward.validate()?;
                for m in &self.sfc.flow_models {
                    m.validate()?;
                }
                if self.sfc.eval_flows == 0 {
                    return Err(Error::config("eval_flows must be positive"));
                }
            }
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::config(e.to_string()))
    }

    /// Profile-derived base config for a scenario and scheme.
    pub fn for_profile(profile: Profile, scenario: Scenario, scheme: Scheme) -> Self {
        let mut cfg = ExperimentConfig {
            scenario,
            scheme,
            profile,
            ..ExperimentConfig::default()
        };
        if profile == Profile::Full {
            cfg.radio = full_radio_params();
            cfg.sfc = full_sfc_params();
            cfg.agent = full_agent_config();
        }
        cfg
    }

    pub fn with_seed(mut self, trace_seed: u64) -> Self {
        self.trace_seed = trace_seed;
        self.agent_seed = pair_agent_seed(trace_seed);
        self
    }
}

/// Derives the controller-side seed paired with a trace seed.
pub fn pair_agent_seed(trace_seed: u64) -> u64 {
    trace_seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(0x1234_5678_9abc_def0)
}

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

/// Desk-scale radio traffic: 20 users (9/9/2) against 10 MHz.
///
/// The reference traffic mix leaves a 10 MHz cell either hopelessly idle or
/// hopelessly swamped at 20 users, so the desk profile rescales per-source
/// intensity and payload sizes to hit the interesting regime: chatty VoLTE
/// (slot-granularity pressure), video load around 1.4x the cell capacity
/// (the spectrum sink), and URLLC payloads that need roughly half the band
/// to meet their 5 ms deadline.
///
/// The desk QoE weight keeps the reward QoE-dominant for the URLLC deadline
/// step while leaving the spectrum term strong enough that the learned policy
/// still feeds the overloaded video slice with the remaining bandwidth.
pub fn desk_radio_params() -> RadioParams {
    let volte = SliceConfig {
        kind: SliceKind::VoLte,
        user_count: 9,
        inter_arrival: InterArrivalModel::Uniform { min: 0.0, max: 0.008 },
        packet_size: PacketSizeModel::Constant { bytes: 40.0 },
        sla: SlaSpec { min_rate_bps: 51e3, max_latency_s: 0.010 },
    };
    let video = SliceConfig {
        kind: SliceKind::Video,
        user_count: 9,
        inter_arrival: InterArrivalModel::TruncatedPareto { shape: 1.2, mean: 0.006, max: 0.0125 },
        packet_size: PacketSizeModel::TruncatedPareto {
            shape: 1.2,
            mean: 12_000.0,
            max: 30_000.0,
        },
        sla: SlaSpec { min_rate_bps: 5e6, max_latency_s: 0.010 },
    };
    let urllc = SliceConfig {
        kind: SliceKind::Urllc,
        user_count: 2,
        inter_arrival: InterArrivalModel::Exponential { mean: 0.025 },
        packet_size: PacketSizeModel::TruncatedLognormal {
            mean: 18_750.0,
            stddev: 6_770.0,
            max: 46_875.0,
        },
        sla: SlaSpec { min_rate_bps: 10e6, max_latency_s: 0.005 },
    };
    RadioParams {
        slices: vec![volte, video, urllc],
        link: LinkConfig { antenna_count: 32, ..LinkConfig::default() },
        total_bandwidth_hz: 10e6,
        granularity_hz: 1e6,
        epoch_slots: 2000,
        reward: RewardConfig {
            se_weight: 0.1,
            qoe_weight: 25.0,
            aggregate: QoeAggregate::SliceMean,
        },
        drop_expired: true,
        cell_radius_m: 40.0,
        required_rates: RequiredRates::default(),
        predictor: PredictorConfig::default(),
        train_epochs: 5000,
        eval_epochs: 300,
    }
}

/// Reference-scale radio parameters: 100 users on the standard traffic mix.
pub fn full_radio_params() -> RadioParams {
    RadioParams {
        slices: SliceConfig::default_slices().to_vec(),
        link: LinkConfig { antenna_count: 32, ..LinkConfig::default() },
        total_bandwidth_hz: 10e6,
        granularity_hz: 1e6,
        epoch_slots: 2000,
        reward: RewardConfig {
            se_weight: 0.1,
            qoe_weight: 5000.0,
            aggregate: QoeAggregate::SliceMean,
        },
        drop_expired: true,
        cell_radius_m: 40.0,
        required_rates: RequiredRates::default(),
        predictor: PredictorConfig::default(),
        train_epochs: 50_000,
        eval_epochs: 1000,
    }
}

pub fn desk_sfc_params() -> SfcParams {
    let model = InterArrivalModel::Lognormal { mu: 0.016f64.ln(), sigma: 0.5 };
    SfcParams {
        chains: SfcSpec::default_chains(),
        reward: SfcRewardConfig::default(),
        flow_models: [model.clone(), model.clone(), model],
        cpu_budget: None,
        train_flows: 20_000,
        eval_flows: 10_000,
        window_s: 1.0,
    }
}

pub fn full_sfc_params() -> SfcParams {
    SfcParams { train_flows: 50_000, ..desk_sfc_params() }
}

/// Desk agent settings. The adaptive-moments optimizer handles the [0, 1]
/// observation scale of the radio state far better than plain SGD at the
/// baseline rate, and the larger batch with a shorter clone period keeps the
/// bootstrap targets quiet enough for a stable greedy policy by 5000 updates.
pub fn desk_agent_config() -> AgentConfig {
    AgentConfig {
        learning_rate: 2e-4,
        batch_size: 64,
        clone_period: 50,
        epsilon_decay_steps: 3500,
        optimizer: OptimizerKind::adaptive_default(),
        ..AgentConfig::default()
    }
}

pub fn full_agent_config() -> AgentConfig {
    AgentConfig {
        learning_rate: 2e-4,
        batch_size: 64,
        clone_period: 50,
        epsilon_decay_steps: 35_000,
        optimizer: OptimizerKind::adaptive_default(),
        ..AgentConfig::default()
    }
}

// ---------------------------------------------------------------------------
// Run results
// ---------------------------------------------------------------------------

/// Aggregate outcome of one `(scheme, seed)` run; keys depend on scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub scenario: Scenario,
    pub scheme: Scheme,
    pub trace_seed: u64,
    pub agent_seed: u64,
    pub metrics: BTreeMap<String, f64>,
    pub trace_checksum: u64,
}

impl RunSummary {
    pub fn metric(&self, key: &str) -> f64 {
        *self.metrics.get(key).unwrap_or(&f64::NAN)
    }
}

/// Per-scheme mean/stddev rows over shared seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub scenario: Scenario,
    pub seeds: Vec<u64>,
    pub rows: Vec<SchemeStats>,
    pub runs: Vec<RunSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeStats {
    pub scheme: Scheme,
    /// metric -> (mean, stddev) over seeds; stddev is 0 for one replication.
    pub stats: BTreeMap<String, (f64, f64)>,
}

impl ComparisonReport {
    pub fn scheme_stats(&self, scheme: Scheme) -> Option<&SchemeStats> {
        self.rows.iter().find(|r| r.scheme == scheme)
    }

    pub fn mean(&self, scheme: Scheme, metric: &str) -> f64 {
        self.scheme_stats(scheme)
            .and_then(|r| r.stats.get(metric))
            .map_or(f64::NAN, |&(m, _)| m)
    }

    /// Per-seed values of one metric for one scheme, in seed order.
    pub fn per_seed(&self, scheme: Scheme, metric: &str) -> Vec<f64> {
        self.seeds
            .iter()
            .map(|&s| {
                self.runs
                    .iter()
                    .find(|r| r.scheme == scheme && r.trace_seed == s)
                    .map_or(f64::NAN, |r| r.metric(metric))
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/// Runs one experiment, writing CSV artifacts (and a checkpoint for DQL runs)
/// when `out_dir` is set.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunSummary> {
    cfg.validate()?;
    if let Some(dir) = &cfg.out_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("config_echo.toml"), cfg.to_toml()?)?;
    }
    let summary = match cfg.scenario {
        Scenario::Radio => radio_run::run(cfg)?,
        Scenario::Sfc => sfc_run::run(cfg)?,
    };
    if let Some(dir) = &cfg.out_dir {
        csv::write_summary(dir.join("summary.csv").as_path(), std::slice::from_ref(&summary))?;
    }
    Ok(summary)
}

/// Runs each scheme against every seed on identical traffic traces and
/// tabulates per-scheme means and standard deviations.
pub fn compare(
    base: &ExperimentConfig,
    schemes: &[Scheme],
    seeds: &[u64],
) -> Result<ComparisonReport> {
    if schemes.len() < 2 {
        return Err(Error::config("comparison needs at least two schemes"));
    }
    if seeds.is_empty() {
        return Err(Error::config("comparison needs at least one seed"));
    }
    for &s in schemes {
        if !s.valid_for(base.scenario) {
            return Err(Error::config(format!(
                "scheme {s} is not valid for the {} scenario",
                base.scenario
            )));
        }
    }
    let mut runs = Vec::new();
    for &scheme in schemes {
        for &seed in seeds {
            let mut cfg = base.clone().with_seed(seed);
            cfg.scheme = scheme;
            cfg.out_dir = base
                .out_dir
                .as_ref()
                .map(|d| d.join(format!("{scheme}_seed{seed}")));
            runs.push(run_experiment(&cfg)?);
        }
    }

    // Paired traces: every scheme must have seen the same exogenous world.
    for &seed in seeds {
        let sums: Vec<u64> = runs
            .iter()
            .filter(|r| r.trace_seed == seed)
            .map(|r| r.trace_checksum)
            .collect();
        if sums.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::contract(format!(
                "trace checksum mismatch across schemes for seed {seed}"
            )));
        }
    }

    let mut rows = Vec::new();
    for &scheme in schemes {
        let mine: Vec<&RunSummary> = runs.iter().filter(|r| r.scheme == scheme).collect();
        let mut stats = BTreeMap::new();
        if let Some(first) = mine.first() {
            for key in first.metrics.keys() {
                let values: Vec<f64> = mine.iter().map(|r| r.metric(key)).collect();
                stats.insert(key.clone(), mean_std(&values));
            }
        }
        rows.push(SchemeStats { scheme, stats });
    }
    let report =
        ComparisonReport { scenario: base.scenario, seeds: seeds.to_vec(), rows, runs };
    if let Some(dir) = &base.out_dir {
        std::fs::create_dir_all(dir)?;
        csv::write_summary(dir.join("summary.csv").as_path(), &report.runs)?;
        csv::write_report(dir.join("report.csv").as_path(), &report)?;
    }
    Ok(report)
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Mean and standard error of per-seed paired differences `a[i] - b[i]`.
pub fn paired_difference(a: &[f64], b: &[f64]) -> (f64, f64) {
    assert_eq!(a.len(), b.len(), "paired metrics need equal seed counts");
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let (mean, std) = mean_std(&diffs);
    (mean, std / (diffs.len() as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    QoeWeight,
    AntennaCount,
}

/// One comparison per axis value, sharing trace seeds across values.
pub fn sweep(
    base: &ExperimentConfig,
    axis: SweepAxis,
    values: &[f64],
    schemes: &[Scheme],
    seeds: &[u64],
) -> Result<Vec<(f64, ComparisonReport)>> {
    if values.is_empty() {
        return Err(Error::config("sweep needs at least one axis value"));
    }
    let mut out = Vec::new();
    for &value in values {
        let mut cfg = base.clone();
        match axis {
            SweepAxis::QoeWeight => {
                cfg.radio.reward.qoe_weight = value;
            }
            SweepAxis::AntennaCount => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::config(format!("antenna count {value} is not a positive integer")));
                }
                cfg.radio.link.antenna_count = value as u32;
            }
        }
        cfg.out_dir = base.out_dir.as_ref().map(|d| {
            let tag = match axis {
                SweepAxis::QoeWeight => format!("qoe_weight_{value}"),
                SweepAxis::AntennaCount => format!("antennas_{value}"),
            };
            d.join(tag)
        });
        out.push((value, compare(&cfg, schemes, seeds)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_radio(scheme: Scheme) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::for_profile(Profile::Desk, Scenario::Radio, scheme);
        cfg.radio.train_epochs = 8;
        cfg.radio.eval_epochs = 4;
        cfg.agent.epsilon_decay_steps = 6;
        cfg.agent.batch_size = 4;
        cfg
    }

    fn tiny_sfc(scheme: Scheme) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::for_profile(Profile::Desk, Scenario::Sfc, scheme);
        cfg.sfc.train_flows = 60;
        cfg.sfc.eval_flows = 40;
        cfg.agent.batch_size = 8;
        cfg.agent.epsilon_decay_steps = 40;
        cfg
    }

    #[test]
    fn scheme_scenario_compatibility() {
        assert!(Scheme::NoPriority.valid_for(Scenario::Sfc));
        assert!(!Scheme::NoPriority.valid_for(Scenario::Radio));
        assert!(!Scheme::Hard.valid_for(Scenario::Sfc));
        let mut cfg = ExperimentConfig::default();
        cfg.scheme = Scheme::NoPriority;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn toml_round_trip() {
        let cfg = ExperimentConfig::for_profile(Profile::Desk, Scenario::Sfc, Scheme::NoPriority);
        let text = cfg.to_toml().unwrap();
        let back = ExperimentConfig::from_toml(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn partial_toml_uses_defaults() {
        let cfg = ExperimentConfig::from_toml("scenario = \"radio\"\nscheme = \"hard\"\n").unwrap();
        assert_eq!(cfg.scheme, Scheme::Hard);
        assert_eq!(cfg.radio.total_bandwidth_hz, 10e6);
    }

    #[test]
    fn run_is_deterministic() {
        let cfg = tiny_radio(Scheme::Hard);
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn compare_requires_two_schemes_and_a_seed() {
        let cfg = tiny_radio(Scheme::Hard);
        assert!(compare(&cfg, &[Scheme::Hard], &[1]).is_err());
        assert!(compare(&cfg, &[Scheme::Hard, Scheme::NoSlicing], &[]).is_err());
    }

    #[test]
    fn compare_rejects_mismatched_scenario_schemes() {
        let cfg = tiny_radio(Scheme::Hard);
        assert!(compare(&cfg, &[Scheme::Hard, Scheme::NoPriority], &[1]).is_err());
    }

    #[test]
    fn comparison_stddev_zero_for_single_seed() {
        let cfg = tiny_sfc(Scheme::NoPriority);
        let report = compare(&cfg, &[Scheme::NoPriority, Scheme::Dql], &[3]).unwrap();
        for row in &report.rows {
            for (_, &(_, std)) in &row.stats {
                assert_eq!(std, 0.0);
            }
        }
    }

    #[test]
    fn comparison_means_match_per_run_values() {
        let cfg = tiny_sfc(Scheme::NoPriority);
        let report = compare(&cfg, &[Scheme::NoPriority, Scheme::Dql], &[3, 4]).unwrap();
        for row in &report.rows {
            for (key, &(mean, _)) in &row.stats {
                let per_seed = report.per_seed(row.scheme, key);
                let expect = per_seed.iter().sum::<f64>() / per_seed.len() as f64;
                assert!(
                    (mean - expect).abs() <= 1e-12 * expect.abs().max(1.0),
                    "{key}: {mean} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn sweep_rejects_empty_values() {
        let cfg = tiny_radio(Scheme::Hard);
        assert!(sweep(&cfg, SweepAxis::QoeWeight, &[], &[Scheme::Hard, Scheme::NoSlicing], &[1])
            .is_err());
    }

    #[test]
    fn sweep_produces_one_report_per_value() {
        let cfg = tiny_radio(Scheme::Hard);
        let out = sweep(
            &cfg,
            SweepAxis::AntennaCount,
            &[16.0, 64.0],
            &[Scheme::Hard, Scheme::NoSlicing],
            &[1],
        )
        .unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].0, 16.0);
        assert_eq!(out[1].0, 64.0);
    }

    #[test]
    fn paired_difference_basics() {
        let (mean, se) = paired_difference(&[2.0, 3.0, 4.0], &[1.0, 1.0, 1.0]);
        assert!((mean - 2.0).abs() < 1e-12);
        assert!(se > 0.0);
        let (mean0, se0) = paired_difference(&[1.0, 1.0], &[1.0, 1.0]);
        assert_eq!(mean0, 0.0);
        assert_eq!(se0, 0.0);
    }
}
