//! Experiment CLI: seeded training/evaluation runs, scheme comparisons and
//! parameter sweeps for both slicing scenarios, emitting CSV metrics.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use slicesim_core::harness::{
    self, compare, run_experiment, sweep, ComparisonReport, ExperimentConfig, Profile, RunSummary,
    Scenario, Scheme, SweepAxis,
};

#[derive(Parser)]
#[command(
    name = "slicesim",
    about = "Network-slicing resource-management simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Radio,
    Sfc,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Scenario {
        match s {
            ScenarioArg::Radio => Scenario::Radio,
            ScenarioArg::Sfc => Scenario::Sfc,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Dql,
    DpNo,
    DpBw,
    Hard,
    None,
    NoPriority,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Dql => Scheme::Dql,
            SchemeArg::DpNo => Scheme::DpNo,
            SchemeArg::DpBw => Scheme::DpBw,
            SchemeArg::Hard => Scheme::Hard,
            SchemeArg::None => Scheme::NoSlicing,
            SchemeArg::NoPriority => Scheme::NoPriority,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Desk,
    Full,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Profile {
        match p {
            ProfileArg::Desk => Profile::Desk,
            ProfileArg::Full => Profile::Full,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    QoeWeight,
    AntennaCount,
}

#[derive(Args)]
struct CommonArgs {
    /// TOML experiment config; omitted fields take profile defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scenario when no config file is given.
    #[arg(long, value_enum, default_value = "radio")]
    scenario: ScenarioArg,
    /// Output directory for CSV artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Scale profile used for defaults.
    #[arg(long, value_enum, default_value = "desk")]
    profile: ProfileArg,
}

#[derive(Subcommand)]
enum Command {
    /// Train the DQL agent and evaluate it.
    Train {
        #[command(flatten)]
        common: CommonArgs,
        /// Trace seed (the agent seed is derived from it).
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Evaluate one scheme.
    Eval {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "hard")]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run several schemes on identical traces and tabulate mean/stddev.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        /// Schemes to compare.
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        schemes: Vec<SchemeArg>,
        /// Shared trace seeds (paired across schemes).
        #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3, 4, 5])]
        seeds: Vec<u64>,
    },
    /// Compare schemes across a parameter axis.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        axis: AxisArg,
        /// Axis values, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        schemes: Vec<SchemeArg>,
        #[arg(long, value_delimiter = ',', default_values_t = [1u64, 2, 3, 4, 5])]
        seeds: Vec<u64>,
    },
}

fn load_config(common: &CommonArgs, scheme: Scheme) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            ExperimentConfig::from_toml(&text).context("parsing config")?
        }
        None => ExperimentConfig::for_profile(
            common.profile.into(),
            common.scenario.into(),
            scheme,
        ),
    };
    if common.config.is_none() {
        cfg.scheme = scheme;
    }
    if let Some(out) = &common.out {
        cfg.out_dir = Some(out.clone());
    }
    Ok(cfg)
}

fn print_summary(summary: &RunSummary) {
    println!(
        "scenario={} scheme={} trace_seed={} agent_seed={}",
        summary.scenario, summary.scheme, summary.trace_seed, summary.agent_seed
    );
    for (key, value) in &summary.metrics {
        println!("  {key:<20} {}", harness::format_float(*value));
    }
    println!("  trace_checksum       {:016x}", summary.trace_checksum);
}

fn print_report(report: &ComparisonReport) {
    for row in &report.rows {
        println!("scheme {}", row.scheme);
        for (metric, (mean, std)) in &row.stats {
            println!(
                "  {metric:<20} mean {}  std {}",
                harness::format_float(*mean),
                harness::format_float(*std)
            );
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Train { common, seed } => {
            let cfg = load_config(&common, Scheme::Dql)?.with_seed(seed);
            if cfg.scheme != Scheme::Dql {
                bail!("train runs the dql scheme; got {}", cfg.scheme);
            }
            let summary = run_experiment(&cfg)?;
            print_summary(&summary);
        }
        Command::Eval { common, scheme, seed } => {
            let cfg = load_config(&common, scheme.into())?.with_seed(seed);
            let summary = run_experiment(&cfg)?;
            print_summary(&summary);
        }
        Command::Compare { common, schemes, seeds } => {
            let schemes: Vec<Scheme> = schemes.into_iter().map(Scheme::from).collect();
            let cfg = load_config(&common, schemes[0])?;
            let report = compare(&cfg, &schemes, &seeds)?;
            print_report(&report);
        }
        Command::Sweep { common, axis, values, schemes, seeds } => {
            let schemes: Vec<Scheme> = schemes.into_iter().map(Scheme::from).collect();
            let cfg = load_config(&common, schemes[0])?;
            let axis = match axis {
                AxisArg::QoeWeight => SweepAxis::QoeWeight,
                AxisArg::AntennaCount => SweepAxis::AntennaCount,
            };
            for (value, report) in sweep(&cfg, axis, &values, &schemes, &seeds)? {
                println!("== axis value {value} ==");
                print_report(&report);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_compare_invocation() {
        let cli = Cli::try_parse_from([
            "slicesim", "compare", "--scenario", "radio", "--schemes", "dql,hard,none",
            "--seeds", "1,2,3",
        ])
        .unwrap();
        match cli.command {
            Command::Compare { schemes, seeds, .. } => {
                assert_eq!(schemes.len(), 3);
                assert_eq!(seeds, vec![1, 2, 3]);
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn parses_sweep_invocation() {
        let cli = Cli::try_parse_from([
            "slicesim", "sweep", "--axis", "qoe-weight", "--values", "1,5000",
            "--schemes", "dql,hard",
        ])
        .unwrap();
        match cli.command {
            Command::Sweep { values, .. } => assert_eq!(values, vec![1.0, 5000.0]),
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn rejects_unknown_scheme() {
        assert!(Cli::try_parse_from(["slicesim", "eval", "--scheme", "bogus"]).is_err());
    }
}
