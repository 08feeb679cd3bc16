//! Radio-scenario runner: DQL training plus a shared evaluation loop that
//! every scheme (trained policy or baseline rule) passes through on the same
//! evaluation trace.

use std::collections::BTreeMap;

use crate::baselines::{
    dp_bw_allocation, dp_no_allocation, hard_slicing, DemandPredictor, RequiredRates,
};
use crate::channel::place_users;
use crate::dqn::{
    argmax, run_training, Environment, Experience, QNetwork, StepReport,
};
use crate::error::Result;
use crate::radio::{
    action_space, BandwidthAllocation, EpochMetrics, QoeAggregate, RadioEnv, RadioEnvConfig,
    SchedulingMode,
};
use crate::rng::{derive_seed, stream, Fnv, SimRng};
use crate::traffic::TraceStream;

use super::csv;
use super::{ExperimentConfig, PredictorConfig, RunSummary, Scheme};

/// Reference spectrum efficiency used to scale rewards into O(1) for the
/// gradient steps; the scaling is positive and policy-invariant.
const REWARD_SCALE_SE_REF: f64 = 12.0;

struct ControlEnv<'a> {
    env: RadioEnv,
    stream: TraceStream,
    actions: &'a [BandwidthAllocation],
    fading_rng: SimRng,
    reward_scale: f64,
    last_obs: Vec<f64>,
    epochs: Vec<(u64, EpochMetrics)>,
}

impl Environment for ControlEnv<'_> {
    fn observe(&mut self) -> Vec<f64> {
        let obs = self.env.observe();
        self.last_obs = obs.clone();
        obs
    }

    fn action_count(&self) -> usize {
        self.actions.len()
    }

    fn step(&mut self, action: usize) -> Result<StepReport> {
        let epoch = self.env.epoch_index();
        let end = (epoch + 1) as f64 * self.env.epoch_duration_s();
        let events = self.stream.take_until(end);
        let (_, metrics) = self.env.step(&self.actions[action], &events, &mut self.fading_rng)?;
        let next_obs = self.env.observe();
        let experience = Experience {
            state: self.last_obs.clone(),
            action,
            next_state: next_obs,
            reward: metrics.reward * self.reward_scale,
            terminal: false,
        };
        let reward = metrics.reward;
        self.epochs.push((epoch, metrics));
        Ok(StepReport { experiences: vec![experience], reward, done: false })
    }
}

enum EvalPolicy<'a> {
    Greedy(&'a QNetwork),
    Fixed(BandwidthAllocation),
    Predictor { predictor: DemandPredictor, rate_weighted: bool, rates: RequiredRates },
    Pooled,
}

fn build_env(cfg: &ExperimentConfig, mode: SchedulingMode) -> Result<RadioEnv> {
    let p = &cfg.radio;
    let users: usize = p.slices.iter().map(|s| s.user_count).sum();
    let mut placement_rng = stream(cfg.trace_seed, "placement");
    let links = place_users(users, p.cell_radius_m, &p.link, &mut placement_rng);
    let mut env_cfg = RadioEnvConfig::new(p.slices.clone(), p.link, p.total_bandwidth_hz);
    env_cfg.epoch_slots = p.epoch_slots;
    env_cfg.reward = p.reward;
    env_cfg.drop_expired = p.drop_expired;
    env_cfg.mode = mode;
    RadioEnv::new(env_cfg, links)
}

fn make_predictor(cfg: &PredictorConfig) -> Result<DemandPredictor> {
    match *cfg {
        PredictorConfig::ExponentialSmoothing { factor } => DemandPredictor::exponential(factor),
        PredictorConfig::SlidingWindow { width } => DemandPredictor::sliding(width),
    }
}

pub(super) fn run(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let p = &cfg.radio;
    let actions = action_space(p.total_bandwidth_hz, p.granularity_hz, p.slices.len())?;
    let reward_scale =
        1.0 / (p.reward.se_weight * REWARD_SCALE_SE_REF + p.reward.qoe_weight).max(1e-12);

    // Train the policy when the scheme calls for one.
    let mut trained: Option<QNetwork> = None;
    let mut trained_running_max: Option<Vec<f64>> = None;
    if cfg.scheme == Scheme::Dql {
        let mut control = ControlEnv {
            env: build_env(cfg, SchedulingMode::Sliced)?,
            stream: TraceStream::new(&p.slices, derive_seed(cfg.trace_seed, "trace-train"))?,
            actions: &actions,
            fading_rng: stream(cfg.agent_seed, "fading-train"),
            reward_scale,
            last_obs: Vec::new(),
            epochs: Vec::new(),
        };
        let mut train_rng = stream(cfg.agent_seed, "agent-train");
        let run = run_training(&mut control, &cfg.agent, p.train_epochs, &mut train_rng)?;
        if let Some(dir) = &cfg.out_dir {
            csv::write_epochs(dir.join("train_epochs.csv").as_path(), &control.epochs)?;
            crate::dqn::save_checkpoint(&run.network, &cfg.agent, &dir.join("checkpoint.bin"))?;
        }
        trained_running_max = Some(control.env.running_max().to_vec());
        trained = Some(run.network);
    }

    // Evaluation pass, identical machinery for every scheme.
    let mode = if cfg.scheme == Scheme::NoSlicing {
        SchedulingMode::Pooled
    } else {
        SchedulingMode::Sliced
    };
    let mut env = build_env(cfg, mode)?;
    if let Some(rm) = &trained_running_max {
        env.set_running_max(rm);
    }
    let mut policy = match cfg.scheme {
        Scheme::Dql => EvalPolicy::Greedy(trained.as_ref().unwrap()),
        Scheme::Hard => {
            EvalPolicy::Fixed(hard_slicing(p.total_bandwidth_hz, p.slices.len(), p.granularity_hz)?)
        }
        Scheme::DpNo => EvalPolicy::Predictor {
            predictor: make_predictor(&p.predictor)?,
            rate_weighted: false,
            rates: p.required_rates.clone(),
        },
        Scheme::DpBw => EvalPolicy::Predictor {
            predictor: make_predictor(&p.predictor)?,
            rate_weighted: true,
            rates: p.required_rates.clone(),
        },
        Scheme::NoSlicing => EvalPolicy::Pooled,
        Scheme::NoPriority => unreachable!("validated against scenario"),
    };

    let mut trace = TraceStream::new(&p.slices, derive_seed(cfg.trace_seed, "trace-eval"))?;
    let mut fading_rng = stream(cfg.agent_seed, "fading-eval");
    let mut checksum = Fnv::new();
    let mut epochs: Vec<(u64, EpochMetrics)> = Vec::with_capacity(p.eval_epochs);
    let slice_count = p.slices.len();
    let mut window_arrived = vec![0u64; slice_count];
    let mut window_satisfied = vec![0u64; slice_count];
    let mut se_sum = 0.0;
    let mut reward_sum = 0.0;

    for _ in 0..p.eval_epochs {
        let epoch = env.epoch_index();
        let end = (epoch + 1) as f64 * env.epoch_duration_s();
        let events = trace.take_until(end);
        for e in &events {
            e.fold_checksum(&mut checksum);
        }
        let allocation = match &mut policy {
            EvalPolicy::Greedy(net) => {
                let obs = env.observe();
                let q = net.forward(&obs)?;
                actions[argmax(&q)].clone()
            }
            EvalPolicy::Fixed(alloc) => alloc.clone(),
            EvalPolicy::Predictor { predictor, rate_weighted, rates } => {
                let latest: Vec<f64> =
                    env.last_state().arrived.iter().map(|&a| a as f64).collect();
                let predicted = predictor.predict(&latest);
                if *rate_weighted {
                    dp_bw_allocation(&predicted, rates, p.total_bandwidth_hz, p.granularity_hz)?
                } else {
                    dp_no_allocation(&predicted, p.total_bandwidth_hz, p.granularity_hz)?
                }
            }
            EvalPolicy::Pooled => BandwidthAllocation(vec![0.0; slice_count]),
        };
        let (_, metrics) = env.step(&allocation, &events, &mut fading_rng)?;
        let log = env.last_epoch_log().expect("step records a log");
        for k in 0..slice_count {
            window_arrived[k] += log.arrived[k];
            window_satisfied[k] += log.satisfied[k];
        }
        se_sum += metrics.se;
        reward_sum += metrics.reward;
        epochs.push((epoch, metrics));
    }

    if let Some(dir) = &cfg.out_dir {
        csv::write_epochs(dir.join("epochs.csv").as_path(), &epochs)?;
    }

    let n = p.eval_epochs as f64;
    let ratio = |sat: u64, arr: u64| if arr == 0 { 1.0 } else { (sat as f64 / arr as f64).min(1.0) };
    let qoe_per_slice: Vec<f64> = window_satisfied
        .iter()
        .zip(&window_arrived)
        .map(|(&s, &a)| ratio(s, a))
        .collect();
    let qoe_aggregate = match p.reward.aggregate {
        QoeAggregate::PacketPooled => {
            ratio(window_satisfied.iter().sum(), window_arrived.iter().sum())
        }
        QoeAggregate::SliceMean => {
            let active: Vec<f64> = window_arrived
                .iter()
                .zip(&qoe_per_slice)
                .filter(|(&a, _)| a > 0)
                .map(|(_, &q)| q)
                .collect();
            if active.is_empty() {
                1.0
            } else {
                active.iter().sum::<f64>() / active.len() as f64
            }
        }
    };

    let mut metrics = BTreeMap::new();
    metrics.insert("se".into(), se_sum / n);
    metrics.insert("qoe_volte".into(), qoe_per_slice.first().copied().unwrap_or(1.0));
    metrics.insert("qoe_video".into(), qoe_per_slice.get(1).copied().unwrap_or(1.0));
    metrics.insert("qoe_urllc".into(), qoe_per_slice.get(2).copied().unwrap_or(1.0));
    metrics.insert("qoe_aggregate".into(), qoe_aggregate);
    metrics.insert("reward".into(), reward_sum / n);

    Ok(RunSummary {
        scenario: cfg.scenario,
        scheme: cfg.scheme,
        trace_seed: cfg.trace_seed,
        agent_seed: cfg.agent_seed,
        metrics,
        trace_checksum: checksum.finish(),
    })
}
