//! SFC-scenario runner. The reward of an assignment is only realized when the
//! flow finishes service, so training experiences are committed lazily: the
//! next-state field fills at the following decision and the reward field at
//! completion; an experience enters the replay memory once both are known.

use std::collections::BTreeMap;

use crate::baselines::no_priority_assign;
use crate::dqn::{argmax, run_training, Environment, Experience, QNetwork, StepReport};
use crate::error::Result;
use crate::rng::derive_seed;
use crate::sfc::{cpu_utilization, flow_reward, FlowRecord, SfcEnv, SfcId};
use crate::traffic::{generate_flow_trace, Category, FlowTrace};

use super::csv;
use super::{ExperimentConfig, RunSummary, Scheme};

struct Pending {
    state: Vec<f64>,
    action: usize,
    next_state: Option<Vec<f64>>,
    reward: Option<f64>,
    emitted: bool,
}

struct ControlEnv<'a> {
    env: SfcEnv,
    flows: &'a FlowTrace,
    idx: usize,
    pending: Vec<Pending>,
    last_obs: Vec<f64>,
}

impl ControlEnv<'_> {
    fn emit_ready(&mut self, touched: &mut Vec<usize>) -> Vec<Experience> {
        touched.sort_unstable();
        touched.dedup();
        let mut out = Vec::new();
        for &i in touched.iter() {
            let p = &mut self.pending[i];
            if !p.emitted {
                if let (Some(next), Some(reward)) = (&p.next_state, p.reward) {
                    out.push(Experience {
                        state: p.state.clone(),
                        action: p.action,
                        next_state: next.clone(),
                        reward,
                        terminal: false,
                    });
                    p.emitted = true;
                }
            }
        }
        out
    }
}

impl Environment for ControlEnv<'_> {
    fn observe(&mut self) -> Vec<f64> {
        let e = &self.flows.events[self.idx.min(self.flows.events.len() - 1)];
        let obs = self.env.observe_state(e.category, e.time_s).encode();
        self.last_obs = obs.clone();
        obs
    }

    fn action_count(&self) -> usize {
        3
    }

    fn step(&mut self, action: usize) -> Result<StepReport> {
        let e = self.flows.events[self.idx];
        let state = self.last_obs.clone();
        let mut touched = Vec::new();
        if self.idx > 0 {
            self.pending[self.idx - 1].next_state = Some(state.clone());
            touched.push(self.idx - 1);
        }
        self.pending.push(Pending { state, action, next_state: None, reward: None, emitted: false });
        self.env.assign(e.category, e.time_s, SfcId::ALL[action])?;
        let mut reward_sum = 0.0;
        for record in self.env.take_completions() {
            let r = flow_reward(&record, self.env.reward_config());
            reward_sum += r;
            let id = record.flow_id as usize;
            self.pending[id].reward = Some(r);
            touched.push(id);
        }
        let experiences = self.emit_ready(&mut touched);
        self.idx += 1;
        let done = self.idx >= self.flows.events.len();
        Ok(StepReport { experiences, reward: reward_sum, done })
    }
}

pub(super) fn run(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let p = &cfg.sfc;

    let mut trained: Option<QNetwork> = None;
    if cfg.scheme == Scheme::Dql {
        let train_trace =
            generate_flow_trace(&p.flow_models, p.train_flows, derive_seed(cfg.trace_seed, "trace-train"))?;
        let mut control = ControlEnv {
            env: SfcEnv::new(p.chains, p.reward, p.cpu_budget)?,
            flows: &train_trace,
            idx: 0,
            pending: Vec::with_capacity(p.train_flows),
            last_obs: Vec::new(),
        };
        let mut rng = crate::rng::stream(cfg.agent_seed, "agent-train");
        let run = run_training(&mut control, &cfg.agent, p.train_flows, &mut rng)?;
        if let Some(dir) = &cfg.out_dir {
            crate::dqn::save_checkpoint(&run.network, &cfg.agent, &dir.join("checkpoint.bin"))?;
        }
        trained = Some(run.network);
    }

    // Evaluation on a fresh environment and its own trace stream.
    let trace =
        generate_flow_trace(&p.flow_models, p.eval_flows, derive_seed(cfg.trace_seed, "trace-eval"))?;
    let mut env = SfcEnv::new(p.chains, p.reward, p.cpu_budget)?;
    for e in &trace.events {
        let pick = match (&trained, cfg.scheme) {
            (Some(net), Scheme::Dql) => {
                let obs = env.observe_state(e.category, e.time_s).encode();
                SfcId::ALL[argmax(&net.forward(&obs)?)]
            }
            (_, Scheme::NoPriority) => {
                env.advance(e.time_s);
                no_priority_assign(&env, e.category)
            }
            _ => unreachable!("validated against scenario"),
        };
        env.assign(e.category, e.time_s, pick)?;
    }
    env.drain();
    let mut records = env.take_completions();
    records.sort_by_key(|r| r.flow_id);

    let reward_cfg = *env.reward_config();
    let flows: Vec<(FlowRecord, f64)> =
        records.iter().map(|r| (*r, flow_reward(r, &reward_cfg))).collect();

    let last_finish = records
        .iter()
        .map(|r| r.finish_time_s())
        .fold(0.0f64, f64::max)
        .max(p.window_s);
    let costs = env.costs();
    let mut windows = Vec::new();
    let mut start = 0.0;
    while start < last_finish {
        let end = start + p.window_s;
        let in_window: Vec<&FlowRecord> = records
            .iter()
            .filter(|r| r.finish_time_s() >= start && r.finish_time_s() < end)
            .collect();
        let mean_wait = if in_window.is_empty() {
            0.0
        } else {
            in_window.iter().map(|r| r.queue_time_s).sum::<f64>() / in_window.len() as f64
        };
        let cpus = cpu_utilization(env.busy_log(), &costs, start, end);
        windows.push((start, mean_wait, cpus));
        start = end;
    }

    if let Some(dir) = &cfg.out_dir {
        csv::write_flows(dir.join("flows.csv").as_path(), &flows)?;
        csv::write_windows(dir.join("windows.csv").as_path(), &windows)?;
    }

    let n = records.len() as f64;
    let mean = |f: &dyn Fn(&FlowRecord) -> f64| -> f64 {
        if records.is_empty() {
            0.0
        } else {
            records.iter().map(|r| f(r)).sum::<f64>() / n
        }
    };
    let cat_mean = |cat: Category| -> f64 {
        let mine: Vec<f64> = records
            .iter()
            .filter(|r| r.category == cat)
            .map(|r| r.sojourn_s())
            .collect();
        if mine.is_empty() {
            0.0
        } else {
            mine.iter().sum::<f64>() / mine.len() as f64
        }
    };

    let mut metrics = BTreeMap::new();
    metrics.insert("mean_queue_s".into(), mean(&|r| r.queue_time_s));
    metrics.insert("mean_sojourn_s".into(), mean(&|r| r.sojourn_s()));
    metrics.insert(
        "weighted_sojourn".into(),
        mean(&|r| reward_cfg.weight(r.category) * r.sojourn_s()),
    );
    metrics.insert("sojourn_a_s".into(), cat_mean(Category::A));
    metrics.insert("sojourn_b_s".into(), cat_mean(Category::B));
    metrics.insert("sojourn_c_s".into(), cat_mean(Category::C));
    metrics.insert(
        "weighted_sojourn_a".into(),
        reward_cfg.weight(Category::A) * cat_mean(Category::A),
    );
    metrics.insert(
        "cpu_util".into(),
        cpu_utilization(env.busy_log(), &costs, 0.0, last_finish),
    );
    metrics.insert("mean_reward".into(), {
        if flows.is_empty() {
            0.0
        } else {
            flows.iter().map(|(_, r)| r).sum::<f64>() / n
        }
    });

    Ok(RunSummary {
        scenario: cfg.scenario,
        scheme: cfg.scheme,
        trace_seed: cfg.trace_seed,
        agent_seed: cfg.agent_seed,
        metrics,
        trace_checksum: trace.checksum(),
    })
}
