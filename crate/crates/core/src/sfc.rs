//! Priority-based core-network slicing environment.
//!
//! Three service function chains share the incoming flow stream. Each SFC is
//! a single-server, non-preemptive queue with a fixed per-flow processing
//! latency and CPU cost; the chains differ in how they rank flow categories.
//! The scheduler's job (agent or baseline) is to pick an SFC for each arriving
//! flow; the reward is the negated category-weighted sojourn time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::traffic::Category;

/// The three chains. Priority rules: I serves category A ahead of B and C,
/// II serves A and B ahead of C, III is pure FIFO.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SfcId {
    I,
    II,
    III,
}

impl SfcId {
    pub const ALL: [SfcId; 3] = [SfcId::I, SfcId::II, SfcId::III];

    pub fn index(self) -> usize {
        match self {
            SfcId::I => 0,
            SfcId::II => 1,
            SfcId::III => 2,
        }
    }
}

impl std::fmt::Display for SfcId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SfcId::I => "I",
            SfcId::II => "II",
            SfcId::III => "III",
        };
        f.write_str(name)
    }
}

/// Static description of one chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SfcSpec {
    pub id: SfcId,
    pub cpu_cost: f64,
    pub processing_latency_s: f64,
    /// Priority class per category (index by `Category::index`), 0 highest.
    pub priority: [u8; 3],
}

impl SfcSpec {
    pub fn validate(&self) -> Result<()> {
        if self.cpu_cost <= 0.0 || self.processing_latency_s <= 0.0 {
            return Err(Error::config("SFC cost and latency must be positive"));
        }
        Ok(())
    }

    pub fn class_of(&self, category: Category) -> u8 {
        self.priority[category.index()]
    }

    /// The standard three chains: costs 2 / 1.5 / 1 CPU, latencies
    /// 10 / 15 / 20 ms.
    pub fn default_chains() -> [SfcSpec; 3] {
        [
            SfcSpec { id: SfcId::I, cpu_cost: 2.0, processing_latency_s: 0.010, priority: [0, 1, 1] },
            SfcSpec {
                id: SfcId::II,
                cpu_cost: 1.5,
                processing_latency_s: 0.015,
                priority: [0, 0, 1],
            },
            SfcSpec {
                id: SfcId::III,
                cpu_cost: 1.0,
                processing_latency_s: 0.020,
                priority: [0, 0, 0],
            },
        ]
    }
}

/// Category weights entering the reward; must respect the priority order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SfcRewardConfig {
    pub category_weights: [f64; 3],
}

impl Default for SfcRewardConfig {
    fn default() -> Self {
        SfcRewardConfig { category_weights: [3.0, 2.0, 1.0] }
    }
}

impl SfcRewardConfig {
    pub fn validate(&self) -> Result<()> {
        let [a, b, c] = self.category_weights;
        if !(a >= b && b >= c && c > 0.0) {
            return Err(Error::config("category weights must satisfy w(A) >= w(B) >= w(C) > 0"));
        }
        Ok(())
    }

    pub fn weight(&self, category: Category) -> f64 {
        self.category_weights[category.index()]
    }
}

/// Completed-flow accounting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowRecord {
    pub flow_id: u64,
    pub category: Category,
    pub arrival_time_s: f64,
    pub assigned_sfc: SfcId,
    pub queue_time_s: f64,
    pub processing_time_s: f64,
}

impl FlowRecord {
    pub fn start_time_s(&self) -> f64 {
        self.arrival_time_s + self.queue_time_s
    }

    pub fn finish_time_s(&self) -> f64 {
        self.start_time_s() + self.processing_time_s
    }

    pub fn sojourn_s(&self) -> f64 {
        self.queue_time_s + self.processing_time_s
    }
}

/// Negated weighted sojourn time, so that maximizing the reward minimizes
/// the weighted delay.
pub fn flow_reward(record: &FlowRecord, cfg: &SfcRewardConfig) -> f64 {
    -cfg.weight(record.category) * record.sojourn_s()
}

/// Time-averaged CPUs over `[window_start, window_end)` given per-service
/// busy intervals.
pub fn cpu_utilization(
    busy_log: &[(SfcId, f64, f64)],
    costs: &[f64; 3],
    window_start_s: f64,
    window_end_s: f64,
) -> f64 {
    let window = window_end_s - window_start_s;
    assert!(window > 0.0, "window must be positive");
    let mut total = 0.0;
    for &(sfc, start, finish) in busy_log {
        let overlap = finish.min(window_end_s) - start.max(window_start_s);
        if overlap > 0.0 {
            total += costs[sfc.index()] * overlap;
        }
    }
    total / window
}

/// Encoded observation: category one-hot and inter-arrival gap for each of
/// the last five flows (most recent first) plus the incoming category.
#[derive(Debug, Clone, PartialEq)]
pub struct SfcState {
    /// Oldest first, at most five entries.
    pub history: Vec<(Category, f64)>,
    pub current: Category,
    pub time_s: f64,
}

impl SfcState {
    pub const HISTORY_LEN: usize = 5;
    pub const ENCODED_DIM: usize = Self::HISTORY_LEN * 4 + 3;

    /// Missing history slots are padded with a zero one-hot and gap -1.
    pub fn encode(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(Self::ENCODED_DIM);
        for slot in 0..Self::HISTORY_LEN {
            // Most recent first.
            if slot < self.history.len() {
                let (cat, t) = self.history[self.history.len() - 1 - slot];
                let mut one_hot = [0.0; 3];
                one_hot[cat.index()] = 1.0;
                out.extend_from_slice(&one_hot);
                out.push(self.time_s - t);
            } else {
                out.extend_from_slice(&[0.0, 0.0, 0.0]);
                out.push(-1.0);
            }
        }
        let mut one_hot = [0.0; 3];
        one_hot[self.current.index()] = 1.0;
        out.extend_from_slice(&one_hot);
        out
    }
}

#[derive(Debug, Clone, Copy)]
struct QueuedFlow {
    flow_id: u64,
    category: Category,
    arrival_time_s: f64,
    class: u8,
    seq: u64,
}

#[derive(Debug, Clone, Copy)]
struct InService {
    flow: QueuedFlow,
    start_s: f64,
    finish_s: f64,
}

/// Single-owner stateful environment.
pub struct SfcEnv {
    specs: [SfcSpec; 3],
    reward: SfcRewardConfig,
    /// Concurrent CPU budget; `None` leaves each chain free to serve.
    cpu_budget: Option<f64>,
    queues: [Vec<QueuedFlow>; 3],
    in_service: [Option<InService>; 3],
    clock_s: f64,
    next_flow_id: u64,
    next_seq: u64,
    history: std::collections::VecDeque<(Category, f64)>,
    completions: Vec<FlowRecord>,
    busy_log: Vec<(SfcId, f64, f64)>,
}

impl SfcEnv {
    pub fn new(specs: [SfcSpec; 3], reward: SfcRewardConfig, cpu_budget: Option<f64>) -> Result<Self> {
        for s in &specs {
            s.validate()?;
        }
        reward.validate()?;
        if let Some(budget) = cpu_budget {
            let max_cost = specs.iter().map(|s| s.cpu_cost).fold(0.0, f64::max);
            if budget < max_cost {
                return Err(Error::config(format!(
                    "cpu budget {budget} cannot host the most expensive chain ({max_cost})"
                )));
            }
        }
        Ok(SfcEnv {
            specs,
            reward,
            cpu_budget,
            queues: [Vec::new(), Vec::new(), Vec::new()],
            in_service: [None, None, None],
            clock_s: 0.0,
            next_flow_id: 0,
            next_seq: 0,
            history: std::collections::VecDeque::with_capacity(SfcState::HISTORY_LEN + 1),
            completions: Vec::new(),
            busy_log: Vec::new(),
        })
    }

    pub fn reward_config(&self) -> &SfcRewardConfig {
        &self.reward
    }

    pub fn specs(&self) -> &[SfcSpec; 3] {
        &self.specs
    }

    pub fn clock_s(&self) -> f64 {
        self.clock_s
    }

    pub fn busy_log(&self) -> &[(SfcId, f64, f64)] {
        &self.busy_log
    }

    pub fn costs(&self) -> [f64; 3] {
        [self.specs[0].cpu_cost, self.specs[1].cpu_cost, self.specs[2].cpu_cost]
    }

    /// Observation for a flow of `category` arriving at `time_s`; does not
    /// mutate the environment.
    pub fn observe_state(&self, category: Category, time_s: f64) -> SfcState {
        SfcState {
            history: self.history.iter().copied().collect(),
            current: category,
            time_s,
        }
    }

    /// Processes completions up to time `t`, starting queued flows as servers
    /// free up.
    pub fn advance(&mut self, t: f64) {
        loop {
            let mut earliest: Option<(usize, f64)> = None;
            for (k, slot) in self.in_service.iter().enumerate() {
                if let Some(svc) = slot {
                    if svc.finish_s <= t
                        && earliest.map_or(true, |(_, f)| svc.finish_s < f)
                    {
                        earliest = Some((k, svc.finish_s));
                    }
                }
            }
            let Some((k, finish)) = earliest else { break };
            let svc = self.in_service[k].take().unwrap();
            self.busy_log.push((self.specs[k].id, svc.start_s, svc.finish_s));
            self.completions.push(FlowRecord {
                flow_id: svc.flow.flow_id,
                category: svc.flow.category,
                arrival_time_s: svc.flow.arrival_time_s,
                assigned_sfc: self.specs[k].id,
                queue_time_s: svc.start_s - svc.flow.arrival_time_s,
                processing_time_s: self.specs[k].processing_latency_s,
            });
            self.start_pending(finish);
        }
        if t.is_finite() {
            self.clock_s = self.clock_s.max(t);
        }
    }

    fn active_cpu(&self) -> f64 {
        self.in_service
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_some())
            .map(|(k, _)| self.specs[k].cpu_cost)
            .sum()
    }

    fn start_pending(&mut self, now: f64) {
        for k in 0..3 {
            if self.in_service[k].is_some() || self.queues[k].is_empty() {
                continue;
            }
            if let Some(budget) = self.cpu_budget {
                if self.active_cpu() + self.specs[k].cpu_cost > budget + 1e-12 {
                    continue;
                }
            }
            // Highest class first, arrival order within a class.
            let best = self
                .queues[k]
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| a.class.cmp(&b.class).then(a.seq.cmp(&b.seq)))
                .map(|(i, _)| i)
                .unwrap();
            let flow = self.queues[k].remove(best);
            self.in_service[k] = Some(InService {
                flow,
                start_s: now,
                finish_s: now + self.specs[k].processing_latency_s,
            });
        }
    }

    /// Assigns an arriving flow to a chain. Arrival times must be fed in
    /// non-decreasing order.
    pub fn assign(&mut self, category: Category, arrival_time_s: f64, sfc: SfcId) -> Result<u64> {
        if arrival_time_s + 1e-12 < self.clock_s {
            return Err(Error::contract(format!(
                "flow arrives at {arrival_time_s} before the clock {}",
                self.clock_s
            )));
        }
        self.advance(arrival_time_s);
        self.clock_s = self.clock_s.max(arrival_time_s);

        self.history.push_back((category, arrival_time_s));
        while self.history.len() > SfcState::HISTORY_LEN {
            self.history.pop_front();
        }

        let k = sfc.index();
        let flow_id = self.next_flow_id;
        self.next_flow_id += 1;
        let flow = QueuedFlow {
            flow_id,
            category,
            arrival_time_s,
            class: self.specs[k].class_of(category),
            seq: self.next_seq,
        };
        self.next_seq += 1;
        self.queues[k].push(flow);
        self.start_pending(arrival_time_s);
        Ok(flow_id)
    }

    /// Runs every queued and in-flight flow to completion.
    pub fn drain(&mut self) {
        self.advance(f64::INFINITY);
    }

    /// Completed flows since the last call, in completion order.
    pub fn take_completions(&mut self) -> Vec<FlowRecord> {
        std::mem::take(&mut self.completions)
    }

    /// Waiting time a `category` flow would see on `sfc` if assigned now:
    /// remaining service, queued work that would precede it, and its own
    /// processing latency.
    pub fn projected_wait(&self, sfc: SfcId, category: Category) -> f64 {
        let k = sfc.index();
        let spec = &self.specs[k];
        let my_class = spec.class_of(category);
        let remaining = self.in_service[k]
            .as_ref()
            .map_or(0.0, |svc| (svc.finish_s - self.clock_s).max(0.0));
        let ahead = self.queues[k]
            .iter()
            .filter(|q| q.class <= my_class)
            .count() as f64;
        remaining + ahead * spec.processing_latency_s + spec.processing_latency_s
    }
}
