//! Discrete-event simulator for two network-slicing resource-management
//! scenarios — radio bandwidth slicing and priority-based service-function-
//! chain scheduling — together with a from-scratch deep-Q-learning agent and
//! the comparison baselines, plus an experiment harness that drives seeded
//! agent-vs-baseline runs and emits CSV metrics.
//!
//! Layout:
//! - [`traffic`]: per-slice packet traces and category-tagged flow traces.
//! - [`channel`]: Rayleigh-faded downlink with Shannon-capacity rates.
//! - [`radio`]: the bandwidth-slicing environment (round-robin slots, SE/QoE).
//! - [`sfc`]: the three-chain priority-queue environment.
//! - [`dqn`]: neural Q-function, replay memory, training loop, checkpoints.
//! - [`baselines`]: demand-prediction, hard/no slicing, min-waiting-time.
//! - [`harness`]: experiment configs, runs, comparisons, sweeps, CSV output.

pub mod baselines;
pub mod channel;
pub mod dqn;
pub mod error;
pub mod harness;
pub mod radio;
pub mod rng;
pub mod sfc;
pub mod traffic;

pub use baselines::{DemandPredictor, RequiredRates};
pub use channel::{LinkConfig, UserLink};
pub use dqn::{AgentConfig, DqnAgent, Experience, QNetwork, ReplayMemory};
pub use error::{Error, Result};
pub use harness::{ComparisonReport, ExperimentConfig, Profile, RunSummary, Scenario, Scheme};
pub use radio::{BandwidthAllocation, EpochMetrics, RadioEnv, RadioState, RewardConfig};
pub use sfc::{FlowRecord, SfcEnv, SfcId, SfcRewardConfig, SfcSpec};
pub use traffic::{
    Category, FlowTrace, InterArrivalModel, PacketSizeModel, PacketTrace, SlaSpec, SliceConfig,
    SliceKind,
};
