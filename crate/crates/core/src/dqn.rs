//! Deep-Q-learning core, built directly on `Vec<f64>` arithmetic.
//!
//! An evaluation network is trained by stochastic gradient descent on the
//! squared temporal-difference error; a target network, cloned from the
//! evaluation weights every `clone_period` episodes, supplies the bootstrap
//! targets `r + gamma * max_a' Q̂(s', a')`. Experiences are replayed from a
//! bounded FIFO memory with uniform mini-batch sampling.
//!
//! The weight update descends the loss: `theta <- theta + alpha * (Q+ - Q) *
//! grad_theta Q` on the taken action's output. (Written as an ascent on the
//! raw TD error the same step reads `theta <- theta - alpha * (Q - Q+) *
//! grad_theta Q`; both forms denote the same descent direction.)

use std::io::{Read, Write};
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SimRng;

// ---------------------------------------------------------------------------
// Network
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Rectifier,
    Identity,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Rectifier => z.max(0.0),
            Activation::Identity => z,
        }
    }

    /// Derivative expressed through the activation output.
    fn derivative_from_output(self, a: f64) -> f64 {
        match self {
            Activation::Rectifier => {
                if a > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Identity => 1.0,
        }
    }
}

/// Dense layer; weights are row-major `[output_dim x input_dim]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub input_dim: usize,
    pub output_dim: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl Layer {
    fn forward_into(&self, input: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for row in 0..self.output_dim {
            let w = &self.weights[row * self.input_dim..(row + 1) * self.input_dim];
            let mut z = self.bias[row];
            for (wi, xi) in w.iter().zip(input) {
                z += wi * xi;
            }
            out.push(self.activation.apply(z));
        }
    }
}

/// Layered affine + nonlinearity Q-function approximator. Hidden layers use
/// the rectifier, the output layer is affine.
#[derive(Debug, Clone, PartialEq)]
pub struct QNetwork {
    pub layers: Vec<Layer>,
    pub input_dim: usize,
    pub output_dim: usize,
}

impl QNetwork {
    /// Seeded uniform init scaled by fan-in.
    pub fn new(input_dim: usize, hidden: &[usize], output_dim: usize, rng: &mut SimRng) -> Self {
        let mut dims = vec![input_dim];
        dims.extend_from_slice(hidden);
        dims.push(output_dim);
        let mut layers = Vec::new();
        for i in 0..dims.len() - 1 {
            let (fan_in, fan_out) = (dims[i], dims[i + 1]);
            let bound = 1.0 / (fan_in as f64).sqrt();
            let weights =
                (0..fan_in * fan_out).map(|_| rng.random_range(-bound..bound)).collect();
            let bias = vec![0.0; fan_out];
            let activation = if i + 1 == dims.len() - 1 {
                Activation::Identity
            } else {
                Activation::Rectifier
            };
            layers.push(Layer { input_dim: fan_in, output_dim: fan_out, weights, bias, activation });
        }
        QNetwork { layers, input_dim, output_dim }
    }

    pub fn parameter_count(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    /// Q-values for a state, one entry per action.
    pub fn forward(&self, state: &[f64]) -> Result<Vec<f64>> {
        if state.len() != self.input_dim {
            return Err(Error::contract(format!(
                "state has {} dims, network expects {}",
                state.len(),
                self.input_dim
            )));
        }
        let mut current = state.to_vec();
        let mut next = Vec::new();
        for layer in &self.layers {
            layer.forward_into(&current, &mut next);
            std::mem::swap(&mut current, &mut next);
        }
        Ok(current)
    }

    /// Forward pass retaining every layer's activations (input first).
    fn forward_trace(&self, state: &[f64]) -> Vec<Vec<f64>> {
        let mut acts = Vec::with_capacity(self.layers.len() + 1);
        acts.push(state.to_vec());
        for layer in &self.layers {
            let mut out = Vec::new();
            layer.forward_into(acts.last().unwrap(), &mut out);
            acts.push(out);
        }
        acts
    }

    fn all_finite(&self) -> bool {
        self.layers
            .iter()
            .all(|l| l.weights.iter().chain(&l.bias).all(|p| p.is_finite()))
    }
}

// ---------------------------------------------------------------------------
// Action selection and targets
// ---------------------------------------------------------------------------

/// Greedy with probability 1 - epsilon, uniform otherwise. Argmax ties break
/// toward the lowest index.
pub fn select_action(q_values: &[f64], epsilon: f64, rng: &mut SimRng) -> usize {
    assert!(!q_values.is_empty(), "empty action space");
    let roll: f64 = rng.random_range(0.0..1.0);
    if roll < epsilon {
        rng.random_range(0..q_values.len())
    } else {
        argmax(q_values)
    }
}

pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Bootstrap target `r + gamma * max_a' Q̂(s', a')`; terminal transitions use
/// the reward alone.
pub fn td_target(
    reward: f64,
    next_state: &[f64],
    target_net: &QNetwork,
    gamma: f64,
    terminal: bool,
) -> Result<f64> {
    if terminal {
        return Ok(reward);
    }
    let q = target_net.forward(next_state)?;
    let max_q = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(reward + gamma * max_q)
}

// ---------------------------------------------------------------------------
// Experience replay
// ---------------------------------------------------------------------------

/// One transition `(s, a, s', r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Experience {
    pub state: Vec<f64>,
    pub action: usize,
    pub next_state: Vec<f64>,
    pub reward: f64,
    pub terminal: bool,
}

/// Bounded FIFO store with uniform mini-batch sampling.
#[derive(Debug, Clone)]
pub struct ReplayMemory {
    capacity: usize,
    buffer: std::collections::VecDeque<Experience>,
}

impl ReplayMemory {
    pub fn new(capacity: usize) -> Self {
        ReplayMemory { capacity, buffer: std::collections::VecDeque::with_capacity(capacity) }
    }

    pub fn len(&self) -> usize {
        self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buffer.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Experience> {
        self.buffer.iter()
    }

    /// Oldest entry is evicted once the capacity is reached.
    pub fn push(&mut self, e: Experience) {
        if self.buffer.len() == self.capacity {
            self.buffer.pop_front();
        }
        self.buffer.push_back(e);
    }

    /// Uniform sample without replacement; `None` until the memory holds at
    /// least `batch_size` items (the caller skips training).
    pub fn sample(&self, batch_size: usize, rng: &mut SimRng) -> Option<Vec<Experience>> {
        if self.buffer.len() < batch_size || batch_size == 0 {
            return None;
        }
        let mut indices: Vec<usize> = (0..self.buffer.len()).collect();
        for i in 0..batch_size {
            let j = rng.random_range(i..indices.len());
            indices.swap(i, j);
        }
        Some(indices[..batch_size].iter().map(|&i| self.buffer[i].clone()).collect())
    }
}

// ---------------------------------------------------------------------------
// Optimizer and the gradient step
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OptimizerKind {
    Sgd,
    AdaptiveMoments { beta1: f64, beta2: f64, eps: f64 },
}

impl OptimizerKind {
    pub fn adaptive_default() -> Self {
        OptimizerKind::AdaptiveMoments { beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

/// Per-parameter optimizer state (first/second moments for the adaptive
/// variant).
#[derive(Debug, Clone)]
pub struct Optimizer {
    kind: OptimizerKind,
    m: Vec<f64>,
    v: Vec<f64>,
    steps: u64,
}

impl Optimizer {
    pub fn new(kind: OptimizerKind, parameter_count: usize) -> Self {
        let n = match kind {
            OptimizerKind::Sgd => 0,
            OptimizerKind::AdaptiveMoments { .. } => parameter_count,
        };
        Optimizer { kind, m: vec![0.0; n], v: vec![0.0; n], steps: 0 }
    }

    fn apply(&mut self, params: &mut [&mut f64], grads: &[f64], lr: f64) {
        match self.kind {
            OptimizerKind::Sgd => {
                for (p, g) in params.iter_mut().zip(grads) {
                    **p -= lr * g;
                }
            }
            OptimizerKind::AdaptiveMoments { beta1, beta2, eps } => {
                self.steps += 1;
                let t = self.steps as f64;
                let bc1 = 1.0 - beta1.powf(t);
                let bc2 = 1.0 - beta2.powf(t);
                for (i, (p, g)) in params.iter_mut().zip(grads).enumerate() {
                    self.m[i] = beta1 * self.m[i] + (1.0 - beta1) * g;
                    self.v[i] = beta2 * self.v[i] + (1.0 - beta2) * g * g;
                    let m_hat = self.m[i] / bc1;
                    let v_hat = self.v[i] / bc2;
                    **p -= lr * m_hat / (v_hat.sqrt() + eps);
                }
            }
        }
    }
}

/// Mean over the batch of `0.5 * (target - Q(s, a))^2` and its gradients with
/// respect to every parameter, flattened in layer order (weights then bias).
pub fn loss_and_gradients(
    net: &QNetwork,
    batch: &[Experience],
    targets: &[f64],
) -> Result<(f64, Vec<f64>)> {
    if batch.is_empty() || batch.len() != targets.len() {
        return Err(Error::contract("batch and targets must be nonempty and equal length"));
    }
    let mut grads = vec![0.0; net.parameter_count()];
    let mut loss = 0.0;
    let scale = 1.0 / batch.len() as f64;

    for (exp, &target) in batch.iter().zip(targets) {
        if exp.action >= net.output_dim {
            return Err(Error::contract(format!(
                "action {} outside the {}-action output head",
                exp.action, net.output_dim
            )));
        }
        let acts = net.forward_trace(&exp.state);
        let q = acts.last().unwrap()[exp.action];
        let err = target - q;
        loss += 0.5 * err * err * scale;

        // dL/dq on the taken action only.
        let mut delta = vec![0.0; net.output_dim];
        delta[exp.action] = -err * scale;

        let mut offset = net.parameter_count();
        for (l, layer) in net.layers.iter().enumerate().rev() {
            let input = &acts[l];
            let output = &acts[l + 1];
            // dL/dz through the activation.
            for (d, &a) in delta.iter_mut().zip(output) {
                *d *= layer.activation.derivative_from_output(a);
            }
            offset -= layer.weights.len() + layer.bias.len();
            let (w_grad, b_grad) = grads[offset..offset + layer.weights.len() + layer.bias.len()]
                .split_at_mut(layer.weights.len());
            for row in 0..layer.output_dim {
                let d = delta[row];
                if d != 0.0 {
                    let w_row = &mut w_grad[row * layer.input_dim..(row + 1) * layer.input_dim];
                    for (g, &x) in w_row.iter_mut().zip(input) {
                        *g += d * x;
                    }
                    b_grad[row] += d;
                }
            }
            if l > 0 {
                let mut prev = vec![0.0; layer.input_dim];
                for row in 0..layer.output_dim {
                    let d = delta[row];
                    if d != 0.0 {
                        let w_row = &layer.weights[row * layer.input_dim..(row + 1) * layer.input_dim];
                        for (p, &w) in prev.iter_mut().zip(w_row) {
                            *p += d * w;
                        }
                    }
                }
                delta = prev;
            }
        }
    }
    Ok((loss, grads))
}

/// One gradient-descent step on the batch. Returns the pre-update loss.
pub fn train_step(
    net: &mut QNetwork,
    batch: &[Experience],
    targets: &[f64],
    learning_rate: f64,
    opt: &mut Optimizer,
) -> Result<f64> {
    let (loss, grads) = loss_and_gradients(net, batch, targets)?;
    if !loss.is_finite() || grads.iter().any(|g| !g.is_finite()) {
        return Err(Error::TrainingDiverged(format!("non-finite loss or gradient (loss {loss})")));
    }
    let mut params: Vec<&mut f64> = Vec::with_capacity(grads.len());
    for layer in &mut net.layers {
        params.extend(layer.weights.iter_mut());
        params.extend(layer.bias.iter_mut());
    }
    opt.apply(&mut params, &grads, learning_rate);
    if !net.all_finite() {
        return Err(Error::TrainingDiverged("parameters left the finite range".into()));
    }
    Ok(loss)
}

// ---------------------------------------------------------------------------
// Agent
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentConfig {
    pub gamma: f64,
    pub learning_rate: f64,
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    pub epsilon_decay_steps: usize,
    pub batch_size: usize,
    pub clone_period: usize,
    pub replay_capacity: usize,
    pub hidden: Vec<usize>,
    pub optimizer: OptimizerKind,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            gamma: 0.9,
            learning_rate: 1e-3,
            epsilon_start: 1.0,
            epsilon_end: 0.05,
            epsilon_decay_steps: 3000,
            batch_size: 32,
            clone_period: 100,
            replay_capacity: 10_000,
            hidden: vec![64, 64],
            optimizer: OptimizerKind::Sgd,
        }
    }
}

impl AgentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::config("gamma must lie in [0, 1]"));
        }
        if self.learning_rate <= 0.0 {
            return Err(Error::config("learning rate must be positive"));
        }
        if self.batch_size == 0 || self.batch_size > self.replay_capacity {
            return Err(Error::config("batch size must be in 1..=replay capacity"));
        }
        if self.clone_period == 0 {
            return Err(Error::config("clone period must be positive"));
        }
        Ok(())
    }

    /// Linear anneal from start to end over `epsilon_decay_steps`.
    pub fn epsilon_at(&self, episode: usize) -> f64 {
        if self.epsilon_decay_steps == 0 {
            return self.epsilon_end;
        }
        let frac = (episode as f64 / self.epsilon_decay_steps as f64).min(1.0);
        self.epsilon_start + (self.epsilon_end - self.epsilon_start) * frac
    }
}

/// Evaluation network, target network, replay memory and optimizer state.
pub struct DqnAgent {
    pub cfg: AgentConfig,
    pub eval: QNetwork,
    pub target: QNetwork,
    pub memory: ReplayMemory,
    opt: Optimizer,
    clone_count: u64,
}

impl DqnAgent {
    pub fn new(cfg: AgentConfig, input_dim: usize, action_count: usize, rng: &mut SimRng) -> Result<Self> {
        cfg.validate()?;
        let eval = QNetwork::new(input_dim, &cfg.hidden, action_count, rng);
        let target = eval.clone();
        let memory = ReplayMemory::new(cfg.replay_capacity);
        let opt = Optimizer::new(cfg.optimizer, eval.parameter_count());
        Ok(DqnAgent { cfg, eval, target, memory, opt, clone_count: 0 })
    }

    pub fn act(&self, state: &[f64], epsilon: f64, rng: &mut SimRng) -> Result<usize> {
        let q = self.eval.forward(state)?;
        Ok(select_action(&q, epsilon, rng))
    }

    pub fn act_greedy(&self, state: &[f64]) -> Result<usize> {
        Ok(argmax(&self.eval.forward(state)?))
    }

    /// One mini-batch update against the target network. `Ok(None)` while the
    /// memory is still underfilled.
    pub fn learn(&mut self, rng: &mut SimRng) -> Result<Option<f64>> {
        let Some(batch) = self.memory.sample(self.cfg.batch_size, rng) else {
            return Ok(None);
        };
        let targets: Vec<f64> = batch
            .iter()
            .map(|e| td_target(e.reward, &e.next_state, &self.target, self.cfg.gamma, e.terminal))
            .collect::<Result<_>>()?;
        let loss = train_step(&mut self.eval, &batch, &targets, self.cfg.learning_rate, &mut self.opt)?;
        Ok(Some(loss))
    }

    /// Copies evaluation weights into the frozen target network.
    pub fn sync_target(&mut self) {
        self.target = self.eval.clone();
        self.clone_count += 1;
    }

    pub fn clone_count(&self) -> u64 {
        self.clone_count
    }
}

// ---------------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------------

/// What one environment step hands back to the training loop. Environments
/// with delayed rewards may emit zero or several finished experiences per
/// step.
pub struct StepReport {
    pub experiences: Vec<Experience>,
    /// Raw reward logged for this step (unscaled, for reporting).
    pub reward: f64,
    pub done: bool,
}

/// Control problem surface the training loop drives.
pub trait Environment {
    fn observe(&mut self) -> Vec<f64>;
    fn action_count(&self) -> usize;
    fn step(&mut self, action: usize) -> Result<StepReport>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    pub episode: usize,
    pub epsilon: f64,
    pub reward: f64,
    pub loss: Option<f64>,
}

pub struct TrainingRun {
    pub network: QNetwork,
    pub episodes: Vec<EpisodeRecord>,
    pub clone_count: u64,
}

/// Runs the full training loop for `episodes` decision steps: observe, pick
/// an epsilon-greedy action, store the experience, one mini-batch update once
/// the memory is warm, and a target clone every `clone_period` episodes.
pub fn run_training(
    env: &mut dyn Environment,
    cfg: &AgentConfig,
    episodes: usize,
    rng: &mut SimRng,
) -> Result<TrainingRun> {
    let input_dim = env.observe().len();
    let mut agent = DqnAgent::new(cfg.clone(), input_dim, env.action_count(), rng)?;
    let mut records = Vec::with_capacity(episodes);
    for t in 0..episodes {
        let state = env.observe();
        let epsilon = cfg.epsilon_at(t);
        let action = agent.act(&state, epsilon, rng)?;
        let report = env.step(action)?;
        for e in report.experiences {
            agent.memory.push(e);
        }
        let loss = agent.learn(rng)?;
        if (t + 1) % cfg.clone_period == 0 {
            agent.sync_target();
        }
        records.push(EpisodeRecord { episode: t, epsilon, reward: report.reward, loss });
        if report.done {
            break;
        }
    }
    Ok(TrainingRun { network: agent.eval, episodes: records, clone_count: agent.clone_count })
}

// ---------------------------------------------------------------------------
// Checkpoints
// ---------------------------------------------------------------------------

const CHECKPOINT_MAGIC: &[u8; 8] = b"SLCQNET\0";
const CHECKPOINT_VERSION: u32 = 1;

/// Writes a versioned, self-describing checkpoint: layer shapes and
/// activations, row-major weights and biases as little-endian f64, and the
/// agent config echoed as TOML.
pub fn save_checkpoint(net: &QNetwork, cfg: &AgentConfig, path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    out.write_all(CHECKPOINT_MAGIC)?;
    out.write_all(&CHECKPOINT_VERSION.to_le_bytes())?;
    out.write_all(&(net.input_dim as u32).to_le_bytes())?;
    out.write_all(&(net.output_dim as u32).to_le_bytes())?;
    out.write_all(&(net.layers.len() as u32).to_le_bytes())?;
    for layer in &net.layers {
        out.write_all(&(layer.input_dim as u32).to_le_bytes())?;
        out.write_all(&(layer.output_dim as u32).to_le_bytes())?;
        let act: u8 = match layer.activation {
            Activation::Rectifier => 0,
            Activation::Identity => 1,
        };
        out.write_all(&[act])?;
        for w in &layer.weights {
            out.write_all(&w.to_le_bytes())?;
        }
        for b in &layer.bias {
            out.write_all(&b.to_le_bytes())?;
        }
    }
    let cfg_text = toml::to_string(cfg).map_err(|e| Error::config(e.to_string()))?;
    out.write_all(&(cfg_text.len() as u64).to_le_bytes())?;
    out.write_all(cfg_text.as_bytes())?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<(QNetwork, AgentConfig)> {
    let mut input = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic)?;
    if &magic != CHECKPOINT_MAGIC {
        return Err(Error::config("not a checkpoint file"));
    }
    let version = read_u32(&mut input)?;
    if version != CHECKPOINT_VERSION {
        return Err(Error::config(format!("unsupported checkpoint version {version}")));
    }
    let input_dim = read_u32(&mut input)? as usize;
    let output_dim = read_u32(&mut input)? as usize;
    let layer_count = read_u32(&mut input)? as usize;
    let mut layers = Vec::with_capacity(layer_count);
    for _ in 0..layer_count {
        let in_dim = read_u32(&mut input)? as usize;
        let out_dim = read_u32(&mut input)? as usize;
        let mut act = [0u8; 1];
        input.read_exact(&mut act)?;
        let activation = match act[0] {
            0 => Activation::Rectifier,
            1 => Activation::Identity,
            other => return Err(Error::config(format!("unknown activation tag {other}"))),
        };
        let mut weights = vec![0.0; in_dim * out_dim];
        for w in &mut weights {
            *w = read_f64(&mut input)?;
        }
        let mut bias = vec![0.0; out_dim];
        for b in &mut bias {
            *b = read_f64(&mut input)?;
        }
        layers.push(Layer { input_dim: in_dim, output_dim: out_dim, weights, bias, activation });
    }
    let mut len_bytes = [0u8; 8];
    input.read_exact(&mut len_bytes)?;
    let cfg_len = u64::from_le_bytes(len_bytes) as usize;
    let mut cfg_bytes = vec![0u8; cfg_len];
    input.read_exact(&mut cfg_bytes)?;
    let cfg_text = String::from_utf8(cfg_bytes).map_err(|e| Error::config(e.to_string()))?;
    let cfg: AgentConfig = toml::from_str(&cfg_text).map_err(|e| Error::config(e.to_string()))?;

    let net = QNetwork { layers, input_dim, output_dim };
    // Shape sanity: dims must chain.
    let mut prev = net.input_dim;
    for layer in &net.layers {
        if layer.input_dim != prev || layer.weights.len() != layer.input_dim * layer.output_dim {
            return Err(Error::config("checkpoint layer dimensions do not chain"));
        }
        prev = layer.output_dim;
    }
    if prev != net.output_dim {
        return Err(Error::config("checkpoint output dimension mismatch"));
    }
    Ok((net, cfg))
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(f64::from_le_bytes(buf))
}
