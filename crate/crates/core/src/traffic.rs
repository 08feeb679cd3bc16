//! Traffic generation for both scenarios.
//!
//! The radio scenario gets per-user packet renewal processes (VoLTE, video,
//! URLLC — each with its own inter-arrival and packet-size distribution and
//! SLA), merged into a time-sorted [`PacketTrace`]. The SFC scenario gets a
//! category-tagged [`FlowTrace`].
//!
//! Truncated distributions are re-parameterized so the mean of the *truncated*
//! law matches the configured mean: the Pareto scale and the lognormal
//! (mu, sigma) are solved numerically at sampler construction.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::io::Write;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Exp, LogNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{indexed_stream, SimRng};

// ---------------------------------------------------------------------------
// Domain enums
// ---------------------------------------------------------------------------

/// The three radio service slices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SliceKind {
    VoLte,
    Video,
    Urllc,
}

impl SliceKind {
    pub const ALL: [SliceKind; 3] = [SliceKind::VoLte, SliceKind::Video, SliceKind::Urllc];

    pub fn index(self) -> usize {
        match self {
            SliceKind::VoLte => 0,
            SliceKind::Video => 1,
            SliceKind::Urllc => 2,
        }
    }
}

impl fmt::Display for SliceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            SliceKind::VoLte => "volte",
            SliceKind::Video => "video",
            SliceKind::Urllc => "urllc",
        };
        f.write_str(name)
    }
}

/// Flow categories for the SFC scenario, in decreasing priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    A,
    B,
    C,
}

impl Category {
    pub const ALL: [Category; 3] = [Category::A, Category::B, Category::C];

    pub fn index(self) -> usize {
        match self {
            Category::A => 0,
            Category::B => 1,
            Category::C => 2,
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Category::A => "A",
            Category::B => "B",
            Category::C => "C",
        };
        f.write_str(name)
    }
}

// ---------------------------------------------------------------------------
// Distribution models
// ---------------------------------------------------------------------------

/// Inter-arrival time distribution of one traffic source. Seconds throughout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InterArrivalModel {
    Uniform { min: f64, max: f64 },
    TruncatedPareto { shape: f64, mean: f64, max: f64 },
    Exponential { mean: f64 },
    Lognormal { mu: f64, sigma: f64 },
}

impl InterArrivalModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            InterArrivalModel::Uniform { min, max } => {
                if min < 0.0 || max <= min {
                    return Err(Error::config(format!(
                        "uniform inter-arrival needs 0 <= min < max, got [{min}, {max}]"
                    )));
                }
            }
            InterArrivalModel::TruncatedPareto { shape, mean, max } => {
                validate_truncated_pareto(shape, mean, max)?;
            }
            InterArrivalModel::Exponential { mean } => {
                if mean <= 0.0 {
                    return Err(Error::config("exponential mean must be positive"));
                }
            }
            InterArrivalModel::Lognormal { mu, sigma } => {
                if !mu.is_finite() || sigma <= 0.0 {
                    return Err(Error::config("lognormal needs finite mu and sigma > 0"));
                }
            }
        }
        Ok(())
    }

    /// Mean of the distribution (post-truncation for truncated variants).
    pub fn mean(&self) -> f64 {
        match *self {
            InterArrivalModel::Uniform { min, max } => 0.5 * (min + max),
            InterArrivalModel::TruncatedPareto { mean, .. } => mean,
            InterArrivalModel::Exponential { mean } => mean,
            InterArrivalModel::Lognormal { mu, sigma } => (mu + 0.5 * sigma * sigma).exp(),
        }
    }
}

/// Packet size distribution of one traffic source. Bytes throughout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PacketSizeModel {
    Constant {
        bytes: f64,
    },
    TruncatedPareto {
        shape: f64,
        mean: f64,
        max: f64,
    },
    /// Mean/stddev are the targets for the *truncated* distribution; samples
    /// above `max` are rejected.
    TruncatedLognormal {
        mean: f64,
        stddev: f64,
        max: f64,
    },
}

impl PacketSizeModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PacketSizeModel::Constant { bytes } => {
                if bytes <= 0.0 {
                    return Err(Error::config("constant packet size must be positive"));
                }
            }
            PacketSizeModel::TruncatedPareto { shape, mean, max } => {
                validate_truncated_pareto(shape, mean, max)?;
            }
            PacketSizeModel::TruncatedLognormal { mean, stddev, max } => {
                if mean <= 0.0 || stddev <= 0.0 || max <= mean {
                    return Err(Error::config(
                        "truncated lognormal needs mean > 0, stddev > 0, max > mean",
                    ));
                }
            }
        }
        Ok(())
    }
}

fn validate_truncated_pareto(shape: f64, mean: f64, max: f64) -> Result<()> {
    if shape <= 1.0 {
        return Err(Error::config(format!(
            "pareto shape must exceed 1 for a finite mean, got {shape}"
        )));
    }
    if mean <= 0.0 || max <= mean {
        return Err(Error::config(format!(
            "truncated pareto needs 0 < mean < max, got mean {mean}, max {max}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Truncation re-parameterization
// ---------------------------------------------------------------------------

/// Mean of a Pareto(shape, scale) truncated to [scale, max].
fn truncated_pareto_mean(shape: f64, scale: f64, max: f64) -> f64 {
    let z = 1.0 - (scale / max).powf(shape);
    let integral =
        shape / (shape - 1.0) * scale.powf(shape) * (scale.powf(1.0 - shape) - max.powf(1.0 - shape));
    integral / z
}

/// Solves the Pareto scale so that the truncated mean equals `mean`.
///
/// The truncated mean is strictly increasing in the scale (from 0 toward
/// `max`), so bisection on (0, max) converges for any mean in that range.
pub fn solve_truncated_pareto_scale(shape: f64, mean: f64, max: f64) -> Result<f64> {
    validate_truncated_pareto(shape, mean, max)?;
    let mut lo = max * 1e-12;
    let mut hi = max * (1.0 - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if truncated_pareto_mean(shape, mid, max) < mean {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// Mean and stddev of LogNormal(mu, sigma) truncated to (0, max].
fn truncated_lognormal_moments(mu: f64, sigma: f64, max: f64) -> (f64, f64) {
    let beta = (max.ln() - mu) / sigma;
    let z = normal_cdf(beta);
    let m1 = (mu + 0.5 * sigma * sigma).exp() * normal_cdf(beta - sigma) / z;
    let m2 = (2.0 * mu + 2.0 * sigma * sigma).exp() * normal_cdf(beta - 2.0 * sigma) / z;
    let var = (m2 - m1 * m1).max(0.0);
    (m1, var.sqrt())
}

/// Solves the underlying normal (mu, sigma) so the truncated lognormal hits
/// the target mean and stddev. Inner bisection matches the mean for a given
/// sigma; the outer bisection matches the stddev.
pub fn solve_truncated_lognormal(mean: f64, stddev: f64, max: f64) -> Result<(f64, f64)> {
    if mean <= 0.0 || stddev <= 0.0 || max <= mean {
        return Err(Error::config(
            "truncated lognormal needs mean > 0, stddev > 0, max > mean",
        ));
    }

    let mu_for_sigma = |sigma: f64| -> f64 {
        let mut lo = mean.ln() - 30.0;
        let mut hi = max.ln() + 30.0 * sigma;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if truncated_lognormal_moments(mid, sigma, max).0 < mean {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };

    // The matched-mean truncated stddev grows with sigma from 0 but saturates:
    // a tight max can make the target unattainable.
    let std_at = |sigma: f64| truncated_lognormal_moments(mu_for_sigma(sigma), sigma, max).1;
    let mut lo = 1e-9;
    let mut hi = 0.5;
    while std_at(hi) < stddev {
        hi *= 2.0;
        if hi > 64.0 {
            return Err(Error::config(format!(
                "no lognormal reaches stddev {stddev} under truncation at {max}"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if std_at(mid) < stddev {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let sigma = 0.5 * (lo + hi);
    Ok((mu_for_sigma(sigma), sigma))
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

/// A resolved inter-arrival sampler. Construction validates the model and
/// performs any truncation re-parameterization once.
#[derive(Debug, Clone)]
pub struct InterArrivalSampler {
    inner: ArrivalInner,
}

#[derive(Debug, Clone)]
enum ArrivalInner {
    Uniform { min: f64, max: f64 },
    TruncPareto { shape: f64, scale: f64, max: f64 },
    Exponential(Exp<f64>),
    Lognormal(LogNormal<f64>),
}

impl InterArrivalSampler {
    pub fn new(model: &InterArrivalModel) -> Result<Self> {
        model.validate()?;
        let inner = match *model {
            InterArrivalModel::Uniform { min, max } => ArrivalInner::Uniform { min, max },
            InterArrivalModel::TruncatedPareto { shape, mean, max } => ArrivalInner::TruncPareto {
                shape,
                scale: solve_truncated_pareto_scale(shape, mean, max)?,
                max,
            },
            InterArrivalModel::Exponential { mean } => ArrivalInner::Exponential(
                Exp::new(1.0 / mean).map_err(|e| Error::config(e.to_string()))?,
            ),
            InterArrivalModel::Lognormal { mu, sigma } => ArrivalInner::Lognormal(
                LogNormal::new(mu, sigma).map_err(|e| Error::config(e.to_string()))?,
            ),
        };
        Ok(Self { inner })
    }

    pub fn sample(&self, rng: &mut SimRng) -> f64 {
        match &self.inner {
            ArrivalInner::Uniform { min, max } => rng.random_range(*min..*max),
            ArrivalInner::TruncPareto { shape, scale, max } => {
                sample_truncated_pareto(*shape, *scale, *max, rng)
            }
            ArrivalInner::Exponential(exp) => exp.sample(rng),
            ArrivalInner::Lognormal(ln) => ln.sample(rng),
        }
    }
}

/// A resolved packet-size sampler.
#[derive(Debug, Clone)]
pub struct PacketSizeSampler {
    inner: SizeInner,
}

#[derive(Debug, Clone)]
enum SizeInner {
    Constant(f64),
    TruncPareto { shape: f64, scale: f64, max: f64 },
    TruncLognormal { dist: LogNormal<f64>, max: f64 },
}

impl PacketSizeSampler {
    pub fn new(model: &PacketSizeModel) -> Result<Self> {
        model.validate()?;
        let inner = match *model {
            PacketSizeModel::Constant { bytes } => SizeInner::Constant(bytes),
            PacketSizeModel::TruncatedPareto { shape, mean, max } => SizeInner::TruncPareto {
                shape,
                scale: solve_truncated_pareto_scale(shape, mean, max)?,
                max,
            },
            PacketSizeModel::TruncatedLognormal { mean, stddev, max } => {
                let (mu, sigma) = solve_truncated_lognormal(mean, stddev, max)?;
                SizeInner::TruncLognormal {
                    dist: LogNormal::new(mu, sigma).map_err(|e| Error::config(e.to_string()))?,
                    max,
                }
            }
        };
        Ok(Self { inner })
    }

    pub fn sample(&self, rng: &mut SimRng) -> f64 {
        match &self.inner {
            SizeInner::Constant(bytes) => *bytes,
            SizeInner::TruncPareto { shape, scale, max } => {
                sample_truncated_pareto(*shape, *scale, *max, rng)
            }
            SizeInner::TruncLognormal { dist, max } => loop {
                let x = dist.sample(rng);
                if x <= *max {
                    break x;
                }
            },
        }
    }
}

/// Inverse-CDF draw from a Pareto(shape, scale) conditioned on x <= max.
fn sample_truncated_pareto(shape: f64, scale: f64, max: f64, rng: &mut SimRng) -> f64 {
    let z = 1.0 - (scale / max).powf(shape);
    let u: f64 = rng.random_range(0.0..1.0);
    scale * (1.0 - u * z).powf(-1.0 / shape)
}

/// One draw from an inter-arrival model. For bulk sampling build an
/// [`InterArrivalSampler`] once instead.
pub fn sample_inter_arrival(model: &InterArrivalModel, rng: &mut SimRng) -> Result<f64> {
    Ok(InterArrivalSampler::new(model)?.sample(rng))
}

/// One draw from a packet-size model. For bulk sampling build a
/// [`PacketSizeSampler`] once instead.
pub fn sample_packet_size(model: &PacketSizeModel, rng: &mut SimRng) -> Result<f64> {
    Ok(PacketSizeSampler::new(model)?.sample(rng))
}

// ---------------------------------------------------------------------------
// Slice configuration
// ---------------------------------------------------------------------------

/// Per-slice rate/latency targets a delivered packet must meet to count as
/// satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlaSpec {
    /// Minimum effective rate (packet bits / sojourn time), bits per second.
    pub min_rate_bps: f64,
    /// Maximum sojourn time from arrival to full delivery, seconds.
    pub max_latency_s: f64,
}

impl SlaSpec {
    pub fn validate(&self) -> Result<()> {
        if self.min_rate_bps <= 0.0 || self.max_latency_s <= 0.0 {
            return Err(Error::config("SLA rate and latency must be positive"));
        }
        Ok(())
    }
}

/// Traffic model and SLA of one radio slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceConfig {
    pub kind: SliceKind,
    pub user_count: usize,
    pub inter_arrival: InterArrivalModel,
    pub packet_size: PacketSizeModel,
    pub sla: SlaSpec,
}

impl SliceConfig {
    pub fn validate(&self) -> Result<()> {
        if self.user_count == 0 {
            return Err(Error::config(format!("{} slice has zero users", self.kind)));
        }
        self.inter_arrival.validate()?;
        self.packet_size.validate()?;
        self.sla.validate()
    }

    /// VoLTE: 40-byte packets on uniform [0, 160 ms] gaps, 51 kbps / 10 ms SLA.
    pub fn volte(user_count: usize) -> Self {
        SliceConfig {
            kind: SliceKind::VoLte,
            user_count,
            inter_arrival: InterArrivalModel::Uniform { min: 0.0, max: 0.160 },
            packet_size: PacketSizeModel::Constant { bytes: 40.0 },
            sla: SlaSpec { min_rate_bps: 51e3, max_latency_s: 0.010 },
        }
    }

    /// Video streaming: truncated-Pareto gaps (mean 6 ms, max 12.5 ms) and
    /// truncated-Pareto sizes (mean 100 B, max 250 B), 5 Mbps / 10 ms SLA.
    pub fn video(user_count: usize) -> Self {
        SliceConfig {
            kind: SliceKind::Video,
            user_count,
            inter_arrival: InterArrivalModel::TruncatedPareto {
                shape: 1.2,
                mean: 0.006,
                max: 0.0125,
            },
            packet_size: PacketSizeModel::TruncatedPareto { shape: 1.2, mean: 100.0, max: 250.0 },
            sla: SlaSpec { min_rate_bps: 5e6, max_latency_s: 0.010 },
        }
    }

    /// URLLC with FTP-style payloads: exponential gaps (mean 180 ms) and
    /// truncated-lognormal sizes (mean 2 MB, stddev 0.722 MB, max 5 MB),
    /// 10 Mbps / 5 ms SLA.
    pub fn urllc(user_count: usize) -> Self {
        SliceConfig {
            kind: SliceKind::Urllc,
            user_count,
            inter_arrival: InterArrivalModel::Exponential { mean: 0.180 },
            packet_size: PacketSizeModel::TruncatedLognormal {
                mean: 2e6,
                stddev: 0.722e6,
                max: 5e6,
            },
            sla: SlaSpec { min_rate_bps: 10e6, max_latency_s: 0.005 },
        }
    }

    /// The reference three-slice mix: 46/46/8 users over 100.
    pub fn default_slices() -> [SliceConfig; 3] {
        [Self::volte(46), Self::video(46), Self::urllc(8)]
    }
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

/// One packet arrival.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketEvent {
    pub time_s: f64,
    pub user_id: usize,
    pub slice: SliceKind,
    pub size_bytes: f64,
}

impl PacketEvent {
    pub fn fold_checksum(&self, hasher: &mut crate::rng::Fnv) {
        hasher.write(&self.time_s.to_le_bytes());
        hasher.write(&(self.user_id as u64).to_le_bytes());
        hasher.write(&[self.slice.index() as u8]);
        hasher.write(&self.size_bytes.to_le_bytes());
    }
}

/// Time-sorted packet arrivals for the radio scenario.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PacketTrace {
    pub events: Vec<PacketEvent>,
}

impl PacketTrace {
    pub fn checksum(&self) -> u64 {
        let mut hasher = crate::rng::Fnv::new();
        for e in &self.events {
            e.fold_checksum(&mut hasher);
        }
        hasher.finish()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "arrival_time_s,user_id,slice,size_bytes")?;
        for e in &self.events {
            writeln!(out, "{:.9},{},{},{:.3}", e.time_s, e.user_id, e.slice, e.size_bytes)?;
        }
        Ok(())
    }
}

/// One SFC flow arrival.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowEvent {
    pub time_s: f64,
    pub category: Category,
}

/// Time-sorted flow arrivals for the SFC scenario.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlowTrace {
    pub events: Vec<FlowEvent>,
}

impl FlowTrace {
    pub fn checksum(&self) -> u64 {
        let mut hasher = crate::rng::Fnv::new();
        for e in &self.events {
            hasher.write(&e.time_s.to_le_bytes());
            hasher.write(&[e.category.index() as u8]);
        }
        hasher.finish()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "arrival_time_s,category")?;
        for e in &self.events {
            writeln!(out, "{:.9},{}", e.time_s, e.category)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Streaming generation
// ---------------------------------------------------------------------------

struct UserSource {
    user_id: usize,
    slice: SliceKind,
    arrivals: InterArrivalSampler,
    sizes: PacketSizeSampler,
    rng: SimRng,
    next_time: f64,
}

struct HeapEntry {
    time: f64,
    user_idx: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.time == other.time && self.user_idx == other.user_idx
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we want earliest first.
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.user_idx.cmp(&self.user_idx))
    }
}

/// Streaming merge of all users' renewal processes in arrival order.
///
/// Each user owns an independent random stream derived from the trace seed
/// and its user id, so the merged output is identical whether the trace is
/// streamed epoch by epoch or materialized in one go.
pub struct TraceStream {
    sources: Vec<UserSource>,
    heap: BinaryHeap<HeapEntry>,
}

impl TraceStream {
    pub fn new(slices: &[SliceConfig], seed: u64) -> Result<Self> {
        let mut sources = Vec::new();
        let mut user_id = 0usize;
        for slice in slices {
            slice.validate()?;
            let arrivals = InterArrivalSampler::new(&slice.inter_arrival)?;
            let sizes = PacketSizeSampler::new(&slice.packet_size)?;
            for _ in 0..slice.user_count {
                let mut rng = indexed_stream(seed, "traffic-user", user_id as u64);
                let first = arrivals.sample(&mut rng);
                sources.push(UserSource {
                    user_id,
                    slice: slice.kind,
                    arrivals: arrivals.clone(),
                    sizes: sizes.clone(),
                    rng,
                    next_time: first,
                });
                user_id += 1;
            }
        }
        let heap = sources
            .iter()
            .enumerate()
            .map(|(idx, s)| HeapEntry { time: s.next_time, user_idx: idx })
            .collect();
        Ok(Self { sources, heap })
    }

    /// Next arrivals strictly before `until`, in time order.
    pub fn take_until(&mut self, until: f64) -> Vec<PacketEvent> {
        let mut events = Vec::new();
        while let Some(top) = self.heap.peek() {
            if top.time >= until {
                break;
            }
            let entry = self.heap.pop().unwrap();
            let src = &mut self.sources[entry.user_idx];
            let size = src.sizes.sample(&mut src.rng);
            events.push(PacketEvent {
                time_s: entry.time,
                user_id: src.user_id,
                slice: src.slice,
                size_bytes: size,
            });
            let gap = src.arrivals.sample(&mut src.rng);
            src.next_time = entry.time + gap;
            self.heap.push(HeapEntry { time: src.next_time, user_idx: entry.user_idx });
        }
        events
    }
}

/// Materializes the merged per-user renewal processes over `[0, horizon)`.
pub fn generate_packet_trace(slices: &[SliceConfig], horizon_s: f64, seed: u64) -> Result<PacketTrace> {
    if horizon_s <= 0.0 {
        return Err(Error::config("horizon must be positive"));
    }
    let mut stream = TraceStream::new(slices, seed)?;
    Ok(PacketTrace { events: stream.take_until(horizon_s) })
}

/// Generates exactly `count` category-tagged flows, streams merged by time.
pub fn generate_flow_trace(
    models: &[InterArrivalModel; 3],
    count: usize,
    seed: u64,
) -> Result<FlowTrace> {
    if count == 0 {
        return Err(Error::config("flow count must be positive"));
    }
    let mut samplers = Vec::new();
    let mut rngs = Vec::new();
    let mut next_times = Vec::new();
    for (i, model) in models.iter().enumerate() {
        let sampler = InterArrivalSampler::new(model)?;
        let mut rng = indexed_stream(seed, "flow-category", i as u64);
        next_times.push(sampler.sample(&mut rng));
        samplers.push(sampler);
        rngs.push(rng);
    }
    let mut events = Vec::with_capacity(count);
    while events.len() < count {
        let mut best = 0;
        for i in 1..3 {
            if next_times[i] < next_times[best] {
                best = i;
            }
        }
        events.push(FlowEvent { time_s: next_times[best], category: Category::ALL[best] });
        next_times[best] += samplers[best].sample(&mut rngs[best]);
    }
    Ok(FlowTrace { events })
}

/// Default SFC flow inter-arrival models: lognormal with mu = ln(20 ms),
/// sigma = 0.5 for every category.
pub fn default_flow_models() -> [InterArrivalModel; 3] {
    let model = InterArrivalModel::Lognormal { mu: 0.02f64.ln(), sigma: 0.5 };
    [model.clone(), model.clone(), model]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::*;

    fn mc_mean(sampler: &InterArrivalSampler, n: usize, rng: &mut SimRng) -> f64 {
        (0..n).map(|_| sampler.sample(rng)).sum::<f64>() / n as f64
    }

    #[test]
    fn uniform_mean_and_bounds() {
        let model = InterArrivalModel::Uniform { min: 0.0, max: 0.160 };
        let sampler = InterArrivalSampler::new(&model).unwrap();
        let mut rng = stream(1, "uniform-test");
        let n = 200_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let x = sampler.sample(&mut rng);
            assert!((0.0..0.160).contains(&x));
            sum += x;
        }
        let mean = sum / n as f64;
        assert!((mean - 0.080).abs() < 0.001, "mean {mean}");
    }

    #[test]
    fn exponential_mean() {
        let model = InterArrivalModel::Exponential { mean: 0.180 };
        let sampler = InterArrivalSampler::new(&model).unwrap();
        let mut rng = stream(2, "exp-test");
        let mean = mc_mean(&sampler, 300_000, &mut rng);
        assert!((mean - 0.180).abs() < 0.002, "mean {mean}");
    }

    #[test]
    fn truncated_pareto_mean_and_bound() {
        let model = InterArrivalModel::TruncatedPareto { shape: 1.2, mean: 0.006, max: 0.0125 };
        let sampler = InterArrivalSampler::new(&model).unwrap();
        let mut rng = stream(3, "pareto-test");
        let n = 300_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let x = sampler.sample(&mut rng);
            assert!(x <= 0.0125, "draw above max: {x}");
            sum += x;
        }
        let mean = sum / n as f64;
        assert!((mean - 0.006).abs() < 0.006 * 0.02, "mean {mean}");
    }

    #[test]
    fn truncated_lognormal_mean_stddev_and_bound() {
        let model = PacketSizeModel::TruncatedLognormal { mean: 2e6, stddev: 0.722e6, max: 5e6 };
        let sampler = PacketSizeSampler::new(&model).unwrap();
        let mut rng = stream(4, "lognormal-test");
        let n = 300_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let x = sampler.sample(&mut rng);
            assert!(x <= 5e6, "draw above max: {x}");
            sum += x;
            sum_sq += x * x;
        }
        let mean = sum / n as f64;
        let std = (sum_sq / n as f64 - mean * mean).sqrt();
        assert!((mean - 2e6).abs() < 2e6 * 0.02, "mean {mean}");
        assert!((std - 0.722e6).abs() < 0.722e6 * 0.05, "stddev {std}");
    }

    #[test]
    fn constant_size_is_exact() {
        let model = PacketSizeModel::Constant { bytes: 40.0 };
        let sampler = PacketSizeSampler::new(&model).unwrap();
        let mut rng = stream(5, "const-test");
        for _ in 0..100 {
            assert_eq!(sampler.sample(&mut rng), 40.0);
        }
    }

    #[test]
    fn video_size_pareto_mean() {
        let model = PacketSizeModel::TruncatedPareto { shape: 1.2, mean: 100.0, max: 250.0 };
        let sampler = PacketSizeSampler::new(&model).unwrap();
        let mut rng = stream(6, "video-size");
        let n = 300_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let x = sampler.sample(&mut rng);
            assert!(x <= 250.0);
            sum += x;
        }
        let mean = sum / n as f64;
        assert!((mean - 100.0).abs() < 2.0, "mean {mean}");
    }

    #[test]
    fn pareto_solver_matches_closed_form_mean() {
        // Independent check of the solver: numerically integrate the
        // truncated density at the solved scale.
        let shape = 1.2;
        let target = 0.006;
        let max = 0.0125;
        let scale = solve_truncated_pareto_scale(shape, target, max).unwrap();
        assert!(scale > 0.0 && scale < max);
        let steps = 200_000;
        let z = 1.0 - (scale / max).powf(shape);
        let dx = (max - scale) / steps as f64;
        let mut integral = 0.0;
        for i in 0..steps {
            let x = scale + (i as f64 + 0.5) * dx;
            let pdf = shape * scale.powf(shape) / x.powf(shape + 1.0) / z;
            integral += x * pdf * dx;
        }
        assert!((integral - target).abs() < target * 1e-3, "integral {integral}");
    }

    #[test]
    fn invalid_models_are_rejected() {
        assert!(InterArrivalModel::Uniform { min: 0.2, max: 0.1 }.validate().is_err());
        assert!(InterArrivalModel::TruncatedPareto { shape: 0.9, mean: 1.0, max: 2.0 }
            .validate()
            .is_err());
        assert!(InterArrivalModel::Exponential { mean: 0.0 }.validate().is_err());
        assert!(PacketSizeModel::TruncatedLognormal { mean: 5.0, stddev: 1.0, max: 4.0 }
            .validate()
            .is_err());
    }

    #[test]
    fn single_volte_user_arrival_count() {
        // Renewal theory: E[N] over 1.6 s at a mean gap of 80 ms is about 20.
        let slices = [SliceConfig::volte(1)];
        let mut total = 0usize;
        let reps = 200;
        for seed in 0..reps {
            let trace = generate_packet_trace(&slices, 1.6, seed).unwrap();
            total += trace.events.len();
        }
        let mean = total as f64 / reps as f64;
        assert!((mean - 20.0).abs() < 1.0, "mean arrivals {mean}");
    }

    #[test]
    fn zero_users_gives_empty_trace() {
        let trace = generate_packet_trace(&[], 10.0, 1).unwrap();
        assert!(trace.events.is_empty());
    }

    #[test]
    fn same_seed_same_trace() {
        let slices = SliceConfig::default_slices();
        let a = generate_packet_trace(&slices, 0.5, 42).unwrap();
        let b = generate_packet_trace(&slices, 0.5, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.checksum(), b.checksum());
    }

    #[test]
    fn streamed_equals_materialized() {
        let slices = [SliceConfig::volte(3), SliceConfig::video(2)];
        let whole = generate_packet_trace(&slices, 1.0, 9).unwrap();
        let mut stream = TraceStream::new(&slices, 9).unwrap();
        let mut chunked = Vec::new();
        for k in 1..=10 {
            chunked.extend(stream.take_until(k as f64 * 0.1));
        }
        assert_eq!(whole.events, chunked);
    }

    #[test]
    fn merged_count_equals_per_user_sum() {
        let slices = [SliceConfig::volte(4), SliceConfig::urllc(2)];
        let trace = generate_packet_trace(&slices, 2.0, 5).unwrap();
        let mut per_user = vec![0usize; 6];
        for e in &trace.events {
            per_user[e.user_id] += 1;
        }
        assert_eq!(trace.events.len(), per_user.iter().sum::<usize>());
        assert!(per_user.iter().all(|&n| n > 0));
    }

    #[test]
    fn flow_trace_has_exact_count_and_order() {
        let models = default_flow_models();
        let trace = generate_flow_trace(&models, 10_000, 3).unwrap();
        assert_eq!(trace.events.len(), 10_000);
        for pair in trace.events.windows(2) {
            assert!(pair[0].time_s <= pair[1].time_s);
        }
    }

    #[test]
    fn single_flow_trace() {
        let models = default_flow_models();
        let trace = generate_flow_trace(&models, 1, 3).unwrap();
        assert_eq!(trace.events.len(), 1);
        assert!(trace.events[0].time_s > 0.0);
    }

    #[test]
    fn equal_rates_give_balanced_categories() {
        let models = default_flow_models();
        let trace = generate_flow_trace(&models, 30_000, 11).unwrap();
        let mut counts = [0usize; 3];
        for e in &trace.events {
            counts[e.category.index()] += 1;
        }
        // Binomial oracle: n = 30000, p = 1/3, 3 sigma = 245.
        for &c in &counts {
            assert!((c as f64 - 10_000.0).abs() < 3.0 * (30_000.0f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt());
        }
    }

    #[test]
    fn csv_round_trip_shape() {
        let dir = tempfile::tempdir().unwrap();
        let slices = [SliceConfig::volte(1)];
        let trace = generate_packet_trace(&slices, 0.5, 1).unwrap();
        let path = dir.path().join("trace.csv");
        trace.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "arrival_time_s,user_id,slice,size_bytes");
        assert_eq!(lines.count(), trace.events.len());
    }

    proptest! {
        #[test]
        fn truncated_draws_never_exceed_max(seed in 0u64..1000, mean_frac in 0.05f64..0.9) {
            let max = 0.0125;
            let model = InterArrivalModel::TruncatedPareto {
                shape: 1.2,
                mean: mean_frac * max,
                max,
            };
            let sampler = InterArrivalSampler::new(&model).unwrap();
            let mut rng = stream(seed, "prop-pareto");
            for _ in 0..200 {
                let x = sampler.sample(&mut rng);
                prop_assert!(x <= max && x > 0.0);
            }
        }

        #[test]
        fn traces_are_sorted(seed in 0u64..50) {
            let slices = [SliceConfig::volte(2), SliceConfig::video(2)];
            let trace = generate_packet_trace(&slices, 0.3, seed).unwrap();
            for pair in trace.events.windows(2) {
                prop_assert!(pair[0].time_s <= pair[1].time_s);
            }
        }
    }
}
