//! Comparison schemes: demand-prediction bandwidth allocation (unweighted and
//! rate-weighted), hard slicing, and the minimum-waiting-time SFC assigner.
//! "No slicing" is the radio environment's pooled scheduling mode rather than
//! an allocation rule.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radio::BandwidthAllocation;
use crate::sfc::{SfcEnv, SfcId};
use crate::traffic::Category;

// ---------------------------------------------------------------------------
// Demand prediction
// ---------------------------------------------------------------------------

/// Pluggable per-slice demand predictor fed with the latest arrival counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum DemandPredictor {
    ExponentialSmoothing {
        factor: f64,
        #[serde(skip)]
        state: Option<Vec<f64>>,
    },
    SlidingWindow {
        width: usize,
        #[serde(skip)]
        history: std::collections::VecDeque<Vec<f64>>,
    },
}

impl DemandPredictor {
    pub fn exponential(factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor <= 1.0) {
            return Err(Error::config("smoothing factor must lie in (0, 1]"));
        }
        Ok(DemandPredictor::ExponentialSmoothing { factor, state: None })
    }

    pub fn sliding(width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::config("window width must be positive"));
        }
        Ok(DemandPredictor::SlidingWindow { width, history: std::collections::VecDeque::new() })
    }

    /// Updates with the latest counts and returns the new prediction. Cold
    /// start returns the latest counts unchanged.
    pub fn predict(&mut self, latest: &[f64]) -> Vec<f64> {
        match self {
            DemandPredictor::ExponentialSmoothing { factor, state } => {
                let next = match state {
                    None => latest.to_vec(),
                    Some(prev) => prev
                        .iter()
                        .zip(latest)
                        .map(|(p, l)| *factor * l + (1.0 - *factor) * p)
                        .collect(),
                };
                *state = Some(next.clone());
                next
            }
            DemandPredictor::SlidingWindow { width, history } => {
                history.push_back(latest.to_vec());
                while history.len() > *width {
                    history.pop_front();
                }
                let n = history.len() as f64;
                let dims = latest.len();
                (0..dims)
                    .map(|i| history.iter().map(|v| v[i]).sum::<f64>() / n)
                    .collect()
            }
        }
    }
}

/// Least required rate per slice, bits/second.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RequiredRates(pub Vec<f64>);

impl Default for RequiredRates {
    fn default() -> Self {
        RequiredRates(vec![51e3, 5e6, 10e6])
    }
}

// ---------------------------------------------------------------------------
// Allocation rules
// ---------------------------------------------------------------------------

/// Ideal (pre-rounding) shares proportional to predicted packet counts.
/// All-zero predictions fall back to an equal split.
pub fn dp_no_shares(predicted: &[f64], total_hz: f64) -> Vec<f64> {
    let sum: f64 = predicted.iter().sum();
    if sum <= 0.0 {
        return vec![total_hz / predicted.len() as f64; predicted.len()];
    }
    predicted.iter().map(|&n| total_hz * n / sum).collect()
}

/// Ideal shares proportional to predicted counts weighted by each slice's
/// least required rate.
pub fn dp_bw_shares(predicted: &[f64], rates: &RequiredRates, total_hz: f64) -> Vec<f64> {
    let weighted: Vec<f64> = predicted.iter().zip(&rates.0).map(|(&n, &r)| n * r).collect();
    dp_no_shares(&weighted, total_hz)
}

/// Largest-remainder rounding of ideal shares onto the granularity grid; the
/// rounded entries sum to `total_hz` exactly.
pub fn round_to_grid(shares: &[f64], total_hz: f64, granularity_hz: f64) -> Result<BandwidthAllocation> {
    let units = (total_hz / granularity_hz).round() as i64;
    if units <= 0 || (units as f64 * granularity_hz - total_hz).abs() > 1e-6 * total_hz.max(1.0) {
        return Err(Error::config(format!(
            "granularity {granularity_hz} Hz does not divide total bandwidth {total_hz} Hz"
        )));
    }
    let ideal_units: Vec<f64> = shares.iter().map(|s| s / granularity_hz).collect();
    let mut floors: Vec<i64> = ideal_units.iter().map(|u| u.floor() as i64).collect();
    let assigned: i64 = floors.iter().sum();
    let mut residue = units - assigned;
    // Largest fractional remainder first; ties break to the lowest index.
    let mut order: Vec<usize> = (0..shares.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = ideal_units[a] - ideal_units[a].floor();
        let fb = ideal_units[b] - ideal_units[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    let mut idx = 0;
    while residue > 0 {
        floors[order[idx % order.len()]] += 1;
        residue -= 1;
        idx += 1;
    }
    Ok(BandwidthAllocation(floors.iter().map(|&u| u as f64 * granularity_hz).collect()))
}

pub fn dp_no_allocation(
    predicted: &[f64],
    total_hz: f64,
    granularity_hz: f64,
) -> Result<BandwidthAllocation> {
    round_to_grid(&dp_no_shares(predicted, total_hz), total_hz, granularity_hz)
}

pub fn dp_bw_allocation(
    predicted: &[f64],
    rates: &RequiredRates,
    total_hz: f64,
    granularity_hz: f64,
) -> Result<BandwidthAllocation> {
    round_to_grid(&dp_bw_shares(predicted, rates, total_hz), total_hz, granularity_hz)
}

/// Static equal split; the rounding residue goes to the lowest-index slices
/// one granule each.
pub fn hard_slicing(
    total_hz: f64,
    slice_count: usize,
    granularity_hz: f64,
) -> Result<BandwidthAllocation> {
    if slice_count == 0 {
        return Err(Error::config("need at least one slice"));
    }
    let units = (total_hz / granularity_hz).round() as u64;
    if (units as f64 * granularity_hz - total_hz).abs() > 1e-6 * total_hz.max(1.0) {
        return Err(Error::config(format!(
            "granularity {granularity_hz} Hz does not divide total bandwidth {total_hz} Hz"
        )));
    }
    let base = units / slice_count as u64;
    let residue = units % slice_count as u64;
    let alloc = (0..slice_count)
        .map(|k| {
            let extra = if (k as u64) < residue { 1 } else { 0 };
            (base + extra) as f64 * granularity_hz
        })
        .collect();
    Ok(BandwidthAllocation(alloc))
}

// ---------------------------------------------------------------------------
// SFC assignment baseline
// ---------------------------------------------------------------------------

/// Sends the flow to the chain with minimum projected waiting time (remaining
/// service + queued work ahead of it + its own processing latency); ties go
/// to the cheaper-CPU chain.
pub fn no_priority_assign(env: &SfcEnv, category: Category) -> SfcId {
    let costs = env.costs();
    let mut best = SfcId::I;
    let mut best_wait = f64::INFINITY;
    let mut best_cost = f64::INFINITY;
    for sfc in SfcId::ALL {
        let wait = env.projected_wait(sfc, category);
        let cost = costs[sfc.index()];
        let better = wait + 1e-12 < best_wait
            || ((wait - best_wait).abs() <= 1e-12 && cost < best_cost);
        if better {
            best = sfc;
            best_wait = wait;
            best_cost = cost;
        }
    }
    best
}
