//! Downlink link model: per-slot Rayleigh block fading, log-distance path
//! loss, an array-gain multiplier for the antenna count, and Shannon-capacity
//! rates.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SimRng;

/// Base-station link parameters shared by all users.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LinkConfig {
    /// Transmit antenna count; enters the rate as an array gain on SNR.
    pub antenna_count: u32,
    /// Mean SNR in dB experienced at `reference_distance_m`.
    pub reference_snr_db: f64,
    pub reference_distance_m: f64,
    pub path_loss_exponent: f64,
    /// Scheduling slot length, seconds.
    pub slot_duration_s: f64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        LinkConfig {
            antenna_count: 32,
            reference_snr_db: 20.0,
            reference_distance_m: 40.0,
            path_loss_exponent: 3.5,
            slot_duration_s: 0.0005,
        }
    }
}

impl LinkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.antenna_count == 0 {
            return Err(Error::config("antenna count must be positive"));
        }
        if self.slot_duration_s <= 0.0 {
            return Err(Error::config("slot duration must be positive"));
        }
        if self.path_loss_exponent < 2.0 {
            return Err(Error::config("path loss exponent must be at least 2"));
        }
        if self.reference_distance_m <= 0.0 {
            return Err(Error::config("reference distance must be positive"));
        }
        Ok(())
    }

    pub fn reference_snr_linear(&self) -> f64 {
        10f64.powf(self.reference_snr_db / 10.0)
    }

    /// Mean SNR after log-distance path loss relative to the reference point.
    pub fn mean_snr_at(&self, distance_m: f64) -> f64 {
        let d = distance_m.max(1.0);
        self.reference_snr_linear() * (d / self.reference_distance_m).powf(-self.path_loss_exponent)
    }
}

/// One user's link state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserLink {
    pub user_id: usize,
    pub distance_m: f64,
    /// Linear mean SNR (path loss already applied).
    pub mean_snr: f64,
}

/// Places users uniformly over a disc of the given radius around the BS.
pub fn place_users(count: usize, radius_m: f64, cfg: &LinkConfig, rng: &mut SimRng) -> Vec<UserLink> {
    (0..count)
        .map(|user_id| {
            let u: f64 = rng.random_range(0.0..1.0);
            let distance_m = radius_m * u.sqrt();
            // Angle is irrelevant to the link budget but drawn anyway to keep
            // the stream layout stable if geometry is ever extended.
            let _theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            UserLink { user_id, distance_m, mean_snr: cfg.mean_snr_at(distance_m) }
        })
        .collect()
}

/// Unit-mean exponential power gain: the squared magnitude of a Rayleigh
/// amplitude, drawn independently per slot (block fading).
pub fn fading_gain(rng: &mut SimRng) -> f64 {
    let u: f64 = rng.random_range(0.0..1.0);
    -(1.0 - u).ln()
}

/// Shannon rate in bits/second over `bandwidth_hz`, with the antenna array
/// gain multiplying the faded SNR inside the log.
pub fn achievable_rate(
    bandwidth_hz: f64,
    link: &UserLink,
    fading: f64,
    cfg: &LinkConfig,
) -> Result<f64> {
    if bandwidth_hz < 0.0 {
        return Err(Error::contract(format!("negative bandwidth {bandwidth_hz}")));
    }
    if bandwidth_hz == 0.0 {
        return Ok(0.0);
    }
    let snr = f64::from(cfg.antenna_count) * fading * link.mean_snr;
    Ok(bandwidth_hz * (1.0 + snr).log2())
}
