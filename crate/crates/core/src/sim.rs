//! Deterministic, seeded beacon-arrival simulator.
//!
//! Beacons are scheduled on the mode's nominal cadence, perturbed by
//! bounded uniform timing jitter, then thinned by an independent
//! (Bernoulli) loss and/or a two-state bursty loss process. Every run also
//! produces its ground truth (scheduled/delivered/dropped), which is what
//! makes the simulator usable as an oracle for the metrics suite.
//!
//! Determinism: one pseudo-random stream per (AP, session) is split from
//! the master seed, so identical `(config, seed, session_index)` give a
//! byte-identical timeline and pcap, and adding an AP never perturbs the
//! draws of the others.

pub mod presets;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::{
    encode_beacon, mhz_from_channel, BeaconBody, BeaconFrame, EncodeError, FrameType, MacAddr,
    MacHeader, RadiotapInfo, RssMeasurement, BEACON_SUBTYPE, MAX_SSID_LEN,
};
use crate::metrics::CaptureMode;
use crate::pcap::{self, CaptureMeta, PcapError, PcapRecord};

pub use presets::{preset_names, scenario_preset, DEFAULT_SEED};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid scenario config: {0}")]
    InvalidConfig(String),
    #[error("unknown preset `{0}` (see preset_names())")]
    UnknownPreset(String),
    #[error("target rate {target} pps exceeds the {mode} maximum {max} pps")]
    TargetExceedsMaximum {
        target: f64,
        max: f64,
        mode: CaptureMode,
    },
    #[error(transparent)]
    Codec(#[from] EncodeError),
    #[error(transparent)]
    Pcap(#[from] PcapError),
}

/// Two-state bursty loss: a Markov chain flips between a good state that
/// delivers everything and a bad state that drops with `loss_in_bad`.
/// Transitions happen at scheduled beacon times.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BurstParams {
    pub p_good_to_bad: f64,
    pub p_bad_to_good: f64,
    pub loss_in_bad: f64,
}

impl BurstParams {
    /// Long-run loss fraction: time share of the bad state times its loss,
    /// `p_gb / (p_gb + p_bg) · loss_in_bad`.
    pub fn stationary_loss(&self) -> f64 {
        let denom = self.p_good_to_bad + self.p_bad_to_good;
        if denom == 0.0 {
            0.0
        } else {
            self.p_good_to_bad / denom * self.loss_in_bad
        }
    }
}

/// Per-packet loss: independent Bernoulli, optionally combined with the
/// bursty two-state process. The two act independently.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LossModel {
    pub bernoulli_p: f64,
    #[serde(default)]
    pub burst: Option<BurstParams>,
}

impl LossModel {
    pub const LOSSLESS: LossModel = LossModel {
        bernoulli_p: 0.0,
        burst: None,
    };

    /// Combined long-run loss of both processes.
    pub fn total_loss(&self) -> f64 {
        let burst = self.burst.map_or(0.0, |b| b.stationary_loss());
        1.0 - (1.0 - self.bernoulli_p) * (1.0 - burst)
    }
}

/// One simulated access point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApConfig {
    pub bssid: MacAddr,
    pub ssid: String,
    /// 2.4 GHz channel 1–11.
    pub channel: u8,
    pub rssi_mean_dbm: i8,
    /// Uniform ± jitter applied to each sample's RSSI, in dB.
    pub rssi_jitter_db: u8,
    pub loss: LossModel,
}

/// Full scenario description; everything a run needs is in here, so a
/// config plus a session index reproduces a session exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub mode: CaptureMode,
    pub duration_s: f64,
    pub n_sessions: u32,
    pub aps: Vec<ApConfig>,
    /// Uniform ± bound on each beacon's departure from its nominal slot, µs.
    pub timing_jitter_us: u64,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let fail = |msg: String| Err(SimError::InvalidConfig(msg));
        if !self.duration_s.is_finite() || self.duration_s <= 0.0 {
            return fail("duration_s must be positive".into());
        }
        if self.n_sessions == 0 {
            return fail("n_sessions must be at least 1".into());
        }
        if self.aps.is_empty() {
            return fail("at least one AP is required".into());
        }
        let nominal = self.mode.nominal_interval_us();
        if 2 * self.timing_jitter_us >= nominal {
            return fail(format!(
                "timing jitter ±{} µs would reorder a {} µs cadence",
                self.timing_jitter_us, nominal
            ));
        }
        for (i, ap) in self.aps.iter().enumerate() {
            if !(1..=11).contains(&ap.channel) {
                return fail(format!("ap[{i}]: channel {} outside 1–11", ap.channel));
            }
            if !(-120..=0).contains(&ap.rssi_mean_dbm) {
                return fail(format!("ap[{i}]: rssi_mean_dbm outside [-120, 0]"));
            }
            if ap.ssid.len() > MAX_SSID_LEN {
                return fail(format!("ap[{i}]: ssid exceeds {MAX_SSID_LEN} bytes"));
            }
            let probs = [
                ("bernoulli_p", ap.loss.bernoulli_p),
                ("p_good_to_bad", ap.loss.burst.map_or(0.0, |b| b.p_good_to_bad)),
                ("p_bad_to_good", ap.loss.burst.map_or(0.0, |b| b.p_bad_to_good)),
                ("loss_in_bad", ap.loss.burst.map_or(0.0, |b| b.loss_in_bad)),
            ];
            for (name, p) in probs {
                if !(0.0..=1.0).contains(&p) {
                    return fail(format!("ap[{i}]: {name} = {p} outside [0, 1]"));
                }
            }
            if self.aps[..i].iter().any(|other| other.bssid == ap.bssid) {
                return fail(format!("ap[{i}]: duplicate bssid {}", ap.bssid));
            }
        }
        Ok(())
    }

    pub fn duration_us(&self) -> u64 {
        (self.duration_s * 1e6).round() as u64
    }

    /// Beacons scheduled per AP: slots `k · nominal` for
    /// `k < ⌊duration / nominal⌋`.
    pub fn scheduled_per_ap(&self) -> u64 {
        self.duration_us() / self.mode.nominal_interval_us()
    }
}

/// What actually happened in a run. `drop_indices` index the concatenated
/// per-AP schedules in AP declaration order (AP 0 owns indices
/// `0..scheduled_per_ap`, AP 1 the next block, and so on).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub scheduled: u64,
    pub delivered: u64,
    pub drop_indices: Vec<u64>,
}

fn ap_stream(seed: u64, session_index: u32, ap_index: u64) -> ChaCha12Rng {
    let mut bytes = [0u8; 32];
    bytes[0..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&(session_index as u64).to_le_bytes());
    bytes[16..24].copy_from_slice(&ap_index.to_le_bytes());
    bytes[24..32].copy_from_slice(b"bcnrate1");
    ChaCha12Rng::from_seed(bytes)
}

#[derive(Clone, Copy, PartialEq)]
enum ChannelState {
    Good,
    Bad,
}

/// Simulates one session: a merged, time-sorted measurement timeline plus
/// its ground truth. Fully deterministic given (config, session_index).
pub fn simulate_timeline(
    config: &ScenarioConfig,
    session_index: u32,
) -> Result<(Vec<RssMeasurement>, GroundTruth), SimError> {
    config.validate()?;
    let nominal = config.mode.nominal_interval_us();
    let per_ap = config.scheduled_per_ap();
    let jitter = config.timing_jitter_us as i64;

    let mut timeline = Vec::new();
    let mut truth = GroundTruth::default();
    for (ap_index, ap) in config.aps.iter().enumerate() {
        let mut rng = ap_stream(config.seed, session_index, ap_index as u64);
        let mut state = ChannelState::Good;
        for k in 0..per_ap {
            let t_jitter = if jitter > 0 {
                rng.random_range(-jitter..=jitter)
            } else {
                0
            };
            let t_us = ((k * nominal) as i64 + t_jitter).max(0) as u64;
            let rssi_jitter = if ap.rssi_jitter_db > 0 {
                rng.random_range(-(ap.rssi_jitter_db as i32)..=ap.rssi_jitter_db as i32)
            } else {
                0
            };
            let rssi_dbm = (ap.rssi_mean_dbm as i32 + rssi_jitter).clamp(-120, 0) as i8;

            let mut dropped = false;
            if ap.loss.bernoulli_p > 0.0 {
                dropped |= rng.random_bool(ap.loss.bernoulli_p);
            }
            if let Some(burst) = &ap.loss.burst {
                // k = 0 draws the stationary state so short runs already sit
                // at the long-run loss; afterwards the chain steps per beacon
                state = if k == 0 {
                    let p_bad = {
                        let denom = burst.p_good_to_bad + burst.p_bad_to_good;
                        if denom == 0.0 {
                            0.0
                        } else {
                            burst.p_good_to_bad / denom
                        }
                    };
                    if rng.random_bool(p_bad) {
                        ChannelState::Bad
                    } else {
                        ChannelState::Good
                    }
                } else {
                    match state {
                        ChannelState::Good => {
                            if burst.p_good_to_bad > 0.0 && rng.random_bool(burst.p_good_to_bad) {
                                ChannelState::Bad
                            } else {
                                ChannelState::Good
                            }
                        }
                        ChannelState::Bad => {
                            if burst.p_bad_to_good > 0.0 && rng.random_bool(burst.p_bad_to_good) {
                                ChannelState::Good
                            } else {
                                ChannelState::Bad
                            }
                        }
                    }
                };
                if state == ChannelState::Bad
                    && burst.loss_in_bad > 0.0
                    && rng.random_bool(burst.loss_in_bad)
                {
                    dropped = true;
                }
            }

            truth.scheduled += 1;
            if dropped {
                truth.drop_indices.push(ap_index as u64 * per_ap + k);
            } else {
                truth.delivered += 1;
                timeline.push(RssMeasurement {
                    capture_time_us: t_us,
                    bssid: ap.bssid,
                    ssid: ap.ssid.clone(),
                    rssi_dbm,
                    channel: Some(ap.channel),
                });
            }
        }
    }
    // stable sort: simultaneous beacons keep AP declaration order
    timeline.sort_by_key(|m| m.capture_time_us);
    Ok((timeline, truth))
}

/// Inverts the rate/miss relationship: the independent per-packet loss
/// that makes the expected rate equal `target_pps` for the given mode.
pub fn calibrate_loss(target_pps: f64, mode: CaptureMode) -> Result<f64, SimError> {
    let max = mode.theoretical_max_pps();
    if !(0.0..=max).contains(&target_pps) {
        return Err(SimError::TargetExceedsMaximum {
            target: target_pps,
            max,
            mode,
        });
    }
    Ok(1.0 - target_pps / max)
}

/// Synthesizes a timeline into pcap records via the frame codec. Feeding
/// the result back through extraction reproduces the timeline exactly.
pub fn synthesize_records(
    timeline: &[RssMeasurement],
    config: &ScenarioConfig,
) -> Result<(CaptureMeta, Vec<PcapRecord>), SimError> {
    let interval_tu = (config.mode.nominal_interval_us() / 1024) as u16;
    let mut seq: std::collections::HashMap<MacAddr, u16> = std::collections::HashMap::new();
    let mut records = Vec::with_capacity(timeline.len());
    for m in timeline {
        let counter = seq.entry(m.bssid).or_insert(0);
        let frame = BeaconFrame {
            mac: MacHeader {
                frame_type: FrameType::Management,
                frame_subtype: BEACON_SUBTYPE,
                bssid: m.bssid,
                source: m.bssid,
                destination: MacAddr::BROADCAST,
                sequence_number: *counter,
            },
            body: BeaconBody {
                ap_timestamp: m.capture_time_us,
                beacon_interval_tu: interval_tu,
                capability: 0x0431,
                ssid: m.ssid.clone(),
                extra_elements: vec![
                    (1, vec![0x82, 0x84, 0x8b, 0x96]), // basic rates 1/2/5.5/11
                    (3, vec![m.channel.unwrap_or(0)]), // DS parameter set
                ],
            },
        };
        *counter = (*counter + 1) % (1 << 12);
        let info = RadiotapInfo::new(
            Some(m.rssi_dbm),
            m.channel.and_then(mhz_from_channel),
            false,
        );
        records.push(PcapRecord::new(
            m.capture_time_us,
            encode_beacon(&frame, &info)?,
        ));
    }
    Ok((CaptureMeta::default(), records))
}

/// Writes a timeline straight to a pcap stream.
pub fn emit_pcap(
    timeline: &[RssMeasurement],
    config: &ScenarioConfig,
    writer: impl std::io::Write,
) -> Result<(), SimError> {
    let (meta, records) = synthesize_records(timeline, config)?;
    pcap::write_pcap(writer, &meta, &records)?;
    Ok(())
}
