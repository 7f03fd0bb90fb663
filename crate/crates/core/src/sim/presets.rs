//! Canned scenario configs for the three standard test families: traffic
//! (four interfering APs), distance (strong/weak signal), and CPU load
//! (two loads × two card vendors). Each preset is calibrated so the
//! expected session rate matches the corresponding published table cell.

use crate::frame::MacAddr;
use crate::metrics::CaptureMode;

use super::{calibrate_loss, ApConfig, BurstParams, LossModel, ScenarioConfig, SimError};

/// Seed presets carry out of the box; override per run for fresh draws.
pub const DEFAULT_SEED: u64 = 42;

const SESSIONS: u32 = 10;
const DURATION_S: f64 = 200.0;
const TIMING_JITTER_US: u64 = 2000;
const RSSI_JITTER_DB: u8 = 3;

/// Traffic test target rates (pps): per-AP, (normal, monitor).
const TRAFFIC_TARGETS: [(f64, f64); 4] = [
    (0.90, 4.76),
    (0.91, 7.40),
    (0.91, 7.42),
    (0.91, 8.29),
];
const TRAFFIC_CHANNELS: [u8; 4] = [1, 6, 11, 3];

/// Distance test target rates (pps): (normal, monitor).
const DISTANCE_STRONG: (f64, f64) = (0.91, 9.68);
const DISTANCE_WEAK: (f64, f64) = (0.57, 9.22);

/// CPU-load target rates (pps) at weak signal: (normal, monitor).
const CPU_50_ATHEROS: (f64, f64) = (0.96, 8.76);
const CPU_50_RALINK: (f64, f64) = (0.76, 8.19);
const CPU_80_ATHEROS: (f64, f64) = (0.86, 7.80);
const CPU_80_RALINK: (f64, f64) = (0.69, 5.05);

/// All accepted preset names.
pub fn preset_names() -> Vec<String> {
    let mut names = Vec::new();
    for mode in ["normal", "monitor"] {
        for family in ["traffic", "distance-strong", "distance-weak"] {
            names.push(format!("{family},{mode}"));
        }
        for family in ["cpu-50", "cpu-80"] {
            for vendor in ["atheros", "ralink"] {
                names.push(format!("{family},{mode},{vendor}"));
            }
        }
    }
    names
}

fn ap_addr(n: u8) -> MacAddr {
    MacAddr([0xaa, 0xbb, 0xcc, 0xdd, 0xee, n])
}

fn bernoulli_ap(n: u8, channel: u8, rssi_mean_dbm: i8, target_pps: f64, mode: CaptureMode) -> ApConfig {
    let p = calibrate_loss(target_pps, mode).expect("preset target below maximum");
    ApConfig {
        bssid: ap_addr(n),
        ssid: format!("AP{n}"),
        channel,
        rssi_mean_dbm,
        rssi_jitter_db: RSSI_JITTER_DB,
        loss: LossModel {
            bernoulli_p: p,
            burst: None,
        },
    }
}

/// Bursty loss tuned to a target rate: full loss while bad, recovery rate
/// `p_bad_to_good` fixing the burst-length scale, and the good→bad rate
/// chosen so the stationary loss matches the target.
fn burst_for(target_pps: f64, mode: CaptureMode, p_bad_to_good: f64) -> LossModel {
    let stationary = calibrate_loss(target_pps, mode).expect("preset target below maximum");
    let p_good_to_bad = stationary / (1.0 - stationary) * p_bad_to_good;
    LossModel {
        bernoulli_p: 0.0,
        burst: Some(BurstParams {
            p_good_to_bad,
            p_bad_to_good,
            loss_in_bad: 1.0,
        }),
    }
}

fn burst_ap(n: u8, target_pps: f64, mode: CaptureMode) -> ApConfig {
    // Monitor-cadence transients run several beacons long (gaps around
    // 4–6 nominal slots); on the slow normal cadence bursts are shorter,
    // smearing the 1 s lobe towards 2 s and beyond.
    let p_bad_to_good = match mode {
        CaptureMode::Monitor => 0.3,
        CaptureMode::Normal => 0.5,
    };
    ApConfig {
        bssid: ap_addr(n),
        ssid: format!("AP{n}"),
        channel: 6,
        rssi_mean_dbm: -80,
        rssi_jitter_db: RSSI_JITTER_DB,
        loss: burst_for(target_pps, mode, p_bad_to_good),
    }
}

fn base_config(mode: CaptureMode, aps: Vec<ApConfig>) -> ScenarioConfig {
    ScenarioConfig {
        mode,
        duration_s: DURATION_S,
        n_sessions: SESSIONS,
        aps,
        timing_jitter_us: TIMING_JITTER_US,
        seed: DEFAULT_SEED,
    }
}

fn pick(targets: (f64, f64), mode: CaptureMode) -> f64 {
    match mode {
        CaptureMode::Normal => targets.0,
        CaptureMode::Monitor => targets.1,
    }
}

/// Builds the scenario config for a preset name of the form
/// `family,mode[,vendor]`, e.g. `traffic,monitor` or `cpu-80,normal,ralink`.
pub fn scenario_preset(name: &str) -> Result<ScenarioConfig, SimError> {
    let unknown = || SimError::UnknownPreset(name.to_string());
    let parts: Vec<&str> = name.split(',').map(str::trim).collect();
    let (family, mode, vendor) = match parts.as_slice() {
        [family, mode] => (*family, *mode, None),
        [family, mode, vendor] => (*family, *mode, Some(*vendor)),
        _ => return Err(unknown()),
    };
    let mode: CaptureMode = mode.parse().map_err(|_| unknown())?;

    let config = match (family, vendor) {
        ("traffic", None) => {
            let aps = TRAFFIC_TARGETS
                .iter()
                .zip(TRAFFIC_CHANNELS)
                .enumerate()
                .map(|(i, (&targets, channel))| {
                    bernoulli_ap(i as u8 + 1, channel, -65, pick(targets, mode), mode)
                })
                .collect();
            base_config(mode, aps)
        }
        ("distance-strong", None) => base_config(
            mode,
            vec![bernoulli_ap(1, 6, -60, pick(DISTANCE_STRONG, mode), mode)],
        ),
        ("distance-weak", None) => base_config(
            mode,
            vec![bernoulli_ap(1, 6, -80, pick(DISTANCE_WEAK, mode), mode)],
        ),
        ("cpu-50", Some("atheros")) => {
            base_config(mode, vec![burst_ap(1, pick(CPU_50_ATHEROS, mode), mode)])
        }
        ("cpu-50", Some("ralink")) => {
            base_config(mode, vec![burst_ap(1, pick(CPU_50_RALINK, mode), mode)])
        }
        ("cpu-80", Some("atheros")) => {
            base_config(mode, vec![burst_ap(1, pick(CPU_80_ATHEROS, mode), mode)])
        }
        ("cpu-80", Some("ralink")) => {
            base_config(mode, vec![burst_ap(1, pick(CPU_80_RALINK, mode), mode)])
        }
        _ => return Err(unknown()),
    };
    debug_assert!(config.validate().is_ok());
    Ok(config)
}
