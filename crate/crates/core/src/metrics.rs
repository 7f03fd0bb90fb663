//! Measurement-rate statistics: average rate, miss-rate against the
//! theoretical per-mode maximum, inter-arrival distributions, per-second
//! availability, missed-packet estimation, and multi-session aggregation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::MacAddr;
use crate::ingest::ApSeries;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("session duration must be positive")]
    ZeroDuration,
    #[error("no intervals to bin")]
    EmptyIntervals,
    #[error("sessions mix BSSIDs or capture modes")]
    HeterogeneousSessions,
    #[error("report keys differ: only in left {left_only:?}, only in right {right_only:?}")]
    KeyMismatch {
        left_only: Vec<String>,
        right_only: Vec<String>,
    },
}

/// Capture mode and its nominal reporting cadence.
///
/// Monitor mode sees every beacon a decodable AP sends: one per 100 TU,
/// i.e. every 102.4 ms, 9.765625 packets/s at best. Normal mode reports on
/// a 1000 TU cadence, 0.9765625 packets/s at best. The exact values are
/// stored rather than the commonly quoted 9.77/0.977 roundings:
/// `theoretical_max_pps · nominal_interval_us == 1e6` holds exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaptureMode {
    Monitor,
    Normal,
}

impl CaptureMode {
    pub fn nominal_interval_us(self) -> u64 {
        match self {
            CaptureMode::Monitor => 102_400,
            CaptureMode::Normal => 1_024_000,
        }
    }

    pub fn theoretical_max_pps(self) -> f64 {
        1e6 / self.nominal_interval_us() as f64
    }
}

impl fmt::Display for CaptureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaptureMode::Monitor => "monitor",
            CaptureMode::Normal => "normal",
        })
    }
}

impl FromStr for CaptureMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "monitor" => Ok(CaptureMode::Monitor),
            "normal" => Ok(CaptureMode::Normal),
            other => Err(format!("unknown capture mode `{other}`")),
        }
    }
}

/// Per-AP, per-session statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct SessionStats {
    pub bssid: MacAddr,
    pub ssid: String,
    pub mode: CaptureMode,
    pub avg_rate_pps: f64,
    pub miss_rate_pct: f64,
    pub availability_pct: f64,
    pub intervals_ms: Vec<f64>,
    pub n_packets: u64,
    pub duration_s: f64,
}

/// One histogram bin: `[lower_edge_ms, lower_edge_ms + bin_width_ms)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub lower_edge_ms: f64,
    pub count: u64,
    pub pdf: f64,
    pub cdf: f64,
}

/// Binned inter-arrival histogram with normalized PDF and CDF columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionTable {
    pub bin_width_ms: f64,
    pub bins: Vec<Bin>,
}

impl DistributionTable {
    /// Plot-friendly CSV: `lower_edge_ms,count,pdf,cdf` per line.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("lower_edge_ms,count,pdf,cdf\n");
        for bin in &self.bins {
            out.push_str(&format!(
                "{},{},{},{}\n",
                bin.lower_edge_ms, bin.count, bin.pdf, bin.cdf
            ));
        }
        out
    }

    /// Total mass in `[lo_ms, hi_ms)`, summed over whole bins.
    pub fn count_in_range(&self, lo_ms: f64, hi_ms: f64) -> u64 {
        self.bins
            .iter()
            .filter(|b| b.lower_edge_ms >= lo_ms && b.lower_edge_ms < hi_ms)
            .map(|b| b.count)
            .sum()
    }
}

/// Mean and sample standard deviation of one scalar across sessions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

/// Session scalars aggregated over repeated runs. `std` is the sample
/// standard deviation and is zero for a single session.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateStats {
    pub bssid: MacAddr,
    pub ssid: String,
    pub mode: CaptureMode,
    pub n_sessions: u32,
    pub avg_rate_pps: MeanStd,
    pub miss_rate_pct: MeanStd,
    pub availability_pct: MeanStd,
}

/// Packets per second over the configured session length.
pub fn average_rate(series: &ApSeries) -> Result<f64, MetricsError> {
    if series.session_duration_s <= 0.0 {
        return Err(MetricsError::ZeroDuration);
    }
    Ok(series.measurements.len() as f64 / series.session_duration_s)
}

/// Percent of the mode's theoretical maximum that went unobserved,
/// clamped below at zero (jitter at window boundaries can push a measured
/// rate slightly past the maximum).
pub fn miss_rate(avg_rate_pps: f64, mode: CaptureMode) -> f64 {
    (100.0 * (1.0 - avg_rate_pps / mode.theoretical_max_pps())).max(0.0)
}

/// Consecutive-packet arrival gaps in milliseconds; empty below 2 packets.
pub fn inter_arrival(series: &ApSeries) -> Vec<f64> {
    series
        .measurements
        .windows(2)
        .map(|pair| (pair[1].capture_time_us - pair[0].capture_time_us) as f64 / 1_000.0)
        .collect()
}

/// Bins intervals into `[k·w, (k+1)·w)` from zero through the largest
/// interval, with PDF normalized by the interval count and a running CDF.
pub fn interval_histogram(
    intervals_ms: &[f64],
    bin_width_ms: f64,
) -> Result<DistributionTable, MetricsError> {
    assert!(bin_width_ms > 0.0, "bin width must be positive");
    assert!(
        intervals_ms.iter().all(|v| v.is_finite() && *v >= 0.0),
        "intervals must be finite and nonnegative"
    );
    if intervals_ms.is_empty() {
        return Err(MetricsError::EmptyIntervals);
    }
    let bin_of = |v: f64| (v / bin_width_ms).floor() as usize;
    let last_bin = intervals_ms.iter().copied().fold(0, |acc, v| acc.max(bin_of(v)));
    let mut counts = vec![0u64; last_bin + 1];
    for &v in intervals_ms {
        counts[bin_of(v)] += 1;
    }
    let total = intervals_ms.len() as f64;
    let mut cumulative = 0u64;
    let bins = counts
        .iter()
        .enumerate()
        .map(|(k, &count)| {
            cumulative += count;
            Bin {
                lower_edge_ms: k as f64 * bin_width_ms,
                count,
                pdf: count as f64 / total,
                cdf: cumulative as f64 / total,
            }
        })
        .collect();
    Ok(DistributionTable { bin_width_ms, bins })
}

/// Percent of fixed windows holding at least one sample. Windows tile
/// `[0, duration)` from the session start; only whole windows count.
pub fn window_availability(series: &ApSeries, window_s: f64) -> f64 {
    assert!(window_s > 0.0, "window must be positive");
    let window_us = (window_s * 1e6).round() as u64;
    let duration_us = (series.session_duration_s * 1e6).round() as u64;
    let n_windows = duration_us / window_us;
    assert!(n_windows >= 1, "session shorter than one window");
    let mut seen = vec![false; n_windows as usize];
    for m in &series.measurements {
        let w = m.capture_time_us / window_us;
        if w < n_windows {
            seen[w as usize] = true;
        }
    }
    100.0 * seen.iter().filter(|&&s| s).count() as f64 / n_windows as f64
}

/// Missed packets implied by a gap: how many nominal slots it spans beyond
/// one. Rounds half away from zero; exact half-multiples do not survive
/// real timing jitter anyway.
pub fn estimate_missed_packets(interval_ms: f64, nominal_interval_ms: f64) -> u64 {
    assert!(interval_ms > 0.0 && nominal_interval_ms > 0.0);
    ((interval_ms / nominal_interval_ms).round() as i64 - 1).max(0) as u64
}

/// Computes the full per-session statistics block for one AP series.
pub fn session_stats(
    series: &ApSeries,
    mode: CaptureMode,
    window_s: f64,
) -> Result<SessionStats, MetricsError> {
    let avg_rate_pps = average_rate(series)?;
    Ok(SessionStats {
        bssid: series.bssid,
        ssid: series.ssid.clone(),
        mode,
        avg_rate_pps,
        miss_rate_pct: miss_rate(avg_rate_pps, mode),
        availability_pct: window_availability(series, window_s),
        intervals_ms: inter_arrival(series),
        n_packets: series.measurements.len() as u64,
        duration_s: series.session_duration_s,
    })
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> MeanStd {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let std = if n > 1.0 {
        (values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    MeanStd { mean, std }
}

/// Mean and sample std of each session scalar across repeated sessions of
/// the same AP and mode.
pub fn aggregate_sessions(sessions: &[SessionStats]) -> Result<AggregateStats, MetricsError> {
    let first = sessions.first().ok_or(MetricsError::HeterogeneousSessions)?;
    if sessions
        .iter()
        .any(|s| s.bssid != first.bssid || s.mode != first.mode)
    {
        return Err(MetricsError::HeterogeneousSessions);
    }
    Ok(AggregateStats {
        bssid: first.bssid,
        ssid: first.ssid.clone(),
        mode: first.mode,
        n_sessions: sessions.len() as u32,
        avg_rate_pps: mean_std(sessions.iter().map(|s| s.avg_rate_pps)),
        miss_rate_pct: mean_std(sessions.iter().map(|s| s.miss_rate_pct)),
        availability_pct: mean_std(sessions.iter().map(|s| s.availability_pct)),
    })
}
