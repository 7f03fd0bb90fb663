//! Turns captures into per-AP measurement streams and emulates the
//! capture filters of a card in normal (dedicated-connection) mode.

use std::collections::HashMap;

use crate::frame::{self, MacAddr, RssMeasurement};
use crate::pcap::{CaptureMeta, LinkType, PcapRecord};

/// Per-capture decode tally. A single bad record never aborts a session;
/// it lands in `errors` and the run continues.
///
/// Invariant: `total == beacons + skipped_non_beacon + errors`. Beacons
/// without an antenna-signal field count in `beacons` but produce no
/// measurement, so the measurement list can be shorter than `beacons`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecodeStats {
    pub total: u64,
    pub beacons: u64,
    pub skipped_non_beacon: u64,
    pub errors: u64,
}

/// All measurements of one AP within one capture session, time-ordered.
#[derive(Clone, Debug, PartialEq)]
pub struct ApSeries {
    pub bssid: MacAddr,
    /// Network name from the most recent beacon of this AP.
    pub ssid: String,
    pub measurements: Vec<RssMeasurement>,
    /// Configured session length, not last-minus-first timestamp: trailing
    /// silence counts against the rate, as in a fixed-length survey run.
    pub session_duration_s: f64,
}

/// Decodes every record through the frame codec and collects RSS samples.
///
/// Non-beacons and malformed frames are tallied, never fatal. On the plain
/// 802.11 link type there is no radiotap header, so beacons decode but
/// carry no signal and yield no measurements.
pub fn extract_measurements(
    meta: &CaptureMeta,
    records: &[PcapRecord],
) -> (Vec<RssMeasurement>, DecodeStats) {
    let mut measurements = Vec::new();
    let mut stats = DecodeStats::default();
    for record in records {
        stats.total += 1;
        match meta.link_type {
            LinkType::Ieee80211Radiotap => match frame::decode_frame(&record.payload) {
                Ok((info, beacon)) => {
                    stats.beacons += 1;
                    if let Ok(m) = frame::to_measurement(&beacon, &info, record.ts_us) {
                        measurements.push(m);
                    }
                }
                Err(frame::DecodeError::NotABeacon) => stats.skipped_non_beacon += 1,
                Err(_) => stats.errors += 1,
            },
            LinkType::Ieee80211Plain => match frame::decode_beacon(&record.payload) {
                Ok(_) => stats.beacons += 1, // decodes fine, but no RSS carrier
                Err(frame::DecodeError::NotABeacon) => stats.skipped_non_beacon += 1,
                Err(_) => stats.errors += 1,
            },
        }
    }
    (measurements, stats)
}

/// Splits a time-ordered measurement stream into one series per BSSID.
///
/// Series appear in first-seen order; order within a series is preserved;
/// the SSID is taken from the AP's most recent beacon. BSSID is the key:
/// the same SSID on two radios stays two series.
pub fn demux_by_ap(measurements: &[RssMeasurement], session_duration_s: f64) -> Vec<ApSeries> {
    let mut series: Vec<ApSeries> = Vec::new();
    let mut index: HashMap<MacAddr, usize> = HashMap::new();
    for m in measurements {
        let slot = *index.entry(m.bssid).or_insert_with(|| {
            series.push(ApSeries {
                bssid: m.bssid,
                ssid: String::new(),
                measurements: Vec::new(),
                session_duration_s,
            });
            series.len() - 1
        });
        series[slot].ssid = m.ssid.clone();
        series[slot].measurements.push(m.clone());
    }
    series
}

/// Emulates normal-mode capture filters on a monitor-mode stream: drop
/// measurements failing the SSID/channel match, then thin each AP to at
/// most one measurement per `report_interval_tu` · 1024 µs window, keeping
/// the first in each window. Windows tile from the capture epoch.
///
/// Thinning is per BSSID, mirroring a card that reports each tracked AP on
/// its own cadence, so an interval of 100 TU on a clean nominal stream is
/// the identity.
pub fn apply_card_filters(
    measurements: &[RssMeasurement],
    ssid_filter: Option<&str>,
    channel_filter: Option<u8>,
    report_interval_tu: u32,
) -> Vec<RssMeasurement> {
    assert!(report_interval_tu >= 100, "report interval below 100 TU");
    let window_us = report_interval_tu as u64 * 1024;
    let mut last_window: HashMap<MacAddr, u64> = HashMap::new();
    let mut kept = Vec::new();
    for m in measurements {
        if let Some(ssid) = ssid_filter {
            if m.ssid != ssid {
                continue;
            }
        }
        if let Some(channel) = channel_filter {
            if m.channel != Some(channel) {
                continue;
            }
        }
        let window = m.capture_time_us / window_us;
        match last_window.get(&m.bssid) {
            Some(&w) if w == window => {}
            _ => {
                last_window.insert(m.bssid, window);
                kept.push(m.clone());
            }
        }
    }
    kept
}
