//! Report tables: per-AP session results in CSV/JSON, and the paired
//! normal/monitor comparison layout.

use std::collections::BTreeSet;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::frame::MacAddr;
use crate::metrics::{AggregateStats, CaptureMode, MetricsError, SessionStats};

/// One report line. CSV column order is the struct field order:
/// `scenario,bssid,ssid,mode,avg_pps,miss_rate_pct,availability_pct,n_sessions`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub scenario: String,
    pub bssid: MacAddr,
    pub ssid: String,
    pub mode: CaptureMode,
    pub avg_pps: f64,
    pub miss_rate_pct: f64,
    pub availability_pct: f64,
    pub n_sessions: u32,
}

impl ReportRow {
    pub fn from_aggregate(scenario: impl Into<String>, agg: &AggregateStats) -> ReportRow {
        ReportRow {
            scenario: scenario.into(),
            bssid: agg.bssid,
            ssid: agg.ssid.clone(),
            mode: agg.mode,
            avg_pps: agg.avg_rate_pps.mean,
            miss_rate_pct: agg.miss_rate_pct.mean,
            availability_pct: agg.availability_pct.mean,
            n_sessions: agg.n_sessions,
        }
    }

    pub fn from_session(scenario: impl Into<String>, stats: &SessionStats) -> ReportRow {
        ReportRow {
            scenario: scenario.into(),
            bssid: stats.bssid,
            ssid: stats.ssid.clone(),
            mode: stats.mode,
            avg_pps: stats.avg_rate_pps,
            miss_rate_pct: stats.miss_rate_pct,
            availability_pct: stats.availability_pct,
            n_sessions: 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReportTable {
    pub rows: Vec<ReportRow>,
}

impl ReportTable {
    pub fn new(rows: Vec<ReportRow>) -> ReportTable {
        ReportTable { rows }
    }

    pub fn to_csv_string(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            writer.serialize(row).expect("in-memory csv write");
        }
        String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv utf8")
    }

    pub fn from_csv(reader: impl Read) -> csv::Result<ReportTable> {
        let mut rows = Vec::new();
        for row in csv::Reader::from_reader(reader).deserialize() {
            rows.push(row?);
        }
        Ok(ReportTable { rows })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("report json")
    }

    pub fn from_json(reader: impl Read) -> serde_json::Result<ReportTable> {
        Ok(ReportTable {
            rows: serde_json::from_reader(reader)?,
        })
    }
}

/// One side-by-side line: a scenario/AP key with per-mode rate and miss.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub scenario: String,
    pub bssid: MacAddr,
    pub ssid: String,
    pub normal_pps: Option<f64>,
    pub normal_miss_pct: Option<f64>,
    pub monitor_pps: Option<f64>,
    pub monitor_miss_pct: Option<f64>,
}

/// Paired-column table keyed by (scenario, BSSID), one row per key.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    pub fn to_csv_string(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            writer.serialize(row).expect("in-memory csv write");
        }
        String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv utf8")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("comparison json")
    }
}

fn key_of(row: &ReportRow) -> (String, MacAddr) {
    (row.scenario.clone(), row.bssid)
}

/// Folds a report into the paired layout: rows of both modes that share a
/// (scenario, BSSID) key collapse into one comparison row. Keys keep their
/// first-seen order; a mode the report lacks stays empty.
pub fn comparison_report(table: &ReportTable) -> ComparisonTable {
    let mut rows: Vec<ComparisonRow> = Vec::new();
    for row in &table.rows {
        let slot = rows
            .iter()
            .position(|r| r.scenario == row.scenario && r.bssid == row.bssid);
        let slot = match slot {
            Some(i) => i,
            None => {
                rows.push(ComparisonRow {
                    scenario: row.scenario.clone(),
                    bssid: row.bssid,
                    ssid: row.ssid.clone(),
                    normal_pps: None,
                    normal_miss_pct: None,
                    monitor_pps: None,
                    monitor_miss_pct: None,
                });
                rows.len() - 1
            }
        };
        match row.mode {
            CaptureMode::Normal => {
                rows[slot].normal_pps = Some(row.avg_pps);
                rows[slot].normal_miss_pct = Some(row.miss_rate_pct);
            }
            CaptureMode::Monitor => {
                rows[slot].monitor_pps = Some(row.avg_pps);
                rows[slot].monitor_miss_pct = Some(row.miss_rate_pct);
            }
        }
    }
    ComparisonTable { rows }
}

/// Merges a normal-mode report with a monitor-mode report into one
/// side-by-side table. The two reports must cover the same
/// (scenario, BSSID) keys; any asymmetry is a [`MetricsError::KeyMismatch`]
/// listing the offenders.
pub fn merge_reports(
    normal: &ReportTable,
    monitor: &ReportTable,
) -> Result<ComparisonTable, MetricsError> {
    let left_keys: BTreeSet<_> = normal.rows.iter().map(key_of).collect();
    let right_keys: BTreeSet<_> = monitor.rows.iter().map(key_of).collect();
    if left_keys != right_keys {
        let fmt_key = |(scenario, bssid): &(String, MacAddr)| format!("{scenario}/{bssid}");
        return Err(MetricsError::KeyMismatch {
            left_only: left_keys.difference(&right_keys).map(fmt_key).collect(),
            right_only: right_keys.difference(&left_keys).map(fmt_key).collect(),
        });
    }
    let rows = normal
        .rows
        .iter()
        .map(|left| {
            let right = monitor
                .rows
                .iter()
                .find(|r| key_of(r) == key_of(left))
                .expect("key sets verified equal");
            ComparisonRow {
                scenario: left.scenario.clone(),
                bssid: left.bssid,
                ssid: left.ssid.clone(),
                normal_pps: Some(left.avg_pps),
                normal_miss_pct: Some(left.miss_rate_pct),
                monitor_pps: Some(right.avg_pps),
                monitor_miss_pct: Some(right.miss_rate_pct),
            }
        })
        .collect();
    Ok(ComparisonTable { rows })
}
