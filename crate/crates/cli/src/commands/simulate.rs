use std::path::PathBuf;

use serde::Serialize;

use beaconrate::ingest::demux_by_ap;
use beaconrate::metrics::{aggregate_sessions, session_stats, CaptureMode, SessionStats};
use beaconrate::report::{ReportRow, ReportTable};
use beaconrate::sim::{scenario_preset, simulate_timeline, synthesize_records, GroundTruth,
    ScenarioConfig};

use crate::output::{digest_bytes, write_atomic, RunManifest};
use crate::{CliError, SimulateArgs};

#[derive(Serialize)]
struct SessionTruth {
    session_index: u32,
    #[serde(flatten)]
    truth: GroundTruth,
}

#[derive(Serialize)]
struct GroundTruthFile {
    scenario: String,
    seed: u64,
    sessions: Vec<SessionTruth>,
}

/// Preset names carry the mode ("distance-weak,normal"); report keys must
/// not, so a normal and a monitor run of the same scenario can be compared.
fn scenario_label(preset: &str) -> String {
    preset
        .split(',')
        .map(str::trim)
        .filter(|part| part.parse::<CaptureMode>().is_err())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn run(args: SimulateArgs) -> Result<(), CliError> {
    let (mut config, label) = match (&args.preset, &args.config) {
        (Some(preset), None) => (scenario_preset(preset)?, scenario_label(preset)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
            let config: ScenarioConfig = toml::from_str(&text)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            let label = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "scenario".into());
            (config, label)
        }
        _ => {
            return Err(CliError::Usage(
                "exactly one of --preset or --config is required".into(),
            ))
        }
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(sessions) = args.sessions {
        config.n_sessions = sessions;
    }
    config.validate()?;

    std::fs::create_dir_all(&args.out)?;
    let mut outputs: Vec<PathBuf> = Vec::new();
    let mut truths = Vec::new();
    let mut per_ap_sessions: Vec<Vec<SessionStats>> = vec![Vec::new(); config.aps.len()];
    for session in 0..config.n_sessions {
        let (timeline, truth) = simulate_timeline(&config, session)?;
        let (meta, records) = synthesize_records(&timeline, &config)?;
        let path = args.out.join(format!("session_{session:03}.pcap"));
        write_atomic(&path, &beaconrate::pcap::to_bytes(&meta, &records)?)?;
        outputs.push(path);
        truths.push(SessionTruth {
            session_index: session,
            truth,
        });
        for series in demux_by_ap(&timeline, config.duration_s) {
            let idx = config
                .aps
                .iter()
                .position(|ap| ap.bssid == series.bssid)
                .expect("simulated bssid comes from the config");
            per_ap_sessions[idx].push(session_stats(&series, config.mode, 1.0)?);
        }
    }

    let mut rows = Vec::new();
    for (idx, sessions) in per_ap_sessions.iter().enumerate() {
        if sessions.is_empty() {
            eprintln!(
                "warning: {} delivered no packets in any session",
                config.aps[idx].bssid
            );
            continue;
        }
        rows.push(ReportRow::from_aggregate(
            &label,
            &aggregate_sessions(sessions)?,
        ));
    }
    let table = ReportTable::new(rows);
    let report_path = args.out.join(format!("report.{}", args.format.extension()));
    write_atomic(
        &report_path,
        super::report_to_string(&table, args.format).as_bytes(),
    )?;
    outputs.push(report_path);

    // paired-layout view of this run; `compare` fills in the other mode
    let comparison = beaconrate::report::comparison_report(&table);
    let comparison_path = args
        .out
        .join(format!("comparison.{}", args.format.extension()));
    let body = match args.format {
        crate::OutputFormat::Csv => comparison.to_csv_string(),
        crate::OutputFormat::Json => comparison.to_json_string(),
    };
    write_atomic(&comparison_path, body.as_bytes())?;
    outputs.push(comparison_path);

    let truth_file = GroundTruthFile {
        scenario: label.clone(),
        seed: config.seed,
        sessions: truths,
    };
    let truth_path = args.out.join("ground_truth.json");
    write_atomic(
        &truth_path,
        serde_json::to_string_pretty(&truth_file)
            .expect("ground truth json")
            .as_bytes(),
    )?;
    outputs.push(truth_path);

    let digest = digest_bytes(&[serde_json::to_vec(&config).expect("config json").as_slice()]);
    outputs.push(RunManifest::new(digest, Some(config.seed), &outputs).write(&args.out)?);

    println!(
        "{label}: {} session(s) of {} s, {} AP(s), seed {} -> {}",
        config.n_sessions,
        config.duration_s,
        config.aps.len(),
        config.seed,
        args.out.display()
    );
    for row in &table.rows {
        println!(
            "  {} {:<12} mean {:.3} pps, miss {:.2}%, availability {:.2}%",
            row.bssid, row.ssid, row.avg_pps, row.miss_rate_pct, row.availability_pct
        );
    }
    Ok(())
}
