use beaconrate::ingest::{demux_by_ap, extract_measurements};
use beaconrate::metrics::{interval_histogram, session_stats};
use beaconrate::pcap::read_pcap;
use beaconrate::report::{ReportRow, ReportTable};

use crate::output::{digest_bytes, write_atomic, RunManifest};
use crate::{AnalyzeArgs, CliError, OutputFormat};

pub fn run(args: AnalyzeArgs) -> Result<(), CliError> {
    if args.duration_s <= 0.0 {
        return Err(CliError::Usage("--duration-s must be positive".into()));
    }
    if args.window_s <= 0.0 || args.window_s > args.duration_s {
        return Err(CliError::Usage(
            "--window-s must be positive and no longer than the session".into(),
        ));
    }
    if args.bin_width_ms <= 0.0 {
        return Err(CliError::Usage("--bin-width-ms must be positive".into()));
    }

    let bytes = std::fs::read(&args.pcap)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", args.pcap.display())))?;
    let (meta, records) = read_pcap(&bytes[..])?;
    let (measurements, stats) = extract_measurements(&meta, &records);
    eprintln!(
        "{}: {} records: {} beacons, {} non-beacon, {} undecodable",
        args.pcap.display(),
        stats.total,
        stats.beacons,
        stats.skipped_non_beacon,
        stats.errors
    );

    let scenario = args.scenario.clone().unwrap_or_else(|| {
        args.pcap
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "capture".into())
    });

    std::fs::create_dir_all(&args.out)?;
    let mut outputs = Vec::new();
    let mut rows = Vec::new();
    let series = demux_by_ap(&measurements, args.duration_s);
    for ap_series in &series {
        let stats = session_stats(ap_series, args.mode, args.window_s)?;
        if stats.avg_rate_pps > args.mode.theoretical_max_pps() {
            eprintln!(
                "warning: {} measured {:.3} pps, above the {} maximum {} pps; \
                 capture may be mislabeled (--mode)",
                stats.bssid,
                stats.avg_rate_pps,
                args.mode,
                args.mode.theoretical_max_pps()
            );
        }
        if stats.intervals_ms.is_empty() {
            eprintln!(
                "warning: {} has {} sample(s); no interval histogram",
                stats.bssid, stats.n_packets
            );
        } else {
            let table = interval_histogram(&stats.intervals_ms, args.bin_width_ms)?;
            let path = args.out.join(format!(
                "intervals_{}.{}",
                stats.bssid.to_flat_hex(),
                args.format.extension()
            ));
            let body = match args.format {
                OutputFormat::Csv => table.to_csv_string(),
                OutputFormat::Json => {
                    serde_json::to_string_pretty(&table).expect("histogram json")
                }
            };
            write_atomic(&path, body.as_bytes())?;
            outputs.push(path);
        }
        rows.push(ReportRow::from_session(&scenario, &stats));
    }

    let table = ReportTable::new(rows);
    let report_path = args
        .out
        .join(format!("report.{}", args.format.extension()));
    write_atomic(
        &report_path,
        super::report_to_string(&table, args.format).as_bytes(),
    )?;
    outputs.push(report_path);

    let digest = digest_bytes(&[
        &bytes,
        format!(
            "{} {} {} {} {scenario}",
            args.mode, args.duration_s, args.window_s, args.bin_width_ms
        )
        .as_bytes(),
    ]);
    outputs.push(RunManifest::new(digest, None, &outputs).write(&args.out)?);

    print_summary(&table);
    if measurements.is_empty() {
        return Err(CliError::NoData(format!(
            "{} contains no RSS measurements (report written with 0 APs)",
            args.pcap.display()
        )));
    }
    Ok(())
}

fn print_summary(table: &ReportTable) {
    println!(
        "{:<18} {:<20} {:>10} {:>10} {:>10}",
        "bssid", "ssid", "avg pps", "miss %", "avail %"
    );
    for row in &table.rows {
        println!(
            "{:<18} {:<20} {:>10.3} {:>10.2} {:>10.2}",
            row.bssid.to_string(),
            row.ssid,
            row.avg_pps,
            row.miss_rate_pct,
            row.availability_pct
        );
    }
}
