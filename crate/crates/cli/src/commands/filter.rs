use std::collections::HashSet;

use beaconrate::frame::MacAddr;
use beaconrate::ingest::{apply_card_filters, extract_measurements};
use beaconrate::pcap::{read_pcap, to_bytes};

use crate::output::write_atomic;
use crate::{CliError, FilterArgs};

pub fn run(args: FilterArgs) -> Result<(), CliError> {
    if args.interval_tu < 100 {
        return Err(CliError::Usage("--interval-tu must be at least 100".into()));
    }
    if let Some(channel) = args.channel {
        if !(1..=11).contains(&channel) {
            return Err(CliError::Usage("--channel must be 1–11".into()));
        }
    }

    let bytes = std::fs::read(&args.pcap)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", args.pcap.display())))?;
    let (meta, records) = read_pcap(&bytes[..])?;
    let (measurements, _) = extract_measurements(&meta, &records);
    let kept = apply_card_filters(
        &measurements,
        args.ssid.as_deref(),
        args.channel,
        args.interval_tu,
    );

    // keep the original record bytes of the surviving beacons
    let keep_keys: HashSet<(u64, MacAddr)> =
        kept.iter().map(|m| (m.capture_time_us, m.bssid)).collect();
    let kept_records: Vec<_> = records
        .iter()
        .filter(|record| {
            beaconrate::frame::decode_frame(&record.payload)
                .is_ok_and(|(_, frame)| keep_keys.contains(&(record.ts_us, frame.mac.bssid)))
        })
        .cloned()
        .collect();

    if kept_records.is_empty() {
        eprintln!("warning: no beacons match the filter; writing an empty capture");
    }
    write_atomic(&args.out, &to_bytes(&meta, &kept_records)?)?;
    println!(
        "{} -> {}: kept {} of {} records",
        args.pcap.display(),
        args.out.display(),
        kept_records.len(),
        records.len()
    );
    Ok(())
}
