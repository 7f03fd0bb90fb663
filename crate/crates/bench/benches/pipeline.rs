use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use beaconrate::frame::decode_frame;
use beaconrate::ingest::{demux_by_ap, extract_measurements};
use beaconrate::metrics::{inter_arrival, interval_histogram};
use beaconrate::pcap::{read_pcap, to_bytes};
use beaconrate::sim::{scenario_preset, simulate_timeline, synthesize_records};

fn bench_decode_frame(c: &mut Criterion) {
    let config = scenario_preset("distance-strong,monitor").unwrap();
    let (timeline, _) = simulate_timeline(&config, 0).unwrap();
    let (_, records) = synthesize_records(&timeline, &config).unwrap();
    let packet = records[0].payload.clone();
    c.bench_function("decode_frame", |b| {
        b.iter(|| decode_frame(black_box(&packet)).unwrap())
    });
}

fn bench_pcap_session(c: &mut Criterion) {
    let config = scenario_preset("traffic,monitor").unwrap();
    let (timeline, _) = simulate_timeline(&config, 0).unwrap();
    let (meta, records) = synthesize_records(&timeline, &config).unwrap();
    let bytes = to_bytes(&meta, &records).unwrap();
    c.bench_function("read_pcap_200s_traffic", |b| {
        b.iter(|| read_pcap(black_box(&bytes[..])).unwrap())
    });
    c.bench_function("extract_and_demux_200s_traffic", |b| {
        b.iter(|| {
            let (measurements, _) = extract_measurements(&meta, black_box(&records));
            demux_by_ap(&measurements, 200.0)
        })
    });
}

fn bench_simulate_session(c: &mut Criterion) {
    let config = scenario_preset("traffic,monitor").unwrap();
    c.bench_function("simulate_200s_traffic_session", |b| {
        b.iter(|| simulate_timeline(black_box(&config), 0).unwrap())
    });
}

fn bench_histogram(c: &mut Criterion) {
    let config = scenario_preset("cpu-80,monitor,ralink").unwrap();
    let (timeline, _) = simulate_timeline(&config, 0).unwrap();
    let series = demux_by_ap(&timeline, 200.0);
    let intervals = inter_arrival(&series[0]);
    c.bench_function("interval_histogram", |b| {
        b.iter(|| interval_histogram(black_box(&intervals), 100.0).unwrap())
    });
}

criterion_group!(
    pipeline,
    bench_decode_frame,
    bench_pcap_session,
    bench_simulate_session,
    bench_histogram
);
criterion_main!(pipeline);
