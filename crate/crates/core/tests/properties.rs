//! Cross-module invariants, mostly property-based: codec round trips,
//! filter/demux conservation, histogram normalization, and the simulator
//! as a ground-truth oracle for the gap-based missed-packet estimator.

use proptest::prelude::*;

use beaconrate::frame::{
    decode_beacon, decode_frame, decode_radiotap, encode_beacon, BeaconBody, BeaconFrame,
    FrameType, MacAddr, MacHeader, RadiotapInfo, RssMeasurement, BEACON_SUBTYPE,
};
use beaconrate::ingest::{apply_card_filters, demux_by_ap, ApSeries};
use beaconrate::metrics::{
    self, average_rate, estimate_missed_packets, inter_arrival, interval_histogram, miss_rate,
    CaptureMode,
};
use beaconrate::sim::{simulate_timeline, ApConfig, LossModel, ScenarioConfig};

fn mac_strategy() -> impl Strategy<Value = MacAddr> {
    prop::array::uniform6(any::<u8>()).prop_map(MacAddr)
}

fn ssid_strategy() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9_ -]{0,32}"
}

fn radiotap_strategy() -> impl Strategy<Value = RadiotapInfo> {
    (
        prop::option::of(-120i8..=0),
        prop::option::of(2400u16..=2500),
        any::<bool>(),
    )
        .prop_map(|(signal, channel, fcs)| RadiotapInfo::new(signal, channel, fcs))
}

fn beacon_strategy() -> impl Strategy<Value = BeaconFrame> {
    (
        mac_strategy(),
        mac_strategy(),
        ssid_strategy(),
        1u16..=u16::MAX,
        any::<u16>(),
        any::<u64>(),
        0u16..4096,
        prop::collection::vec(
            (1u8..=255, prop::collection::vec(any::<u8>(), 0..64)),
            0..4,
        ),
    )
        .prop_map(
            |(bssid, destination, ssid, interval, capability, timestamp, seq, extra)| {
                BeaconFrame {
                    mac: MacHeader {
                        frame_type: FrameType::Management,
                        frame_subtype: BEACON_SUBTYPE,
                        bssid,
                        source: bssid,
                        destination,
                        sequence_number: seq,
                    },
                    body: BeaconBody {
                        ap_timestamp: timestamp,
                        beacon_interval_tu: interval,
                        capability,
                        ssid,
                        extra_elements: extra,
                    },
                }
            },
        )
}

fn measurement_stream_strategy() -> impl Strategy<Value = Vec<RssMeasurement>> {
    // up to 4 distinct APs, each beaconing at the nominal cadence with a
    // fixed sub-window offset, interleaved and time-sorted
    prop::collection::btree_map(1u8..=4, (0u64..102_400, 1usize..40), 1..4).prop_map(|aps| {
        let mut all = Vec::new();
        for (n, (offset, count)) in aps {
            for k in 0..count as u64 {
                all.push(RssMeasurement {
                    capture_time_us: k * 102_400 + offset,
                    bssid: MacAddr([0xaa, 0xbb, 0xcc, 0xdd, 0xee, n]),
                    ssid: format!("AP{n}"),
                    rssi_dbm: -60,
                    channel: Some(6),
                });
            }
        }
        all.sort_by_key(|m| m.capture_time_us);
        all
    })
}

proptest! {
    #[test]
    fn codec_round_trip_is_identity(frame in beacon_strategy(), info in radiotap_strategy()) {
        let bytes = encode_beacon(&frame, &info).unwrap();
        let (decoded_info, decoded_frame) = decode_frame(&bytes).unwrap();
        prop_assert_eq!(&decoded_info, &info);
        prop_assert_eq!(&decoded_frame, &frame);
        // re-encode is byte-identical
        prop_assert_eq!(encode_beacon(&decoded_frame, &decoded_info).unwrap(), bytes);
    }

    #[test]
    fn decoders_total_on_arbitrary_bytes(bytes in prop::collection::vec(any::<u8>(), 0..120)) {
        // a value or a typed error, never a panic
        let _ = decode_radiotap(&bytes);
        let _ = decode_beacon(&bytes);
        let _ = decode_frame(&bytes);
    }

    #[test]
    fn card_filters_thin_without_inventing(stream in measurement_stream_strategy(), interval in 100u32..=2000) {
        let kept = apply_card_filters(&stream, None, None, interval);
        // output is a subsequence of the input
        let mut cursor = stream.iter();
        for k in &kept {
            prop_assert!(cursor.any(|m| m == k));
        }
        // at most one survivor per (bssid, window)
        let window_us = interval as u64 * 1024;
        let mut seen = std::collections::HashSet::new();
        for m in &kept {
            prop_assert!(seen.insert((m.bssid, m.capture_time_us / window_us)));
        }
    }

    #[test]
    fn identity_interval_is_identity(stream in measurement_stream_strategy()) {
        // per-AP nominal spacing means 100 TU windows each hold one sample
        prop_assert_eq!(apply_card_filters(&stream, None, None, 100), stream);
    }

    #[test]
    fn demux_preserves_the_multiset(stream in measurement_stream_strategy()) {
        let series = demux_by_ap(&stream, 200.0);
        let mut recombined: Vec<_> = series.iter().flat_map(|s| s.measurements.clone()).collect();
        recombined.sort_by_key(|m| (m.capture_time_us, m.bssid));
        let mut input = stream.clone();
        input.sort_by_key(|m| (m.capture_time_us, m.bssid));
        prop_assert_eq!(recombined, input);
        for s in &series {
            prop_assert!(s.measurements.iter().all(|m| m.bssid == s.bssid));
            prop_assert!(s.measurements.windows(2).all(|w| w[0].capture_time_us <= w[1].capture_time_us));
        }
    }

    #[test]
    fn histogram_is_normalized(intervals in prop::collection::vec(0.1f64..5000.0, 1..200), width in 10.0f64..500.0) {
        let table = interval_histogram(&intervals, width).unwrap();
        let total: u64 = table.bins.iter().map(|b| b.count).sum();
        prop_assert_eq!(total as usize, intervals.len());
        let pdf_sum: f64 = table.bins.iter().map(|b| b.pdf).sum();
        prop_assert!((pdf_sum - 1.0).abs() < 1e-9);
        prop_assert!(table.bins.windows(2).all(|w| w[0].cdf <= w[1].cdf));
        prop_assert!((table.bins.last().unwrap().cdf - 1.0).abs() < 1e-9);
    }

    #[test]
    fn miss_rate_is_strictly_decreasing(a in 0.0f64..9.765625, b in 0.0f64..9.765625) {
        prop_assume!(a < b);
        prop_assert!(miss_rate(a, CaptureMode::Monitor) > miss_rate(b, CaptureMode::Monitor));
    }

    #[test]
    fn rate_times_duration_recovers_the_count(n in 0u64..500, duration in 1u32..2000) {
        let series = series_of_n(n, duration as f64);
        let rate = average_rate(&series).unwrap();
        let recovered = rate * series.session_duration_s;
        let expected = series.measurements.len() as f64;
        prop_assert!((recovered - expected).abs() <= 1e-9 * expected.max(1.0));
    }
}

fn series_of_n(n: u64, duration_s: f64) -> ApSeries {
    ApSeries {
        bssid: MacAddr([0xaa, 0xbb, 0xcc, 0xdd, 0xee, 0x01]),
        ssid: "AP1".into(),
        measurements: (0..n)
            .map(|k| RssMeasurement {
                capture_time_us: k * 1000,
                bssid: MacAddr([0xaa, 0xbb, 0xcc, 0xdd, 0xee, 0x01]),
                ssid: "AP1".into(),
                rssi_dbm: -60,
                channel: Some(6),
            })
            .collect(),
        session_duration_s: duration_s,
    }
}

#[test]
fn rate_identity_is_exact_for_session_values() {
    for (n, duration) in [(1953u64, 200.0), (952, 200.0), (196, 200.0), (195, 200.0)] {
        let rate = average_rate(&series_of_n(n, duration)).unwrap();
        assert_eq!(rate * duration, n as f64);
    }
}

fn single_ap_config(loss: LossModel, jitter_us: u64, seed: u64) -> ScenarioConfig {
    ScenarioConfig {
        mode: CaptureMode::Monitor,
        duration_s: 20.0,
        n_sessions: 1,
        aps: vec![ApConfig {
            bssid: MacAddr([0xaa, 0xbb, 0xcc, 0xdd, 0xee, 0x01]),
            ssid: "AP1".into(),
            channel: 6,
            rssi_mean_dbm: -60,
            rssi_jitter_db: 0,
            loss,
        }],
        timing_jitter_us: jitter_us,
        seed,
    }
}

/// Summing the gap-based estimates recovers the true drop count whenever
/// drops are interior and non-adjacent; runs violating that precondition
/// are skipped, the rest must agree exactly with the simulator's truth.
#[test]
fn missed_packet_estimates_match_ground_truth() {
    let mut checked = 0;
    for seed in 0..40u64 {
        let jitter = if seed % 2 == 0 { 0 } else { 2000 };
        let config = single_ap_config(
            LossModel {
                bernoulli_p: 0.05,
                burst: None,
            },
            jitter,
            seed,
        );
        let (timeline, truth) = simulate_timeline(&config, 0).unwrap();
        let per_ap = config.scheduled_per_ap();
        let interior_non_adjacent = truth
            .drop_indices
            .windows(2)
            .all(|w| w[1] > w[0] + 1)
            && !truth.drop_indices.contains(&0)
            && !truth.drop_indices.contains(&(per_ap - 1));
        if !interior_non_adjacent || truth.drop_indices.is_empty() {
            continue;
        }
        let series = demux_by_ap(&timeline, config.duration_s);
        let estimated: u64 = inter_arrival(&series[0])
            .iter()
            .map(|&gap| estimate_missed_packets(gap, 102.4))
            .sum();
        assert_eq!(
            estimated,
            truth.drop_indices.len() as u64,
            "seed {seed}: estimated {estimated} vs dropped {}",
            truth.drop_indices.len()
        );
        checked += 1;
    }
    assert!(checked >= 5, "too few runs met the precondition: {checked}");
}

/// Mean rate over repeated sessions stays within three binomial standard
/// errors of `(1 - p_total) · theoretical_max` for a combined
/// Bernoulli + burst model.
#[test]
fn rate_law_holds_for_combined_loss() {
    let loss = LossModel {
        bernoulli_p: 0.2,
        burst: Some(beaconrate::sim::BurstParams {
            p_good_to_bad: 0.2,
            p_bad_to_good: 0.6,
            loss_in_bad: 0.5,
        }),
    };
    let p_total = loss.total_loss();
    let mut config = single_ap_config(loss, 0, 7);
    config.duration_s = 200.0;
    config.n_sessions = 10;

    let n_sessions = 10u32;
    let mut rates = Vec::new();
    for session in 0..n_sessions {
        let (timeline, _) = simulate_timeline(&config, session).unwrap();
        rates.push(timeline.len() as f64 / config.duration_s);
    }
    let mean: f64 = rates.iter().sum::<f64>() / rates.len() as f64;
    let expected = (1.0 - p_total) * CaptureMode::Monitor.theoretical_max_pps();

    let per_ap = config.scheduled_per_ap() as f64;
    let sigma = (per_ap * p_total * (1.0 - p_total)).sqrt()
        / config.duration_s
        / (n_sessions as f64).sqrt();
    assert!(
        (mean - expected).abs() <= 3.0 * sigma,
        "mean {mean} vs expected {expected} (3σ = {})",
        3.0 * sigma
    );
}

/// Decode totality on structured garbage: valid frames with bytes flipped.
#[test]
fn mutated_frames_never_panic() {
    let frame = BeaconFrame {
        mac: MacHeader {
            frame_type: FrameType::Management,
            frame_subtype: BEACON_SUBTYPE,
            bssid: MacAddr([2; 6]),
            source: MacAddr([2; 6]),
            destination: MacAddr::BROADCAST,
            sequence_number: 1,
        },
        body: BeaconBody {
            ap_timestamp: 7,
            beacon_interval_tu: 100,
            capability: 0x0431,
            ssid: "Mutant".into(),
            extra_elements: vec![(3, vec![6])],
        },
    };
    let info = RadiotapInfo::new(Some(-60), Some(2437), false);
    let clean = encode_beacon(&frame, &info).unwrap();
    for position in 0..clean.len() {
        for flip in [0x01u8, 0x80, 0xff] {
            let mut corrupted = clean.clone();
            corrupted[position] ^= flip;
            let _ = decode_frame(&corrupted);
        }
    }
}

#[test]
fn pdf_mass_in_range_helper_counts_bins() {
    let table = interval_histogram(&[102.4, 512.0, 512.0, 2048.0], 100.0).unwrap();
    assert_eq!(table.count_in_range(500.0, 600.0), 2);
    assert_eq!(table.count_in_range(2000.0, 2100.0), 1);
    assert_eq!(table.count_in_range(300.0, 500.0), 0);
    let _ = metrics::session_stats(&series_of_n(3, 10.0), CaptureMode::Monitor, 1.0).unwrap();
}
