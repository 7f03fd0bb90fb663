//! Beacon-frame RSS measurement toolkit.
//!
//! Wireless fingerprinting surveys live and die by how often the WLAN card
//! hands the host an RSS sample. This crate provides the pieces needed to
//! study that rate offline: a bit-exact codec for radiotap-prefixed 802.11
//! beacon frames ([`frame`]), classic pcap reading/writing and per-AP
//! measurement streams ([`pcap`], [`ingest`]), arrival-rate and availability
//! statistics with histogram/PDF/CDF tables ([`metrics`], [`report`]), and a
//! deterministic seeded beacon-arrival simulator that synthesizes valid
//! captures for the standard test scenarios ([`sim`]).

pub mod frame;
pub mod ingest;
pub mod metrics;
pub mod pcap;
pub mod report;
pub mod sim;

pub use frame::{
    BeaconBody, BeaconFrame, DecodeError, EncodeError, FrameType, MacAddr, MacHeader,
    RadiotapInfo, RssMeasurement,
};
pub use ingest::{ApSeries, DecodeStats};
pub use metrics::{AggregateStats, CaptureMode, DistributionTable, MetricsError, SessionStats};
pub use pcap::{CaptureMeta, LinkType, PcapError, PcapRecord};
pub use report::{ComparisonTable, ReportRow, ReportTable};
pub use sim::{ApConfig, BurstParams, GroundTruth, LossModel, ScenarioConfig, SimError};
