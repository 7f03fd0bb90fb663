//! Codec for radiotap-prefixed 802.11 beacon frames.
//!
//! Monitor-mode captures prepend a radiotap header to every frame; the
//! per-frame antenna signal it carries is the RSS sample this whole toolkit
//! is about. Only version-0 radiotap and the beacon subset of management
//! frames are understood: everything else decodes to a typed error so a
//! dirty capture can be skipped record by record. All multi-byte fields are
//! little-endian per the radiotap and 802.11 conventions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fixed radiotap preamble: version, pad, length, first presence word.
const RADIOTAP_PREAMBLE_LEN: usize = 8;
/// Presence bit marking a return to the default namespace.
const BIT_NS_RESET: u32 = 29;
/// Presence bit announcing a vendor namespace.
const BIT_VENDOR_NS: u32 = 30;
/// Presence bit announcing another presence word follows.
const BIT_EXT: u32 = 31;
/// Radiotap `Flags` bit: frame includes an FCS at the end.
const FLAG_FCS_AT_END: u8 = 0x10;
/// Channel flags emitted on encode: 2 GHz spectrum, dynamic CCK-OFDM.
const CHANNEL_FLAGS_2GHZ: u16 = 0x0480;

/// Management-frame subtype code for beacons.
pub const BEACON_SUBTYPE: u8 = 8;
/// Maximum SSID length in bytes.
pub const MAX_SSID_LEN: usize = 32;

const MGMT_HEADER_LEN: usize = 24;
const BEACON_FIXED_LEN: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    /// Radiotap version other than 0.
    #[error("unsupported radiotap version {0}")]
    UnsupportedVersion(u8),
    /// Radiotap length field exceeds the input (or is shorter than the preamble).
    #[error("radiotap header truncated or length field exceeds input")]
    TruncatedHeader,
    /// Frame ends before the management header and fixed fields are complete.
    #[error("frame truncated")]
    TruncatedFrame,
    /// Not a management/beacon frame; the caller should skip it, not abort.
    #[error("not a beacon frame")]
    NotABeacon,
    /// A tagged element's declared length overruns the buffer.
    #[error("malformed tagged element")]
    MalformedElement,
    /// No antenna-signal field: the frame counts but yields no RSS sample.
    #[error("radiotap header carries no antenna signal")]
    MissingSignal,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("invalid frame: {0}")]
    InvalidFrame(&'static str),
}

/// A 48-bit IEEE MAC address.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MacAddr(pub [u8; 6]);

impl MacAddr {
    pub const BROADCAST: MacAddr = MacAddr([0xff; 6]);

    pub fn octets(&self) -> [u8; 6] {
        self.0
    }

    /// Compact hex form without separators, handy for file names.
    pub fn to_flat_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for MacAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = &self.0;
        write!(
            f,
            "{:02x}:{:02x}:{:02x}:{:02x}:{:02x}:{:02x}",
            o[0], o[1], o[2], o[3], o[4], o[5]
        )
    }
}

impl fmt::Debug for MacAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid MAC address syntax")]
pub struct MacAddrParseError;

impl FromStr for MacAddr {
    type Err = MacAddrParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut octets = [0u8; 6];
        let mut parts = s.split(':');
        for octet in octets.iter_mut() {
            let part = parts.next().ok_or(MacAddrParseError)?;
            *octet = u8::from_str_radix(part, 16).map_err(|_| MacAddrParseError)?;
        }
        if parts.next().is_some() {
            return Err(MacAddrParseError);
        }
        Ok(MacAddr(octets))
    }
}

impl Serialize for MacAddr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MacAddr {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Visitor;
        impl serde::de::Visitor<'_> for Visitor {
            type Value = MacAddr;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a MAC address like aa:bb:cc:dd:ee:ff")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<MacAddr, E> {
                v.parse().map_err(E::custom)
            }
        }
        deserializer.deserialize_str(Visitor)
    }
}

/// The 2-bit frame type from the frame-control field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameType {
    Management,
    Control,
    Data,
    Extension,
}

impl FrameType {
    pub fn from_bits(bits: u8) -> FrameType {
        match bits & 0b11 {
            0 => FrameType::Management,
            1 => FrameType::Control,
            2 => FrameType::Data,
            _ => FrameType::Extension,
        }
    }

    pub fn bits(self) -> u8 {
        match self {
            FrameType::Management => 0,
            FrameType::Control => 1,
            FrameType::Data => 2,
            FrameType::Extension => 3,
        }
    }
}

/// Fields extracted from a version-0 radiotap header.
///
/// `header_length` locates the start of the MAC frame for the caller.
/// `channel_mhz` is kept raw; [`channel_from_mhz`] flags out-of-band values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiotapInfo {
    pub header_length: usize,
    pub antenna_signal_dbm: Option<i8>,
    pub channel_mhz: Option<u16>,
    pub flags_fcs_present: bool,
}

impl RadiotapInfo {
    /// Builds an info block with the canonical header length for the layout
    /// [`encode_beacon`] emits (preamble, optional flags, aligned channel,
    /// antenna signal).
    pub fn new(
        antenna_signal_dbm: Option<i8>,
        channel_mhz: Option<u16>,
        flags_fcs_present: bool,
    ) -> RadiotapInfo {
        let mut len = RADIOTAP_PREAMBLE_LEN;
        if flags_fcs_present {
            len += 1;
        }
        if channel_mhz.is_some() {
            len += len & 1; // channel field is 2-byte aligned
            len += 4;
        }
        if antenna_signal_dbm.is_some() {
            len += 1;
        }
        RadiotapInfo {
            header_length: len,
            antenna_signal_dbm,
            channel_mhz,
            flags_fcs_present,
        }
    }
}

/// The management-frame header fields a beacon consumer cares about.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacHeader {
    pub frame_type: FrameType,
    pub frame_subtype: u8,
    pub bssid: MacAddr,
    pub source: MacAddr,
    pub destination: MacAddr,
    /// 12-bit counter from the sequence-control field.
    pub sequence_number: u16,
}

/// Beacon frame body: fixed fields plus tagged elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeaconBody {
    /// AP timestamp (TSF), microseconds.
    pub ap_timestamp: u64,
    /// Advertised beacon interval in time units of 1024 µs. Nominal 100.
    pub beacon_interval_tu: u16,
    pub capability: u16,
    /// 0–32 bytes; empty for hidden networks.
    pub ssid: String,
    /// Non-SSID tagged elements, preserved verbatim in order.
    pub extra_elements: Vec<(u8, Vec<u8>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeaconFrame {
    pub mac: MacHeader,
    pub body: BeaconBody,
}

impl BeaconFrame {
    fn validate(&self) -> Result<(), &'static str> {
        if self.mac.frame_type != FrameType::Management || self.mac.frame_subtype != BEACON_SUBTYPE
        {
            return Err("frame type/subtype is not management/beacon");
        }
        if self.mac.bssid != self.mac.source {
            return Err("beacon bssid must equal source");
        }
        if self.mac.sequence_number >= 1 << 12 {
            return Err("sequence number exceeds 12 bits");
        }
        if self.body.ssid.len() > MAX_SSID_LEN {
            return Err("ssid exceeds 32 bytes");
        }
        if self.body.beacon_interval_tu == 0 {
            return Err("beacon interval must be at least 1 TU");
        }
        if self
            .body
            .extra_elements
            .iter()
            .any(|(_, data)| data.len() > u8::MAX as usize)
        {
            return Err("tagged element exceeds 255 bytes");
        }
        Ok(())
    }
}

/// One timestamped RSS observation attributed to an AP.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RssMeasurement {
    /// Microseconds since the capture epoch; nondecreasing within one stream.
    pub capture_time_us: u64,
    pub bssid: MacAddr,
    pub ssid: String,
    /// Signed dBm in [-120, 0].
    pub rssi_dbm: i8,
    /// 2.4 GHz channel 1–11, or `None` when unknown/out-of-band.
    pub channel: Option<u8>,
}

/// Maps a 2.4 GHz center frequency to channels 1–11 (2407 + 5·n MHz).
pub fn channel_from_mhz(mhz: u16) -> Option<u8> {
    if (2412..=2462).contains(&mhz) && (mhz - 2407).is_multiple_of(5) {
        Some(((mhz - 2407) / 5) as u8)
    } else {
        None
    }
}

/// Inverse of [`channel_from_mhz`] on channels 1–11.
pub fn mhz_from_channel(channel: u8) -> Option<u16> {
    (1..=11).contains(&channel).then(|| 2407 + 5 * channel as u16)
}

// (size, alignment) for the defined radiotap presence bits. Alignment is
// relative to the start of the radiotap header. Bits past the table have
// unknown layout, so field extraction stops there.
fn field_layout(bit: u32) -> Option<(usize, usize)> {
    Some(match bit {
        0 => (8, 8),   // TSFT
        1 => (1, 1),   // flags
        2 => (1, 1),   // rate
        3 => (4, 2),   // channel: freq + flags
        4 => (2, 2),   // FHSS
        5 => (1, 1),   // dBm antenna signal
        6 => (1, 1),   // dBm antenna noise
        7 => (2, 2),   // lock quality
        8 => (2, 2),   // TX attenuation
        9 => (2, 2),   // dB TX attenuation
        10 => (1, 1),  // dBm TX power
        11 => (1, 1),  // antenna
        12 => (1, 1),  // dB antenna signal
        13 => (1, 1),  // dB antenna noise
        14 => (2, 2),  // RX flags
        15 => (2, 2),  // TX flags
        16 => (1, 1),  // RTS retries
        17 => (1, 1),  // data retries
        18 => (8, 4),  // XChannel
        19 => (3, 1),  // MCS
        20 => (8, 4),  // A-MPDU status
        21 => (12, 2), // VHT
        22 => (12, 8), // timestamp
        _ => return None,
    })
}

fn align_up(pos: usize, align: usize) -> usize {
    pos + (align - pos % align) % align
}

/// Parses a version-0 radiotap header, extracting the antenna signal
/// (presence bit 5) and channel (bit 3) when present.
///
/// Extended presence words (bit 31) are honored; vendor namespaces (bit 30)
/// are skipped via their length field and never interpreted. Unknown fields
/// end extraction gracefully: the header length is still returned so the
/// caller can locate the MAC frame.
pub fn decode_radiotap(bytes: &[u8]) -> Result<RadiotapInfo, DecodeError> {
    if bytes.len() < RADIOTAP_PREAMBLE_LEN {
        return Err(DecodeError::TruncatedHeader);
    }
    match bytes[0] {
        0 => {}
        v => return Err(DecodeError::UnsupportedVersion(v)),
    }
    let header_length = u16::from_le_bytes([bytes[2], bytes[3]]) as usize;
    if header_length < RADIOTAP_PREAMBLE_LEN || header_length > bytes.len() {
        return Err(DecodeError::TruncatedHeader);
    }

    let mut present = Vec::new();
    let mut pos = 4;
    loop {
        if pos + 4 > header_length {
            return Err(DecodeError::TruncatedHeader);
        }
        let word = u32::from_le_bytes(bytes[pos..pos + 4].try_into().unwrap());
        pos += 4;
        present.push(word);
        if word & (1 << BIT_EXT) == 0 {
            break;
        }
    }

    let mut info = RadiotapInfo {
        header_length,
        antenna_signal_dbm: None,
        channel_mhz: None,
        flags_fcs_present: false,
    };
    let mut in_default_ns = true;
    'walk: for word in &present {
        for bit in 0..32u32 {
            if word & (1 << bit) == 0 {
                continue;
            }
            match bit {
                BIT_NS_RESET => in_default_ns = true,
                BIT_VENDOR_NS => {
                    // 6-byte descriptor (OUI, sub-namespace, skip length),
                    // then skip-length bytes of opaque vendor data.
                    pos = align_up(pos, 2);
                    if pos + 6 > header_length {
                        break 'walk;
                    }
                    let skip = u16::from_le_bytes([bytes[pos + 4], bytes[pos + 5]]) as usize;
                    pos += 6;
                    if pos + skip > header_length {
                        break 'walk;
                    }
                    pos += skip;
                    in_default_ns = false;
                }
                BIT_EXT => {}
                bit => {
                    if !in_default_ns {
                        continue;
                    }
                    let Some((size, align)) = field_layout(bit) else {
                        break 'walk;
                    };
                    pos = align_up(pos, align);
                    if pos + size > header_length {
                        break 'walk;
                    }
                    match bit {
                        1 => info.flags_fcs_present = bytes[pos] & FLAG_FCS_AT_END != 0,
                        3 if info.channel_mhz.is_none() => {
                            info.channel_mhz =
                                Some(u16::from_le_bytes([bytes[pos], bytes[pos + 1]]));
                        }
                        5 if info.antenna_signal_dbm.is_none() => {
                            info.antenna_signal_dbm = Some((bytes[pos] as i8).clamp(-120, 0));
                        }
                        _ => {}
                    }
                    pos += size;
                }
            }
        }
    }
    Ok(info)
}

/// Parses an 802.11 management frame starting at the MAC header (radiotap
/// already stripped) and rejects anything that is not a beacon.
///
/// The SSID comes from the first element with id 0; all other tagged
/// elements are preserved verbatim in order. Degenerate field values (e.g.
/// a zero beacon interval) are returned as-is; validity is enforced on
/// encode, not decode.
pub fn decode_beacon(bytes: &[u8]) -> Result<BeaconFrame, DecodeError> {
    if bytes.len() < 2 {
        return Err(DecodeError::TruncatedFrame);
    }
    let fc = u16::from_le_bytes([bytes[0], bytes[1]]);
    let frame_type = FrameType::from_bits(((fc >> 2) & 0b11) as u8);
    let frame_subtype = ((fc >> 4) & 0b1111) as u8;
    if frame_type != FrameType::Management || frame_subtype != BEACON_SUBTYPE {
        return Err(DecodeError::NotABeacon);
    }
    if bytes.len() < MGMT_HEADER_LEN + BEACON_FIXED_LEN {
        return Err(DecodeError::TruncatedFrame);
    }

    let addr = |off: usize| MacAddr(bytes[off..off + 6].try_into().unwrap());
    let destination = addr(4);
    let source = addr(10);
    let bssid = addr(16);
    let seq_ctrl = u16::from_le_bytes([bytes[22], bytes[23]]);

    let ap_timestamp = u64::from_le_bytes(bytes[24..32].try_into().unwrap());
    let beacon_interval_tu = u16::from_le_bytes([bytes[32], bytes[33]]);
    let capability = u16::from_le_bytes([bytes[34], bytes[35]]);

    let mut ssid = None;
    let mut extra_elements = Vec::new();
    let mut off = MGMT_HEADER_LEN + BEACON_FIXED_LEN;
    while off < bytes.len() {
        if off + 2 > bytes.len() {
            return Err(DecodeError::MalformedElement);
        }
        let id = bytes[off];
        let len = bytes[off + 1] as usize;
        if off + 2 + len > bytes.len() {
            return Err(DecodeError::MalformedElement);
        }
        let data = &bytes[off + 2..off + 2 + len];
        if id == 0 && ssid.is_none() {
            if len > MAX_SSID_LEN {
                return Err(DecodeError::MalformedElement);
            }
            ssid = Some(String::from_utf8_lossy(data).into_owned());
        } else {
            extra_elements.push((id, data.to_vec()));
        }
        off += 2 + len;
    }

    Ok(BeaconFrame {
        mac: MacHeader {
            frame_type,
            frame_subtype,
            bssid,
            source,
            destination,
            sequence_number: seq_ctrl >> 4,
        },
        body: BeaconBody {
            ap_timestamp,
            beacon_interval_tu,
            capability,
            ssid: ssid.unwrap_or_default(),
            extra_elements,
        },
    })
}

fn encode_radiotap(info: &RadiotapInfo) -> Vec<u8> {
    let mut present = 0u32;
    if info.flags_fcs_present {
        present |= 1 << 1;
    }
    if info.channel_mhz.is_some() {
        present |= 1 << 3;
    }
    if info.antenna_signal_dbm.is_some() {
        present |= 1 << 5;
    }
    let mut buf = vec![0u8; RADIOTAP_PREAMBLE_LEN];
    buf[4..8].copy_from_slice(&present.to_le_bytes());
    if info.flags_fcs_present {
        buf.push(FLAG_FCS_AT_END);
    }
    if let Some(mhz) = info.channel_mhz {
        if !buf.len().is_multiple_of(2) {
            buf.push(0);
        }
        buf.extend_from_slice(&mhz.to_le_bytes());
        buf.extend_from_slice(&CHANNEL_FLAGS_2GHZ.to_le_bytes());
    }
    if let Some(dbm) = info.antenna_signal_dbm {
        buf.push(dbm as u8);
    }
    let len = buf.len() as u16;
    buf[2..4].copy_from_slice(&len.to_le_bytes());
    buf
}

/// Emits radiotap header + MAC header + fixed fields + SSID element +
/// extra elements; appends a CRC-32 FCS when the info block says one is
/// present. `decode_frame(encode_beacon(f, i)) == (i, f)` for every valid
/// input, and re-encoding the decoded frame is byte-identical.
pub fn encode_beacon(frame: &BeaconFrame, info: &RadiotapInfo) -> Result<Vec<u8>, EncodeError> {
    frame.validate().map_err(EncodeError::InvalidFrame)?;
    if let Some(dbm) = info.antenna_signal_dbm {
        if !(-120..=0).contains(&dbm) {
            return Err(EncodeError::InvalidFrame("antenna signal outside [-120, 0] dBm"));
        }
    }
    let canonical = RadiotapInfo::new(
        info.antenna_signal_dbm,
        info.channel_mhz,
        info.flags_fcs_present,
    );
    if info.header_length != canonical.header_length {
        return Err(EncodeError::InvalidFrame("radiotap header length is not canonical"));
    }

    let mut out = encode_radiotap(info);
    let mac_start = out.len();
    let fc = ((frame.mac.frame_subtype as u16) << 4) | ((frame.mac.frame_type.bits() as u16) << 2);
    out.extend_from_slice(&fc.to_le_bytes());
    out.extend_from_slice(&0u16.to_le_bytes()); // duration
    out.extend_from_slice(&frame.mac.destination.0);
    out.extend_from_slice(&frame.mac.source.0);
    out.extend_from_slice(&frame.mac.bssid.0);
    out.extend_from_slice(&(frame.mac.sequence_number << 4).to_le_bytes());

    out.extend_from_slice(&frame.body.ap_timestamp.to_le_bytes());
    out.extend_from_slice(&frame.body.beacon_interval_tu.to_le_bytes());
    out.extend_from_slice(&frame.body.capability.to_le_bytes());
    out.push(0);
    out.push(frame.body.ssid.len() as u8);
    out.extend_from_slice(frame.body.ssid.as_bytes());
    for (id, data) in &frame.body.extra_elements {
        out.push(*id);
        out.push(data.len() as u8);
        out.extend_from_slice(data);
    }

    if info.flags_fcs_present {
        let crc = crc32fast::hash(&out[mac_start..]);
        out.extend_from_slice(&crc.to_le_bytes());
    }
    Ok(out)
}

/// Decodes a whole monitor-mode packet: radiotap header, then the beacon
/// behind it. The trailing 4-byte FCS is stripped (not verified) when the
/// radiotap flags say one is present; see [`verify_fcs`] for explicit checks.
pub fn decode_frame(packet: &[u8]) -> Result<(RadiotapInfo, BeaconFrame), DecodeError> {
    let info = decode_radiotap(packet)?;
    let mut body = &packet[info.header_length..];
    if info.flags_fcs_present {
        if body.len() < 4 {
            return Err(DecodeError::TruncatedFrame);
        }
        body = &body[..body.len() - 4];
    }
    let frame = decode_beacon(body)?;
    Ok((info, frame))
}

/// Checks the trailing CRC-32 FCS of a MAC frame (header + body + FCS).
pub fn verify_fcs(mac_frame: &[u8]) -> bool {
    if mac_frame.len() < 4 {
        return false;
    }
    let (body, fcs) = mac_frame.split_at(mac_frame.len() - 4);
    crc32fast::hash(body).to_le_bytes() == fcs
}

/// Converts a decoded beacon into an RSS measurement.
///
/// Errors with [`DecodeError::MissingSignal`] when the radiotap header has
/// no antenna-signal field; the frame still counts as decoded, it just
/// yields no sample.
pub fn to_measurement(
    frame: &BeaconFrame,
    info: &RadiotapInfo,
    capture_time_us: u64,
) -> Result<RssMeasurement, DecodeError> {
    let rssi_dbm = info.antenna_signal_dbm.ok_or(DecodeError::MissingSignal)?;
    Ok(RssMeasurement {
        capture_time_us,
        bssid: frame.mac.bssid,
        ssid: frame.body.ssid.clone(),
        rssi_dbm,
        channel: info.channel_mhz.and_then(channel_from_mhz),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_beacon(ssid: &str, rssi: i8) -> (BeaconFrame, RadiotapInfo) {
        let ap = MacAddr([0xaa, 0xbb, 0xcc, 0xdd, 0xee, 0x01]);
        let frame = BeaconFrame {
            mac: MacHeader {
                frame_type: FrameType::Management,
                frame_subtype: BEACON_SUBTYPE,
                bssid: ap,
                source: ap,
                destination: MacAddr::BROADCAST,
                sequence_number: 7,
            },
            body: BeaconBody {
                ap_timestamp: 1_024_000,
                beacon_interval_tu: 100,
                capability: 0x0431,
                ssid: ssid.to_string(),
                extra_elements: vec![(3, vec![6])],
            },
        };
        let info = RadiotapInfo::new(Some(rssi), Some(2437), false);
        (frame, info)
    }

    #[test]
    fn minimal_radiotap_header() {
        let bytes = [0x00, 0x00, 0x08, 0x00, 0x00, 0x00, 0x00, 0x00];
        let info = decode_radiotap(&bytes).unwrap();
        assert_eq!(info.header_length, 8);
        assert_eq!(info.antenna_signal_dbm, None);
        assert_eq!(info.channel_mhz, None);
        assert!(!info.flags_fcs_present);
    }

    #[test]
    fn antenna_signal_is_twos_complement() {
        // present bit 5 only; 0xC4 = 196 unsigned = 196 - 256 = -60 signed
        let bytes = [0x00, 0x00, 0x09, 0x00, 0x20, 0x00, 0x00, 0x00, 0xC4];
        let info = decode_radiotap(&bytes).unwrap();
        assert_eq!(info.antenna_signal_dbm, Some(-60));
    }

    #[test]
    fn declared_length_beyond_input_is_truncated() {
        let mut bytes = vec![0u8; 20];
        bytes[2] = 64; // length field says 64, we only have 20
        assert_eq!(decode_radiotap(&bytes), Err(DecodeError::TruncatedHeader));
    }

    #[test]
    fn nonzero_version_rejected() {
        let bytes = [0x01, 0x00, 0x08, 0x00, 0x00, 0x00, 0x00, 0x00];
        assert_eq!(decode_radiotap(&bytes), Err(DecodeError::UnsupportedVersion(1)));
    }

    #[test]
    fn extended_presence_word_chained() {
        // word 0 only chains (bit 31); word 1 carries the signal bit
        let mut bytes = vec![0x00, 0x00, 13, 0x00];
        bytes.extend_from_slice(&(1u32 << 31).to_le_bytes());
        bytes.extend_from_slice(&(1u32 << 5).to_le_bytes());
        bytes.push(0xB0); // -80 dBm
        let info = decode_radiotap(&bytes).unwrap();
        assert_eq!(info.header_length, 13);
        assert_eq!(info.antenna_signal_dbm, Some(-80));
    }

    #[test]
    fn dissects_a_real_monitor_capture_header() {
        // 56-byte header off the wire, reference dissection: two presence
        // words, TSFT/flags/rate/channel/signal/noise/antenna plus two
        // Broadcom vendor namespaces; flags 0x12 (FCS at end), channel
        // 2437 MHz, antenna signal -76 dBm
        let hex = "000038006f0800c001000040040030309de59b040000000012308509\
                   8004b4a7008700101800030002000000001018030600400002000000";
        let bytes: Vec<u8> = (0..hex.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&hex[i..i + 2], 16).unwrap())
            .collect();
        let info = decode_radiotap(&bytes).unwrap();
        assert_eq!(info.header_length, 56);
        assert_eq!(info.antenna_signal_dbm, Some(-76));
        assert_eq!(info.channel_mhz, Some(2437));
        assert!(info.flags_fcs_present);
    }

    #[test]
    fn vendor_namespace_skipped_by_length() {
        // signal, then a vendor namespace carrying 2 opaque bytes
        let present = (1u32 << 5) | (1 << BIT_VENDOR_NS);
        let mut bytes = vec![0x00, 0x00, 0x00, 0x00];
        bytes.extend_from_slice(&present.to_le_bytes());
        bytes.push(0xC4); // signal at offset 8
        bytes.push(0); // pad to align 2 for the vendor descriptor
        bytes.extend_from_slice(&[0x00, 0x10, 0x18, 0x00]); // OUI + sub-ns
        bytes.extend_from_slice(&2u16.to_le_bytes()); // skip length
        bytes.extend_from_slice(&[0xde, 0xad]);
        let len = bytes.len() as u16;
        bytes[2..4].copy_from_slice(&len.to_le_bytes());
        let info = decode_radiotap(&bytes).unwrap();
        assert_eq!(info.antenna_signal_dbm, Some(-60));
    }

    #[test]
    fn fcs_flag_detected_and_stripped() {
        let (frame, _) = sample_beacon("AP1", -60);
        let info = RadiotapInfo::new(Some(-60), Some(2437), true);
        let bytes = encode_beacon(&frame, &info).unwrap();
        let (decoded_info, decoded) = decode_frame(&bytes).unwrap();
        assert!(decoded_info.flags_fcs_present);
        assert_eq!(decoded, frame);
        assert!(verify_fcs(&bytes[decoded_info.header_length..]));
    }

    #[test]
    fn beacon_round_trip() {
        let (frame, info) = sample_beacon("AP1", -60);
        let bytes = encode_beacon(&frame, &info).unwrap();
        let (decoded_info, decoded) = decode_frame(&bytes).unwrap();
        assert_eq!(decoded_info, info);
        assert_eq!(decoded, frame);
        assert_eq!(decoded.body.ssid, "AP1");
        assert_eq!(decoded.body.beacon_interval_tu, 100);
        // re-encode is byte-identical
        assert_eq!(encode_beacon(&decoded, &decoded_info).unwrap(), bytes);
    }

    #[test]
    fn data_frame_is_not_a_beacon() {
        let (frame, info) = sample_beacon("AP1", -60);
        let mut bytes = encode_beacon(&frame, &info).unwrap();
        let mac_start = info.header_length;
        bytes[mac_start] = 0x08; // type bits = 2 (data), subtype 0
        assert_eq!(decode_beacon(&bytes[mac_start..]), Err(DecodeError::NotABeacon));
    }

    #[test]
    fn hidden_ssid_is_accepted() {
        let (frame, info) = sample_beacon("", -60);
        let bytes = encode_beacon(&frame, &info).unwrap();
        let (_, decoded) = decode_frame(&bytes).unwrap();
        assert_eq!(decoded.body.ssid, "");
    }

    #[test]
    fn oversize_ssid_rejected_on_encode() {
        let (frame, info) = sample_beacon(&"x".repeat(33), -60);
        assert!(matches!(
            encode_beacon(&frame, &info),
            Err(EncodeError::InvalidFrame(_))
        ));
    }

    #[test]
    fn element_overrun_is_malformed() {
        let (frame, info) = sample_beacon("AP1", -60);
        let bytes = encode_beacon(&frame, &info).unwrap();
        let mut mac = bytes[info.header_length..].to_vec();
        let ssid_len_at = MGMT_HEADER_LEN + BEACON_FIXED_LEN + 1;
        mac[ssid_len_at] = 200; // SSID element claims 200 bytes
        assert_eq!(decode_beacon(&mac), Err(DecodeError::MalformedElement));
    }

    #[test]
    fn weak_signal_survives_round_trip() {
        let (frame, info) = sample_beacon("AP1", -80);
        let bytes = encode_beacon(&frame, &info).unwrap();
        let (decoded_info, decoded) = decode_frame(&bytes).unwrap();
        let m = to_measurement(&decoded, &decoded_info, 0).unwrap();
        assert_eq!(m.rssi_dbm, -80);
    }

    #[test]
    fn measurement_maps_channel_and_copies_identity() {
        let (frame, info) = sample_beacon("AP1", -60);
        let m = to_measurement(&frame, &info, 42).unwrap();
        assert_eq!(m.channel, Some(6)); // 2437 MHz
        assert_eq!(m.bssid, frame.mac.bssid);
        assert_eq!(m.ssid, "AP1");
        assert_eq!(m.capture_time_us, 42);
    }

    #[test]
    fn missing_signal_yields_no_measurement() {
        let (frame, _) = sample_beacon("AP1", -60);
        let info = RadiotapInfo::new(None, Some(2437), false);
        assert_eq!(
            to_measurement(&frame, &info, 0),
            Err(DecodeError::MissingSignal)
        );
    }

    #[test]
    fn consecutive_beacons_preserve_spacing() {
        let (frame, info) = sample_beacon("AP1", -60);
        let a = to_measurement(&frame, &info, 0).unwrap();
        let b = to_measurement(&frame, &info, 102_400).unwrap();
        assert_eq!(b.capture_time_us - a.capture_time_us, 102_400);
    }

    #[test]
    fn channel_map_is_bijective_on_2_4ghz() {
        for ch in 1..=11u8 {
            let mhz = mhz_from_channel(ch).unwrap();
            assert!((2412..=2462).contains(&mhz));
            assert_eq!(channel_from_mhz(mhz), Some(ch));
        }
        assert_eq!(channel_from_mhz(2484), None); // channel 14: out of band here
        assert_eq!(channel_from_mhz(2414), None); // not on the 5 MHz grid
        assert_eq!(mhz_from_channel(0), None);
        assert_eq!(mhz_from_channel(12), None);
    }

    #[test]
    fn mac_addr_parse_and_display() {
        let mac: MacAddr = "aa:bb:cc:dd:ee:01".parse().unwrap();
        assert_eq!(mac.to_string(), "aa:bb:cc:dd:ee:01");
        assert_eq!(mac.to_flat_hex(), "aabbccddee01");
        assert!("aa:bb:cc:dd:ee".parse::<MacAddr>().is_err());
        assert!("aa:bb:cc:dd:ee:01:02".parse::<MacAddr>().is_err());
        assert!("zz:bb:cc:dd:ee:01".parse::<MacAddr>().is_err());
    }
}
