//! Classic pcap container support.
//!
//! Only the fixed 24-byte-header format is handled (no pcapng): golden-byte
//! tests stay simple and every field has exactly one possible layout. Both
//! byte orders and both timestamp resolutions are supported; link types are
//! restricted to 802.11 with and without radiotap.

use std::io::{Read, Write};

use thiserror::Error;

const MAGIC_MICROS: u32 = 0xa1b2_c3d4;
const MAGIC_NANOS: u32 = 0xa1b2_3c4d;
const VERSION_MAJOR: u16 = 2;
const VERSION_MINOR: u16 = 4;

/// Fixed snap length written to (and enforced on) every capture.
pub const SNAPLEN: u32 = 65_535;

pub const LINKTYPE_IEEE802_11_RADIOTAP: u32 = 127;
pub const LINKTYPE_IEEE802_11: u32 = 105;

#[derive(Debug, Error)]
pub enum PcapError {
    #[error("bad magic number {0:#010x}")]
    BadMagic(u32),
    #[error("unsupported link type {0} (expected 127 radiotap or 105 plain 802.11)")]
    UnsupportedLinkType(u32),
    #[error("truncated record at index {index}")]
    TruncatedRecord { index: usize },
    #[error("record of {len} bytes exceeds snap length {SNAPLEN}")]
    RecordTooLong { len: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkType {
    /// Link type 127: radiotap header followed by the 802.11 frame.
    Ieee80211Radiotap,
    /// Link type 105: bare 802.11 frame, no per-packet radio metadata.
    Ieee80211Plain,
}

impl LinkType {
    pub fn to_u32(self) -> u32 {
        match self {
            LinkType::Ieee80211Radiotap => LINKTYPE_IEEE802_11_RADIOTAP,
            LinkType::Ieee80211Plain => LINKTYPE_IEEE802_11,
        }
    }

    pub fn from_u32(raw: u32) -> Result<LinkType, PcapError> {
        match raw {
            LINKTYPE_IEEE802_11_RADIOTAP => Ok(LinkType::Ieee80211Radiotap),
            LINKTYPE_IEEE802_11 => Ok(LinkType::Ieee80211Plain),
            other => Err(PcapError::UnsupportedLinkType(other)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsResolution {
    Micro,
    Nano,
}

/// Byte order the file's header fields are written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ByteOrder {
    Little,
    Big,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaptureMeta {
    pub link_type: LinkType,
    pub ts_resolution: TsResolution,
    pub byte_order: ByteOrder,
}

impl Default for CaptureMeta {
    fn default() -> Self {
        CaptureMeta {
            link_type: LinkType::Ieee80211Radiotap,
            ts_resolution: TsResolution::Micro,
            byte_order: ByteOrder::Little,
        }
    }
}

/// One captured packet. Timestamps are microseconds since the capture
/// epoch; nanosecond files are quantized to microseconds on read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcapRecord {
    pub ts_us: u64,
    pub orig_len: u32,
    pub payload: Vec<u8>,
}

impl PcapRecord {
    pub fn new(ts_us: u64, payload: Vec<u8>) -> PcapRecord {
        let orig_len = payload.len() as u32;
        PcapRecord {
            ts_us,
            orig_len,
            payload,
        }
    }

    pub fn captured_len(&self) -> u32 {
        self.payload.len() as u32
    }
}

fn read_u16(buf: &[u8], order: ByteOrder) -> u16 {
    let b: [u8; 2] = buf[..2].try_into().unwrap();
    match order {
        ByteOrder::Little => u16::from_le_bytes(b),
        ByteOrder::Big => u16::from_be_bytes(b),
    }
}

fn read_u32(buf: &[u8], order: ByteOrder) -> u32 {
    let b: [u8; 4] = buf[..4].try_into().unwrap();
    match order {
        ByteOrder::Little => u32::from_le_bytes(b),
        ByteOrder::Big => u32::from_be_bytes(b),
    }
}

fn push_u16(buf: &mut Vec<u8>, v: u16, order: ByteOrder) {
    match order {
        ByteOrder::Little => buf.extend_from_slice(&v.to_le_bytes()),
        ByteOrder::Big => buf.extend_from_slice(&v.to_be_bytes()),
    }
}

fn push_u32(buf: &mut Vec<u8>, v: u32, order: ByteOrder) {
    match order {
        ByteOrder::Little => buf.extend_from_slice(&v.to_le_bytes()),
        ByteOrder::Big => buf.extend_from_slice(&v.to_be_bytes()),
    }
}

/// Reads either a full buffer, a clean EOF (`Ok(false)`), or fails.
fn read_exact_or_eof(reader: &mut impl Read, buf: &mut [u8]) -> std::io::Result<bool> {
    let mut filled = 0;
    while filled < buf.len() {
        let n = reader.read(&mut buf[filled..])?;
        if n == 0 {
            if filled == 0 {
                return Ok(false);
            }
            return Err(std::io::Error::new(
                std::io::ErrorKind::UnexpectedEof,
                "partial header at end of stream",
            ));
        }
        filled += n;
    }
    Ok(true)
}

/// Reads a classic pcap stream, yielding records in file order.
pub fn read_pcap(mut reader: impl Read) -> Result<(CaptureMeta, Vec<PcapRecord>), PcapError> {
    let mut header = [0u8; 24];
    let mut filled = 0;
    while filled < header.len() {
        let n = reader.read(&mut header[filled..])?;
        if n == 0 {
            break;
        }
        filled += n;
    }

    // check the magic before insisting on a whole header: a wrong-format
    // file gets the informative error even when it is tiny
    let magic_bytes: [u8; 4] = header[..4].try_into().unwrap();
    let (byte_order, ts_resolution) = match magic_bytes {
        b if b == MAGIC_MICROS.to_be_bytes() => (ByteOrder::Big, TsResolution::Micro),
        b if b == MAGIC_MICROS.to_le_bytes() => (ByteOrder::Little, TsResolution::Micro),
        b if b == MAGIC_NANOS.to_be_bytes() => (ByteOrder::Big, TsResolution::Nano),
        b if b == MAGIC_NANOS.to_le_bytes() => (ByteOrder::Little, TsResolution::Nano),
        b => return Err(PcapError::BadMagic(u32::from_be_bytes(b))),
    };
    if filled < header.len() {
        return Err(PcapError::TruncatedRecord { index: 0 });
    }

    // version, thiszone, sigfigs and snaplen are accepted as-is
    let _version = (
        read_u16(&header[4..], byte_order),
        read_u16(&header[6..], byte_order),
    );
    let link_type = LinkType::from_u32(read_u32(&header[20..], byte_order))?;
    let meta = CaptureMeta {
        link_type,
        ts_resolution,
        byte_order,
    };

    let mut records = Vec::new();
    let mut rec_header = [0u8; 16];
    loop {
        let index = records.len();
        if !read_exact_or_eof(&mut reader, &mut rec_header)
            .map_err(|_| PcapError::TruncatedRecord { index })?
        {
            break;
        }
        let ts_sec = read_u32(&rec_header[0..], byte_order) as u64;
        let ts_frac = read_u32(&rec_header[4..], byte_order) as u64;
        let incl_len = read_u32(&rec_header[8..], byte_order) as usize;
        let orig_len = read_u32(&rec_header[12..], byte_order);

        // read via take() so a corrupt length field cannot trigger a huge
        // upfront allocation
        let mut payload = Vec::with_capacity(incl_len.min(SNAPLEN as usize));
        reader
            .by_ref()
            .take(incl_len as u64)
            .read_to_end(&mut payload)
            .map_err(|_| PcapError::TruncatedRecord { index })?;
        if payload.len() != incl_len {
            return Err(PcapError::TruncatedRecord { index });
        }

        let ts_us = match ts_resolution {
            TsResolution::Micro => ts_sec * 1_000_000 + ts_frac,
            TsResolution::Nano => ts_sec * 1_000_000 + ts_frac / 1_000,
        };
        records.push(PcapRecord {
            ts_us,
            orig_len: orig_len.max(incl_len as u32),
            payload,
        });
    }
    Ok((meta, records))
}

/// Writes a bit-exact classic pcap stream: `read_pcap(write_pcap(..))`
/// returns the same meta and records.
pub fn write_pcap(
    mut writer: impl Write,
    meta: &CaptureMeta,
    records: &[PcapRecord],
) -> Result<(), PcapError> {
    let order = meta.byte_order;
    let magic = match meta.ts_resolution {
        TsResolution::Micro => MAGIC_MICROS,
        TsResolution::Nano => MAGIC_NANOS,
    };
    let mut buf = Vec::with_capacity(24);
    push_u32(&mut buf, magic, order);
    push_u16(&mut buf, VERSION_MAJOR, order);
    push_u16(&mut buf, VERSION_MINOR, order);
    push_u32(&mut buf, 0, order); // thiszone
    push_u32(&mut buf, 0, order); // sigfigs
    push_u32(&mut buf, SNAPLEN, order);
    push_u32(&mut buf, meta.link_type.to_u32(), order);
    writer.write_all(&buf)?;

    for record in records {
        if record.payload.len() > SNAPLEN as usize {
            return Err(PcapError::RecordTooLong {
                len: record.payload.len(),
            });
        }
        let ts_sec = (record.ts_us / 1_000_000) as u32;
        let ts_frac = match meta.ts_resolution {
            TsResolution::Micro => (record.ts_us % 1_000_000) as u32,
            TsResolution::Nano => ((record.ts_us % 1_000_000) * 1_000) as u32,
        };
        buf.clear();
        push_u32(&mut buf, ts_sec, order);
        push_u32(&mut buf, ts_frac, order);
        push_u32(&mut buf, record.captured_len(), order);
        push_u32(&mut buf, record.orig_len, order);
        writer.write_all(&buf)?;
        writer.write_all(&record.payload)?;
    }
    Ok(())
}

/// Serializes straight to bytes; convenient for tests and in-memory work.
pub fn to_bytes(meta: &CaptureMeta, records: &[PcapRecord]) -> Result<Vec<u8>, PcapError> {
    let mut out = Vec::new();
    write_pcap(&mut out, meta, records)?;
    Ok(out)
}
