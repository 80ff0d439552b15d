//! Append-only announcement log.
//!
//! Mirrors the on-chain announcer interface: every stealth interaction
//! appends one record carrying the scheme id, the stealth address, the
//! caller identity, the compressed ephemeral public key and a metadata
//! byte string whose first byte is the view tag.
//!
//! The backing store is JSON Lines — one object per record, hex fields
//! 0x-prefixed — appended with flush-on-write. The monotone `index` plays
//! the role of the log position; there are no block numbers or Bloom
//! filters here.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::codec::EthAddress;
use crate::error::{Error, Result};
use crate::hexutil::{serde_array_0x, serde_bytes_0x};

/// One announcement record.
///
/// Serialized form (bit-exact, one line per record):
/// `{"index":N,"schemeId":1,"stealthAddress":"0x<40 hex>","caller":"0x<40
/// hex>","ephemeralPubKey":"0x<66 hex>","metadata":"0x<hex>"}`
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Announcement {
    pub index: u64,
    pub scheme_id: u64,
    pub stealth_address: EthAddress,
    pub caller: EthAddress,
    #[serde(with = "serde_array_0x")]
    pub ephemeral_pub_key: [u8; 33],
    #[serde(with = "serde_bytes_0x")]
    pub metadata: Vec<u8>,
}

impl Announcement {
    /// The view tag carried in the leading metadata byte.
    pub fn view_tag(&self) -> Option<u8> {
        self.metadata.first().copied()
    }
}

/// Builder for the metadata byte string.
///
/// Three layouts are defined: a bare view tag for ether transfers
/// (1 byte), and view tag + 4-byte method id + 20-byte token contract +
/// 32-byte amount or token id for token transfers (57 bytes). Anything
/// else in a foreign log is carried opaquely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetadataPayload {
    pub view_tag: u8,
    pub kind: AssetKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssetKind {
    Ether,
    Erc20 {
        method_id: [u8; 4],
        token_contract: EthAddress,
        amount: [u8; 32],
    },
    Erc721 {
        method_id: [u8; 4],
        token_contract: EthAddress,
        token_id: [u8; 32],
    },
}

/// Method id of `transfer(address,uint256)`.
pub const ERC20_TRANSFER_METHOD_ID: [u8; 4] = [0xa9, 0x05, 0x9c, 0xbb];
/// Method id of `transferFrom(address,address,uint256)`.
pub const ERC721_TRANSFER_FROM_METHOD_ID: [u8; 4] = [0x23, 0xb8, 0x72, 0xdd];

impl MetadataPayload {
    pub fn ether(view_tag: u8) -> MetadataPayload {
        MetadataPayload {
            view_tag,
            kind: AssetKind::Ether,
        }
    }

    pub fn erc20(view_tag: u8, token_contract: EthAddress, amount: [u8; 32]) -> MetadataPayload {
        MetadataPayload {
            view_tag,
            kind: AssetKind::Erc20 {
                method_id: ERC20_TRANSFER_METHOD_ID,
                token_contract,
                amount,
            },
        }
    }

    pub fn erc721(view_tag: u8, token_contract: EthAddress, token_id: [u8; 32]) -> MetadataPayload {
        MetadataPayload {
            view_tag,
            kind: AssetKind::Erc721 {
                method_id: ERC721_TRANSFER_FROM_METHOD_ID,
                token_contract,
                token_id,
            },
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        match &self.kind {
            AssetKind::Ether => vec![self.view_tag],
            AssetKind::Erc20 {
                method_id,
                token_contract,
                amount,
            }
            | AssetKind::Erc721 {
                method_id,
                token_contract,
                token_id: amount,
            } => {
                let mut out = Vec::with_capacity(57);
                out.push(self.view_tag);
                out.extend_from_slice(method_id);
                out.extend_from_slice(token_contract.as_bytes());
                out.extend_from_slice(amount);
                out
            }
        }
    }
}

/// File-backed append-only log. Appends are serialized through this
/// handle; any number of readers may stream the immutable prefix
/// concurrently via [`AnnouncementLog::read_range`].
#[derive(Debug)]
pub struct AnnouncementLog {
    path: PathBuf,
    writer: BufWriter<File>,
    len: u64,
}

impl AnnouncementLog {
    /// Opens (or creates) the log, validating every existing line and the
    /// monotone index invariant.
    pub fn open(path: impl AsRef<Path>) -> Result<AnnouncementLog> {
        let path = path.as_ref().to_path_buf();
        let mut len = 0u64;
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (line_no, line) in reader.lines().enumerate() {
                let record = parse_line(&line?, line_no)?;
                if record.index != len {
                    return Err(Error::LogCorrupt {
                        line: line_no + 1,
                        reason: format!("index {} out of order, expected {len}", record.index),
                    });
                }
                len += 1;
            }
        }
        let writer = BufWriter::new(OpenOptions::new().create(true).append(true).open(&path)?);
        Ok(AnnouncementLog { path, writer, len })
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Appends one record, assigning the next index. The record is
    /// durable (flushed and synced) before this returns.
    pub fn announce(
        &mut self,
        scheme_id: u64,
        stealth_address: EthAddress,
        caller: EthAddress,
        ephemeral_pub_key: [u8; 33],
        metadata: Vec<u8>,
    ) -> Result<Announcement> {
        if metadata.is_empty() {
            return Err(Error::EmptyMetadata);
        }
        let record = Announcement {
            index: self.len,
            scheme_id,
            stealth_address,
            caller,
            ephemeral_pub_key,
            metadata,
        };
        let mut line = serde_json::to_string(&record).expect("announcement serializes");
        line.push('\n');
        self.writer.write_all(line.as_bytes())?;
        self.writer.flush()?;
        self.writer.get_ref().sync_data()?;
        self.len += 1;
        Ok(record)
    }

    /// Reads records with indices in `from..to` (end exclusive), in index
    /// order. Requires `0 <= from <= to <= len`.
    pub fn read_range(&self, from: u64, to: u64) -> Result<Vec<Announcement>> {
        if from > to || to > self.len {
            return Err(Error::RangeOutOfBounds {
                from,
                to,
                len: self.len,
            });
        }
        let reader = BufReader::new(File::open(&self.path)?);
        let mut out = Vec::with_capacity((to - from) as usize);
        for (line_no, line) in reader.lines().enumerate() {
            if (line_no as u64) >= to {
                break;
            }
            let line = line?;
            if (line_no as u64) < from {
                continue;
            }
            out.push(parse_line(&line, line_no)?);
        }
        Ok(out)
    }

    /// All records currently in the log.
    pub fn read_all(&self) -> Result<Vec<Announcement>> {
        self.read_range(0, self.len)
    }
}

fn parse_line(line: &str, line_no: usize) -> Result<Announcement> {
    serde_json::from_str(line).map_err(|e| Error::LogCorrupt {
        line: line_no + 1,
        reason: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(byte: u8) -> EthAddress {
        EthAddress([byte; 20])
    }

    fn sample(log: &mut AnnouncementLog, tag: u8) -> Announcement {
        log.announce(
            1,
            addr(0xaa),
            addr(0xbb),
            [0x02; 33],
            MetadataPayload::ether(tag).to_bytes(),
        )
        .unwrap()
    }

    #[test]
    fn first_append_gets_index_zero() {
        let dir = tempfile::tempdir().unwrap();
        let mut log = AnnouncementLog::open(dir.path().join("log.jsonl")).unwrap();
        let record = sample(&mut log, 0x01);
        assert_eq!(record.index, 0);
        assert_eq!(sample(&mut log, 0x02).index, 1);
    }

    #[test]
    fn metadata_layout_lengths() {
        assert_eq!(MetadataPayload::ether(0x11).to_bytes().len(), 1);
        assert_eq!(
            MetadataPayload::erc20(0x11, addr(0x22), [0u8; 32]).to_bytes().len(),
            57
        );
        assert_eq!(
            MetadataPayload::erc721(0x11, addr(0x22), [0u8; 32]).to_bytes().len(),
            57
        );
    }

    #[test]
    fn erc20_metadata_layout_content() {
        let mut amount = [0u8; 32];
        amount[31] = 0x64;
        let bytes = MetadataPayload::erc20(0x7f, addr(0x22), amount).to_bytes();
        assert_eq!(bytes[0], 0x7f);
        assert_eq!(&bytes[1..5], &ERC20_TRANSFER_METHOD_ID);
        assert_eq!(&bytes[5..25], &[0x22; 20]);
        assert_eq!(bytes[56], 0x64);
    }

    #[test]
    fn empty_metadata_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut log = AnnouncementLog::open(dir.path().join("log.jsonl")).unwrap();
        assert!(matches!(
            log.announce(1, addr(1), addr(2), [0x02; 33], vec![]),
            Err(Error::EmptyMetadata)
        ));
        assert_eq!(log.len(), 0);
    }

    #[test]
    fn read_range_returns_records_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let mut log = AnnouncementLog::open(dir.path().join("log.jsonl")).unwrap();
        for tag in 0..3 {
            sample(&mut log, tag);
        }
        let records = log.read_range(0, 3).unwrap();
        assert_eq!(records.len(), 3);
        assert!(records.iter().enumerate().all(|(i, r)| r.index == i as u64));
    }

    #[test]
    fn empty_range_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        let mut log = AnnouncementLog::open(dir.path().join("log.jsonl")).unwrap();
        for tag in 0..3 {
            sample(&mut log, tag);
        }
        assert!(log.read_range(2, 2).unwrap().is_empty());
    }

    #[test]
    fn out_of_range_read_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let log = AnnouncementLog::open(dir.path().join("log.jsonl")).unwrap();
        assert!(matches!(
            log.read_range(0, 1),
            Err(Error::RangeOutOfBounds { .. })
        ));
    }

    #[test]
    fn reopen_preserves_records() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.jsonl");
        {
            let mut log = AnnouncementLog::open(&path).unwrap();
            for tag in 0..5 {
                sample(&mut log, tag);
            }
        }
        let log = AnnouncementLog::open(&path).unwrap();
        assert_eq!(log.len(), 5);
        let records = log.read_all().unwrap();
        assert_eq!(records.len(), 5);
        assert_eq!(records[4].metadata, vec![4]);
    }

    #[test]
    fn corrupted_line_names_its_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("log.jsonl");
        {
            let mut log = AnnouncementLog::open(&path).unwrap();
            sample(&mut log, 0);
            sample(&mut log, 1);
        }
        let mut contents = std::fs::read_to_string(&path).unwrap();
        contents.push_str("{\"not\":\"an announcement\"}\n");
        std::fs::write(&path, contents).unwrap();
        match AnnouncementLog::open(&path) {
            Err(Error::LogCorrupt { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected corrupt-log error, got {other:?}"),
        }
    }

    #[test]
    fn serialized_line_is_bit_exact() {
        let record = Announcement {
            index: 0,
            scheme_id: 1,
            stealth_address: addr(0xaa),
            caller: addr(0xbb),
            ephemeral_pub_key: [0x02; 33],
            metadata: vec![0x7f],
        };
        let line = serde_json::to_string(&record).unwrap();
        let expected = format!(
            "{{\"index\":0,\"schemeId\":1,\
             \"stealthAddress\":\"0x{}\",\"caller\":\"0x{}\",\
             \"ephemeralPubKey\":\"0x{}\",\"metadata\":\"0x7f\"}}",
            "aa".repeat(20),
            "bb".repeat(20),
            "02".repeat(33),
        );
        assert_eq!(line, expected);
        assert_eq!(serde_json::from_str::<Announcement>(&line).unwrap(), record);
    }
}
