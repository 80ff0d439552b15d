//! Point compression, stealth-meta-address strings and Ethereum-style
//! address derivation.
//!
//! The canonical interchange string for a stealth meta-address is
//! `st:<chainId>:0x<spending><scanning>` with both keys SEC1-compressed
//! (33 bytes each, 132 hex characters total). Hex output is lowercase;
//! decoders accept mixed case.

use k256::elliptic_curve::sec1::{FromEncodedPoint, ToEncodedPoint};
use k256::{AffinePoint, EncodedPoint, ProjectivePoint};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::curve::{keccak256, CurvePoint};
use crate::error::{Error, Result};
use crate::hexutil;

/// A 20-byte Ethereum-style account address.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EthAddress(pub [u8; 20]);

impl EthAddress {
    pub const ZERO: EthAddress = EthAddress([0u8; 20]);

    pub fn as_bytes(&self) -> &[u8; 20] {
        &self.0
    }
}

impl std::fmt::Display for EthAddress {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "0x{}", hex::encode(self.0))
    }
}

impl std::str::FromStr for EthAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        hexutil::decode_0x_array(s, "address").map(EthAddress)
    }
}

impl Serialize for EthAddress {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for EthAddress {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// SEC1 compression: `0x02 | 0x03` parity tag followed by the big-endian
/// x-coordinate. The identity point has no compressed form.
pub fn compress(point: &CurvePoint) -> Result<[u8; 33]> {
    if point.is_identity() {
        return Err(Error::IdentityPoint);
    }
    let encoded = point.0.to_affine().to_encoded_point(true);
    Ok(encoded
        .as_bytes()
        .try_into()
        .expect("compressed SEC1 point is 33 bytes"))
}

/// Inverse of [`compress`]: rejects prefixes outside {0x02, 0x03} and
/// x-coordinates with no curve solution.
pub fn decompress(bytes: &[u8]) -> Result<CurvePoint> {
    if bytes.len() != 33 {
        return Err(Error::BadLength {
            what: "compressed point",
            expected: 33,
            got: bytes.len(),
        });
    }
    if bytes[0] != 0x02 && bytes[0] != 0x03 {
        return Err(Error::BadPrefix(bytes[0]));
    }
    let encoded = EncodedPoint::from_bytes(bytes).map_err(|_| Error::OffCurve)?;
    Option::<AffinePoint>::from(AffinePoint::from_encoded_point(&encoded))
        .map(|affine| CurvePoint(ProjectivePoint::from(affine)))
        .ok_or(Error::OffCurve)
}

/// Keccak-256 of the 64-byte uncompressed point (no 0x04 tag), truncated
/// to its trailing 20 bytes — standard Ethereum address derivation.
pub fn to_eth_address(point: &CurvePoint) -> Result<EthAddress> {
    let xy = point.uncompressed_xy()?;
    let digest = keccak256(&xy);
    let mut addr = [0u8; 20];
    addr.copy_from_slice(&digest.0[12..]);
    Ok(EthAddress(addr))
}

/// A chain-scoped pair of compressed public keys: the spending key first,
/// the scanning key second.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StealthMetaAddress {
    chain_id: String,
    spending: [u8; 33],
    scanning: [u8; 33],
}

impl StealthMetaAddress {
    /// Builds a meta-address from two points, compressing them. The chain
    /// id must be a nonempty decimal string.
    pub fn new(chain_id: &str, spending: &CurvePoint, scanning: &CurvePoint) -> Result<Self> {
        check_chain_id(chain_id)?;
        Ok(StealthMetaAddress {
            chain_id: chain_id.to_owned(),
            spending: compress(spending)?,
            scanning: compress(scanning)?,
        })
    }

    /// Reassembles a meta-address from the raw 66-byte concatenation
    /// stored in the registry, validating both keys.
    pub fn from_key_bytes(chain_id: &str, bytes: &[u8]) -> Result<Self> {
        check_chain_id(chain_id)?;
        if bytes.len() != 66 {
            return Err(Error::BadLength {
                what: "stealth meta-address keys",
                expected: 66,
                got: bytes.len(),
            });
        }
        let spending: [u8; 33] = bytes[..33].try_into().unwrap();
        let scanning: [u8; 33] = bytes[33..].try_into().unwrap();
        decompress(&spending)?;
        decompress(&scanning)?;
        Ok(StealthMetaAddress {
            chain_id: chain_id.to_owned(),
            spending,
            scanning,
        })
    }

    pub fn chain_id(&self) -> &str {
        &self.chain_id
    }

    pub fn spending_compressed(&self) -> &[u8; 33] {
        &self.spending
    }

    pub fn scanning_compressed(&self) -> &[u8; 33] {
        &self.scanning
    }

    pub fn spending_point(&self) -> CurvePoint {
        decompress(&self.spending).expect("validated at construction")
    }

    pub fn scanning_point(&self) -> CurvePoint {
        decompress(&self.scanning).expect("validated at construction")
    }

    /// The 66-byte key concatenation (registry storage form).
    pub fn key_bytes(&self) -> [u8; 66] {
        let mut out = [0u8; 66];
        out[..33].copy_from_slice(&self.spending);
        out[33..].copy_from_slice(&self.scanning);
        out
    }

    /// Canonical string form `st:<chainId>:0x<spending><scanning>`.
    pub fn encode(&self) -> String {
        format!(
            "st:{}:0x{}{}",
            self.chain_id,
            hex::encode(self.spending),
            hex::encode(self.scanning)
        )
    }

    /// Parses the canonical string form, validating grammar, prefixes and
    /// that both keys are on the curve.
    pub fn decode(s: &str) -> Result<Self> {
        let rest = s
            .strip_prefix("st:")
            .ok_or_else(|| Error::MetaFormat(format!("missing st: prefix in {s:?}")))?;
        let (chain_id, keys) = rest
            .split_once(':')
            .ok_or_else(|| Error::MetaFormat(format!("missing chain id separator in {s:?}")))?;
        check_chain_id(chain_id)?;
        let key_hex = keys
            .strip_prefix("0x")
            .or_else(|| keys.strip_prefix("0X"))
            .ok_or_else(|| Error::MetaFormat(format!("missing 0x before keys in {s:?}")))?;
        if key_hex.len() != 132 {
            return Err(Error::MetaFormat(format!(
                "expected 132 hex chars of key material, got {}",
                key_hex.len()
            )));
        }
        let bytes = hex::decode(key_hex).map_err(|e| Error::MetaFormat(e.to_string()))?;
        Self::from_key_bytes(chain_id, &bytes)
    }
}

impl std::fmt::Display for StealthMetaAddress {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.encode())
    }
}

impl std::str::FromStr for StealthMetaAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::decode(s)
    }
}

fn check_chain_id(chain_id: &str) -> Result<()> {
    if chain_id.is_empty() || !chain_id.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::MetaFormat(format!(
            "chain id must be decimal digits, got {chain_id:?}"
        )));
    }
    Ok(())
}
