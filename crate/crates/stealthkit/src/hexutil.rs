//! 0x-prefixed hex helpers shared by the wire formats.

use crate::error::{Error, Result};

pub(crate) fn encode_0x(bytes: &[u8]) -> String {
    format!("0x{}", hex::encode(bytes))
}

/// Decodes a `0x`-prefixed hex string. Mixed case is accepted; the prefix
/// is mandatory.
pub(crate) fn decode_0x(s: &str) -> Result<Vec<u8>> {
    let body = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .ok_or_else(|| Error::Hex(format!("missing 0x prefix in {s:?}")))?;
    hex::decode(body).map_err(|e| Error::Hex(format!("{e} in {s:?}")))
}

pub(crate) fn decode_0x_array<const N: usize>(s: &str, what: &'static str) -> Result<[u8; N]> {
    let bytes = decode_0x(s)?;
    let got = bytes.len();
    bytes.try_into().map_err(|_| Error::BadLength {
        what,
        expected: N,
        got,
    })
}

/// Serde adapters for byte fields carried as 0x-hex strings.
pub(crate) mod serde_bytes_0x {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bytes: &[u8], ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&super::encode_0x(bytes))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<u8>, D::Error> {
        let s = String::deserialize(de)?;
        super::decode_0x(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapters for fixed-size byte arrays carried as 0x-hex strings.
pub(crate) mod serde_array_0x {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer, const N: usize>(
        bytes: &[u8; N],
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&super::encode_0x(bytes))
    }

    pub fn deserialize<'de, D: Deserializer<'de>, const N: usize>(
        de: D,
    ) -> Result<[u8; N], D::Error> {
        let s = String::deserialize(de)?;
        super::decode_0x_array(&s, "hex field").map_err(serde::de::Error::custom)
    }
}
