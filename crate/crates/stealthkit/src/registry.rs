//! Stealth meta-address registry.
//!
//! Maps `(registrant, scheme id)` to the registrant's stealth meta-address
//! bytes, emulating the on-chain registry interface: direct registration
//! by the caller, registration on behalf of others backed by a recoverable
//! ECDSA signature, and lookups by address and scheme. Every successful
//! registration appends a `StealthMetaAddressSet` event.
//!
//! For the secp256k1 scheme (id 1) the stored bytes are validated the way
//! the on-chain algorithm prescribes: both 33-byte halves must carry a
//! 0x02/0x03 prefix and an x-coordinate that lifts to a curve point.
//! Other scheme ids are stored opaquely — their validation belongs to the
//! implementations that define them.

use std::collections::BTreeMap;
use std::path::Path;

use k256::ecdsa::{RecoveryId, Signature, SigningKey, VerifyingKey};
use k256::elliptic_curve::scalar::IsHigh;
use serde::{Deserialize, Serialize};

use crate::codec::{decompress, EthAddress};
use crate::curve::{keccak256, Digest32, Scalar};
use crate::error::{Error, Result};
use crate::hexutil::serde_bytes_0x;
use crate::SCHEME_ID_SECP256K1;

/// Domain tag prepended to every registration message so signatures
/// cannot be replayed across protocols.
pub const REGISTRATION_DOMAIN_TAG: &[u8] = b"BaseSAP-register";

/// A recoverable ECDSA signature over the canonical registration message.
/// `s` is required to be in the lower half-order (malleability guard).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RegistrationSignature {
    r: [u8; 32],
    s: [u8; 32],
    recovery_id: u8,
}

impl RegistrationSignature {
    pub fn new(r: [u8; 32], s: [u8; 32], recovery_id: u8) -> Result<RegistrationSignature> {
        if recovery_id > 1 {
            return Err(Error::SignatureInvalid(format!(
                "recovery id must be 0 or 1, got {recovery_id}"
            )));
        }
        let sig = Signature::from_scalars(r, s)
            .map_err(|e| Error::SignatureInvalid(e.to_string()))?;
        if bool::from(sig.s().is_high()) {
            return Err(Error::SignatureInvalid("s is in the upper half-order".into()));
        }
        Ok(RegistrationSignature { r, s, recovery_id })
    }

    /// 65-byte `r ‖ s ‖ recovery_id` form.
    pub fn to_bytes(&self) -> [u8; 65] {
        let mut out = [0u8; 65];
        out[..32].copy_from_slice(&self.r);
        out[32..64].copy_from_slice(&self.s);
        out[64] = self.recovery_id;
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<RegistrationSignature> {
        if bytes.len() != 65 {
            return Err(Error::BadLength {
                what: "registration signature",
                expected: 65,
                got: bytes.len(),
            });
        }
        RegistrationSignature::new(
            bytes[..32].try_into().unwrap(),
            bytes[32..64].try_into().unwrap(),
            bytes[64],
        )
    }

    fn parts(&self) -> Result<(Signature, RecoveryId)> {
        let sig = Signature::from_scalars(self.r, self.s)
            .map_err(|e| Error::SignatureInvalid(e.to_string()))?;
        let recid = RecoveryId::from_byte(self.recovery_id)
            .ok_or_else(|| Error::SignatureInvalid("bad recovery id".into()))?;
        Ok((sig, recid))
    }
}

/// The digest every registration signature commits to:
/// `keccak256(tag ‖ scheme id as 32-byte BE ‖ registrant ‖ meta bytes)`.
pub fn canonical_message(scheme_id: u64, registrant: &EthAddress, meta: &[u8]) -> Digest32 {
    let mut buf = Vec::with_capacity(REGISTRATION_DOMAIN_TAG.len() + 32 + 20 + meta.len());
    buf.extend_from_slice(REGISTRATION_DOMAIN_TAG);
    let mut scheme_be = [0u8; 32];
    scheme_be[24..].copy_from_slice(&scheme_id.to_be_bytes());
    buf.extend_from_slice(&scheme_be);
    buf.extend_from_slice(registrant.as_bytes());
    buf.extend_from_slice(meta);
    keccak256(&buf)
}

/// Signs the canonical registration message with the given secret key.
pub fn sign_registration(
    secret: &Scalar,
    scheme_id: u64,
    registrant: &EthAddress,
    meta: &[u8],
) -> Result<RegistrationSignature> {
    let digest = canonical_message(scheme_id, registrant, meta);
    let key = SigningKey::from_bytes(&secret.to_be_bytes().into())
        .map_err(|e| Error::SignatureInvalid(e.to_string()))?;
    let (sig, recid) = key
        .sign_prehash_recoverable(&digest.0)
        .map_err(|e| Error::SignatureInvalid(e.to_string()))?;
    let r: [u8; 32] = sig.r().to_bytes().into();
    let s: [u8; 32] = sig.s().to_bytes().into();
    RegistrationSignature::new(r, s, recid.to_byte())
}

/// Recovers the signer's address from a registration signature.
pub fn recover_signer(
    sig: &RegistrationSignature,
    scheme_id: u64,
    registrant: &EthAddress,
    meta: &[u8],
) -> Result<EthAddress> {
    let digest = canonical_message(scheme_id, registrant, meta);
    let (signature, recid) = sig.parts()?;
    let key = VerifyingKey::recover_from_prehash(&digest.0, &signature, recid)
        .map_err(|e| Error::SignatureInvalid(e.to_string()))?;
    let encoded = key.to_encoded_point(false);
    let hashed = keccak256(&encoded.as_bytes()[1..]);
    let mut addr = [0u8; 20];
    addr.copy_from_slice(&hashed.0[12..]);
    Ok(EthAddress(addr))
}

/// Validates meta-address bytes for a scheme.
///
/// Scheme 1 runs the full prefix/on-curve checks on both compressed keys.
/// Other schemes are accepted opaquely as long as they are nonempty; their
/// formats are defined by the implementations layered on top.
pub fn validate_meta(scheme_id: u64, meta: &[u8]) -> Result<()> {
    if scheme_id != SCHEME_ID_SECP256K1 {
        if meta.is_empty() {
            return Err(Error::BadLength {
                what: "stealth meta-address",
                expected: 1,
                got: 0,
            });
        }
        return Ok(());
    }
    if meta.len() != 66 {
        return Err(Error::BadLength {
            what: "secp256k1 stealth meta-address",
            expected: 66,
            got: meta.len(),
        });
    }
    decompress(&meta[..33])?;
    decompress(&meta[33..])?;
    Ok(())
}

/// Event emitted on every successful registration.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StealthMetaAddressSet {
    pub registrant: EthAddress,
    pub scheme_id: u64,
    #[serde(with = "serde_bytes_0x")]
    pub stealth_meta_address: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct RegistryEntry {
    registrant: EthAddress,
    scheme_id: u64,
    #[serde(with = "serde_bytes_0x")]
    stealth_meta_address: Vec<u8>,
}

#[derive(Serialize, Deserialize)]
struct RegistryFile {
    entries: Vec<RegistryEntry>,
    events: Vec<StealthMetaAddressSet>,
}

/// In-memory registry with JSON snapshot persistence.
#[derive(Default)]
pub struct Registry {
    entries: BTreeMap<(EthAddress, u64), Vec<u8>>,
    events: Vec<StealthMetaAddressSet>,
}

impl Registry {
    pub fn new() -> Registry {
        Registry::default()
    }

    /// Sets the caller's meta-address for a scheme. Overwrites any
    /// previous registration for the same `(caller, scheme)` pair.
    pub fn register_keys(
        &mut self,
        caller: EthAddress,
        scheme_id: u64,
        meta: &[u8],
    ) -> Result<StealthMetaAddressSet> {
        validate_meta(scheme_id, meta)?;
        self.entries.insert((caller, scheme_id), meta.to_vec());
        let event = StealthMetaAddressSet {
            registrant: caller,
            scheme_id,
            stealth_meta_address: meta.to_vec(),
        };
        self.events.push(event.clone());
        Ok(event)
    }

    /// Sets `registrant`'s meta-address, authorized by a signature from
    /// the registrant over the canonical registration message.
    pub fn register_keys_on_behalf(
        &mut self,
        registrant: EthAddress,
        scheme_id: u64,
        meta: &[u8],
        sig: &RegistrationSignature,
    ) -> Result<StealthMetaAddressSet> {
        validate_meta(scheme_id, meta)?;
        let signer = recover_signer(sig, scheme_id, &registrant, meta)?;
        if signer != registrant {
            return Err(Error::Unauthorized(registrant.to_string()));
        }
        self.register_keys(registrant, scheme_id, meta)
    }

    pub fn get_keys(&self, registrant: &EthAddress, scheme_id: u64) -> Option<&[u8]> {
        self.entries
            .get(&(*registrant, scheme_id))
            .map(Vec::as_slice)
    }

    pub fn events(&self) -> &[StealthMetaAddressSet] {
        &self.events
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = RegistryFile {
            entries: self
                .entries
                .iter()
                .map(|((registrant, scheme_id), meta)| RegistryEntry {
                    registrant: *registrant,
                    scheme_id: *scheme_id,
                    stealth_meta_address: meta.clone(),
                })
                .collect(),
            events: self.events.clone(),
        };
        let json = serde_json::to_string_pretty(&file).expect("registry serializes");
        std::fs::write(path, json)?;
        Ok(())
    }

    /// Loads a snapshot, re-validating every entry against its scheme.
    pub fn load(path: impl AsRef<Path>) -> Result<Registry> {
        let json = std::fs::read_to_string(path)?;
        let file: RegistryFile =
            serde_json::from_str(&json).map_err(|e| Error::LogCorrupt {
                line: 0,
                reason: format!("registry snapshot: {e}"),
            })?;
        let mut registry = Registry::new();
        for entry in file.entries {
            validate_meta(entry.scheme_id, &entry.stealth_meta_address)?;
            registry.entries.insert(
                (entry.registrant, entry.scheme_id),
                entry.stealth_meta_address,
            );
        }
        registry.events = file.events;
        Ok(registry)
    }
}
