//! Stealth address generation and parsing.
//!
//! Two flows are implemented on secp256k1:
//!
//! * the single-key flow, where the recipient exposes one public key and
//!   uses its private key both to detect and to spend, and
//! * the dual-key flow, where a scanning key pair detects payments and a
//!   separate spending key pair controls them. The scanning private key
//!   can be handed to a third-party parsing provider without giving up
//!   spending power.
//!
//! Both flows derive a shared secret via ECDH, hash it with keccak-256,
//! and offset the recipient public key by the hashed secret times the
//! generator. The first byte of the hashed secret doubles as a one-byte
//! view tag: during parsing, a tag mismatch proves the announcement is for
//! someone else before any further curve work is spent on it.

use rand_core::RngCore;

use crate::announcer::Announcement;
use crate::codec::{compress, decompress, to_eth_address, EthAddress, StealthMetaAddress};
use crate::curve::{
    keccak256, point_add, point_mul, scalar_from_digest, scalar_random, CurvePoint, Digest32,
    Scalar,
};
use crate::error::{Error, Result};
use crate::SCHEME_ID_SECP256K1;

/// A private scalar together with its public point.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct KeyPair {
    secret: Scalar,
    public: CurvePoint,
}

impl KeyPair {
    /// Wraps an existing nonzero secret, deriving the public point.
    pub fn from_secret(secret: Scalar) -> Result<KeyPair> {
        if secret.is_zero() {
            return Err(Error::DegenerateSecret);
        }
        let public = point_mul(&secret, &CurvePoint::generator());
        Ok(KeyPair { secret, public })
    }

    pub fn generate(rng: &mut dyn RngCore) -> Result<KeyPair> {
        KeyPair::from_secret(scalar_random(rng)?)
    }

    pub fn secret(&self) -> &Scalar {
        &self.secret
    }

    pub fn public(&self) -> &CurvePoint {
        &self.public
    }
}

impl std::fmt::Debug for KeyPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // The secret is deliberately not shown.
        f.debug_struct("KeyPair").field("public", &self.public).finish()
    }
}

/// The recipient's spending and scanning key pairs.
#[derive(Clone, Copy, Debug)]
pub struct DualKeys {
    pub spending: KeyPair,
    pub scanning: KeyPair,
}

impl DualKeys {
    pub fn generate(rng: &mut dyn RngCore) -> Result<DualKeys> {
        let spending = KeyPair::generate(rng)?;
        loop {
            let scanning = KeyPair::generate(rng)?;
            if scanning.secret != spending.secret {
                return Ok(DualKeys { spending, scanning });
            }
        }
    }

    pub fn meta_address(&self, chain_id: &str) -> Result<StealthMetaAddress> {
        StealthMetaAddress::new(chain_id, &self.spending.public, &self.scanning.public)
    }
}

/// The key material a scanner holds. The spending secret is optional:
/// a parsing provider is given only the scanning secret and the spending
/// public key, and can then locate payments but never derive the stealth
/// private key.
#[derive(Clone, Copy, Debug)]
pub struct ScanKeys {
    scanning_secret: Scalar,
    spending_public: CurvePoint,
    spending_secret: Option<Scalar>,
}

impl ScanKeys {
    /// Full recipient keys: matches come back with the stealth private key.
    pub fn full(keys: &DualKeys) -> ScanKeys {
        ScanKeys {
            scanning_secret: *keys.scanning.secret(),
            spending_public: *keys.spending.public(),
            spending_secret: Some(*keys.spending.secret()),
        }
    }

    /// Parsing-provider keys: scanning secret plus spending public key only.
    pub fn provider(scanning_secret: Scalar, spending_public: CurvePoint) -> ScanKeys {
        ScanKeys {
            scanning_secret,
            spending_public,
            spending_secret: None,
        }
    }

    pub fn has_spending_secret(&self) -> bool {
        self.spending_secret.is_some()
    }
}

/// One-byte view tag: the first byte of the hashed shared secret.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ViewTag(pub u8);

/// Everything a sender learns when deriving a stealth address.
#[derive(Clone, Copy, Debug)]
pub struct StealthPayment {
    pub stealth_public: CurvePoint,
    pub stealth_address: EthAddress,
    pub ephemeral_public: [u8; 33],
    pub view_tag: ViewTag,
}

/// Parsing mode: `Legacy` always runs the full derivation, `ViewTag`
/// short-circuits on a tag mismatch before any further curve work.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    Legacy,
    ViewTag,
}

impl std::fmt::Display for ScanMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ScanMode::Legacy => "legacy",
            ScanMode::ViewTag => "viewtag",
        })
    }
}

impl std::str::FromStr for ScanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "legacy" => Ok(ScanMode::Legacy),
            "viewtag" => Ok(ScanMode::ViewTag),
            other => Err(Error::Hex(format!(
                "unknown scan mode {other:?}, expected legacy or viewtag"
            ))),
        }
    }
}

/// Outcome of checking one announcement against a key set.
#[derive(Clone, Copy, Debug)]
pub enum MatchOutcome {
    /// View tag mismatch; no derivation was attempted.
    NoMatchTag,
    /// Full derivation ran and the address did not match.
    NoMatchAddr,
    /// The announcement pays these keys. The stealth secret is present
    /// only when the spending secret was supplied.
    Match {
        stealth_address: EthAddress,
        stealth_secret: Option<Scalar>,
    },
}

/// Counters over the elliptic-curve and hashing work a parse performed.
#[derive(Clone, Copy, Default, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OpCounters {
    pub ec_mul: u64,
    pub ec_add: u64,
    pub hash: u64,
    pub tag_skips: u64,
    pub full_derivations: u64,
}

impl OpCounters {
    pub fn merge(&mut self, other: &OpCounters) {
        self.ec_mul += other.ec_mul;
        self.ec_add += other.ec_add;
        self.hash += other.hash;
        self.tag_skips += other.tag_skips;
        self.full_derivations += other.full_derivations;
    }
}

/// ECDH plus hashing: multiplies `secret · other_public`, hashes the
/// compressed shared point with keccak-256, and returns the reduced
/// scalar along with the view tag (first digest byte, taken from the raw
/// digest before reduction).
///
/// Symmetric by construction: sender `(p, R_scan)` and recipient
/// `(r_scan, P)` obtain identical outputs.
pub fn shared_secret_scalar(
    secret: &Scalar,
    other_public: &CurvePoint,
) -> Result<(Scalar, ViewTag)> {
    let digest = shared_secret_digest(secret, other_public)?;
    let tag = ViewTag(digest.0[0]);
    let k_h = scalar_from_digest(&digest)?;
    Ok((k_h, tag))
}

fn shared_secret_digest(secret: &Scalar, other_public: &CurvePoint) -> Result<Digest32> {
    if other_public.is_identity() {
        return Err(Error::IdentityPoint);
    }
    if secret.is_zero() {
        return Err(Error::DegenerateSecret);
    }
    let shared_point = point_mul(secret, other_public);
    // Unreachable for valid inputs (prime-order group), kept as a guard.
    let encoded = compress(&shared_point).map_err(|_| Error::DegenerateSecret)?;
    Ok(keccak256(&encoded))
}

/// Derives the stealth public key `k_h·G + recipient_public` from an
/// already-hashed shared secret.
fn offset_public(digest: &Digest32, recipient_public: &CurvePoint) -> Result<(Scalar, CurvePoint)> {
    let k_h = scalar_from_digest(digest)?;
    let offset = point_mul(&k_h, &CurvePoint::generator());
    Ok((k_h, point_add(&offset, recipient_public)))
}

/// Single-key stealth address generation: the sender derives the shared
/// secret against the recipient's only public key.
pub fn generate_isap(recipient_public: &CurvePoint, ephemeral: &KeyPair) -> Result<StealthPayment> {
    let digest = shared_secret_digest(ephemeral.secret(), recipient_public)?;
    let (_, stealth_public) = offset_public(&digest, recipient_public)?;
    Ok(StealthPayment {
        stealth_public,
        stealth_address: to_eth_address(&stealth_public)?,
        ephemeral_public: compress(ephemeral.public())?,
        view_tag: ViewTag(digest.0[0]),
    })
}

/// Single-key recipient derivation: `r_st = k_h + r mod n`, controlling
/// the stealth public key produced by [`generate_isap`].
pub fn derive_isap_secret(recipient: &KeyPair, ephemeral_public: &CurvePoint) -> Result<Scalar> {
    let (k_h, _) = shared_secret_scalar(recipient.secret(), ephemeral_public)?;
    Ok(k_h.add(recipient.secret()))
}

/// Dual-key stealth address generation: the shared secret comes from the
/// scanning key, the offset is applied to the spending key.
pub fn generate_dksap(
    meta: &StealthMetaAddress,
    ephemeral: &KeyPair,
) -> Result<StealthPayment> {
    let scanning_public = meta.scanning_point();
    let spending_public = meta.spending_point();
    let digest = shared_secret_digest(ephemeral.secret(), &scanning_public)?;
    let (_, stealth_public) = offset_public(&digest, &spending_public)?;
    Ok(StealthPayment {
        stealth_public,
        stealth_address: to_eth_address(&stealth_public)?,
        ephemeral_public: compress(ephemeral.public())?,
        view_tag: ViewTag(digest.0[0]),
    })
}

/// Generates a fresh ephemeral key and derives a dual-key payment,
/// re-rolling the ephemeral key if the shared secret degenerates.
pub fn fresh_dksap(
    meta: &StealthMetaAddress,
    rng: &mut dyn RngCore,
) -> Result<(StealthPayment, KeyPair)> {
    // A degenerate secret has probability ~2^-256 per draw; the bound only
    // protects against a broken RNG feeding identical bytes forever.
    for _ in 0..64 {
        let ephemeral = KeyPair::generate(rng)?;
        match generate_dksap(meta, &ephemeral) {
            Ok(payment) => return Ok((payment, ephemeral)),
            Err(Error::DegenerateSecret) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateSecret)
}

/// Dual-key recipient derivation: `r_st = r_spend + k_h mod n` where the
/// shared secret is taken against the scanning secret.
pub fn derive_dksap_secret(keys: &DualKeys, ephemeral_public: &CurvePoint) -> Result<Scalar> {
    let (k_h, _) = shared_secret_scalar(keys.scanning.secret(), ephemeral_public)?;
    Ok(keys.spending.secret().add(&k_h))
}

/// Checks one announcement against a key set.
///
/// In [`ScanMode::ViewTag`] the computed tag is compared against
/// `metadata[0]` first; on a mismatch the function returns without any
/// further elliptic-curve work — this ordering is the entire point of the
/// view-tag optimization and is observable through `counters`. In
/// [`ScanMode::Legacy`] the full derivation always runs.
///
/// The stealth address is always derived through the public path
/// `k_h·G + spending_public`, so parsing-provider keys work in both modes;
/// the stealth secret is attached to a match only when the spending secret
/// is available.
pub fn check_announcement(
    keys: &ScanKeys,
    announcement: &Announcement,
    mode: ScanMode,
    counters: &mut OpCounters,
) -> Result<MatchOutcome> {
    if announcement.scheme_id != SCHEME_ID_SECP256K1 {
        return Err(Error::UnsupportedScheme(announcement.scheme_id));
    }
    if announcement.metadata.is_empty() {
        return Err(Error::EmptyMetadata);
    }
    let ephemeral_public = decompress(&announcement.ephemeral_pub_key)?;

    // Shared-secret leg: one ecMUL plus one hash, in both modes.
    let shared_point = point_mul(&keys.scanning_secret, &ephemeral_public);
    counters.ec_mul += 1;
    let encoded = compress(&shared_point).map_err(|_| Error::DegenerateSecret)?;
    let digest = keccak256(&encoded);
    counters.hash += 1;

    if mode == ScanMode::ViewTag && digest.0[0] != announcement.metadata[0] {
        counters.tag_skips += 1;
        return Ok(MatchOutcome::NoMatchTag);
    }

    counters.full_derivations += 1;
    let k_h = match scalar_from_digest(&digest) {
        Ok(k_h) => k_h,
        // No sender could have produced this announcement for these keys.
        Err(Error::DegenerateSecret) => return Ok(MatchOutcome::NoMatchAddr),
        Err(e) => return Err(e),
    };
    let offset = point_mul(&k_h, &CurvePoint::generator());
    counters.ec_mul += 1;
    let stealth_public = point_add(&offset, &keys.spending_public);
    counters.ec_add += 1;
    let stealth_address = to_eth_address(&stealth_public)?;
    counters.hash += 1;

    if stealth_address != announcement.stealth_address {
        return Ok(MatchOutcome::NoMatchAddr);
    }
    Ok(MatchOutcome::Match {
        stealth_address,
        stealth_secret: keys.spending_secret.map(|spend| spend.add(&k_h)),
    })
}
