//! Crate-wide error type.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The entropy source failed while generating key material.
    #[error("entropy source failed: {0}")]
    Entropy(String),

    /// An operation that requires a proper curve point was handed the
    /// point at infinity.
    #[error("point at infinity has no encoding")]
    IdentityPoint,

    /// Byte string has the wrong length for the expected encoding.
    #[error("bad length for {what}: expected {expected}, got {got}")]
    BadLength {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// Compressed-point prefix byte outside {0x02, 0x03}.
    #[error("invalid compressed point prefix byte 0x{0:02x}")]
    BadPrefix(u8),

    /// The x-coordinate does not lift to a point on the curve.
    #[error("x-coordinate is not on the curve")]
    OffCurve,

    /// Stealth meta-address string does not match the
    /// `st:<chainId>:0x<hex>` grammar.
    #[error("malformed stealth meta-address: {0}")]
    MetaFormat(String),

    /// Malformed hexadecimal input.
    #[error("invalid hex string: {0}")]
    Hex(String),

    /// The hashed shared secret reduced to zero (or the shared point was
    /// the identity); the caller must re-roll the ephemeral key.
    #[error("degenerate shared secret, re-roll the ephemeral key")]
    DegenerateSecret,

    /// Announcement carries a scheme this implementation cannot parse.
    #[error("unsupported scheme id {0}")]
    UnsupportedScheme(u64),

    /// Announcement metadata is empty, so it cannot carry a view tag.
    #[error("announcement metadata is empty")]
    EmptyMetadata,

    /// A line of the announcement log failed to parse.
    #[error("corrupt announcement log at line {line}: {reason}")]
    LogCorrupt { line: usize, reason: String },

    /// Requested log range does not satisfy `0 <= from <= to <= len`.
    #[error("range {from}..{to} out of bounds for log of length {len}")]
    RangeOutOfBounds { from: u64, to: u64, len: u64 },

    /// Signature bytes are structurally invalid (bad scalar, high-s form,
    /// unknown recovery id).
    #[error("invalid signature: {0}")]
    SignatureInvalid(String),

    /// Signature verifies but was not produced by the claimed registrant.
    #[error("signature does not authorize registrant {0}")]
    Unauthorized(String),

    /// No stake record exists for the user.
    #[error("no stake record for user")]
    UnknownUser,

    /// Withdrawal attempted before the unstake delay elapsed (or before
    /// an unstake request was made).
    #[error("stake is locked: {0}")]
    StakeLocked(String),

    /// Priority factor is undefined for users without announcements.
    #[error("priority factor undefined: user has no announcements")]
    UndefinedPriority,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}
