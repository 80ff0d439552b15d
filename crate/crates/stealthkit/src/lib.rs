//! Stealth address toolkit for secp256k1.
//!
//! Implements a dual-key stealth address protocol (scanning + spending key
//! pairs) with one-byte view tags, an append-only announcement log, a
//! stealth-meta-address registry with signature-backed third-party
//! registration, and staking-based announcement prioritization.
//!
//! The crate is organized around the protocol roles:
//!
//! * [`curve`] — secp256k1 group and scalar arithmetic plus keccak-256;
//!   the only module touching raw curve math.
//! * [`codec`] — point compression, stealth-meta-address strings and
//!   Ethereum-style address derivation.
//! * [`sap`] — stealth address generation and parsing (single-key and
//!   dual-key flows, view-tag checks).
//! * [`announcer`] — the announcement log and metadata layouts.
//! * [`registry`] — meta-address registration, including on-behalf
//!   registration via recoverable ECDSA signatures.
//! * [`antispam`] — toll/gas cost model and the staking ledger with
//!   priority-factor ordering.
//! * [`scanner`] — batch parsing over announcement slices in legacy or
//!   view-tag mode, with operation counters and a benchmark harness.

pub mod announcer;
pub mod antispam;
pub mod codec;
pub mod curve;
pub mod error;
mod hexutil;
pub mod registry;
pub mod sap;
pub mod scanner;

pub use codec::{EthAddress, StealthMetaAddress};
pub use curve::{CurvePoint, Digest32, Scalar};
pub use error::{Error, Result};
pub use sap::{DualKeys, KeyPair, ScanKeys, ScanMode, StealthPayment, ViewTag};

/// Scheme identifier of the secp256k1 implementation.
pub const SCHEME_ID_SECP256K1: u64 = 1;
