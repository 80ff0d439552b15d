//! secp256k1 group arithmetic, scalar arithmetic mod the curve order, and
//! keccak-256 hashing.
//!
//! Every other module goes through the types defined here; nothing else in
//! the crate touches raw curve math. The arithmetic itself is backed by the
//! `k256` crate, wrapped in domain types so the rest of the toolkit deals
//! only in scalars, points and digests.

use k256::elliptic_curve::group::Group as _;
use k256::elliptic_curve::ops::Reduce;
use k256::elliptic_curve::point::AffineCoordinates;
use k256::elliptic_curve::sec1::ToEncodedPoint;
use k256::elliptic_curve::PrimeField;
use k256::{ProjectivePoint, U256};
use rand_core::RngCore;
use sha3::{Digest as _, Keccak256};

use crate::error::{Error, Result};

/// An integer reduced mod the secp256k1 group order `n`.
///
/// Private keys are additionally required to be nonzero; constructors that
/// produce key material enforce this.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Scalar(pub(crate) k256::Scalar);

/// A point on secp256k1 (including the point at infinity).
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct CurvePoint(pub(crate) ProjectivePoint);

/// A 32-byte hash digest.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Digest32(pub [u8; 32]);

impl Scalar {
    pub const ZERO: Scalar = Scalar(k256::Scalar::ZERO);
    pub const ONE: Scalar = Scalar(k256::Scalar::ONE);

    pub fn from_u64(v: u64) -> Scalar {
        Scalar(k256::Scalar::from(v))
    }

    /// Parses a big-endian 32-byte encoding, rejecting values `>= n`.
    pub fn from_be_bytes(bytes: [u8; 32]) -> Result<Scalar> {
        Option::<k256::Scalar>::from(k256::Scalar::from_repr(bytes.into()))
            .map(Scalar)
            .ok_or(Error::BadLength {
                what: "scalar (value not below the curve order)",
                expected: 32,
                got: 32,
            })
    }

    pub fn to_be_bytes(&self) -> [u8; 32] {
        self.0.to_bytes().into()
    }

    pub fn is_zero(&self) -> bool {
        self.0 == k256::Scalar::ZERO
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        Scalar(self.0 + other.0)
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        Scalar(self.0 * other.0)
    }

    pub fn negate(&self) -> Scalar {
        Scalar(-self.0)
    }
}

impl std::fmt::Debug for Scalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Scalar(0x{})", hex::encode(self.to_be_bytes()))
    }
}

impl CurvePoint {
    /// The fixed generator point `G`.
    pub fn generator() -> CurvePoint {
        CurvePoint(ProjectivePoint::GENERATOR)
    }

    /// The point at infinity, the identity of the group.
    pub fn identity() -> CurvePoint {
        CurvePoint(ProjectivePoint::IDENTITY)
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity().into()
    }

    pub fn negate(&self) -> CurvePoint {
        CurvePoint(-self.0)
    }

    /// Affine coordinates as big-endian 32-byte strings; errors on the
    /// identity point, which has none.
    pub fn coordinates(&self) -> Result<([u8; 32], [u8; 32])> {
        if self.is_identity() {
            return Err(Error::IdentityPoint);
        }
        let affine = self.0.to_affine();
        let encoded = affine.to_encoded_point(false);
        let x: [u8; 32] = (*encoded.x().expect("non-identity point has x")).into();
        let y: [u8; 32] = (*encoded.y().expect("non-identity point has y")).into();
        Ok((x, y))
    }

    /// `x ‖ y` as a 64-byte string (uncompressed without the 0x04 tag).
    pub fn uncompressed_xy(&self) -> Result<[u8; 64]> {
        let (x, y) = self.coordinates()?;
        let mut out = [0u8; 64];
        out[..32].copy_from_slice(&x);
        out[32..].copy_from_slice(&y);
        Ok(out)
    }

    pub fn y_is_odd(&self) -> Result<bool> {
        if self.is_identity() {
            return Err(Error::IdentityPoint);
        }
        Ok(self.0.to_affine().y_is_odd().into())
    }
}

impl std::fmt::Debug for CurvePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_identity() {
            write!(f, "CurvePoint(infinity)")
        } else {
            let (x, y) = self.coordinates().expect("non-identity");
            write!(f, "CurvePoint(x=0x{}, y=0x{})", hex::encode(x), hex::encode(y))
        }
    }
}

/// Draws a uniformly distributed nonzero scalar below the curve order.
///
/// Rejection-samples 32-byte candidates so the distribution is exactly
/// uniform over `1..n`. Failures of the underlying entropy source surface
/// as [`Error::Entropy`].
pub fn scalar_random(rng: &mut dyn RngCore) -> Result<Scalar> {
    let mut buf = [0u8; 32];
    loop {
        rng.try_fill_bytes(&mut buf)
            .map_err(|e| Error::Entropy(e.to_string()))?;
        if let Some(s) = Option::<k256::Scalar>::from(k256::Scalar::from_repr(buf.into())) {
            if s != k256::Scalar::ZERO {
                return Ok(Scalar(s));
            }
        }
    }
}

/// Scalar multiplication `s·P`. Multiplying the identity (or by zero)
/// yields the identity.
pub fn point_mul(s: &Scalar, p: &CurvePoint) -> CurvePoint {
    CurvePoint(p.0 * s.0)
}

/// Point addition `P + Q`.
pub fn point_add(p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
    CurvePoint(p.0 + q.0)
}

/// Keccak-256 (the Ethereum variant, not FIPS SHA-3 padding).
pub fn keccak256(data: &[u8]) -> Digest32 {
    let mut hasher = Keccak256::new();
    hasher.update(data);
    Digest32(hasher.finalize().into())
}

/// Interprets a digest as a big-endian integer reduced mod the curve order.
///
/// A digest that reduces to zero is reported as [`Error::DegenerateSecret`]
/// so callers can re-roll their ephemeral key instead of silently
/// re-hashing.
pub fn scalar_from_digest(digest: &Digest32) -> Result<Scalar> {
    let reduced = <k256::Scalar as Reduce<U256>>::reduce(U256::from_be_slice(&digest.0));
    if reduced == k256::Scalar::ZERO {
        return Err(Error::DegenerateSecret);
    }
    Ok(Scalar(reduced))
}

impl Digest32 {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

impl AsRef<[u8]> for Digest32 {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}
