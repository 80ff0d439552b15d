//! Independent secp256k1 oracle used by the integration tests.
//!
//! Affine arithmetic over `num-bigint`, written from the curve equation
//! alone. Deliberately shares no code with the library's curve backend so
//! that agreement between the two is meaningful.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use stealthkit::curve::CurvePoint;

/// `None` is the point at infinity.
pub type NaivePoint = Option<(BigUint, BigUint)>;

pub fn field_p() -> BigUint {
    // 2^256 - 2^32 - 977
    (BigUint::one() << 256u32) - (BigUint::one() << 32u32) - BigUint::from(977u32)
}

pub fn order_n() -> BigUint {
    BigUint::parse_bytes(
        b"fffffffffffffffffffffffffffffffebaaedce6af48a03bbfd25e8cd0364141",
        16,
    )
    .unwrap()
}

pub fn generator() -> NaivePoint {
    Some((
        BigUint::parse_bytes(
            b"79be667ef9dcbbac55a06295ce870b07029bfcdb2dce28d959f2815b16f81798",
            16,
        )
        .unwrap(),
        BigUint::parse_bytes(
            b"483ada7726a3c4655da4fbfc0e1108a8fd17b448a68554199c47d08ffb10d4b8",
            16,
        )
        .unwrap(),
    ))
}

fn mod_inv(a: &BigUint, p: &BigUint) -> BigUint {
    // Fermat: a^(p-2) mod p for prime p
    a.modpow(&(p - BigUint::from(2u32)), p)
}

#[allow(dead_code)]
pub fn on_curve(pt: &NaivePoint) -> bool {
    match pt {
        None => true,
        Some((x, y)) => {
            let p = field_p();
            if x >= &p || y >= &p {
                return false;
            }
            (y * y) % &p == (x * x * x + BigUint::from(7u32)) % &p
        }
    }
}

pub fn add(a: &NaivePoint, b: &NaivePoint) -> NaivePoint {
    let p = field_p();
    let (x1, y1) = match a {
        None => return b.clone(),
        Some(v) => v,
    };
    let (x2, y2) = match b {
        None => return a.clone(),
        Some(v) => v,
    };
    if x1 == x2 && (y1 + y2) % &p == BigUint::zero() {
        return None;
    }
    let lambda = if x1 == x2 && y1 == y2 {
        // tangent slope: 3x^2 / 2y
        let num = (BigUint::from(3u32) * x1 * x1) % &p;
        let den = mod_inv(&((BigUint::from(2u32) * y1) % &p), &p);
        (num * den) % &p
    } else {
        // chord slope: (y2 - y1) / (x2 - x1)
        let num = (&p + y2 - y1) % &p;
        let den = mod_inv(&((&p + x2 - x1) % &p), &p);
        (num * den) % &p
    };
    let x3 = (&lambda * &lambda + (&p - x1) % &p + (&p - x2) % &p) % &p;
    let y3 = (&lambda * ((&p + x1 - &x3) % &p) % &p + (&p - y1)) % &p;
    Some((x3, y3))
}

/// Brute-force double-and-add over the bits of `k`.
pub fn mul(k: &BigUint, point: &NaivePoint) -> NaivePoint {
    let mut result: NaivePoint = None;
    let mut addend = point.clone();
    let mut k = k % order_n();
    while !k.is_zero() {
        if (&k & BigUint::one()) == BigUint::one() {
            result = add(&result, &addend);
        }
        addend = add(&addend, &addend);
        k >>= 1;
    }
    result
}

/// Attempts to lift an x-coordinate to a curve point. `p ≡ 3 (mod 4)`, so
/// the square root candidate is `rhs^((p+1)/4)`.
pub fn lift_x(x: &BigUint) -> Option<(BigUint, BigUint)> {
    let p = field_p();
    if x >= &p {
        return None;
    }
    let rhs = (x * x * x + BigUint::from(7u32)) % &p;
    let candidate = rhs.modpow(&((&p + BigUint::one()) >> 2u32), &p);
    if (&candidate * &candidate) % &p == rhs {
        Some((x.clone(), candidate))
    } else {
        None
    }
}

pub fn x_bytes_lift(x: &[u8]) -> bool {
    lift_x(&BigUint::from_bytes_be(x)).is_some()
}

/// Oracle-side replica of the meta-address validation rule: both prefix
/// bytes in {2,3} and both x-coordinates liftable.
pub fn meta_valid(payload: &[u8; 66]) -> bool {
    let prefix_ok = |b: u8| b == 0x02 || b == 0x03;
    prefix_ok(payload[0])
        && prefix_ok(payload[33])
        && x_bytes_lift(&payload[1..33])
        && x_bytes_lift(&payload[34..66])
}

/// Converts a library point to oracle representation through its raw
/// affine coordinates.
pub fn from_impl(point: &CurvePoint) -> NaivePoint {
    if point.is_identity() {
        return None;
    }
    let (x, y) = point.coordinates().expect("non-identity");
    Some((BigUint::from_bytes_be(&x), BigUint::from_bytes_be(&y)))
}

pub fn eq_impl(naive: &NaivePoint, point: &CurvePoint) -> bool {
    *naive == from_impl(point)
}
