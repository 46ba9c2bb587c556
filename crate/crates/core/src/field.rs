//! Arithmetic in the BN254 scalar field.
//!
//! Every circuit signal carries an element of the prime field with modulus
//!
//! `p = 21888242871839275222246405745257275088548364400416034343698204186575808495617`
//!
//! Elements are stored in Montgomery form as four 64-bit little-endian limbs;
//! the public contract is value semantics only. Scores are signed integers
//! mapped into the field with [`FieldElement::encode_signed`] (`-1` becomes
//! `p - 1`) and recovered with [`FieldElement::decode_signed`], which demands
//! an explicit validity window so nonsense witnesses fail loudly instead of
//! decoding to a garbage sign.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Decimal form of the field modulus `p`.
pub const MODULUS_DECIMAL: &str =
    "21888242871839275222246405745257275088548364400416034343698204186575808495617";

/// The prime modulus `p`, little-endian limbs.
const MODULUS: [u64; 4] = [
    0x43e1f593f0000001,
    0x2833e84879b97091,
    0xb85045b68181585d,
    0x30644e72e131a029,
];

/// `R = 2^256 mod p`, the Montgomery constant.
const R: [u64; 4] = [
    0xac96341c4ffffffb,
    0x36fc76959f60cd29,
    0x666ea36f7879462e,
    0x0e0a77c19a07df2f,
];

/// `R^2 mod p`, used to convert into Montgomery form.
const R2: [u64; 4] = [
    0x1bb8e645ae216da7,
    0x53fe3ab1e35c59e3,
    0x8c49833d53bb8085,
    0x0216d0b17f4e44a5,
];

/// `-p^{-1} mod 2^64`.
const INV: u64 = 0xc2e1f593efffffff;

/// `p - 2`, the inversion exponent for Fermat's little theorem.
const P_MINUS_2: [u64; 4] = [
    0x43e1f593efffffff,
    0x2833e84879b97091,
    0xb85045b68181585d,
    0x30644e72e131a029,
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    /// Modular inverse of zero requested.
    #[error("zero has no modular inverse")]
    ZeroInverse,
    /// Decoding a signed value found a residue outside the ± bound window.
    #[error("field value is outside the signed window of +/-{bound}")]
    OutsideSignedWindow { bound: u64 },
    /// A decimal string failed to parse as a canonical field element.
    #[error("invalid field element literal: {0}")]
    InvalidLiteral(String),
}

/// An element of the BN254 scalar field. Immutable value type; all operations
/// are pure, so elements can be shared across threads freely.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    /// Montgomery-form limbs, little-endian.
    limbs: [u64; 4],
}

#[inline(always)]
const fn adc(a: u64, b: u64, carry: u64) -> (u64, u64) {
    let t = a as u128 + b as u128 + carry as u128;
    (t as u64, (t >> 64) as u64)
}

#[inline(always)]
const fn sbb(a: u64, b: u64, borrow: u64) -> (u64, u64) {
    let t = (a as u128)
        .wrapping_sub(b as u128)
        .wrapping_sub(borrow as u128);
    (t as u64, (t >> 127) as u64)
}

#[inline(always)]
const fn mac(a: u64, b: u64, c: u64, carry: u64) -> (u64, u64) {
    let t = a as u128 * b as u128 + c as u128 + carry as u128;
    (t as u64, (t >> 64) as u64)
}

#[inline]
fn gte(a: &[u64; 4], b: &[u64; 4]) -> bool {
    for i in (0..4).rev() {
        if a[i] > b[i] {
            return true;
        }
        if a[i] < b[i] {
            return false;
        }
    }
    true
}

#[inline]
fn reduce_once(limbs: &mut [u64; 4]) {
    if gte(limbs, &MODULUS) {
        let (r0, borrow) = sbb(limbs[0], MODULUS[0], 0);
        let (r1, borrow) = sbb(limbs[1], MODULUS[1], borrow);
        let (r2, borrow) = sbb(limbs[2], MODULUS[2], borrow);
        let (r3, _) = sbb(limbs[3], MODULUS[3], borrow);
        *limbs = [r0, r1, r2, r3];
    }
}

/// Montgomery reduction of an 8-limb product: computes `t * R^-1 mod p`.
/// CIOS variant; each round folds one limb with `k = t_i * (-p^-1) mod 2^64`.
fn montgomery_reduce(t: &[u64; 8]) -> [u64; 4] {
    let (r0, mut r1, mut r2, mut r3) = (t[0], t[1], t[2], t[3]);
    let (mut r4, mut r5, mut r6, mut r7) = (t[4], t[5], t[6], t[7]);

    let k = r0.wrapping_mul(INV);
    let (_, mut carry) = mac(k, MODULUS[0], r0, 0);
    (r1, carry) = mac(k, MODULUS[1], r1, carry);
    (r2, carry) = mac(k, MODULUS[2], r2, carry);
    (r3, carry) = mac(k, MODULUS[3], r3, carry);
    let mut carry2;
    (r4, carry2) = adc(r4, carry, 0);

    let k = r1.wrapping_mul(INV);
    (_, carry) = mac(k, MODULUS[0], r1, 0);
    (r2, carry) = mac(k, MODULUS[1], r2, carry);
    (r3, carry) = mac(k, MODULUS[2], r3, carry);
    (r4, carry) = mac(k, MODULUS[3], r4, carry);
    (r5, carry2) = adc(r5, carry, carry2);

    let k = r2.wrapping_mul(INV);
    (_, carry) = mac(k, MODULUS[0], r2, 0);
    (r3, carry) = mac(k, MODULUS[1], r3, carry);
    (r4, carry) = mac(k, MODULUS[2], r4, carry);
    (r5, carry) = mac(k, MODULUS[3], r5, carry);
    (r6, carry2) = adc(r6, carry, carry2);

    let k = r3.wrapping_mul(INV);
    (_, carry) = mac(k, MODULUS[0], r3, 0);
    (r4, carry) = mac(k, MODULUS[1], r4, carry);
    (r5, carry) = mac(k, MODULUS[2], r5, carry);
    (r6, carry) = mac(k, MODULUS[3], r6, carry);
    (r7, _) = adc(r7, carry, carry2);

    let mut out = [r4, r5, r6, r7];
    reduce_once(&mut out);
    out
}

fn mul_wide(a: &[u64; 4], b: &[u64; 4]) -> [u64; 8] {
    let mut out = [0u64; 8];
    for i in 0..4 {
        let mut carry = 0u64;
        for j in 0..4 {
            let (lo, hi) = mac(a[i], b[j], out[i + j], carry);
            out[i + j] = lo;
            carry = hi;
        }
        out[i + 4] = carry;
    }
    out
}

#[inline]
fn montgomery_mul(a: &[u64; 4], b: &[u64; 4]) -> [u64; 4] {
    montgomery_reduce(&mul_wide(a, b))
}

impl FieldElement {
    pub const ZERO: Self = Self { limbs: [0; 4] };
    pub const ONE: Self = Self { limbs: R };

    pub fn from_u64(v: u64) -> Self {
        Self {
            limbs: montgomery_mul(&[v, 0, 0, 0], &R2),
        }
    }

    /// Encodes a signed integer: non-negative values map to themselves,
    /// negative values to `p - |s|` (so `-1` is `p - 1`). Total on i64 since
    /// `|s|` is always far below `p/2`.
    pub fn encode_signed(s: i64) -> Self {
        if s >= 0 {
            Self::from_u64(s as u64)
        } else {
            Self::from_u64(s.unsigned_abs()).neg()
        }
    }

    /// Decodes a signed integer from the window `[-bound, bound]`. Residues
    /// outside both halves of the window are rejected rather than guessed at.
    pub fn decode_signed(&self, bound: u64) -> Result<i64, FieldError> {
        let canon = self.to_canonical();
        let bound = bound.min(i64::MAX as u64);
        if canon[1] == 0 && canon[2] == 0 && canon[3] == 0 && canon[0] <= bound {
            return Ok(canon[0] as i64);
        }
        let neg = self.neg().to_canonical();
        if neg[1] == 0 && neg[2] == 0 && neg[3] == 0 && neg[0] <= bound && neg[0] != 0 {
            return Ok(-(neg[0] as i64));
        }
        Err(FieldError::OutsideSignedWindow { bound })
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.limbs == [0; 4]
    }

    #[inline]
    pub fn add(&self, other: &Self) -> Self {
        let (r0, carry) = adc(self.limbs[0], other.limbs[0], 0);
        let (r1, carry) = adc(self.limbs[1], other.limbs[1], carry);
        let (r2, carry) = adc(self.limbs[2], other.limbs[2], carry);
        let (r3, _) = adc(self.limbs[3], other.limbs[3], carry);
        let mut out = [r0, r1, r2, r3];
        reduce_once(&mut out);
        Self { limbs: out }
    }

    #[inline]
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    #[inline]
    pub fn mul(&self, other: &Self) -> Self {
        Self {
            limbs: montgomery_mul(&self.limbs, &other.limbs),
        }
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        let (r0, borrow) = sbb(MODULUS[0], self.limbs[0], 0);
        let (r1, borrow) = sbb(MODULUS[1], self.limbs[1], borrow);
        let (r2, borrow) = sbb(MODULUS[2], self.limbs[2], borrow);
        let (r3, _) = sbb(MODULUS[3], self.limbs[3], borrow);
        Self {
            limbs: [r0, r1, r2, r3],
        }
    }

    fn pow(&self, exp: &[u64; 4]) -> Self {
        let mut acc = Self::ONE;
        for i in (0..4).rev() {
            for bit in (0..64).rev() {
                acc = acc.mul(&acc);
                if (exp[i] >> bit) & 1 == 1 {
                    acc = acc.mul(self);
                }
            }
        }
        acc
    }

    /// Modular inverse via `a^(p-2)`. Zero is an error: the gadget layer
    /// handles the zero case itself through [`Self::inv_or_zero`].
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(&P_MINUS_2))
    }

    /// The inverse-or-zero hint used by the is-zero gadget: `a^-1` for
    /// nonzero `a`, and `0` for `a = 0`.
    pub fn inv_or_zero(&self) -> Self {
        self.inv().unwrap_or(Self::ZERO)
    }

    /// Canonical (non-Montgomery) limbs, little-endian.
    fn to_canonical(self) -> [u64; 4] {
        montgomery_reduce(&[
            self.limbs[0],
            self.limbs[1],
            self.limbs[2],
            self.limbs[3],
            0,
            0,
            0,
            0,
        ])
    }

    /// Canonical decimal string: no sign, no leading zeros.
    pub fn to_decimal_string(&self) -> String {
        let mut limbs = self.to_canonical();
        if limbs == [0; 4] {
            return "0".to_string();
        }
        let mut digits = Vec::new();
        while limbs != [0; 4] {
            let mut rem = 0u128;
            for i in (0..4).rev() {
                let cur = (rem << 64) | limbs[i] as u128;
                limbs[i] = (cur / 10) as u64;
                rem = cur % 10;
            }
            digits.push(b'0' + rem as u8);
        }
        digits.reverse();
        String::from_utf8(digits).unwrap()
    }

    /// Parses a canonical decimal string. Rejects empty strings, non-digits,
    /// leading zeros, and values at or above the modulus.
    pub fn from_decimal_str(s: &str) -> Result<Self, FieldError> {
        if s.is_empty() || (s.len() > 1 && s.starts_with('0')) || s.len() > 78 {
            return Err(FieldError::InvalidLiteral(s.to_string()));
        }
        let mut acc = [0u64; 4];
        for ch in s.chars() {
            let digit = ch
                .to_digit(10)
                .ok_or_else(|| FieldError::InvalidLiteral(s.to_string()))?
                as u64;
            let mut carry = 0u128;
            for limb in acc.iter_mut() {
                let wide = *limb as u128 * 10 + carry;
                *limb = wide as u64;
                carry = wide >> 64;
            }
            if carry != 0 {
                return Err(FieldError::InvalidLiteral(s.to_string()));
            }
            let mut carry = digit as u128;
            for limb in acc.iter_mut() {
                let wide = *limb as u128 + carry;
                *limb = wide as u64;
                carry = wide >> 64;
            }
            if carry != 0 {
                return Err(FieldError::InvalidLiteral(s.to_string()));
            }
        }
        if gte(&acc, &MODULUS) {
            return Err(FieldError::InvalidLiteral(s.to_string()));
        }
        Ok(Self {
            limbs: montgomery_mul(&acc, &R2),
        })
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement::add(&self, &rhs)
    }
}

impl std::ops::Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        FieldElement::sub(&self, &rhs)
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        FieldElement::mul(&self, &rhs)
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}

impl std::iter::Sum for FieldElement {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, x| acc.add(&x))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fe({})", self.to_decimal_string())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal_string())
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        FieldElement::from_decimal_str(&s).map_err(serde::de::Error::custom)
    }
}
