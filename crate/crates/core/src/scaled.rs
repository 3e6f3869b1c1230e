//! Floating values with an extended binary exponent, `mant · 2^exp2`.
//!
//! Coefficient tables for large `N` or large `μ` run far outside the `f64`
//! range, while ratios of neighbouring entries stay moderate. Keeping the
//! exponent separately lets those ratios be formed without overflow.

use std::cmp::Ordering;
use std::ops::{Div, Mul, Neg};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    /// Zero, or magnitude in `[0.5, 1)`.
    mant: f64,
    exp2: i64,
}

fn split(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal: lift into the normal range first
        let (m, e) = split(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let e = raw_exp - 1022;
    let m_bits = (bits & !(0x7ffu64 << 52)) | (1022u64 << 52);
    (f64::from_bits(m_bits), e)
}

fn ldexp(m: f64, e: i64) -> f64 {
    if m == 0.0 {
        return m;
    }
    if e > 1100 {
        return m.signum() * f64::INFINITY;
    }
    if e < -1200 {
        return 0.0 * m.signum();
    }
    // two steps so the intermediate power of two stays representable
    let half = e / 2;
    m * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { mant: 0.0, exp2: 0 };

    pub fn new(x: f64) -> Self {
        let (mant, exp2) = split(x);
        Self { mant, exp2 }
    }

    pub fn from_parts(mant: f64, exp2: i64) -> Self {
        let (m, e) = split(mant);
        Self { mant: m, exp2: e + exp2 }
    }

    /// `exp(ln_mag) · sign`.
    pub fn from_ln(sign: f64, ln_mag: f64) -> Self {
        if sign == 0.0 || ln_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let t = ln_mag / std::f64::consts::LN_2;
        let k = t.floor();
        let frac = t - k;
        Self::from_parts(sign.signum() * frac.exp2(), k as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.mant == 0.0
    }

    pub fn mant(&self) -> f64 {
        self.mant
    }

    pub fn exp2(&self) -> i64 {
        self.exp2
    }

    pub fn signum(&self) -> f64 {
        if self.mant == 0.0 {
            0.0
        } else {
            self.mant.signum()
        }
    }

    /// Nearest `f64`, saturating to ±∞ or 0.
    pub fn to_f64(&self) -> f64 {
        ldexp(self.mant, self.exp2)
    }

    /// Natural log of the magnitude.
    pub fn ln_abs(&self) -> f64 {
        if self.mant == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.mant.abs().ln() + self.exp2 as f64 * std::f64::consts::LN_2
        }
    }

    pub fn abs(&self) -> Self {
        Self { mant: self.mant.abs(), exp2: self.exp2 }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_parts(self.mant * k, self.exp2)
    }

    /// Sum with exponent alignment.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let (big, small) = if self.exp2 >= other.exp2 { (self, other) } else { (other, self) };
        let shift = small.exp2 - big.exp2;
        Self::from_parts(big.mant + ldexp(small.mant, shift), big.exp2)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&(-*other))
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self
                .exp2
                .cmp(&other.exp2)
                .then(self.mant.abs().total_cmp(&other.mant.abs())),
        }
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        Scaled::from_parts(self.mant * rhs.mant, self.exp2 + rhs.exp2)
    }
}

impl Div for Scaled {
    type Output = Scaled;
    fn div(self, rhs: Scaled) -> Scaled {
        Scaled::from_parts(self.mant / rhs.mant, self.exp2 - rhs.exp2)
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled { mant: -self.mant, exp2: self.exp2 }
    }
}
