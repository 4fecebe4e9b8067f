//! Fixed-point big-number arithmetic for the oscillatory-sum probe.
//!
//! The aliasing sums of warped Fourier dictionaries decay faster than
//! exponentially in the grid size, dropping many orders of magnitude below
//! the f64 rounding floor (the probed values reach 1e-224 at L = 128, while
//! f64 evaluation of the same sum bottoms out near 1e-16). Numbers here are
//! `v / 2^PREC_BITS` with `v` a big integer, giving ~385 decimal digits:
//! enough headroom to evaluate those sums where they actually live.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Float as _, Signed, ToPrimitive, Zero};

/// Fraction bits of the fixed-point representation.
const PREC_BITS: u32 = 1280;

/// Fixed-point real number: value = v / 2^PREC_BITS.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fx {
    v: BigInt,
}

/// Floor division (quotient toward negative infinity), divisor > 0.
fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if r.is_negative() {
        q - 1
    } else {
        q
    }
}

impl Fx {
    pub fn zero() -> Self {
        Fx { v: BigInt::zero() }
    }

    pub fn one() -> Self {
        Fx { v: BigInt::from(1) << PREC_BITS }
    }

    /// Exact embedding of an f64 (mantissa times power of two).
    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            return Fx::zero();
        }
        let (mantissa, exp, sign) = x.integer_decode();
        let mut v = BigInt::from(mantissa);
        let shift = i32::from(exp) + PREC_BITS as i32;
        if shift >= 0 {
            v <<= shift as u32;
        } else {
            v >>= (-shift) as u32;
        }
        if sign < 0 {
            v = -v;
        }
        Fx { v }
    }

    /// Nearest f64, with the wide dynamic range handled by explicit
    /// exponent extraction (magnitudes down to the f64 subnormal range
    /// survive the conversion).
    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        let neg = self.v.is_negative();
        let mag = self.v.abs();
        let bits = mag.bits();
        let (top, extra_shift) = if bits > 63 {
            let sh = bits - 63;
            ((&mag >> sh).to_u64().unwrap(), sh as i64)
        } else {
            (mag.to_u64().unwrap(), 0i64)
        };
        let exp = extra_shift - i64::from(PREC_BITS);
        let val = top as f64 * 2f64.powi(exp as i32);
        if neg {
            -val
        } else {
            val
        }
    }

    /// Division by a small positive integer (truncating at 2^-PREC_BITS).
    pub fn div_u32(&self, d: u32) -> Self {
        Fx { v: &self.v / BigInt::from(d) }
    }

    /// Exact-to-precision ratio j / n.
    pub fn from_ratio(j: u64, n: u64) -> Self {
        Fx { v: (BigInt::from(j) << PREC_BITS) / BigInt::from(n) }
    }

    /// General division (truncating at 2^-PREC_BITS).
    pub fn div(&self, rhs: &Fx) -> Self {
        Fx { v: (&self.v << PREC_BITS) / &rhs.v }
    }

    /// Multiplication by a signed integer.
    pub fn mul_i64(&self, k: i64) -> Self {
        Fx { v: &self.v * BigInt::from(k) }
    }

    pub fn abs(&self) -> Self {
        Fx { v: self.v.abs() }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }
}

impl Add for &Fx {
    type Output = Fx;
    fn add(self, rhs: &Fx) -> Fx {
        Fx { v: &self.v + &rhs.v }
    }
}

impl Sub for &Fx {
    type Output = Fx;
    fn sub(self, rhs: &Fx) -> Fx {
        Fx { v: &self.v - &rhs.v }
    }
}

impl Mul for &Fx {
    type Output = Fx;
    fn mul(self, rhs: &Fx) -> Fx {
        Fx { v: (&self.v * &rhs.v) >> PREC_BITS }
    }
}

impl Neg for &Fx {
    type Output = Fx;
    fn neg(self) -> Fx {
        Fx { v: -&self.v }
    }
}

/// pi via Machin's formula: 16 atan(1/5) - 4 atan(1/239).
pub fn pi() -> &'static Fx {
    static PI: OnceLock<Fx> = OnceLock::new();
    PI.get_or_init(|| {
        let a = atan_inv(5);
        let b = atan_inv(239);
        Fx { v: &a.v * BigInt::from(16) - &b.v * BigInt::from(4) }
    })
}

/// 2 pi.
pub fn two_pi() -> &'static Fx {
    static TWO_PI: OnceLock<Fx> = OnceLock::new();
    TWO_PI.get_or_init(|| Fx { v: &pi().v << 1 })
}

/// atan(1/x) = sum_k (-1)^k / ((2k+1) x^(2k+1)).
fn atan_inv(x: u32) -> Fx {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = (BigInt::from(1) << PREC_BITS) / BigInt::from(x);
    let mut acc = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let contrib = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            acc += contrib;
        } else {
            acc -= contrib;
        }
        power /= &x2;
        k += 1;
    }
    Fx { v: acc }
}

/// Reduces x to [-pi, pi).
fn reduce_mod_two_pi(x: &Fx) -> Fx {
    let two_pi_v: BigInt = &pi().v << 1;
    let shifted = &x.v + &pi().v; // x + pi, so the floor lands in [0, 2pi)
    let k = floor_div(&shifted, &two_pi_v);
    Fx { v: &x.v - two_pi_v * k }
}

/// sin and cos by Taylor series after range reduction.
pub fn sin_cos(x: &Fx) -> (Fx, Fx) {
    let r = reduce_mod_two_pi(x);
    let r2 = &r * &r;
    let mut term = r.clone();
    let mut sin = term.clone();
    let mut k = 1u32;
    while !term.is_zero() && k < 4000 {
        term = &term * &r2;
        term = term.div_u32(2 * k).div_u32(2 * k + 1);
        if k % 2 == 1 {
            sin = &sin - &term;
        } else {
            sin = &sin + &term;
        }
        k += 1;
    }
    let mut term = Fx::one();
    let mut cos = term.clone();
    let mut k = 1u32;
    while !term.is_zero() && k < 4000 {
        term = &term * &r2;
        term = term.div_u32(2 * k - 1).div_u32(2 * k);
        if k % 2 == 1 {
            cos = &cos - &term;
        } else {
            cos = &cos + &term;
        }
        k += 1;
    }
    (sin, cos)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_matches_f64() {
        assert!((pi().to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn roundtrip_f64() {
        for x in [0.0, 1.0, -2.5, 0.1, 1e-200, -3.7e-120, 12345.6789] {
            let fx = Fx::from_f64(x);
            assert_eq!(fx.to_f64(), x, "roundtrip {x}");
        }
    }

    #[test]
    fn arithmetic_matches_f64() {
        let a = Fx::from_f64(1.25);
        let b = Fx::from_f64(-0.75);
        assert_eq!((&a + &b).to_f64(), 0.5);
        assert_eq!((&a * &b).to_f64(), -0.9375);
        assert_eq!((&a - &b).to_f64(), 2.0);
        assert_eq!((-&a).to_f64(), -1.25);
    }

    #[test]
    fn sin_cos_match_f64() {
        for i in 0..40 {
            let x = -20.0 + 1.07 * i as f64;
            let (s, c) = sin_cos(&Fx::from_f64(x));
            assert!((s.to_f64() - x.sin()).abs() < 1e-14, "sin({x})");
            assert!((c.to_f64() - x.cos()).abs() < 1e-14, "cos({x})");
        }
    }

    #[test]
    fn sin_cos_identity_high_precision() {
        // sin^2 + cos^2 - 1 stays far below the f64 resolution
        let x = Fx::from_f64(2.34567);
        let (s, c) = sin_cos(&x);
        let one = &(&s * &s) + &(&c * &c);
        let err = (&one - &Fx::one()).abs();
        let bound = Fx { v: BigInt::from(1) << (PREC_BITS - 1200) };
        assert!(err < bound);
    }

    #[test]
    fn floor_div_negatives() {
        let b = BigInt::from(7);
        assert_eq!(floor_div(&BigInt::from(22), &b), BigInt::from(3));
        assert_eq!(floor_div(&BigInt::from(-22), &b), BigInt::from(-4));
        assert_eq!(floor_div(&BigInt::from(-21), &b), BigInt::from(-3));
    }

    #[test]
    fn ratio_values() {
        assert_eq!(Fx::from_ratio(3, 8).to_f64(), 0.375);
        assert_eq!(Fx::from_ratio(0, 5).to_f64(), 0.0);
    }
}
