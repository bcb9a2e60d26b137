//! Fixed-point decimal arithmetic over `BigInt`.
//!
//! A [`Real`] stores `mantissa / 10^digits` exactly. Addition and
//! subtraction are exact, multiplication and division round once to the
//! coarser operand scale (round-half-even). Working in decimal digits
//! rather than bits makes decimal serialization lossless and lets the
//! certification layer compare digit strings directly. `digits` decimal
//! digits correspond to `ceil(digits * log2(10))` bits of fractional
//! precision, comfortably above the binary floor the pipeline needs.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

thread_local! {
    // Powers of ten come up on almost every operation; cache them
    // per-thread so parallel cell construction never contends on a lock.
    static POW10: RefCell<Vec<BigInt>> = RefCell::new(vec![BigInt::one()]);
}

pub(crate) fn pow10(exp: u32) -> BigInt {
    POW10.with(|cache| {
        let mut cache = cache.borrow_mut();
        while cache.len() <= exp as usize {
            let next = cache.last().unwrap() * 10;
            cache.push(next);
        }
        cache[exp as usize].clone()
    })
}

/// Round `n / d` to the nearest integer with ties to even. `d` must be
/// positive.
pub(crate) fn div_round_half_even(n: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(d.is_positive());
    let (q, r) = n.div_rem(d); // truncating division, r has the sign of n
    if r.is_zero() {
        return q;
    }
    let twice = r.abs() * 2u32;
    let round_away = match twice.cmp(d) {
        Ordering::Greater => true,
        Ordering::Equal => q.is_odd(),
        Ordering::Less => false,
    };
    if round_away {
        if n.is_negative() {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Exact decimal fixed-point number: `mantissa / 10^digits`.
#[derive(Clone)]
pub struct Real {
    mantissa: BigInt,
    digits: u32,
}

impl Real {
    pub fn from_mantissa(mantissa: BigInt, digits: u32) -> Self {
        Real { mantissa, digits }
    }

    pub fn zero(digits: u32) -> Self {
        Real { mantissa: BigInt::zero(), digits }
    }

    pub fn one(digits: u32) -> Self {
        Real::from_int(1, digits)
    }

    pub fn from_int(value: i64, digits: u32) -> Self {
        Real { mantissa: BigInt::from(value) * pow10(digits), digits }
    }

    /// `num / den` rounded to `digits` fractional digits.
    pub fn from_ratio(num: i64, den: i64, digits: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut n = BigInt::from(num) * pow10(digits);
        let mut d = BigInt::from(den);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Ok(Real { mantissa: div_round_half_even(&n, &d), digits })
    }

    /// Parse a plain decimal literal (`-12.034`). If the literal carries
    /// more fractional digits than `digits`, it is rounded half-even.
    pub fn parse(text: &str, digits: u32) -> Result<Self> {
        let err = |offset: usize, expected: &str| Error::Parse {
            offset,
            expected: expected.to_string(),
        };
        let bytes = text.as_bytes();
        let mut pos = 0;
        let negative = match bytes.first() {
            Some(b'-') => {
                pos += 1;
                true
            }
            Some(b'+') => {
                pos += 1;
                false
            }
            _ => false,
        };
        let int_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == int_start {
            return Err(err(pos, "a decimal digit"));
        }
        let int_part = &text[int_start..pos];
        let frac_part = if pos < bytes.len() && bytes[pos] == b'.' {
            pos += 1;
            let frac_start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos == frac_start {
                return Err(err(pos, "a decimal digit"));
            }
            &text[frac_start..pos]
        } else {
            ""
        };
        if pos != bytes.len() {
            return Err(err(pos, "end of literal"));
        }
        let scale = frac_part.len() as u32;
        let mantissa: BigInt = format!("{int_part}{frac_part}")
            .parse()
            .expect("digits only");
        let value = Real { mantissa, digits: scale }.rescale(digits);
        Ok(if negative { -value } else { value })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn abs(&self) -> Real {
        Real { mantissa: self.mantissa.abs(), digits: self.digits }
    }

    /// Change the scale. Upscaling is exact, downscaling rounds half-even.
    pub fn rescale(&self, digits: u32) -> Real {
        match digits.cmp(&self.digits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => Real {
                mantissa: &self.mantissa * pow10(digits - self.digits),
                digits,
            },
            Ordering::Less => Real {
                mantissa: div_round_half_even(
                    &self.mantissa,
                    &pow10(self.digits - digits),
                ),
                digits,
            },
        }
    }

    /// Value comparison across scales (exact; never rounds).
    pub fn cmp_value(&self, other: &Real) -> Ordering {
        match self.digits.cmp(&other.digits) {
            Ordering::Equal => self.mantissa.cmp(&other.mantissa),
            Ordering::Less => {
                let lifted = &self.mantissa * pow10(other.digits - self.digits);
                lifted.cmp(&other.mantissa)
            }
            Ordering::Greater => {
                let lifted = &other.mantissa * pow10(self.digits - other.digits);
                self.mantissa.cmp(&lifted)
            }
        }
    }

    /// Exact product by a machine integer, same scale.
    pub fn mul_int(&self, k: i64) -> Real {
        Real { mantissa: &self.mantissa * k, digits: self.digits }
    }

    /// Quotient rounded to the coarser operand scale.
    pub fn div(&self, other: &Real) -> Result<Real> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let digits = self.digits.min(other.digits);
        // value = a.m * 10^(b.digits - a.digits + digits) / b.m
        let exp = other.digits as i64 - self.digits as i64 + digits as i64;
        let (num, den) = if exp >= 0 {
            (&self.mantissa * pow10(exp as u32), other.mantissa.clone())
        } else {
            (self.mantissa.clone(), &other.mantissa * pow10((-exp) as u32))
        };
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den) };
        Ok(Real { mantissa: div_round_half_even(&num, &den), digits })
    }

    /// Largest integer `<= self` (floor, exact).
    pub fn floor_int(&self) -> BigInt {
        self.mantissa.div_floor(&pow10(self.digits))
    }

    /// `self - floor(self)`, exact, in `[0, 1)`. Total on negatives; the
    /// public [`crate::numerics::frac`] wrapper restricts the domain.
    pub fn frac_unchecked(&self) -> Real {
        Real {
            mantissa: self.mantissa.mod_floor(&pow10(self.digits)),
            digits: self.digits,
        }
    }

    /// Approximate conversion for display ordering and prefilters only.
    pub fn to_f64(&self) -> f64 {
        const KEEP: u32 = 25;
        let neg = self.mantissa.is_negative();
        let mag = self.mantissa.abs();
        let value = if self.digits <= KEEP {
            mag.to_f64().unwrap_or(f64::INFINITY) / 10f64.powi(self.digits as i32)
        } else {
            let scaled = mag / pow10(self.digits - KEEP);
            scaled.to_f64().unwrap_or(f64::INFINITY) / 10f64.powi(KEEP as i32)
        };
        if neg {
            -value
        } else {
            value
        }
    }

    /// `self / 2` at the same scale (one half-even rounding).
    pub fn halve(&self) -> Real {
        Real {
            mantissa: div_round_half_even(&self.mantissa, &BigInt::from(2)),
            digits: self.digits,
        }
    }

    /// `10^-exponent` represented at `digits` fractional digits.
    /// Requires `digits >= exponent` so the value is representable.
    pub fn exp10_neg(exponent: u32, digits: u32) -> Real {
        assert!(
            digits >= exponent,
            "10^-{exponent} is not representable at {digits} digits"
        );
        Real { mantissa: pow10(digits - exponent), digits }
    }

    /// Canonical decimal form with exactly `digits` fractional digits.
    pub fn to_decimal_string(&self) -> String {
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        let mag = self.mantissa.abs();
        if self.digits == 0 {
            return format!("{sign}{mag}");
        }
        let (int_part, frac_part) = mag.div_rem(&pow10(self.digits));
        format!(
            "{sign}{int_part}.{frac:0>width$}",
            frac = frac_part.to_string(),
            width = self.digits as usize
        )
    }
}

/// How many fractional decimal digits two values share, measured through
/// the absolute difference: the count of leading zero fractional digits of
/// `|a - b|`, capped at the coarser operand scale. This is robust to
/// decimal rollover (`0.4999...` vs `0.5000...`), unlike raw digit-string
/// comparison.
pub fn fractional_agreement(a: &Real, b: &Real) -> u32 {
    let cap = a.digits.min(b.digits);
    let scale = a.digits.max(b.digits);
    let lifted_a = &a.mantissa * pow10(scale - a.digits);
    let lifted_b = &b.mantissa * pow10(scale - b.digits);
    let diff = (lifted_a - lifted_b).abs();
    if diff.is_zero() {
        return cap;
    }
    let len = diff.to_string().len() as u32;
    if len >= scale {
        0 // |a - b| >= 1: integer parts already disagree
    } else {
        (scale - len).min(cap)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl Eq for Real {}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

// Exact sum at the finer scale, then one rounding to the coarser scale.
fn add_signed(a: &Real, b: &Real, negate_b: bool) -> Real {
    let scale = a.digits.max(b.digits);
    let target = a.digits.min(b.digits);
    let lifted_a = &a.mantissa * pow10(scale - a.digits);
    let lifted_b = &b.mantissa * pow10(scale - b.digits);
    let sum = if negate_b { lifted_a - lifted_b } else { lifted_a + lifted_b };
    Real { mantissa: sum, digits: scale }.rescale(target)
}

impl std::ops::Add for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        add_signed(self, rhs, false)
    }
}

impl std::ops::Sub for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        add_signed(self, rhs, true)
    }
}

impl std::ops::Mul for &Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        let product = &self.mantissa * &rhs.mantissa;
        let target = self.digits.min(rhs.digits);
        Real { mantissa: product, digits: self.digits + rhs.digits }
            .rescale(target)
    }
}

impl std::ops::Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mantissa: -self.mantissa, digits: self.digits }
    }
}

impl std::ops::Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mantissa: -&self.mantissa, digits: self.digits }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal_string())
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal_string())
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        let frac_len = text
            .split_once('.')
            .map(|(_, frac)| frac.len() as u32)
            .unwrap_or(0);
        Real::parse(&text, frac_len).map_err(de::Error::custom)
    }
}
