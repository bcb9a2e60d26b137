//! Scaled-integer evaluation of the supported constants.
//!
//! Each value is computed as a plain `BigInt` at a few guard digits above
//! the requested scale and rounded once at the end, so the result is
//! within one ulp of the true value. Roots use the floor-root routines
//! from `num-integer`; `e` and `pi` use classical series whose truncation
//! and floor-division errors are bounded per term and stay far below the
//! guard margin.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Zero;

use super::real::{pow10, Real};

/// Guard digits used only inside this module, on top of the caller's
/// requested scale.
const GUARD: u32 = 10;

/// `sqrt(k)` at `digits` fractional digits, `k` not a perfect square.
pub(crate) fn sqrt_value(k: u64, digits: u32) -> Real {
    let scaled = BigInt::from(k) * pow10(2 * (digits + 2));
    Real::from_mantissa(scaled.sqrt(), digits + 2).rescale(digits)
}

/// `cbrt(k)` at `digits` fractional digits, `k` not a perfect cube.
pub(crate) fn cbrt_value(k: u64, digits: u32) -> Real {
    let scaled = BigInt::from(k) * pow10(3 * (digits + 2));
    Real::from_mantissa(scaled.cbrt(), digits + 2).rescale(digits)
}

pub(crate) fn is_perfect_square(k: u64) -> bool {
    let r = k.sqrt();
    r * r == k
}

pub(crate) fn is_perfect_cube(k: u64) -> bool {
    let r = k.cbrt();
    r * r * r == k
}

/// `e = sum 1/k!` in scaled integers. Each floor division drops less than
/// one unit at the guard scale; with fewer than a couple hundred terms the
/// accumulated error never reaches the rounding boundary.
pub(crate) fn e_value(digits: u32) -> Real {
    let scale_digits = digits + GUARD;
    let mut term = pow10(scale_digits);
    let mut sum = term.clone();
    let mut k = 1u32;
    loop {
        term /= k;
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    Real::from_mantissa(sum, scale_digits).rescale(digits)
}

/// `arctan(1/m) * 10^scale_digits` by the alternating Gregory series with
/// floor divisions.
fn atan_inv(m: u32, scale_digits: u32) -> BigInt {
    let m2 = BigInt::from(m) * m;
    let mut power = pow10(scale_digits) / m;
    let mut sum = power.clone();
    let mut k = 1u32;
    let mut subtract = true;
    loop {
        power /= &m2;
        if power.is_zero() {
            break;
        }
        let term = &power / (2 * k + 1);
        if subtract {
            sum -= &term;
        } else {
            sum += &term;
        }
        subtract = !subtract;
        k += 1;
    }
    sum
}

/// `pi` by Machin's formula `16 atan(1/5) - 4 atan(1/239)`.
pub(crate) fn pi_value(digits: u32) -> Real {
    let scale_digits = digits + GUARD;
    let sum = atan_inv(5, scale_digits) * 16 - atan_inv(239, scale_digits) * 4;
    Real::from_mantissa(sum, scale_digits).rescale(digits)
}

/// Second, independent route to `pi` (`4 (atan(1/2) + atan(1/3))`);
/// test-only cross-check for the Machin evaluation.
#[cfg(test)]
pub(crate) fn pi_value_alt(digits: u32) -> Real {
    let scale_digits = digits + GUARD;
    let sum = (atan_inv(2, scale_digits) + atan_inv(3, scale_digits)) * 4;
    Real::from_mantissa(sum, scale_digits).rescale(digits)
}

/// `1/e = sum (-1)^k / k!`; test-only cross-check via `e * (1/e) = 1`.
#[cfg(test)]
pub(crate) fn e_inv_value(digits: u32) -> Real {
    let scale_digits = digits + GUARD;
    let mut term = pow10(scale_digits);
    let mut sum = term.clone();
    let mut k = 1u32;
    let mut subtract = true;
    loop {
        term /= k;
        if term.is_zero() {
            break;
        }
        if subtract {
            sum -= &term;
        } else {
            sum += &term;
        }
        subtract = !subtract;
        k += 1;
    }
    Real::from_mantissa(sum, scale_digits).rescale(digits)
}
