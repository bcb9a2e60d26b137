//! Arbitrary-precision scaffolding: precision policy, symbolic constants,
//! and certification by precision escalation.
//!
//! All pipeline arithmetic runs at `target_digits + guard_digits` decimal
//! digits. A quantity is *certified* to `d` digits when recomputing it at
//! an escalated precision leaves the first `d` fractional digits unchanged
//! (measured through the absolute difference, see
//! [`fractional_agreement`]).

mod constants;
mod real;

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use real::{fractional_agreement, Real};
pub(crate) use real::pow10;

/// Precision policy for one experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    /// Digits that must survive certification (the reporting precision).
    pub target_digits: u32,
    /// Extra working digits that absorb rounding and conditioning losses.
    pub guard_digits: u32,
    /// Multiplier applied to the working precision on each escalation.
    pub escalation_factor: u32,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            target_digits: 80,
            guard_digits: 40,
            escalation_factor: 2,
        }
    }
}

impl PrecisionConfig {
    pub fn new(target_digits: u32, guard_digits: u32, escalation_factor: u32) -> Result<Self> {
        let cfg = PrecisionConfig { target_digits, guard_digits, escalation_factor };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.target_digits == 0 {
            return Err(Error::InvalidConfig("target_digits must be >= 1".into()));
        }
        if self.guard_digits < 10 {
            return Err(Error::InvalidConfig(
                "guard_digits must be >= 10 to absorb geometric conditioning".into(),
            ));
        }
        if self.escalation_factor < 2 {
            return Err(Error::InvalidConfig("escalation_factor must be >= 2".into()));
        }
        if self.working_digits() > 1 << 20 {
            return Err(Error::InvalidConfig("working precision too large".into()));
        }
        Ok(())
    }

    /// Digits carried by every `Real` in the pipeline.
    pub fn working_digits(&self) -> u32 {
        self.target_digits + self.guard_digits
    }

    /// Same target, working precision multiplied by the escalation factor.
    pub fn escalated(&self) -> PrecisionConfig {
        PrecisionConfig {
            target_digits: self.target_digits,
            guard_digits: self.working_digits() * self.escalation_factor - self.target_digits,
            escalation_factor: self.escalation_factor,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum ConstKind {
    Sqrt,
    Cbrt,
    E,
    Pi,
}

/// A symbolic constant: `sqrt(k)`, `cbrt(k)`, `e`, or `pi`. Roots of
/// perfect powers are rejected at construction, so every value is
/// irrational by construction.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstantSpec {
    kind: ConstKind,
    operand: u64,
}

impl ConstantSpec {
    pub fn sqrt(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("sqrt operand must be positive".into()));
        }
        if constants::is_perfect_square(k) {
            return Err(Error::PerfectPower { kind: "sqrt", operand: k });
        }
        Ok(ConstantSpec { kind: ConstKind::Sqrt, operand: k })
    }

    pub fn cbrt(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("cbrt operand must be positive".into()));
        }
        if constants::is_perfect_cube(k) {
            return Err(Error::PerfectPower { kind: "cbrt", operand: k });
        }
        Ok(ConstantSpec { kind: ConstKind::Cbrt, operand: k })
    }

    pub fn e() -> Self {
        ConstantSpec { kind: ConstKind::E, operand: 0 }
    }

    pub fn pi() -> Self {
        ConstantSpec { kind: ConstKind::Pi, operand: 0 }
    }
}

impl fmt::Display for ConstantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ConstKind::Sqrt => write!(f, "sqrt({})", self.operand),
            ConstKind::Cbrt => write!(f, "cbrt({})", self.operand),
            ConstKind::E => f.write_str("e"),
            ConstKind::Pi => f.write_str("pi"),
        }
    }
}

impl fmt::Debug for ConstantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConstantSpec({self})")
    }
}

impl FromStr for ConstantSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_constant(s)
    }
}

impl Serialize for ConstantSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ConstantSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_constant(&text).map_err(de::Error::custom)
    }
}

/// Evaluate a constant at the configured working precision.
pub fn make_constant(spec: &ConstantSpec, cfg: &PrecisionConfig) -> Real {
    let digits = cfg.working_digits();
    match spec.kind {
        ConstKind::Sqrt => constants::sqrt_value(spec.operand, digits),
        ConstKind::Cbrt => constants::cbrt_value(spec.operand, digits),
        ConstKind::E => constants::e_value(digits),
        ConstKind::Pi => constants::pi_value(digits),
    }
}

/// Fractional part of a non-negative value (exact).
pub fn frac(x: &Real) -> Result<Real> {
    if x.is_negative() {
        return Err(Error::NegativeFrac { value: x.to_decimal_string() });
    }
    Ok(x.frac_unchecked())
}

/// A value together with the number of fractional digits that survived
/// recomputation at escalated precision.
#[derive(Clone, Debug)]
pub struct Certified {
    pub value: Real,
    pub certified_digits: u32,
}

/// Certify `compute` by precision escalation: evaluate at the working
/// precision and at `escalation_factor` times it; if fewer than
/// `target_digits` fractional digits agree, escalate once more (twice in
/// total) before giving up with [`Error::CertificationFailure`]. The
/// returned value is the highest-precision evaluation.
pub fn certify<F>(compute: F, cfg: &PrecisionConfig) -> Result<Certified>
where
    F: Fn(u32) -> Result<Real>,
{
    cfg.validate()?;
    let factor = cfg.escalation_factor;
    let mut lo_digits = cfg.working_digits();
    let mut hi_digits = lo_digits * factor;
    let mut lo = compute(lo_digits)?;
    let mut hi = compute(hi_digits)?;
    let mut best = 0;
    for escalation in 0..3 {
        let agree = fractional_agreement(&lo, &hi);
        best = best.max(agree);
        if agree >= cfg.target_digits {
            return Ok(Certified { value: hi, certified_digits: agree });
        }
        if escalation == 2 {
            break;
        }
        lo = hi;
        lo_digits = hi_digits;
        hi_digits = lo_digits * factor;
        hi = compute(hi_digits)?;
    }
    Err(Error::CertificationFailure {
        best_digits: best,
        target_digits: cfg.target_digits,
        lo_digits,
        hi_digits,
    })
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn error(&self, expected: &str) -> Error {
        Error::Parse { offset: self.pos, expected: expected.to_string() }
    }

    fn expect_byte(&mut self, byte: u8, expected: &str) -> Result<()> {
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == byte {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn parse_u64(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("an integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { offset: start, expected: "an integer below 2^64".into() })
    }

    fn parse_constant(&mut self) -> Result<ConstantSpec> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .to_ascii_lowercase();
        match word.as_str() {
            "sqrt" | "cbrt" => {
                self.expect_byte(b'(', "'('")?;
                let operand = self.parse_u64()?;
                self.expect_byte(b')', "')'")?;
                if word == "sqrt" {
                    ConstantSpec::sqrt(operand)
                } else {
                    ConstantSpec::cbrt(operand)
                }
            }
            "e" => Ok(ConstantSpec::e()),
            "pi" => Ok(ConstantSpec::pi()),
            _ => Err(Error::Parse {
                offset: start,
                expected: "one of sqrt(k), cbrt(k), e, pi".into(),
            }),
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }
}

/// Parse a single constant expression (`sqrt(2)`, `CBRT( 3 )`, `pi`, `E`).
/// Case- and whitespace-insensitive.
pub fn parse_constant(text: &str) -> Result<ConstantSpec> {
    let mut scanner = Scanner::new(text);
    let spec = scanner.parse_constant()?;
    scanner.expect_end()?;
    Ok(spec)
}

/// Parse a comma-separated pair of constant expressions.
pub fn parse_constant_pair(text: &str) -> Result<(ConstantSpec, ConstantSpec)> {
    let mut scanner = Scanner::new(text);
    let alpha = scanner.parse_constant()?;
    scanner.expect_byte(b',', "','")?;
    let beta = scanner.parse_constant()?;
    scanner.expect_end()?;
    Ok((alpha, beta))
}
