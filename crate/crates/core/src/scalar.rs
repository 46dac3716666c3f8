//! Number tower: exact rationals and certified real intervals.
//!
//! A [`Scalar`] is either an exact, reduced rational or an interval
//! `mid ± rad` whose midpoint is a binary number rounded to a working
//! precision. Interval arithmetic is outward: whenever the inputs contain
//! their true values, so does the result.
//!
//! Comparisons never guess. Two overlapping intervals compare as
//! [`Error::AmbiguousComparison`]; callers either raise the precision (see
//! [`with_precision_retry`]) or surface the error.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 128;
pub const MAX_PRECISION_BITS: u32 = 4096;
pub const MIN_SQRT_PRECISION_BITS: u32 = 16;

/// Significant bits kept for interval radii (always rounded up).
const RADIUS_BITS: u32 = 32;

/// Midpoint/radius interval over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    mid: BigRational,
    rad: BigRational,
    bits: u32,
}

impl Interval {
    pub fn midpoint(&self) -> &BigRational {
        &self.mid
    }

    pub fn radius(&self) -> &BigRational {
        &self.rad
    }

    pub fn precision_bits(&self) -> u32 {
        self.bits
    }

    pub fn lower(&self) -> BigRational {
        &self.mid - &self.rad
    }

    pub fn upper(&self) -> BigRational {
        &self.mid + &self.rad
    }

    fn from_bounds(lo: BigRational, hi: BigRational, bits: u32) -> Interval {
        let two = BigRational::from_integer(2.into());
        let mid = (&lo + &hi) / &two;
        let rad = (hi - lo) / two;
        Interval::rounded(mid, rad, bits)
    }

    /// Rounds the midpoint to `bits` significant bits and folds the rounding
    /// error into an upward-rounded radius.
    fn rounded(mid: BigRational, rad: BigRational, bits: u32) -> Interval {
        let m = round_dyadic(&mid, bits, Rounding::Nearest);
        let err = (&mid - &m).abs();
        let rad = round_dyadic(&(rad + err), RADIUS_BITS, Rounding::Up);
        Interval { mid: m, rad, bits }
    }
}

#[derive(Clone, Copy)]
enum Rounding {
    Nearest,
    Up,
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// Rounds `x` to a dyadic rational with roughly `bits` significant bits.
fn round_dyadic(x: &BigRational, bits: u32, mode: Rounding) -> BigRational {
    if x.is_zero() {
        return x.clone();
    }
    // log2|x| within one
    let e = x.numer().bits() as i64 - x.denom().bits() as i64;
    let shift = bits as i64 - e;
    let scaled = if shift >= 0 {
        x * BigRational::from_integer(pow2(shift as u64))
    } else {
        x / BigRational::from_integer(pow2((-shift) as u64))
    };
    let n = match mode {
        Rounding::Nearest => scaled.round(),
        Rounding::Up => scaled.ceil(),
    };
    if n == scaled {
        return x.clone();
    }
    if shift >= 0 {
        n / BigRational::from_integer(pow2(shift as u64))
    } else {
        n * BigRational::from_integer(pow2((-shift) as u64))
    }
}

/// An exact rational or a precision-tracked real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Exact(BigRational),
    Approx(Interval),
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Exact(BigRational::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Exact(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Scalar {
        assert!(d != 0, "zero denominator");
        Scalar::Exact(BigRational::new(n.into(), d.into()))
    }

    pub fn from_big(n: BigInt) -> Scalar {
        Scalar::Exact(BigRational::from_integer(n))
    }

    /// Builds an interval `mid ± rad`. The midpoint is kept as given.
    pub fn approx(mid: BigRational, rad: BigRational, bits: u32) -> Result<Scalar> {
        if rad.is_negative() {
            return Err(Error::InvalidArgument("negative interval radius".into()));
        }
        if bits == 0 {
            return Err(Error::InvalidArgument("precision must be positive".into()));
        }
        Ok(Scalar::Approx(Interval { mid, rad, bits }))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Approx(_) => None,
        }
    }

    pub fn midpoint(&self) -> BigRational {
        match self {
            Scalar::Exact(q) => q.clone(),
            Scalar::Approx(iv) => iv.mid.clone(),
        }
    }

    pub fn radius(&self) -> BigRational {
        match self {
            Scalar::Exact(_) => BigRational::zero(),
            Scalar::Approx(iv) => iv.rad.clone(),
        }
    }

    pub fn lower(&self) -> BigRational {
        match self {
            Scalar::Exact(q) => q.clone(),
            Scalar::Approx(iv) => iv.lower(),
        }
    }

    pub fn upper(&self) -> BigRational {
        match self {
            Scalar::Exact(q) => q.clone(),
            Scalar::Approx(iv) => iv.upper(),
        }
    }

    /// Working precision; `None` for exact values.
    pub fn precision_bits(&self) -> Option<u32> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Approx(iv) => Some(iv.bits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    /// True when the value is certainly zero.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Approx(iv) => iv.mid.is_zero() && iv.rad.is_zero(),
        }
    }

    /// True when zero is a possible value (certain zero for exact values).
    pub fn may_be_zero(&self) -> bool {
        self.lower() <= BigRational::zero() && self.upper() >= BigRational::zero()
    }

    /// Whether the two values may be the same real number: equality for
    /// exact operands, overlap for intervals.
    pub fn coincides(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.lower() <= other.upper() && other.lower() <= self.upper(),
        }
    }

    fn promote(&self, bits: u32) -> Interval {
        match self {
            Scalar::Exact(q) => Interval { mid: q.clone(), rad: BigRational::zero(), bits },
            Scalar::Approx(iv) => iv.clone(),
        }
    }

    fn joint_bits(&self, other: &Scalar) -> u32 {
        self.precision_bits().into_iter().chain(other.precision_bits()).max().unwrap_or(DEFAULT_PRECISION_BITS)
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(q.abs()),
            Scalar::Approx(iv) => {
                let lo = iv.lower();
                let hi = iv.upper();
                if !lo.is_negative() {
                    self.clone()
                } else if !hi.is_positive() {
                    -self
                } else {
                    let m = lo.abs().max(hi);
                    Scalar::Approx(Interval::from_bounds(BigRational::zero(), m, iv.bits))
                }
            }
        }
    }

    /// Sound maximum: the result contains `max(x, y)` for every `x` in `self`
    /// and `y` in `other`.
    pub fn max_sound(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.max(b).clone()),
            _ => {
                let lo = self.lower().max(other.lower());
                let hi = self.upper().max(other.upper());
                Scalar::Approx(Interval::from_bounds(lo, hi, self.joint_bits(other)))
            }
        }
    }

    /// Smallest interval containing both values; the value itself when the
    /// two are identical.
    pub fn hull(&self, other: &Scalar) -> Scalar {
        if self == other {
            return self.clone();
        }
        let lo = self.lower().min(other.lower());
        let hi = self.upper().max(other.upper());
        Scalar::Approx(Interval::from_bounds(lo, hi, self.joint_bits(other)))
    }

    pub fn recip(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(q) => {
                if q.is_zero() {
                    Err(Error::DivisionByZero(self.to_string()))
                } else {
                    Ok(Scalar::Exact(q.recip()))
                }
            }
            Scalar::Approx(iv) => {
                let lo = iv.lower();
                let hi = iv.upper();
                if self.may_be_zero() {
                    return Err(Error::DivisionByZero(self.to_string()));
                }
                Ok(Scalar::Approx(Interval::from_bounds(hi.recip(), lo.recip(), iv.bits)))
            }
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                if b.is_zero() {
                    Err(Error::DivisionByZero(other.to_string()))
                } else {
                    Ok(Scalar::Exact(a / b))
                }
            }
            _ => Ok(self * &other.recip()?),
        }
    }

    /// Total order where decidable.
    pub fn compare(&self, other: &Scalar) -> Result<Ordering> {
        if let (Scalar::Exact(a), Scalar::Exact(b)) = (self, other) {
            return Ok(a.cmp(b));
        }
        if self.radius().is_zero() && other.radius().is_zero() {
            return Ok(self.midpoint().cmp(&other.midpoint()));
        }
        if self.upper() < other.lower() {
            Ok(Ordering::Less)
        } else if self.lower() > other.upper() {
            Ok(Ordering::Greater)
        } else {
            Err(Error::AmbiguousComparison(format!("{} vs {}", self.short(), other.short())))
        }
    }

    pub fn lt(&self, other: &Scalar) -> Result<bool> {
        Ok(self.compare(other)? == Ordering::Less)
    }

    pub fn le(&self, other: &Scalar) -> Result<bool> {
        Ok(self.compare(other)? != Ordering::Greater)
    }

    pub fn signum(&self) -> Result<Ordering> {
        self.compare(&Scalar::zero())
    }

    /// `(⌊x⌋, x − ⌊x⌋)`, with the fractional part in `[0, 1)`.
    pub fn floor_frac(&self) -> Result<(BigInt, Scalar)> {
        match self {
            Scalar::Exact(q) => {
                let n = q.floor().to_integer();
                Ok((n.clone(), Scalar::Exact(q - BigRational::from_integer(n))))
            }
            Scalar::Approx(iv) => {
                let n = iv.lower().floor();
                if iv.upper() >= &n + BigRational::one() {
                    return Err(Error::AmbiguousComparison(format!("floor of {} straddles an integer", self.short())));
                }
                let n = n.to_integer();
                let frac = self - &Scalar::from_big(n.clone());
                Ok((n, frac))
            }
        }
    }

    pub fn floor(&self) -> Result<BigInt> {
        Ok(self.floor_frac()?.0)
    }

    pub fn frac(&self) -> Result<Scalar> {
        Ok(self.floor_frac()?.1)
    }

    /// Square root; exact when the argument is an exact rational square.
    pub fn sqrt(&self, bits: u32) -> Result<Scalar> {
        match self {
            Scalar::Exact(_) => sqrt_scalar(self, bits),
            Scalar::Approx(iv) => {
                let hi = iv.upper();
                if hi.is_negative() {
                    return Err(Error::NegativeRadicand(self.short()));
                }
                let lo = iv.lower().max(BigRational::zero());
                let bits = bits.max(iv.bits);
                let (l, _) = sqrt_bounds(&lo, bits);
                let (_, h) = sqrt_bounds(&hi, bits);
                Ok(Scalar::Approx(Interval::from_bounds(l, h, bits)))
            }
        }
    }

    /// Decimal rendering of the midpoint with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        rational_to_decimal(&self.midpoint(), digits)
    }

    fn short(&self) -> String {
        match self {
            Scalar::Exact(q) => q.to_string(),
            Scalar::Approx(iv) => {
                format!("{}±{:.3e}", rational_to_decimal(&iv.mid, 12), iv.rad.to_f64().unwrap_or(f64::NAN))
            }
        }
    }

    /// Parses the scalar text syntax with an explicit precision for surds.
    ///
    /// Accepted forms: `p/q`, integers, decimals (`-1.25`, `1e-9`),
    /// `sqrt:r` where `r` is any exact form, and `approx:MID:RAD:BITS`.
    pub fn parse_with_precision(s: &str, bits: u32) -> Result<Scalar> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("sqrt:") {
            let r = parse_exact(rest)?;
            return sqrt_scalar(&Scalar::Exact(r), bits);
        }
        if let Some(rest) = s.strip_prefix("approx:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("expected approx:MID:RAD:BITS, got {s:?}")));
            }
            let mid = parse_exact(parts[0])?;
            let rad = parse_exact(parts[1])?;
            let b: u32 = parts[2].parse().map_err(|_| Error::Parse(format!("bad precision in {s:?}")))?;
            return Scalar::approx(mid, rad, b);
        }
        Ok(Scalar::Exact(parse_exact(s)?))
    }
}

/// `⌊√x⌋`-style bounds at scale `2^(bits+2)`: `lo ≤ √x ≤ hi`.
fn sqrt_bounds(x: &BigRational, bits: u32) -> (BigRational, BigRational) {
    let scale = pow2(bits as u64 + 2);
    let sq = BigRational::from_integer(&scale * &scale);
    let y = x * sq;
    let lo_int = y.floor().to_integer().sqrt();
    let hi_int = y.ceil().to_integer().sqrt() + 1u32;
    let s = BigRational::from_integer(scale);
    (BigRational::from_integer(lo_int) / &s, BigRational::from_integer(hi_int) / s)
}

fn perfect_square(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Certified square root of an exact nonnegative rational.
///
/// Exact squares come back as exact values; otherwise the result is an
/// interval of width at most `2^(1 − bits)` containing `√r`.
pub fn sqrt_scalar(r: &Scalar, bits: u32) -> Result<Scalar> {
    let q = r.as_exact().ok_or_else(|| Error::InvalidArgument("sqrt_scalar expects an exact radicand".into()))?;
    if bits < MIN_SQRT_PRECISION_BITS {
        return Err(Error::InvalidArgument(format!("precision must be at least {MIN_SQRT_PRECISION_BITS} bits")));
    }
    if q.is_negative() {
        return Err(Error::NegativeRadicand(q.to_string()));
    }
    if let (Some(a), Some(b)) = (perfect_square(q.numer()), perfect_square(q.denom())) {
        return Ok(Scalar::Exact(BigRational::new(a, b)));
    }
    // √(a/b) = √(ab)/b; bracket √(ab) on a 2^(bits+2) grid.
    let (a, b) = (q.numer(), q.denom());
    let scale = pow2(bits as u64 + 2);
    let s = (a * b * &scale * &scale).sqrt();
    let denom = b * &scale;
    let two = BigInt::from(2);
    let mid = BigRational::new(&s * &two + 1, &denom * &two);
    let rad = BigRational::new(BigInt::one(), denom * two);
    Ok(Scalar::Approx(Interval { mid, rad, bits }))
}

fn parse_int(s: &str) -> Result<BigInt> {
    if s.is_empty() || !s.trim_start_matches(['+', '-']).chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("not an integer: {s:?}")));
    }
    BigInt::from_str(s.trim_start_matches('+')).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses `p/q`, integers and decimal literals (with optional exponent) as
/// exact rationals.
pub fn parse_exact(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty scalar".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_int(n.trim())?;
        let d = parse_int(d.trim())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], parse_int(&s[i + 1..])?),
        None => (s, BigInt::zero()),
    };
    let exp = exp
        .to_i64()
        .filter(|e| e.abs() <= 10_000)
        .ok_or_else(|| Error::Parse(format!("exponent out of range in {s:?}")))?;
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("not a number: {s:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a number: {s:?}")));
    }
    let mut value = BigRational::from_integer(BigInt::from_str(&digits).unwrap_or_default());
    let ten = BigRational::from_integer(10.into());
    let shift = exp - frac_part.len() as i64;
    let factor = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Ok(if neg { -value } else { value })
}

fn rational_to_decimal(q: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (q * BigRational::from_integer(scale.clone())).round().to_integer();
    let neg = scaled.sign() == Sign::Minus;
    let (int, frac) = scaled.abs().div_rem(&scale);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
    }
}

/// Runs `f` at increasing precision until it stops reporting an ambiguous
/// comparison. Precision doubles from `start` up to `max`.
pub fn with_precision_retry<T>(start: u32, max: u32, mut f: impl FnMut(u32) -> Result<T>) -> Result<T> {
    let mut bits = start.max(MIN_SQRT_PRECISION_BITS);
    loop {
        match f(bits) {
            Err(e) if e.is_ambiguous() => {
                if bits >= max {
                    return Err(Error::PrecisionExhausted(bits));
                }
                bits = (bits * 2).min(max);
            }
            other => return other,
        }
    }
}

/// Default uniformity tolerance for interval computations at `bits` precision.
pub fn default_tolerance(bits: u32) -> Scalar {
    let e = bits.saturating_sub(8) as u64;
    Scalar::Exact(BigRational::new(BigInt::one(), pow2(e)))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Approx(iv) => write!(f, "approx:{}:{}:{}", iv.mid, iv.rad, iv.bits),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scalar> {
        Scalar::parse_with_precision(s, DEFAULT_PRECISION_BITS)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::Exact(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => {
                let bits = self.joint_bits(rhs);
                let (a, b) = (self.promote(bits), rhs.promote(bits));
                Scalar::Approx(Interval::rounded(a.mid + b.mid, a.rad + b.rad, bits))
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => {
                let bits = self.joint_bits(rhs);
                let (a, b) = (self.promote(bits), rhs.promote(bits));
                let rad = a.mid.abs() * &b.rad + b.mid.abs() * &a.rad + &a.rad * &b.rad;
                Scalar::Approx(Interval::rounded(a.mid * b.mid, rad, bits))
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(q) => Scalar::Exact(-q),
            Scalar::Approx(iv) => Scalar::Approx(Interval { mid: -&iv.mid, rad: iv.rad.clone(), bits: iv.bits }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}
