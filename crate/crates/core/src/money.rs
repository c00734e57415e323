//! Fixed-point money and distance.
//!
//! Both types store hundredths in an `i64`, so sums and comparisons are exact.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid decimal amount `{0}`")]
pub struct AmountParseError(pub String);

/// Parses a decimal with at most two fractional digits into hundredths.
///
/// Accepts a leading `$`, thousands separators and surrounding whitespace.
/// Extra fractional digits are rounded half away from zero.
fn parse_hundredths(raw: &str) -> Result<i64, AmountParseError> {
    let err = || AmountParseError(raw.to_string());
    let mut s: String = raw.trim().chars().filter(|c| *c != ',' && *c != '_').collect();
    let negative = s.starts_with('-');
    if negative || s.starts_with('+') {
        s.remove(0);
    }
    let s = s.strip_prefix('$').unwrap_or(&s).trim();
    if s.is_empty() {
        return Err(err());
    }
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let whole: i64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| err())? };
    let digits: Vec<i64> = frac_part.bytes().map(|b| i64::from(b - b'0')).collect();
    let mut frac = digits.first().copied().unwrap_or(0) * 10 + digits.get(1).copied().unwrap_or(0);
    if digits.get(2).copied().unwrap_or(0) >= 5 {
        frac += 1;
    }
    let value = whole.checked_mul(100).and_then(|w| w.checked_add(frac)).ok_or_else(err)?;
    Ok(if negative { -value } else { value })
}

fn fmt_hundredths(v: i64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let sign = if v < 0 { "-" } else { "" };
    let a = v.unsigned_abs();
    write!(f, "{sign}{}.{:02}", a / 100, a % 100)
}

/// Divides and rounds half away from zero.
fn div_round(num: i128, den: i128) -> i128 {
    let q = num / den;
    let r = num % den;
    if 2 * r.abs() >= den.abs() {
        q + if (num < 0) ^ (den < 0) { -1 } else { 1 }
    } else {
        q
    }
}

macro_rules! hundredths_serde {
    ($ty:ident, $what:literal) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                // Whole amounts serialize as integers so JSON output stays tidy.
                if self.0 % 100 == 0 {
                    serializer.serialize_i64(self.0 / 100)
                } else {
                    serializer.serialize_f64(self.0 as f64 / 100.0)
                }
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                struct V;
                impl<'de> Visitor<'de> for V {
                    type Value = $ty;
                    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                        f.write_str($what)
                    }
                    fn visit_i64<E: de::Error>(self, v: i64) -> Result<$ty, E> {
                        v.checked_mul(100).map($ty).ok_or_else(|| E::custom("amount overflow"))
                    }
                    fn visit_u64<E: de::Error>(self, v: u64) -> Result<$ty, E> {
                        i64::try_from(v)
                            .ok()
                            .and_then(|v| v.checked_mul(100))
                            .map($ty)
                            .ok_or_else(|| E::custom("amount overflow"))
                    }
                    fn visit_f64<E: de::Error>(self, v: f64) -> Result<$ty, E> {
                        // Route through the shortest decimal rendering to avoid binary noise.
                        parse_hundredths(&v.to_string()).map($ty).map_err(E::custom)
                    }
                    fn visit_str<E: de::Error>(self, v: &str) -> Result<$ty, E> {
                        parse_hundredths(v).map($ty).map_err(E::custom)
                    }
                }
                deserializer.deserialize_any(V)
            }
        }

        impl FromStr for $ty {
            type Err = AmountParseError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                parse_hundredths(s).map($ty)
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt_hundredths(self.0, f)
            }
        }
    };
}

/// A currency amount in hundredths (cents).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Money(i64);

hundredths_serde!(Money, "a decimal currency amount");

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn from_cents(cents: i64) -> Self {
        Money(cents)
    }

    pub const fn from_units(units: i64) -> Self {
        Money(units * 100)
    }

    pub const fn cents(self) -> i64 {
        self.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn times(self, n: u32) -> Money {
        Money(self.0 * i64::from(n))
    }

    /// Rate-per-mile times distance, rounded half away from zero to the cent.
    pub fn per_mile(self, distance: Miles) -> Money {
        Money(div_round(i128::from(self.0) * i128::from(distance.0), 100) as i64)
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

/// A distance in hundredths of a mile.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Miles(i64);

hundredths_serde!(Miles, "a decimal distance in miles");

impl Miles {
    pub const fn from_hundredths(h: i64) -> Self {
        Miles(h)
    }

    pub const fn from_whole(m: i64) -> Self {
        Miles(m * 100)
    }

    pub const fn hundredths(self) -> i64 {
        self.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }
}
