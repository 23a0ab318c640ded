//! Exact ordered scalars used for arc weights, cut values and dual potentials.
//!
//! Every min-max certificate produced by this crate is checked by exact
//! equality, so the scalar has to be totally ordered and closed under the ring
//! operations without rounding. Integers and rationals qualify; floats do not
//! implement [`Ord`] and are rejected at the type level.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Mul, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub trait Scalar:
    Clone
    + Ord
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + SubAssign
    + Send
    + Sync
    + 'static
{
    /// Converts an arc-unit count (multiplicity, k, ...) into the scalar.
    fn from_count(n: u64) -> Self;

    /// Parses a literal as written in the graph file: integers, `p/q`, or
    /// terminating decimals such as `0.25`.
    fn parse_literal(s: &str) -> Option<Self>;

    /// Writes the value back as the shortest exact literal.
    fn to_literal(&self) -> String;

    fn is_integral(&self) -> bool;
}

macro_rules! impl_int_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn from_count(n: u64) -> Self {
                <$t>::try_from(n).expect("count does not fit the scalar type")
            }

            fn parse_literal(s: &str) -> Option<Self> {
                if let Ok(v) = s.parse::<$t>() {
                    return Some(v);
                }
                // Accept rational or decimal spellings of integral values.
                let r = parse_ratio::<BigInt>(s)?;
                if !r.is_integer() {
                    return None;
                }
                r.to_integer().to_string().parse().ok()
            }

            fn to_literal(&self) -> String {
                self.to_string()
            }

            fn is_integral(&self) -> bool {
                true
            }
        }
    )*};
}

impl_int_scalar!(i64, i128);

macro_rules! impl_ratio_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for Ratio<$t> {
            fn from_count(n: u64) -> Self {
                Ratio::from_integer(<$t>::from(n))
            }

            fn parse_literal(s: &str) -> Option<Self> {
                parse_ratio::<$t>(s)
            }

            fn to_literal(&self) -> String {
                ratio_literal(self)
            }

            fn is_integral(&self) -> bool {
                self.is_integer()
            }
        }
    )*};
}

impl_ratio_scalar!(i128, BigInt);

fn parse_ratio<T>(s: &str) -> Option<Ratio<T>>
where
    T: Integer + Clone + Signed + std::str::FromStr + From<u8>,
{
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: T = parse_int(num)?;
        let den: T = parse_int(den)?;
        if den.is_zero() {
            return None;
        }
        return Some(Ratio::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{}{}", whole_digits, frac);
        let mut num: T = digits.parse().ok()?;
        if negative {
            num = T::zero() - num;
        }
        let ten = T::from(10u8);
        let mut den = T::one();
        for _ in 0..frac.len() {
            den = den * ten.clone();
        }
        return Some(Ratio::new(num, den));
    }
    Some(Ratio::from_integer(parse_int(s)?))
}

fn parse_int<T: std::str::FromStr>(s: &str) -> Option<T> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.strip_prefix('+').unwrap_or(s).parse().ok()
}

/// Integer, terminating decimal, or `p/q`, in that order of preference.
fn ratio_literal<T>(r: &Ratio<T>) -> String
where
    T: Integer + Clone + Signed + Display + From<u8>,
{
    if r.is_integer() {
        return r.numer().to_string();
    }
    let two = T::from(2u8);
    let five = T::from(5u8);
    let mut den = r.denom().clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_multiple_of(&two) {
        den = den / two.clone();
        twos += 1;
    }
    while den.is_multiple_of(&five) {
        den = den / five.clone();
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let places = twos.max(fives);
    let mut scale = T::one();
    for _ in 0..places {
        scale = scale * T::from(10u8);
    }
    let scaled = r.numer().clone() * (scale / r.denom().clone());
    let negative = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let padded = format!("{:0>width$}", digits, width = places + 1);
    let (whole, frac) = padded.split_at(padded.len() - places);
    format!("{}{}.{}", if negative { "-" } else { "" }, whole, frac)
}
