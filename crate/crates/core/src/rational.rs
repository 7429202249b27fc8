//! The exact scalar type and its canonical string form.
//!
//! Every quantity in the crate is a [`Rational`]: always reduced, with a
//! positive denominator. The canonical text form is `p/q`, with `/1`
//! omitted, e.g. `-31/4`, `9`, `0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `2^k` for any integer `k`, exact.
pub fn pow2(k: i64) -> Rational {
    let mag = BigInt::one() << k.unsigned_abs() as usize;
    if k >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

/// Parses `p/q` or an integer. Decimals are rejected.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() || s.contains('.') || s.contains(char::is_whitespace) {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_all(v: &[Rational]) -> Vec<String> {
    v.iter().map(format).collect()
}

pub fn parse_all<S: AsRef<str>>(v: &[S]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse(s.as_ref())).collect()
}

/// Writes integers and other displayable values as JSON strings.
pub fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    x: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Decimal approximation rounded half away from zero to `places` digits.
pub fn decimal(r: &Rational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled: BigInt = r.numer().abs() * &scale * 2 + r.denom();
    let rounded = scaled.div_floor(&(r.denom() * 2));
    let (whole, rest) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{whole}");
    }
    format!(
        "{sign}{whole}.{:0>width$}",
        rest.to_string(),
        width = places as usize
    )
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales a rational vector to the primitive integer vector with the same
/// direction (positive multiple). The zero vector maps to zeros.
pub fn primitive_integer(values: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(values);
    let mut ints: Vec<BigInt> = values
        .iter()
        .map(|v| v.numer() * (&den / v.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in &mut ints {
            *v /= &g;
        }
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings() {
        assert_eq!(format(&frac(-31, 4)), "-31/4");
        assert_eq!(format(&int(9)), "9");
        assert_eq!(format(&int(0)), "0");
        assert_eq!(format(&frac(6, -8)), "-3/4");
        assert_eq!(parse("-62/8").unwrap(), frac(-31, 4));
        assert_eq!(parse("0/5").unwrap(), int(0));
        assert_eq!(format(&parse("0/5").unwrap()), "0");
    }

    #[test]
    fn rejects_decimals_and_garbage() {
        assert!(parse("0.5").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("").is_err());
        assert!(parse("auto").is_err());
        assert!(parse("1 / 2").is_err());
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(pow2(0), int(1));
        assert_eq!(pow2(5), int(32));
        assert_eq!(pow2(-3), frac(1, 8));
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal(&frac(172, 38), 6), "4.526316");
        assert_eq!(decimal(&frac(-1, 3), 3), "-0.333");
        assert_eq!(decimal(&frac(2, 3), 0), "1");
        assert_eq!(decimal(&frac(-1, 10_000_000), 6), "0.000000");
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_integer(&[frac(3, 4), frac(-1, 8), int(0)]);
        assert_eq!(v, vec![BigInt::from(6), BigInt::from(-1), BigInt::from(0)]);
    }
}
