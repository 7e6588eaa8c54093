//! Exact rationals and their decimal rendering.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn from_biguint(v: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from_biguint(Sign::Plus, v.clone()))
}

/// Parses `"3"`, `"-1/8"`, `"0.125"` or `"1.5e-3"` exactly. Decimal forms go through a
/// power-of-ten denominator, never through binary floating point.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s: String = text.trim().chars().filter(|c| *c != '_').collect();
    let bad = || Error::InvalidNumber(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s.as_str(), 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{whole}{frac}");
    let mut num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
    if negative {
        num = -num;
    }
    let scale = exp - frac.len() as i64;
    let ten = BigInt::from(10u8);
    let value = if scale >= 0 {
        Rational::from_integer(num * Pow::pow(&ten, scale as u64))
    } else {
        Rational::new(num, Pow::pow(&ten, (-scale) as u64))
    };
    Ok(value)
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Floor of log10(|r|) for nonzero r.
fn floor_log10(r: &Rational) -> i64 {
    let a = r.abs();
    let ten = Rational::from_integer(BigInt::from(10));
    // digit-count estimate, then correct by at most a couple of steps
    let nd = a.numer().to_string().len() as i64;
    let dd = a.denom().to_string().len() as i64;
    let mut e = nd - dd;
    let pow10 = |e: i64| -> Rational {
        if e >= 0 {
            Pow::pow(&ten, e as u64)
        } else {
            Pow::pow(&ten, (-e) as u64).recip()
        }
    };
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }
    e
}

/// Scientific notation with `digits` significant digits, truncated toward zero
/// (`"-6.000e0"`, `"0"` for zero). Locale independent.
pub fn to_scientific(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let e = floor_log10(r);
    let shift = digits as i64 - 1 - e;
    let ten = BigInt::from(10);
    let scaled = if shift >= 0 {
        r.abs() * Rational::from_integer(Pow::pow(&ten, shift as u64))
    } else {
        r.abs() / Rational::from_integer(Pow::pow(&ten, (-shift) as u64))
    };
    let m = scaled.to_integer().to_string();
    format_mantissa(r.is_negative(), &m, e)
}

pub(crate) fn format_mantissa(negative: bool, m: &str, e: impl std::fmt::Display) -> String {
    let sign = if negative { "-" } else { "" };
    if m.len() == 1 {
        format!("{sign}{m}e{e}")
    } else {
        format!("{sign}{}.{}e{e}", &m[..1], &m[1..])
    }
}

/// Integer square root of a non-negative rational to `digits` decimal places, as a
/// fixed-point string. Truncates.
pub fn sqrt_decimal(r: &Rational, digits: u32) -> String {
    assert!(!r.is_negative());
    let scale = Pow::pow(&BigInt::from(10), 2 * digits as u64);
    let v = (r * Rational::from_integer(scale)).to_integer();
    let root = v.sqrt();
    let s = root.to_string();
    let d = digits as usize;
    let padded = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
    let (a, b) = padded.split_at(padded.len() - d);
    if d == 0 {
        a.to_string()
    } else {
        format!("{a}.{b}")
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn is_dyadic(r: &Rational) -> bool {
    let d = r.denom();
    (d & (d - BigInt::one())).is_zero()
}

pub fn lcm_of_denominators<'a>(rs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    rs.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_decimal_forms_exactly() {
        assert_eq!(parse_rational("1/8").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("-2/4").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("1e-2").unwrap(), rat(1, 100));
        assert_eq!(parse_rational("0.1").unwrap(), rat(1, 10));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn scientific_rendering() {
        assert_eq!(to_scientific(&int(-6), 4), "-6.000e0");
        assert_eq!(to_scientific(&rat(1, 3), 5), "3.3333e-1");
        assert_eq!(to_scientific(&int(1000), 1), "1e3");
        assert_eq!(to_scientific(&int(0), 5), "0");
        assert_eq!(to_scientific(&rat(999, 1000), 2), "9.9e-1");
    }

    #[test]
    fn sqrt_decimal_truncates() {
        assert_eq!(sqrt_decimal(&int(2), 5), "1.41421");
        assert_eq!(sqrt_decimal(&rat(1, 4), 3), "0.500");
        assert_eq!(sqrt_decimal(&rat(1, 10000), 4), "0.0100");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(91, 0), BigInt::from(1));
        assert_eq!(binomial(3, 4), BigInt::from(0));
    }
}
