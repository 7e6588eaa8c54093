use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{lcm_of_denominators, Rational};
use crate::error::{Error, Result};

/// Default ceiling on the degree of an explicitly expanded power.
pub const DEFAULT_DEGREE_CEILING: usize = 20_000;

/// Dense univariate polynomial in `q` over the rationals.
///
/// `coeffs[i]` is the coefficient of `q^i`; trailing zeros are always trimmed, so the
/// zero polynomial has no coefficients at all.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * q^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coeffs: Vec<BigInt>) -> Self {
        Self::new(coeffs.into_iter().map(Rational::from_integer).collect())
    }

    /// `1 - q`
    pub fn one_minus_q() -> Self {
        Self::from_ints(&[1, -1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// `q^k · self`
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_int(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Exact value at `q` by Horner's scheme.
    pub fn eval(&self, q: &Rational) -> Rational {
        // Homogenised Horner over the integers, one reduction at the end.
        let (den_lcm, ints) = self.integer_parts();
        if ints.is_empty() {
            return Rational::zero();
        }
        let (num, den) = (q.numer(), q.denom());
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        for (k, c) in ints.iter().rev().enumerate() {
            if k > 0 {
                den_pow *= den;
            }
            acc = acc * num + c * &den_pow;
        }
        // acc = sum c_i num^i den^(d-i), den_pow = den^d
        Rational::new(acc, den_pow * den_lcm)
    }

    pub fn eval_f64(&self, q: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * q + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Least common denominator `L` and integer coefficients with `self = ints / L`.
    pub fn integer_parts(&self) -> (BigInt, Vec<BigInt>) {
        let l = lcm_of_denominators(&self.coeffs);
        let ints = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        (l, ints)
    }

    /// Positive rational multiple with coprime integer coefficients.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let (_, mut ints) = self.integer_parts();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for c in &mut ints {
                *c /= &g;
            }
        }
        ints
    }

    /// Exact `ℓ`-th power by repeated squaring, refused when `ℓ·deg` exceeds `ceiling`.
    pub fn pow(&self, exp: &BigUint, ceiling: usize) -> Result<Self> {
        if exp.is_zero() {
            return Ok(Self::one());
        }
        let deg = self.degree().unwrap_or(0) as u128;
        let total = exp.to_u128().map(|e| e.saturating_mul(deg)).unwrap_or(u128::MAX);
        if deg > 0 && total > ceiling as u128 {
            return Err(Error::DegreeCeiling { degree: total, ceiling });
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if deg == 0 {
            // constant: exponent may be large but the value stays a single rational
            let e = exp.to_u32().ok_or(Error::DegreeCeiling { degree: u128::MAX, ceiling })?;
            return Ok(Self::constant(num_traits::Pow::pow(&self.coeffs[0], e)));
        }
        let mut e = exp.to_u64().expect("bounded by ceiling");
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn pow_u64(&self, exp: u64) -> Self {
        self.pow(&BigUint::from(exp), usize::MAX).expect("no ceiling")
    }

    /// Quotient and remainder of Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(dn) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if dn < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact integration from `lo` to `hi`.
    pub fn integrate(&self, lo: &Rational, hi: &Rational) -> Rational {
        let anti = Self::new(
            std::iter::once(Rational::zero())
                .chain(
                    self.coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c / Rational::from_integer(BigInt::from(i + 1))),
                )
                .collect(),
        );
        anti.eval(hi) - anti.eval(lo)
    }

    /// Human-readable power-basis form, e.g. `1 - 3q^2 + 2q^3`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mag_text = super::rational::render_rational(&mag);
            match (i, mag.is_one()) {
                (0, _) => out.push_str(&mag_text),
                (_, true) => {}
                (_, false) => out.push_str(&mag_text),
            }
            match i {
                0 => {}
                1 => out.push('q'),
                _ => {
                    out.push_str("q^");
                    out.push_str(&i.to_string());
                }
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let (la, a) = self.integer_parts();
        let (lb, b) = rhs.integer_parts();
        let prod = int_mul(&a, &b);
        let den = la * lb;
        if den.is_one() {
            return Polynomial::from_bigints(prod);
        }
        Polynomial::new(prod.into_iter().map(|c| Rational::new(c, den.clone())).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// Integer convolution.
pub(crate) fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, rat};

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn arithmetic_examples() {
        let one_minus_q = p(&[1, -1]);
        assert_eq!(&one_minus_q * &one_minus_q, p(&[1, -2, 1]));
        assert_eq!(&one_minus_q + &Polynomial::zero(), one_minus_q);
        let r3 = p(&[1, 0, -3, 2]);
        // independent hand expansion of (1 - 3q^2 + 2q^3)(1 - q)
        assert_eq!(&r3 * &one_minus_q, p(&[1, -1, -3, 5, -2]));
        assert_eq!(&r3 - &r3, Polynomial::zero());
    }

    #[test]
    fn zero_polynomial_has_no_coefficients() {
        assert!(p(&[0, 0, 0]).coeffs().is_empty());
        assert_eq!(p(&[0, 0]).degree(), None);
        assert_eq!(p(&[3, 0, 0]).degree(), Some(0));
    }

    #[test]
    fn powers() {
        let r3 = p(&[1, 0, -3, 2]);
        assert_eq!(p(&[1, -1]).pow_u64(2), p(&[1, -2, 1]));
        assert_eq!(r3.pow_u64(0), Polynomial::one());
        assert_eq!(r3.pow_u64(2), p(&[1, 0, -6, 4, 9, -12, 4]));
        let err = r3.pow(&BigUint::from(10_000u32), DEFAULT_DEGREE_CEILING).unwrap_err();
        assert!(matches!(err, Error::DegreeCeiling { degree: 30_000, .. }));
    }

    #[test]
    fn derivative_and_evaluation() {
        let r3 = p(&[1, 0, -3, 2]);
        assert_eq!(p(&[1, -1]).derivative(), p(&[-1]));
        assert_eq!(r3.derivative(), p(&[0, -6, 6]));
        assert_eq!(p(&[5]).derivative(), Polynomial::zero());
        assert_eq!(p(&[1, -1]).eval(&int(0)), int(1));
        assert_eq!(r3.eval(&rat(1, 2)), rat(1, 2));
        assert_eq!(r3.eval(&int(0)), int(1));
        let frac = Polynomial::new(vec![rat(1, 3), rat(-5, 7)]);
        assert_eq!(frac.eval(&rat(2, 5)), rat(1, 3) - rat(2, 7));
    }

    #[test]
    fn division_and_integration() {
        let a = p(&[-1, 0, 0, 1]);
        let (quot, rem) = a.div_rem(&p(&[-1, 1])).unwrap();
        assert_eq!(quot, p(&[1, 1, 1]));
        assert!(rem.is_zero());
        assert_eq!(p(&[0, 2]).integrate(&int(0), &int(1)), int(1));
    }

    #[test]
    fn text_form() {
        assert_eq!(p(&[1, 0, -3, 2]).to_text(), "1 - 3q^2 + 2q^3");
        assert_eq!(p(&[0, -1]).to_text(), "-q");
        assert_eq!(Polynomial::zero().to_text(), "0");
    }
}
