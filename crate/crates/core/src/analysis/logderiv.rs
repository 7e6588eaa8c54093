//! The logarithmic derivative of `g = Π r_n^ℓ`, which decides the sign of `g''` without
//! ever expanding the power.
//!
//! With `L = g'/g = Σ ℓ r'/r` one has `g''/g = L² + L'`. Writing `Q = Π r` over the distinct
//! bases and `A = L·Q`, this becomes `(A² + A'Q − AQ')/Q²`. Since `g > 0` on `(0, 1)`, the
//! numerator `P` has the sign of `g''` there, and every `ℓ` enters `P` as an integer scalar.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

use super::bounds::{ln, Interval};
use super::spec::ProductSpec;
use crate::complete::CompleteCache;
use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational, DEFAULT_DEGREE_CEILING};

/// Exact `Π r_n^ℓ`, refused when the total degree exceeds [`DEFAULT_DEGREE_CEILING`].
pub fn product_reliability(spec: &ProductSpec, cache: &CompleteCache) -> Result<Polynomial> {
    product_reliability_with_ceiling(spec, cache, DEFAULT_DEGREE_CEILING)
}

pub fn product_reliability_with_ceiling(spec: &ProductSpec, cache: &CompleteCache, ceiling: usize) -> Result<Polynomial> {
    let total = spec.total_degree();
    if total > BigUint::from(ceiling) {
        return Err(Error::DegreeCeiling { degree: total.to_u128().unwrap_or(u128::MAX), ceiling });
    }
    let mut acc = Polynomial::one();
    for (n, l) in spec.merged().factors() {
        acc = &acc * &cache.reliability(*n)?.pow(l, ceiling)?;
    }
    Ok(acc)
}

/// `(P, Q)` with `g''/g = P/Q²` and `Q = Π r_n` over the distinct bases of `spec`.
pub fn log_second_derivative_numerator(spec: &ProductSpec, cache: &CompleteCache) -> Result<(Polynomial, Polynomial)> {
    let merged = spec.merged();
    let rs: Vec<Arc<Polynomial>> = merged.factors().iter().map(|(n, _)| cache.reliability(*n)).collect::<Result<_>>()?;
    let k = rs.len();
    // prefix[i] = r_0 ... r_(i-1), suffix[i] = r_i ... r_(k-1)
    let mut prefix = vec![Polynomial::one()];
    for r in &rs {
        prefix.push(prefix.last().unwrap() * r.as_ref());
    }
    let mut suffix = vec![Polynomial::one(); k + 1];
    for i in (0..k).rev() {
        suffix[i] = &suffix[i + 1] * rs[i].as_ref();
    }
    let q = prefix[k].clone();
    let mut a = Polynomial::zero();
    for (i, (_, l)) in merged.factors().iter().enumerate() {
        let others = &prefix[i] * &suffix[i + 1];
        let term = &rs[i].derivative() * &others;
        a = &a + &term.scale_int(&BigInt::from(l.clone()));
    }
    let p = &(&(&a * &a) + &(&a.derivative() * &q)) - &(&a * &q.derivative());
    Ok((p, q))
}

/// Values of one base `r` and its first two derivatives at a point.
#[derive(Clone, Debug)]
struct Jet {
    r: Rational,
    d1: Rational,
    d2: Rational,
}

fn jets(spec: &ProductSpec, cache: &CompleteCache, q: &Rational) -> Result<Vec<(Jet, BigUint)>> {
    spec.merged()
        .factors()
        .iter()
        .map(|(n, l)| {
            let r = cache.reliability(*n)?;
            let d1 = r.derivative();
            let jet = Jet { r: r.eval(q), d1: d1.eval(q), d2: d1.derivative().eval(q) };
            if jet.r.is_zero() {
                return Err(Error::Precondition(format!("r_{n} vanishes at q = {q}; the log-derivative needs g(q) > 0")));
            }
            Ok((jet, l.clone()))
        })
        .collect()
}

/// Exact `L(q) = g'(q)/g(q)` and `L(q)² + L'(q) = g''(q)/g(q)` at a rational `q` with `g(q) > 0`.
pub fn log_derivatives_at(spec: &ProductSpec, cache: &CompleteCache, q: &Rational) -> Result<(Rational, Rational)> {
    let mut l1 = Rational::zero();
    let mut dl = Rational::zero();
    for (jet, l) in jets(spec, cache, q)? {
        let l = Rational::from_integer(BigInt::from(l));
        let ratio = &jet.d1 / &jet.r;
        dl += &l * (&jet.d2 / &jet.r - &ratio * &ratio);
        l1 += l * ratio;
    }
    let second = &l1 * &l1 + dl;
    Ok((l1, second))
}

/// Certified enclosure of `ln g(q) = Σ ℓ ln r(q)` for `q` in `[0, 1)`.
pub fn ln_g(spec: &ProductSpec, cache: &CompleteCache, q: &Rational, prec: u32) -> Result<Interval> {
    let mut acc = Interval::point(&Rational::zero(), prec);
    for (jet, l) in jets(spec, cache, q)? {
        // ℓ can carry many bits, so the log needs that many more
        let extra = l.bits() as u32;
        let term = ln(&jet.r, prec + extra).scale_int(&BigInt::from(l));
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Sign of `g'(q)` (from `L(q)`, since `g > 0`) and a certified enclosure of `ln |g'(q)|`.
/// The enclosure is `None` when `g'(q) = 0`.
pub fn ln_abs_g_prime(spec: &ProductSpec, cache: &CompleteCache, q: &Rational, prec: u32) -> Result<(i8, Option<Interval>)> {
    let (l1, _) = log_derivatives_at(spec, cache, q)?;
    if l1.is_zero() {
        return Ok((0, None));
    }
    let sign = if l1.is_negative() { -1 } else { 1 };
    let log = ln_g(spec, cache, q, prec)?.add(&ln(&l1.abs(), prec));
    Ok((sign, Some(log)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::spec::parse_spec;
    use crate::poly::rational::{int, rat};
    use proptest::prelude::*;

    fn spec(s: &str) -> ProductSpec {
        parse_spec(s).unwrap()
    }

    #[test]
    fn product_examples() {
        let c = CompleteCache::new();
        assert_eq!(product_reliability(&spec("K2"), &c).unwrap(), Polynomial::from_ints(&[1, -1]));
        assert_eq!(product_reliability(&spec("K2^2"), &c).unwrap(), Polynomial::from_ints(&[1, -2, 1]));
        assert_eq!(product_reliability(&spec("K3*K2"), &c).unwrap(), Polynomial::from_ints(&[1, -1, -3, 5, -2]));
        let err = product_reliability(&spec("K14^100000000"), &c).unwrap_err();
        assert!(matches!(err, Error::DegreeCeiling { degree: 9_100_000_000, .. }));
    }

    #[test]
    fn numerator_examples() {
        let c = CompleteCache::new();
        let (p, q) = log_second_derivative_numerator(&spec("K2"), &c).unwrap();
        assert!(p.is_zero());
        assert_eq!(q, Polynomial::from_ints(&[1, -1]));
        let (p, _) = log_second_derivative_numerator(&spec("K2^2"), &c).unwrap();
        // g = (1-q)^2: L = -2/(1-q), L^2 + L' = 2/(1-q)^2
        assert_eq!(p, Polynomial::from_ints(&[2]));
        let (p, q) = log_second_derivative_numerator(&spec("K3"), &c).unwrap();
        // single factor: P = r'' r
        let r3 = Polynomial::from_ints(&[1, 0, -3, 2]);
        assert_eq!(q, r3);
        assert_eq!(p, &r3.derivative().derivative() * &r3);
    }

    #[test]
    fn point_values_match_expansion() {
        let c = CompleteCache::new();
        let s = spec("K3^2*K4*K2^3");
        let g = product_reliability(&s, &c).unwrap();
        let (g1, g2) = (g.derivative(), g.derivative().derivative());
        for q in [rat(1, 10), rat(1, 3), rat(7, 8)] {
            let (l1, l2) = log_derivatives_at(&s, &c, &q).unwrap();
            let gq = g.eval(&q);
            assert_eq!(&l1 * &gq, g1.eval(&q));
            assert_eq!(&l2 * &gq, g2.eval(&q));
        }
        assert!(log_derivatives_at(&s, &c, &int(1)).is_err());
    }

    #[test]
    fn log_enclosures_contain_exact_values() {
        let c = CompleteCache::new();
        let s = spec("K3^5*K4^2");
        let g = product_reliability(&s, &c).unwrap();
        let q = rat(1, 5);
        let exact = g.eval(&q);
        let iv = ln_g(&s, &c, &q, 128).unwrap();
        let direct = ln(&exact, 128);
        assert!(iv.lo <= direct.hi && direct.lo <= iv.hi);
        let (sign, log) = ln_abs_g_prime(&s, &c, &q, 128).unwrap();
        let d = g.derivative().eval(&q);
        assert_eq!(sign, -1);
        let direct = ln(&d.abs(), 128);
        let log = log.unwrap();
        assert!(log.lo <= direct.hi && direct.lo <= log.hi);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn numerator_times_g_is_g2_times_q_squared(fs in prop::collection::vec((2usize..6, 1u64..4), 1..4)) {
            let c = CompleteCache::new();
            let s = ProductSpec::from_pairs(&fs).unwrap();
            let g = product_reliability(&s, &c).unwrap();
            let (p, q) = log_second_derivative_numerator(&s, &c).unwrap();
            let lhs = &p * &g;
            let rhs = &(&g.derivative().derivative() * &q) * &q;
            prop_assert_eq!(lhs, rhs);
            prop_assert!(p.degree().unwrap_or(0) <= 2 * q.degree().unwrap());
        }
    }
}
