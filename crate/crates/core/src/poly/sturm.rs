//! Real-root counting on rational intervals: squarefree parts, Sturm chains built from a
//! subresultant remainder sequence, bisection isolation and sign-change counting.
//!
//! All work happens on primitive integer polynomials. Scaling by positive constants never
//! changes a sign, so a Sturm chain only needs each member up to a positive factor.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::polynomial::Polynomial;
use super::rational::{int, rat, render_rational, Rational};
use crate::error::{Error, Result};

type IntPoly = Vec<BigInt>;

fn trim(p: &mut IntPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn deg(p: &IntPoly) -> usize {
    p.len() - 1
}

fn content(p: &IntPoly) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn make_primitive(p: &mut IntPoly) {
    let g = content(p);
    if !g.is_zero() && !g.is_one() {
        for c in p.iter_mut() {
            *c /= &g;
        }
    }
}

fn int_derivative(p: &IntPoly) -> IntPoly {
    let mut d: IntPoly = p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    trim(&mut d);
    d
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) · a  mod  b`.
fn prem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let db = deg(b);
    let lb = &b[db];
    let mut r = a.clone();
    let mut e = deg(a) - db + 1;
    while !r.is_empty() && r.len() > db {
        let dr = deg(&r);
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &lr * bc;
        }
        trim(&mut r);
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let f = Pow::pow(lb, e as u32);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// Sign of `p(num/den)` for `den > 0`, computed homogeneously in integers.
fn sign_at(p: &IntPoly, x: &Rational) -> i8 {
    if p.is_empty() {
        return 0;
    }
    let (num, den) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut den_pow = BigInt::one();
    for (k, c) in p.iter().rev().enumerate() {
        if k > 0 {
            den_pow *= den;
        }
        acc = acc * num + c * &den_pow;
    }
    match acc.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

/// Signed remainder sequence `p, p', -rem, ...` with each member kept as a positive
/// multiple of the classical Sturm member.
///
/// The Collins subresultant scheme divides every pseudo-remainder by a factor known to
/// divide it exactly, which keeps coefficient growth polynomial in the degree.
fn signed_remainder_sequence(a0: IntPoly, b0: IntPoly) -> Vec<IntPoly> {
    let mut seq = vec![a0];
    if b0.is_empty() {
        return seq;
    }
    seq.push(b0);
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let n = seq.len();
        let (a, b) = (&seq[n - 2], &seq[n - 1]);
        if deg(b) == 0 {
            break;
        }
        let delta = deg(a) - deg(b);
        let mut r = prem(a, b);
        if r.is_empty() {
            break;
        }
        let divisor = &g * Pow::pow(&h, delta as u32);
        if !divisor.is_one() {
            for c in r.iter_mut() {
                debug_assert!((&*c % &divisor).is_zero());
                *c /= &divisor;
            }
        }
        // prem = lc(b)^(delta+1) · rem; the Sturm member is a positive multiple of -rem.
        let lb_negative = b[deg(b)].is_negative();
        let flip = !(lb_negative && (delta + 1) % 2 == 1);
        if flip {
            for c in r.iter_mut() {
                *c = -&*c;
            }
        }
        g = b[deg(b)].abs();
        h = if delta == 1 {
            g.clone()
        } else {
            Pow::pow(&g, delta as u32) / Pow::pow(&h, (delta - 1) as u32)
        };
        seq.push(r);
    }
    seq
}

/// Sturm chain of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmChain {
    sequence: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &Polynomial) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let a = p.primitive_integer();
        let mut b = int_derivative(&a);
        make_primitive(&mut b);
        Ok(SturmChain { sequence: signed_remainder_sequence(a, b) })
    }

    pub fn sequence(&self) -> Vec<Polynomial> {
        self.sequence.iter().map(|p| Polynomial::from_bigints(p.clone())).collect()
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// True when the chain ends in a nonzero constant, i.e. the input was squarefree.
    pub fn ends_in_constant(&self) -> bool {
        self.sequence.last().is_some_and(|p| p.len() == 1)
    }

    fn head(&self) -> &IntPoly {
        &self.sequence[0]
    }

    /// Number of sign changes of the chain evaluated at `x`, zeros skipped.
    pub fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.sequence {
            let s = sign_at(p, x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }
}

fn check_interval(lo: &Rational, hi: &Rational) -> Result<()> {
    if lo >= hi {
        return Err(Error::EmptyInterval { lo: render_rational(lo), hi: render_rational(hi) });
    }
    Ok(())
}

/// `gcd(p, p')` up to a constant, as the last member of the subresultant sequence.
fn gcd_with_derivative(a: &IntPoly) -> IntPoly {
    let mut b = int_derivative(a);
    if b.is_empty() {
        return a.clone();
    }
    make_primitive(&mut b);
    let seq = signed_remainder_sequence(a.clone(), b);
    let mut g = seq.last().cloned().expect("nonempty");
    make_primitive(&mut g);
    g
}

/// `p / gcd(p, p')`: same real roots, all of multiplicity one. Returned as a primitive
/// integer polynomial with positive leading coefficient.
pub fn squarefree_part(p: &Polynomial) -> Result<Polynomial> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let a = p.primitive_integer();
    if a.len() == 1 {
        return Ok(Polynomial::one());
    }
    let g = gcd_with_derivative(&a);
    let base = Polynomial::from_bigints(a);
    let out = if g.len() == 1 {
        base
    } else {
        let (quot, rem) = base.div_rem(&Polynomial::from_bigints(g))?;
        debug_assert!(rem.is_zero());
        quot
    };
    let mut ints = out.primitive_integer();
    if ints.last().is_some_and(Signed::is_negative) {
        for c in ints.iter_mut() {
            *c = -&*c;
        }
    }
    Ok(Polynomial::from_bigints(ints))
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`.
///
/// Both endpoints must be non-roots; a root at an endpoint is reported as
/// [`Error::EndpointRoot`].
pub fn sturm_distinct_roots(p: &Polynomial, lo: &Rational, hi: &Rational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    check_interval(lo, hi)?;
    if p.eval(lo).is_zero() {
        return Err(Error::EndpointRoot { side: "lower", point: render_rational(lo) });
    }
    if p.eval(hi).is_zero() {
        return Err(Error::EndpointRoot { side: "upper", point: render_rational(hi) });
    }
    let chain = SturmChain::new(p)?;
    Ok(chain.variations(lo) - chain.variations(hi))
}

/// Sign changes of a polynomial on an open interval, with one isolating interval each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InflectionReport {
    /// Roots of odd multiplicity in the open interval.
    pub sign_changes: usize,
    /// Distinct roots in the open interval, whatever their multiplicity.
    pub distinct_roots: usize,
    #[serde(with = "interval_list")]
    pub isolating_intervals: Vec<(Rational, Rational)>,
    /// Multiplicity of `lo` and `hi` as roots, divided out before counting.
    pub endpoint_multiplicity: (usize, usize),
}

impl InflectionReport {
    /// Roots where the polynomial touches zero without changing sign.
    pub fn touch_points(&self) -> usize {
        self.distinct_roots - self.sign_changes
    }
}

mod interval_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::poly::rational::{parse_rational, render_rational, Rational};

    pub fn serialize<S: Serializer>(v: &[(Rational, Rational)], s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[String; 2]> = v.iter().map(|(a, b)| [render_rational(a), render_rational(b)]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(Rational, Rational)>, D::Error> {
        let pairs = Vec::<[String; 2]>::deserialize(d)?;
        pairs
            .into_iter()
            .map(|[a, b]| {
                let a = parse_rational(&a).map_err(serde::de::Error::custom)?;
                let b = parse_rational(&b).map_err(serde::de::Error::custom)?;
                Ok((a, b))
            })
            .collect()
    }
}

/// Divides out every factor `(q - x)` and returns the multiplicity removed.
fn deflate_at(p: &mut Polynomial, x: &Rational) -> usize {
    let factor = Polynomial::new(vec![-x.clone(), int(1)]);
    let mut count = 0;
    while !p.is_zero() && p.eval(x).is_zero() {
        let (quot, _) = p.div_rem(&factor).expect("linear divisor");
        *p = quot;
        count += 1;
    }
    count
}

/// A split point inside `(lo, hi)` that is not a root of the chain head.
fn split_point(chain: &SturmChain, lo: &Rational, hi: &Rational) -> Rational {
    let width = hi - lo;
    let mut t = rat(1, 2);
    let mut step = 3u32;
    loop {
        let x = lo + &width * &t;
        if sign_at(chain.head(), &x) != 0 {
            return x;
        }
        t = rat(1, 2) + Rational::new(BigInt::one(), Pow::pow(&BigInt::from(2), step));
        step += 1;
    }
}

fn isolate(
    chain: &SturmChain,
    lo: Rational,
    hi: Rational,
    v_lo: usize,
    v_hi: usize,
    out: &mut Vec<(Rational, Rational)>,
) {
    match v_lo - v_hi {
        0 => {}
        1 => out.push((lo, hi)),
        _ => {
            let mid = split_point(chain, &lo, &hi);
            let v_mid = chain.variations(&mid);
            isolate(chain, lo, mid.clone(), v_lo, v_mid, out);
            isolate(chain, mid, hi, v_mid, v_hi, out);
        }
    }
}

/// Counts roots of odd multiplicity of `p` in `(lo, hi)`.
///
/// Roots at the endpoints are divided out exactly first. The remaining roots are isolated
/// by Sturm bisection on the squarefree part; a root is a sign change when `p` takes
/// opposite signs at the ends of its isolating interval.
pub fn count_sign_changes(p: &Polynomial, lo: &Rational, hi: &Rational) -> Result<InflectionReport> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    check_interval(lo, hi)?;
    let mut work = p.clone();
    let lo_mult = deflate_at(&mut work, lo);
    let hi_mult = deflate_at(&mut work, hi);
    let sqf = squarefree_part(&work)?;
    let chain = SturmChain::new(&sqf)?;
    let v_lo = chain.variations(lo);
    let v_hi = chain.variations(hi);
    let mut intervals = Vec::new();
    isolate(&chain, lo.clone(), hi.clone(), v_lo, v_hi, &mut intervals);
    let distinct = intervals.len();
    let work_int = work.primitive_integer();
    let changes: Vec<(Rational, Rational)> = intervals
        .into_iter()
        .filter(|(a, b)| sign_at(&work_int, a) != sign_at(&work_int, b))
        .collect();
    Ok(InflectionReport {
        sign_changes: changes.len(),
        distinct_roots: distinct,
        isolating_intervals: changes,
        endpoint_multiplicity: (lo_mult, hi_mult),
    })
}
