//! Certified interval arithmetic on dyadic rationals.
//!
//! Every interval is rounded outward to a fixed number of significant bits, so the true
//! value always lies inside. Comparisons that cannot be decided at one precision are
//! retried at a higher one (see [`decide`]).

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::rational::format_mantissa;
use crate::poly::Rational;

/// Precisions tried in order by [`decide`].
pub const PRECISION_LADDER: [u32; 6] = [64, 128, 256, 512, 1024, 4096];

fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// `floor(log2 |x|)` for nonzero `x`.
fn floor_log2(x: &Rational) -> i64 {
    let (n, d) = (x.numer().abs(), x.denom().clone());
    let mut e = n.bits() as i64 - d.bits() as i64;
    // 2^e <= |x| < 2^(e+1) after at most one correction
    let ax = Rational::new(n, d);
    if pow2(e) > ax {
        e -= 1;
    } else if pow2(e + 1) <= ax {
        e += 1;
    }
    e
}

fn round_magnitude(x: &Rational, prec: u32, up: bool) -> Rational {
    // |x| = a; result has `prec` significant bits
    let a = x.abs();
    let e = floor_log2(&a);
    let shift = prec as i64 - 1 - e;
    let scaled = &a * pow2(shift);
    let m = if up { scaled.ceil() } else { scaled.floor() };
    m * pow2(-shift)
}

/// Largest dyadic with `prec` significant bits that is `<= x`.
pub fn round_down(x: &Rational, prec: u32) -> Rational {
    match x.numer().sign() {
        Sign::NoSign => Rational::zero(),
        Sign::Plus => round_magnitude(x, prec, false),
        Sign::Minus => -round_magnitude(x, prec, true),
    }
}

/// Smallest dyadic with `prec` significant bits that is `>= x`.
pub fn round_up(x: &Rational, prec: u32) -> Rational {
    -round_down(&-x, prec)
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
    pub prec: u32,
}

impl Interval {
    pub fn point(x: &Rational, prec: u32) -> Self {
        Interval { lo: round_down(x, prec), hi: round_up(x, prec), prec }
    }

    fn new(lo: Rational, hi: Rational, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo: round_down(&lo, prec), hi: round_up(&hi, prec), prec }
    }

    /// Outward rounding to `prec` significant bits.
    pub fn round_to(self, prec: u32) -> Interval {
        self.round(prec)
    }

    fn round(self, prec: u32) -> Interval {
        Interval::new(self.lo, self.hi, prec)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi, self.prec.min(o.prec))
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo, self.prec.min(o.prec))
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if c.is_negative() {
            Interval::new(b, a, self.prec)
        } else {
            Interval::new(a, b, self.prec)
        }
    }

    pub fn scale_int(&self, c: &BigInt) -> Interval {
        self.scale(&Rational::from_integer(c.clone()))
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let ps = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = ps.iter().min().expect("four products").clone();
        let hi = ps.iter().max().expect("four products").clone();
        Interval::new(lo, hi, self.prec.min(o.prec))
    }

    pub fn max(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().max(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()), prec: self.prec.min(o.prec) }
    }

    pub fn min(&self, o: &Interval) -> Interval {
        Interval { lo: self.lo.clone().min(o.lo.clone()), hi: self.hi.clone().min(o.hi.clone()), prec: self.prec.min(o.prec) }
    }
}

/// `floor(x·2^w)` or `ceil(x·2^w)`.
fn to_fixed(x: &Rational, w: u64, up: bool) -> BigInt {
    let n = x.numer() << w as usize;
    if up {
        -(-n).div_floor(x.denom())
    } else {
        n.div_floor(x.denom())
    }
}

fn from_fixed(v: BigInt, w: u64) -> Rational {
    Rational::new(v, BigInt::one() << w as usize)
}

fn mul_fixed(a: &BigInt, b: &BigInt, w: u64, up: bool) -> BigInt {
    let p = a * b;
    if up {
        -((-p) >> w as usize)
    } else {
        p >> w as usize
    }
}

fn div_small(a: &BigInt, j: u64, up: bool) -> BigInt {
    let d = BigInt::from(j);
    if up {
        -(-a).div_floor(&d)
    } else {
        a.div_floor(&d)
    }
}

/// Bounds on `S(t) = Σ_{j>=1} t^j / j = -ln(1 - t)` for `0 <= t <= 1/2`, in fixed point
/// with enough fractional bits for `prec` bits relative to `t`.
fn neg_log1m_series(t: &Rational, prec: u32, upper: bool) -> Rational {
    if t.is_zero() {
        return Rational::zero();
    }
    let s = (-floor_log2(t)).max(1) as u64;
    let w = prec as u64 + s + 32;
    let tf = to_fixed(t, w, upper);
    let stop = BigInt::one() << 8;
    let mut sum = BigInt::zero();
    let mut power = tf.clone();
    let mut j = 1u64;
    loop {
        sum += div_small(&power, j, upper);
        power = mul_fixed(&power, &tf, w, upper);
        j += 1;
        if power < stop {
            break;
        }
    }
    if upper {
        // tail Σ_{i>=j} t^i / i <= t^j / (j (1 - t)) <= 2 t^j / j
        sum += div_small(&(power * 2), j, true) + 1;
    }
    from_fixed(sum, w)
}

/// Interval for `ln(1 - t)` with `0 <= t <= 1/2`.
pub fn ln1m(t: &Rational, prec: u32) -> Interval {
    assert!(!t.is_negative() && t <= &Rational::new(1.into(), 2.into()));
    let lo = -neg_log1m_series(t, prec, true);
    let hi = -neg_log1m_series(t, prec, false);
    Interval::new(lo, hi, prec)
}

pub fn ln2(prec: u32) -> Interval {
    ln1m(&Rational::new(1.into(), 2.into()), prec).neg()
}

/// Interval for `ln x`, `x > 0`.
pub fn ln(x: &Rational, prec: u32) -> Interval {
    assert!(x.is_positive(), "ln of a non-positive number");
    if x.is_one() {
        return Interval { lo: Rational::zero(), hi: Rational::zero(), prec };
    }
    if x > &Rational::one() {
        return ln(&x.recip(), prec).neg();
    }
    // x = 2^e · y with y in (1/2, 1]
    let e = floor_log2(x) + 1;
    let y = x * pow2(-e);
    let (e, y) = if y == Rational::new(1.into(), 2.into()) { (e - 1, Rational::one()) } else { (e, y) };
    let part = ln1m(&(Rational::one() - &y), prec + 8);
    if e == 0 {
        return Interval::new(part.lo, part.hi, prec);
    }
    let log2 = ln2(prec + 16 + (64 - (e.unsigned_abs()).leading_zeros()));
    part.add(&log2.scale_int(&BigInt::from(e))).round(prec)
}

pub fn ln_int(x: &BigInt, prec: u32) -> Interval {
    ln(&Rational::from_integer(x.clone()), prec)
}

/// `Σ r^j / j!` for `0 <= r <= 1` in fixed point with `w` fractional bits; the upper
/// bound includes the tail.
fn exp_unit_fixed(r: &Rational, w: u64, upper: bool) -> BigInt {
    debug_assert!(!r.is_negative() && r <= &Rational::one());
    let rf = to_fixed(r, w, upper);
    let one = BigInt::one() << w as usize;
    let mut sum = one.clone();
    let mut term = one;
    let mut j = 1u64;
    while term > BigInt::one() {
        term = div_small(&mul_fixed(&term, &rf, w, upper), j, upper);
        sum += &term;
        j += 1;
    }
    if upper {
        // for r <= 1 the tail after a term is at most that term
        sum += term * 2 + j;
    }
    sum
}

/// Interval for `exp(x)` over an interval `x`, for moderate `|x|` (at most a few hundred).
pub fn exp(x: &Interval, prec: u32) -> Interval {
    Interval::new(exp_point(&x.lo, prec, false), exp_point(&x.hi, prec, true), prec)
}

fn exp_point(x: &Rational, prec: u32, upper: bool) -> Rational {
    if x.is_negative() {
        let v = exp_point(&-x, prec + 4, !upper);
        return if upper { round_up(&v.recip(), prec + 8) } else { round_down(&v.recip(), prec + 8) };
    }
    // exp(x) = exp(x / 2^s)^(2^s) with x / 2^s <= 1
    let s = if x > &Rational::one() { (floor_log2(x) + 1) as u64 } else { 0 };
    let r = x * pow2(-(s as i64));
    let w = prec as u64 + 2 * s + 32;
    let mut v = exp_unit_fixed(&r, w, upper);
    for _ in 0..s {
        v = mul_fixed(&v, &v, w, upper);
    }
    let v = from_fixed(v, w);
    if upper {
        round_up(&v, prec + 8)
    } else {
        round_down(&v, prec + 8)
    }
}

/// Bounds on `ln(e^a + e^b)` from bounds on `a` and `b`.
pub fn log_sum_exp(a: &Interval, b: &Interval, prec: u32) -> Interval {
    let side = |x: &Rational, y: &Rational, upper: bool| -> Rational {
        let (m, d) = if x >= y { (x.clone(), y - x) } else { (y.clone(), x - y) };
        // ln(1 + e^d), d <= 0
        let cutoff = -Rational::from_integer(BigInt::from(prec as i64 + 64));
        let corr = if d < cutoff {
            if upper {
                pow2(-(prec as i64) - 64)
            } else {
                Rational::zero()
            }
        } else {
            let e = exp(&Interval { lo: d.clone(), hi: d.clone(), prec }, prec + 8);
            let v = if upper { Rational::one() + &e.hi } else { Rational::one() + &e.lo };
            let l = ln(&v, prec + 8);
            if upper {
                l.hi
            } else {
                l.lo
            }
        };
        m + corr
    };
    Interval::new(side(&a.lo, &b.lo, false), side(&a.hi, &b.hi, true), prec)
}

/// Runs `attempt` at increasing precision until it returns a decision.
pub fn decide<F: FnMut(u32) -> Option<bool>>(mut attempt: F) -> Option<bool> {
    PRECISION_LADDER.iter().find_map(|&p| attempt(p))
}

/// Decimal `m.mmm…e±E` for a value known through an interval on its natural logarithm.
/// Returns `None` if the interval is too wide to fix `digits` digits.
pub fn decimal_from_ln(log: &Interval, digits: usize) -> Option<String> {
    let prec = log.prec.max(64);
    let ln10 = ln(&Rational::from_integer(BigInt::from(10)), prec + 32);
    // E = floor(log / ln 10), with ln 10 in [ln10.lo, ln10.hi] positive
    let q_min = if log.lo.is_negative() { &log.lo / &ln10.lo } else { &log.lo / &ln10.hi };
    let q_max = if log.hi.is_negative() { &log.hi / &ln10.hi } else { &log.hi / &ln10.lo };
    let (e_lo, e_hi) = (q_min.floor().to_integer(), q_max.floor().to_integer());
    if e_lo != e_hi {
        return None;
    }
    let e = e_lo;
    let shifted = log.sub(&ln10.scale_int(&e));
    let m = exp(&shifted, prec);
    let scale = Rational::from_integer(num_traits::Pow::pow(BigInt::from(10), (digits.max(1) - 1) as u32));
    let lo = (&m.lo * &scale).floor().to_integer();
    let hi = (&m.hi * &scale).floor().to_integer();
    if lo != hi {
        return None;
    }
    let text = lo.to_string();
    // m in [1, 10): a carry to 10 shifts the exponent
    if text.len() > digits.max(1) {
        return Some(format_mantissa(false, &text[..digits.max(1)], e + 1));
    }
    Some(format_mantissa(false, &text, e))
}

/// Decimal for a log-interval, retrying at wider digit counts down to 3 digits.
pub fn best_decimal_from_ln(log: &Interval, digits: usize) -> String {
    let mut d = digits;
    loop {
        if let Some(s) = decimal_from_ln(log, d) {
            return s;
        }
        if d <= 1 {
            // the exponent itself is undecided; print the natural-log bounds instead
            return format!(
                "exp([{}, {}])",
                crate::poly::rational::to_scientific(&log.lo, 12),
                crate::poly::rational::to_scientific(&log.hi, 12)
            );
        }
        d = d.div_ceil(2).min(d - 1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, rat};
    use num_traits::ToPrimitive;

    fn f64_of(r: &Rational) -> f64 {
        r.to_f64().unwrap()
    }

    #[test]
    fn rounding_is_directed() {
        let x = rat(1, 3);
        let (d, u) = (round_down(&x, 10), round_up(&x, 10));
        assert!(d < x && x < u);
        assert!(crate::poly::rational::is_dyadic(&d) && crate::poly::rational::is_dyadic(&u));
        assert_eq!(round_down(&int(12), 2), int(12));
        assert_eq!(round_down(&int(13), 2), int(12));
        assert_eq!(round_up(&int(13), 2), int(16));
        assert_eq!(round_down(&int(-13), 2), int(-16));
    }

    #[test]
    fn logs_bracket_float_values() {
        for (x, want) in [
            (rat(1, 2), -std::f64::consts::LN_2),
            (int(10), std::f64::consts::LN_10),
            (rat(1, 32), -5.0 * std::f64::consts::LN_2),
            (rat(3, 7), (3.0f64 / 7.0).ln()),
            (int(17), 17f64.ln()),
        ] {
            let iv = ln(&x, 128);
            assert!(f64_of(&iv.lo) <= want + 1e-15 && want - 1e-15 <= f64_of(&iv.hi), "{x}");
            assert!(iv.width() < pow2(-100));
        }
    }

    #[test]
    fn log_of_value_near_one_keeps_relative_precision() {
        // t = 44 / 16^44: ln(1 - t) ≈ -t
        let t = Rational::new(BigInt::from(44), num_traits::Pow::pow(BigInt::from(16), 44u32));
        let iv = ln(&(Rational::one() - &t), 128);
        assert!(iv.lo < -&t && -&t - &t * &t <= iv.hi);
        let rel = iv.width() / &t;
        assert!(rel < pow2(-100));
    }

    #[test]
    fn exp_brackets_known_values() {
        let e1 = exp(&Interval::point(&int(1), 128), 128);
        assert!(f64_of(&e1.lo) <= std::f64::consts::E && std::f64::consts::E <= f64_of(&e1.hi));
        let em = exp(&Interval::point(&int(-3), 128), 128);
        let want = (-3f64).exp();
        assert!(f64_of(&em.lo) <= want * (1.0 + 1e-15) && want * (1.0 - 1e-15) <= f64_of(&em.hi));
        let l = ln(&int(7), 200);
        let back = exp(&l, 200);
        assert!(back.contains(&int(7)));
    }

    #[test]
    fn log_sum_exp_brackets() {
        let a = ln(&int(3), 128);
        let b = ln(&int(5), 128);
        let s = log_sum_exp(&a, &b, 128);
        let l8 = ln(&int(8), 128);
        assert!(s.lo <= l8.hi && l8.lo <= s.hi);
        let tiny = Interval::point(&int(-100_000), 64);
        let s = log_sum_exp(&a, &tiny, 128);
        assert!(s.lo <= a.hi && a.lo <= s.hi);
    }

    #[test]
    fn decimals_from_logs() {
        // an exact decimal sits on a truncation boundary and cannot be certified
        assert_eq!(decimal_from_ln(&ln(&int(1234), 200), 4), None);
        assert_eq!(decimal_from_ln(&ln(&rat(123_456, 100), 200), 4).unwrap(), "1.234e3");
        assert_eq!(decimal_from_ln(&ln(&rat(1255, 10_000), 200), 3).unwrap(), "1.25e-1");
        // 10^-5000 without ever forming it
        let l = ln(&int(10), 256).scale_int(&BigInt::from(-5000)).add(&ln(&rat(7, 3), 256));
        assert_eq!(best_decimal_from_ln(&l, 5), "2.3333e-5000");
        // exactly on an exponent boundary nothing can be certified
        let l = ln(&int(10), 256).scale_int(&BigInt::from(-5000));
        assert!(best_decimal_from_ln(&l, 5).starts_with("exp(["));
    }
}
