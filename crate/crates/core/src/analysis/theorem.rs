//! The five sufficient conditions under which `K_n^ℓ` has `|R''| ≤ ε` off `[a, b]`, and
//! the schedule `n = ik`, `ℓ = N^i` that eventually satisfies them.
//!
//! Left-hand sides involve `(1 − (n−1)q^(n−1))^ℓ` with `ℓ` far too large to expand, so
//! above [`EXACT_EXPONENT_LIMIT`] they are handled through certified enclosures of their
//! natural logarithms. A condition is reported true only when the enclosure decides it.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::bounds::{best_decimal_from_ln, decide, ln, ln1m, log_sum_exp, Interval};
use crate::error::{Error, Result};
use crate::poly::json::{biguint_string, rational_string};
use crate::poly::rational::{from_biguint, rat, to_scientific};
use crate::poly::Rational;

/// Exponents up to this size are raised exactly; larger ones go through logarithms.
pub const EXACT_EXPONENT_LIMIT: u64 = 256;

/// Significant digits in reported left-hand sides.
pub const REPORT_DIGITS: usize = 30;

/// Default ceiling on `i` for [`find_theorem_params`].
pub const DEFAULT_MAX_I: u64 = 400;

/// A positive quantity, either exactly or through its logarithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Magnitude {
    Exact(Rational),
    Log(Interval),
}

impl Magnitude {
    pub fn decimal(&self, digits: usize) -> String {
        match self {
            Magnitude::Exact(r) => to_scientific(r, digits),
            Magnitude::Log(iv) => best_decimal_from_ln(iv, digits),
        }
    }
}

/// `f(q)` and `g(q)`, the two terms bounding `|(r_n^ℓ)''(q)|` on `[0, 1/8]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgValues {
    pub f: Magnitude,
    pub g: Magnitude,
}

fn check_fg_domain(n: usize, l: &BigUint, q: &Rational) -> Result<Rational> {
    if n < 4 {
        return Err(Error::Precondition(format!("n = {n}: the bound needs n >= 4")));
    }
    if l.is_zero() {
        return Err(Error::Precondition("ℓ must be at least 1".into()));
    }
    if !q.is_positive() || q > &rat(1, 8) {
        return Err(Error::Precondition(format!("q = {q} must lie in (0, 1/8]")));
    }
    let t = Rational::from_integer(BigInt::from(n - 1)) * Pow::pow(q, (n - 1) as u32);
    if t >= Rational::one() {
        return Err(Error::Precondition(format!("1 - (n-1)q^(n-1) <= 0 at n = {n}, q = {q}")));
    }
    Ok(t)
}

fn rpow(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        Pow::pow(x, e as u64)
    } else {
        Pow::pow(x.recip(), (-e) as u64)
    }
}

fn ln_big(x: &BigUint, prec: u32) -> Interval {
    ln(&from_biguint(x), prec)
}

/// `ln f(q)` and `ln g(q)` enclosed at precision `prec`.
fn ln_fg(n: usize, l: &BigUint, q: &Rational, t: &Rational, prec: u32) -> (Interval, Interval) {
    // ℓ multiplies ln(1 - t), so it needs its bit length in extra precision
    let work = prec + l.bits() as u32 + 16;
    let ln_base = ln1m_any(t, work);
    let ln_l = ln_big(l, work);
    let ln_n = ln(&Rational::from_integer(BigInt::from(n)), work);
    let ln_q = ln(q, work);
    let l_int = BigInt::from(l.clone());
    let n_i = n as i64;
    let f = ln_l
        .scale_int(&BigInt::from(2))
        .add(&ln_n.scale_int(&BigInt::from(6)))
        .add(&ln_base.scale_int(&(&l_int - 2)))
        .add(&ln_q.scale_int(&BigInt::from(2 * n_i - 4)));
    let g = ln_l
        .add(&ln_n.scale_int(&BigInt::from(5)))
        .add(&ln_base.scale_int(&(&l_int - 1)))
        .add(&ln_q.scale_int(&BigInt::from(n_i - 3)));
    (f.round_to(prec), g.round_to(prec))
}

/// `ln(1 - t)` for any `t` in `[0, 1)`.
fn ln1m_any(t: &Rational, prec: u32) -> Interval {
    if t <= &rat(1, 2) {
        ln1m(t, prec)
    } else {
        ln(&(Rational::one() - t), prec)
    }
}

/// `f(q) = ℓ²n⁶(1−(n−1)q^(n−1))^(ℓ−2) q^(2n−4)` and `g(q) = ℓn⁵(1−(n−1)q^(n−1))^(ℓ−1) q^(n−3)`.
///
/// Exact when `ℓ <= EXACT_EXPONENT_LIMIT`, otherwise enclosures of the logarithms at
/// 256 bits. `ℓ = 1` is accepted; `f` then carries the factor `(1−(n−1)q^(n−1))^(−1)`.
pub fn theorem_f_g(n: usize, l: &BigUint, q: &Rational) -> Result<FgValues> {
    let t = check_fg_domain(n, l, q)?;
    if let Some(small) = l.to_u64().filter(|&v| v <= EXACT_EXPONENT_LIMIT) {
        let (small, n_i) = (small as i64, n as i64);
        let base = Rational::one() - &t;
        let lr = Rational::from_integer(BigInt::from(small));
        let nr = Rational::from_integer(BigInt::from(n));
        let f = &lr * &lr * rpow(&nr, 6) * rpow(&base, small - 2) * rpow(q, 2 * n_i - 4);
        let g = &lr * rpow(&nr, 5) * rpow(&base, small - 1) * rpow(q, n_i - 3);
        return Ok(FgValues { f: Magnitude::Exact(f), g: Magnitude::Exact(g) });
    }
    let (f, g) = ln_fg(n, l, q, &t, 256);
    Ok(FgValues { f: Magnitude::Log(f), g: Magnitude::Log(g) })
}

/// Which way a condition compares its left side with the bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// One of the five conditions, evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub name: String,
    pub statement: String,
    pub holds: bool,
    /// Left-hand side as a decimal (truncated, or an enclosure of its log if undecidable).
    pub lhs: String,
    pub relation: Relation,
    #[serde(with = "rational_string")]
    pub rhs: Rational,
    /// `"exact"` or `"certified-log"`.
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremConditions {
    pub n: usize,
    #[serde(with = "biguint_string")]
    pub ell: BigUint,
    #[serde(with = "rational_string")]
    pub a: Rational,
    #[serde(with = "rational_string")]
    pub b: Rational,
    #[serde(with = "rational_string")]
    pub eps: Rational,
    pub checks: Vec<ConditionCheck>,
}

impl TheoremConditions {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn satisfied(&self) -> usize {
        self.checks.iter().filter(|c| c.holds).count()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n = {}, ℓ = {}\n", self.n, self.ell);
        for c in &self.checks {
            let rel = match c.relation {
                Relation::AtMost => "<=",
                Relation::AtLeast => ">=",
            };
            out.push_str(&format!(
                "  [{}] {}: {} {} {}  ({})\n",
                if c.holds { "ok" } else { "FAIL" },
                c.statement,
                c.lhs,
                rel,
                crate::poly::render_rational(&c.rhs),
                c.method
            ));
        }
        out
    }
}

/// Decides `exp(lhs) rel bound` from enclosures computed at increasing precision.
fn decide_log<F: Fn(u32) -> Interval>(lhs: F, rel: Relation, bound: &Rational) -> bool {
    decide(|p| {
        let v = lhs(p);
        let lb = ln(bound, p);
        match rel {
            Relation::AtMost if v.hi <= lb.lo => Some(true),
            Relation::AtMost if v.lo > lb.hi => Some(false),
            Relation::AtLeast if v.lo >= lb.hi => Some(true),
            Relation::AtLeast if v.hi < lb.lo => Some(false),
            _ => None,
        }
    })
    .unwrap_or(false)
}

fn exact_check(name: &str, statement: &str, lhs: Rational, rel: Relation, rhs: Rational) -> ConditionCheck {
    let holds = match rel {
        Relation::AtMost => lhs <= rhs,
        Relation::AtLeast => lhs >= rhs,
    };
    ConditionCheck {
        name: name.into(),
        statement: statement.into(),
        holds,
        lhs: to_scientific(&lhs, REPORT_DIGITS),
        relation: rel,
        rhs,
        method: "exact".into(),
    }
}

fn log_check<F: Fn(u32) -> Interval>(name: &str, statement: &str, lhs: F, rel: Relation, rhs: Rational) -> ConditionCheck {
    let holds = decide_log(&lhs, rel, &rhs);
    // a wide enclosure for the printed value, independent of where the decision stopped
    let shown = best_decimal_from_ln(&lhs(512), REPORT_DIGITS);
    ConditionCheck { name: name.into(), statement: statement.into(), holds, lhs: shown, relation: rel, rhs, method: "certified-log".into() }
}

fn check_theorem_domain(a: &Rational, b: &Rational, eps: &Rational) -> Result<()> {
    if !a.is_positive() || a >= b || b >= &rat(1, 8) {
        return Err(Error::Precondition(format!("need 0 < a < b < 1/8, got a = {a}, b = {b}")));
    }
    if !eps.is_positive() {
        return Err(Error::Precondition(format!("need ε > 0, got {eps}")));
    }
    Ok(())
}

/// Evaluates the five conditions for `K_n^ℓ` on `[0, 1] \ [a, b]`:
/// `ℓna^(n−1) <= 1/4`, `ℓb^(n−1) >= 1`, `f(a)+g(a) <= ε`, `f(b)+g(b) <= ε` and
/// `ℓ²n⁸(1−(n−1)(1/8)^(n−1))^(ℓ−1) <= ε`.
pub fn theorem_conditions(n: usize, l: &BigUint, a: &Rational, b: &Rational, eps: &Rational) -> Result<TheoremConditions> {
    check_theorem_domain(a, b, eps)?;
    let eighth = rat(1, 8);
    check_fg_domain(n, l, a)?;
    check_fg_domain(n, l, b)?;
    let t8 = check_fg_domain(n, l, &eighth)?;
    let lr = from_biguint(l);
    let nr = Rational::from_integer(BigInt::from(n));
    let e = (n - 1) as u32;
    let mut checks = vec![
        exact_check("increasing-below-a", "ℓ·n·a^(n-1)", &lr * &nr * Pow::pow(a, e), Relation::AtMost, rat(1, 4)),
        exact_check("decreasing-above-b", "ℓ·b^(n-1)", &lr * Pow::pow(b, e), Relation::AtLeast, Rational::one()),
    ];
    let exact = l.to_u64().is_some_and(|v| v <= EXACT_EXPONENT_LIMIT);
    for (name, statement, q) in [("small-at-a", "f(a) + g(a)", a), ("small-at-b", "f(b) + g(b)", b)] {
        if exact {
            let FgValues { f: Magnitude::Exact(f), g: Magnitude::Exact(g) } = theorem_f_g(n, l, q)? else {
                unreachable!("small exponents are exact")
            };
            checks.push(exact_check(name, statement, f + g, Relation::AtMost, eps.clone()));
        } else {
            let t = check_fg_domain(n, l, q)?;
            let lhs = |p: u32| {
                let (f, g) = ln_fg(n, l, q, &t, p);
                log_sum_exp(&f, &g, p)
            };
            checks.push(log_check(name, statement, lhs, Relation::AtMost, eps.clone()));
        }
    }
    let statement = "ℓ^2·n^8·(1-(n-1)(1/8)^(n-1))^(ℓ-1)";
    if exact {
        let small = l.to_u64().unwrap();
        let v = &lr * &lr * Pow::pow(&nr, 8u32) * Pow::pow(Rational::one() - &t8, small - 1);
        checks.push(exact_check("small-above-eighth", statement, v, Relation::AtMost, eps.clone()));
    } else {
        let lhs = |p: u32| {
            let work = p + l.bits() as u32 + 16;
            ln_big(l, work)
                .scale_int(&BigInt::from(2))
                .add(&ln(&nr, work).scale_int(&BigInt::from(8)))
                .add(&ln1m_any(&t8, work).scale_int(&(BigInt::from(l.clone()) - 1)))
                .round_to(p)
        };
        checks.push(log_check("small-above-eighth", statement, lhs, Relation::AtMost, eps.clone()));
    }
    Ok(TheoremConditions { n, ell: l.clone(), a: a.clone(), b: b.clone(), eps: eps.clone(), checks })
}

/// Outcome of the `(k, N, i)` schedule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremParams {
    pub found: bool,
    pub k: u64,
    #[serde(with = "biguint_string")]
    pub big_n: BigUint,
    pub i: u64,
    /// `a < N^(-1/k) < b`, re-checked exactly as `b^(-k) < N < a^(-k)`.
    pub separation_verified: bool,
    /// Candidates evaluated.
    pub tried: u64,
    /// The witness, or the candidate satisfying the most conditions.
    pub conditions: TheoremConditions,
}

impl TheoremParams {
    pub fn to_text(&self) -> String {
        let head = if self.found { "witness" } else { "no witness within the ceiling; best candidate" };
        format!(
            "{head}: N = {}, k = {}, i = {} (n = ik = {}, ℓ = N^i), {} candidate(s) tried\n  a < N^(-1/k) < b: {}\n{}",
            self.big_n,
            self.k,
            self.i,
            self.conditions.n,
            self.tried,
            self.separation_verified,
            self.conditions.to_text()
        )
    }
}

/// Smallest `k >= 1` admitting an integer strictly between `b^(-k)` and `a^(-k)`, with the
/// smallest such integer.
pub fn separating_integer(a: &Rational, b: &Rational) -> Result<(u64, BigUint)> {
    check_theorem_domain(a, b, &Rational::one())?;
    for k in 1u64.. {
        let lo: Rational = Pow::pow(b.recip(), k);
        let hi: Rational = Pow::pow(a.recip(), k);
        let candidate: BigInt = lo.floor().to_integer() + 1;
        if Rational::from_integer(candidate.clone()) < hi {
            return Ok((k, candidate.to_biguint().expect("positive")));
        }
    }
    unreachable!()
}

fn separates(a: &Rational, b: &Rational, k: u64, big_n: &BigUint) -> bool {
    let nr = from_biguint(big_n);
    Pow::pow(b.recip(), k) < nr && nr < Pow::pow(a.recip(), k)
}

/// Walks `i = 1, 2, ...` with `n = ik`, `ℓ = N^i` until all five conditions hold.
///
/// `(k, N)` come from [`separating_integer`]; `i` starts where `n >= 4`. Candidates are
/// evaluated in parallel chunks, but the reported witness is always the smallest `i`.
pub fn find_theorem_params(a: &Rational, b: &Rational, eps: &Rational, max_i: u64) -> Result<TheoremParams> {
    use rayon::prelude::*;
    check_theorem_domain(a, b, eps)?;
    let (k, big_n) = separating_integer(a, b)?;
    let first_i = 4u64.div_ceil(k).max(1);
    let mut best: Option<(u64, TheoremConditions)> = None;
    let mut tried = 0;
    let chunk = rayon::current_num_threads().max(1) as u64;
    let mut start = first_i;
    while start <= max_i {
        let end = (start + chunk - 1).min(max_i);
        let results: Vec<(u64, TheoremConditions)> = (start..=end)
            .into_par_iter()
            .map(|i| {
                let n = (i * k) as usize;
                let l = Pow::pow(&big_n, i);
                theorem_conditions(n, &l, a, b, eps).map(|c| (i, c))
            })
            .collect::<Result<_>>()?;
        for (i, c) in results {
            tried += 1;
            if c.all_hold() {
                return Ok(TheoremParams {
                    found: true,
                    k,
                    separation_verified: separates(a, b, k, &big_n),
                    big_n,
                    i,
                    tried,
                    conditions: c,
                });
            }
            if best.as_ref().is_none_or(|(_, bc)| c.satisfied() >= bc.satisfied()) {
                best = Some((i, c));
            }
        }
        start = end + 1;
    }
    let (i, conditions) = best.ok_or_else(|| Error::Precondition(format!("max_i = {max_i} leaves no candidate with n >= 4")))?;
    Ok(TheoremParams { found: false, k, separation_verified: separates(a, b, k, &big_n), big_n, i, tried, conditions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::int;
    use proptest::prelude::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn f_and_g_examples() {
        let fg = theorem_f_g(4, &big(2), &rat(1, 8)).unwrap();
        assert_eq!(fg.f, Magnitude::Exact(int(4)));
        // ℓ = 1: g = n^5 q^(n-3)
        let fg = theorem_f_g(5, &big(1), &rat(1, 10)).unwrap();
        assert_eq!(fg.g, Magnitude::Exact(rat(3125, 100)));
        assert!(theorem_f_g(3, &big(2), &rat(1, 8)).is_err());
        assert!(theorem_f_g(4, &big(2), &rat(1, 4)).is_err());
        assert!(theorem_f_g(4, &big(2), &int(0)).is_err());
    }

    #[test]
    fn log_path_agrees_with_exact_path() {
        // ℓ just above the exact limit, compared against a direct exact computation
        let (n, l, q) = (6usize, EXACT_EXPONENT_LIMIT + 1, rat(1, 16));
        let fg = theorem_f_g(n, &big(l), &q).unwrap();
        let t = int(5) * Pow::pow(&q, 5u32);
        let base = int(1) - t;
        let f = int((l * l) as i64) * Pow::pow(int(6), 6u32) * Pow::pow(&base, l - 2) * Pow::pow(&q, 8u32);
        let Magnitude::Log(iv) = fg.f else { panic!("expected log form") };
        let direct = ln(&f, 256);
        assert!(iv.lo <= direct.hi && direct.lo <= iv.hi);
        assert!(iv.width() < rat(1, 1 << 30));
    }

    #[test]
    fn condition_examples() {
        let c = theorem_conditions(4, &big(64), &rat(1, 16), &rat(1, 10), &int(1)).unwrap();
        assert!(c.checks[0].holds, "64·4·(1/16)^3 = 1/16 <= 1/4");
        assert_eq!(c.checks[0].lhs, to_scientific(&rat(1, 16), REPORT_DIGITS));
        let c = theorem_conditions(4, &big(1), &rat(1, 16), &rat(1, 10), &int(1)).unwrap();
        assert!(!c.checks[1].holds, "ℓ = 1 and b < 1");
        let c = theorem_conditions(4, &big(2), &rat(1, 16), &rat(1, 10), &int(10)).unwrap();
        assert!(!c.checks[4].holds, "4·4^8·(509/512) > 10");
        assert!(theorem_conditions(4, &big(2), &rat(1, 8), &rat(1, 16), &int(1)).is_err());
        assert!(theorem_conditions(4, &big(2), &rat(1, 32), &rat(1, 8), &int(1)).is_err());
        assert!(theorem_conditions(4, &big(2), &rat(1, 32), &rat(1, 16), &int(0)).is_err());
    }

    #[test]
    fn separating_integers() {
        assert_eq!(separating_integer(&rat(1, 32), &rat(1, 16)).unwrap(), (1, big(17)));
        // (1/10, 1/9): no integer in (9, 10), but 82 lies in (81, 100)
        assert_eq!(separating_integer(&rat(1, 10), &rat(1, 9)).unwrap(), (2, big(82)));
        assert!(separates(&rat(1, 10), &rat(1, 9), 2, &big(82)));
    }

    #[test]
    fn witness_for_a_32_b_16() {
        let p = find_theorem_params(&rat(1, 32), &rat(1, 16), &rat(1, 100), DEFAULT_MAX_I).unwrap();
        assert!(p.found && p.separation_verified && p.conditions.all_hold());
        assert_eq!((p.k, p.big_n.clone()), (1, big(17)));
        assert_eq!(p.i, WITNESS_I_32_16);
        assert!(p.conditions.n >= 4);
    }

    /// First `i` found for `a = 1/32, b = 1/16, ε = 1/100`.
    const WITNESS_I_32_16: u64 = 56;

    #[test]
    fn f_plus_g_nondecreasing_where_small() {
        // on a grid where ℓ·n·q^(n-1) <= 1/4 the sum must not decrease
        let (n, l) = (6usize, 40u64);
        let grid: Vec<Rational> = (1..=40).map(|j| rat(j, 320)).collect();
        let mut prev: Option<Rational> = None;
        for q in grid {
            let cond = int(l as i64) * int(n as i64) * Pow::pow(&q, (n - 1) as u32);
            if cond > rat(1, 4) {
                break;
            }
            let FgValues { f: Magnitude::Exact(f), g: Magnitude::Exact(g) } = theorem_f_g(n, &big(l), &q).unwrap() else {
                unreachable!()
            };
            let s = f + g;
            if let Some(p) = &prev {
                assert!(&s >= p);
            }
            prev = Some(s);
        }
        assert!(prev.is_some());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn enlarging_eps_keeps_true_conditions(n in 4usize..9, l in 1u64..40, e1 in 1i64..1000, extra in 0i64..1000) {
            let (a, b) = (rat(1, 40), rat(1, 12));
            let small = theorem_conditions(n, &big(l), &a, &b, &rat(e1, 100)).unwrap();
            let large = theorem_conditions(n, &big(l), &a, &b, &rat(e1 + extra, 100)).unwrap();
            for (s, g) in small.checks.iter().zip(&large.checks) {
                prop_assert!(!s.holds || g.holds, "{} flipped", s.name);
            }
        }

        #[test]
        fn huge_exponent_conditions_are_monotone_too(i in 5u64..30, e1 in 1i64..100) {
            let l = Pow::pow(&big(17), i);
            let (a, b) = (rat(1, 32), rat(1, 16));
            let small = theorem_conditions(i as usize, &l, &a, &b, &rat(e1, 1000)).unwrap();
            let large = theorem_conditions(i as usize, &l, &a, &b, &rat(e1, 10)).unwrap();
            for (s, g) in small.checks.iter().zip(&large.checks) {
                prop_assert!(!s.holds || g.holds);
            }
        }
    }
}
