//! Checks that a product `s = Π r_n^ℓ` behaves like the building blocks of the construction:
//! `s(0) = 1`, `s(1) = 0`, flat ends, non-increasing, and `|s''| <= ε` away from `(a, b)`.

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::{best_decimal_from_ln, decide, ln};
use super::logderiv::{ln_g, log_derivatives_at, product_reliability_with_ceiling};
use super::spec::ProductSpec;
use crate::complete::CompleteCache;
use crate::error::{Error, Result};
use crate::poly::json::rational_string;
use crate::poly::rational::to_scientific;
use crate::poly::{render_rational, Polynomial, Rational};

/// Products up to this degree are expanded and evaluated exactly on the grid.
pub const EXACT_GRID_DEGREE: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SPropertiesReport {
    pub spec: ProductSpec,
    #[serde(with = "rational_string")]
    pub a: Rational,
    #[serde(with = "rational_string")]
    pub b: Rational,
    #[serde(with = "rational_string")]
    pub eps: Rational,
    pub grid: usize,
    pub checks: Vec<PropertyCheck>,
    /// Grid points outside `(a, b)` where `|s''| <= ε` failed, with the value there.
    pub violations: Vec<(String, String)>,
}

impl SPropertiesReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} on [0, 1] \\ ({}, {}), ε = {}, grid {}\n",
            self.spec,
            render_rational(&self.a),
            render_rational(&self.b),
            render_rational(&self.eps),
            self.grid
        );
        for c in &self.checks {
            out.push_str(&format!("  [{}] {}: {}\n", if c.holds { "ok" } else { "FAIL" }, c.name, c.detail));
        }
        for (q, v) in self.violations.iter().take(10) {
            out.push_str(&format!("    |s''({q})| = {v}\n"));
        }
        out
    }
}

/// Multiplicity of `q = 1` as a root of `p`.
fn multiplicity_at_one(p: &Polynomial) -> usize {
    let mut work = p.clone();
    let mut m = 0;
    while !work.is_zero() && work.eval(&Rational::one()).is_zero() {
        let (quot, _) = work.div_rem(&Polynomial::from_ints(&[-1, 1])).expect("nonzero divisor");
        work = quot;
        m += 1;
    }
    m
}

/// `s(1)`, `s'(1)`, `s''(1)`: zero whenever the root at 1 is deep enough, exact otherwise.
pub(crate) fn values_at_one(spec: &ProductSpec, cache: &CompleteCache) -> Result<[Rational; 3]> {
    let mut depth = BigUint::zero();
    for (n, l) in spec.merged().factors() {
        depth += l * BigUint::from(multiplicity_at_one(&*cache.reliability(*n)?));
    }
    if depth > BigUint::from(2u32) {
        return Ok([Rational::zero(), Rational::zero(), Rational::zero()]);
    }
    let s = product_reliability_with_ceiling(spec, cache, 64)?;
    let one = Rational::one();
    Ok([s.eval(&one), s.derivative().eval(&one), s.derivative().derivative().eval(&one)])
}

/// Grid evaluation of `|s''(q)| <= ε`: `(holds, printable value)`.
enum SecondDerivative {
    Exact(Polynomial),
    Logs,
}

impl SecondDerivative {
    fn check(&self, spec: &ProductSpec, cache: &CompleteCache, q: &Rational, eps: &Rational, at_one: &Rational) -> Result<(bool, String)> {
        if q.is_one() {
            return Ok((&at_one.abs() <= eps, to_scientific(at_one, 12)));
        }
        match self {
            SecondDerivative::Exact(s2) => {
                let v = s2.eval(q);
                Ok((&v.abs() <= eps, to_scientific(&v, 12)))
            }
            SecondDerivative::Logs => {
                // s'' = s · (L² + L'), with s > 0 on [0, 1)
                let (_, second) = log_derivatives_at(spec, cache, q)?;
                if second.is_zero() {
                    return Ok((true, "0".into()));
                }
                let mag = second.abs();
                let enclose = |p: u32| ln_g(spec, cache, q, p).map(|g| g.add(&ln(&mag, p)));
                let holds = decide(|p| {
                    let v = enclose(p).ok()?;
                    let le = ln(eps, p);
                    if v.hi <= le.lo {
                        Some(true)
                    } else if v.lo > le.hi {
                        Some(false)
                    } else {
                        None
                    }
                })
                .unwrap_or(false);
                let sign = if second.is_negative() { "-" } else { "" };
                Ok((holds, format!("{sign}{}", best_decimal_from_ln(&enclose(256)?, 12))))
            }
        }
    }
}

/// Endpoint facts exactly, monotonicity and the flatness bound on the grid `j/grid`.
pub fn verify_s_properties(
    spec: &ProductSpec,
    interval: (&Rational, &Rational),
    eps: &Rational,
    grid: usize,
    cache: &CompleteCache,
) -> Result<SPropertiesReport> {
    let (a, b) = interval;
    if !(a < b) || !eps.is_positive() || grid == 0 {
        return Err(Error::Precondition("need a < b, ε > 0 and a positive grid size".into()));
    }
    let zero = Rational::zero();
    let s0: Rational = spec
        .merged()
        .factors()
        .iter()
        .map(|(n, _)| cache.reliability(*n).map(|r| r.eval(&zero)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .product();
    // every r_n(0) is 1, so s(0) is their product whatever the exponents
    let s0 = if s0.is_one() { s0 } else { return Err(Error::Inconsistent("r_n(0) != 1".into())) };
    let (d1_0, d2_0) = log_derivatives_at(spec, cache, &zero)?;
    let [s1, d1_1, d2_1] = values_at_one(spec, cache)?;
    let has_bridge = spec.factors().iter().any(|(n, _)| *n == 2);
    let single_edge = spec.merged().factors() == [(2, BigUint::one())];

    let mut checks = vec![
        PropertyCheck { name: "s(0) = 1".into(), holds: s0.is_one(), detail: render_rational(&s0) },
        PropertyCheck { name: "s(1) = 0".into(), holds: s1.is_zero(), detail: render_rational(&s1) },
        PropertyCheck {
            name: "s'(0) = 0".into(),
            holds: d1_0.is_zero(),
            detail: if has_bridge {
                format!("{} (a K2 factor is a bridge)", render_rational(&d1_0))
            } else {
                render_rational(&d1_0)
            },
        },
        PropertyCheck {
            name: "s'(1) = 0".into(),
            holds: d1_1.is_zero(),
            detail: if single_edge { format!("{} (only two vertices)", render_rational(&d1_1)) } else { render_rational(&d1_1) },
        },
    ];

    let points: Vec<Rational> = (0..=grid).map(|j| Rational::new((j as i64).into(), (grid as i64).into())).collect();
    let monotone = points
        .par_iter()
        .filter(|q| !q.is_one())
        .map(|q| log_derivatives_at(spec, cache, q).map(|(l1, _)| !l1.is_positive()))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|x| x);
    checks.push(PropertyCheck {
        name: "s' <= 0 on the grid".into(),
        holds: monotone,
        detail: format!("{} points", grid + 1),
    });

    let degree = spec.total_degree().to_usize().unwrap_or(usize::MAX);
    let second = if degree <= EXACT_GRID_DEGREE {
        SecondDerivative::Exact(product_reliability_with_ceiling(spec, cache, EXACT_GRID_DEGREE)?.derivative().derivative())
    } else {
        SecondDerivative::Logs
    };
    let outside: Vec<&Rational> = points.iter().filter(|q| *q <= a || *q >= b).collect();
    let results = outside
        .par_iter()
        .map(|q| {
            if q.is_zero() {
                return Ok((&d2_0.abs() <= eps, to_scientific(&d2_0, 12)));
            }
            second.check(spec, cache, q, eps, &d2_1)
        })
        .collect::<Result<Vec<_>>>()?;
    let violations: Vec<(String, String)> = outside
        .iter()
        .zip(&results)
        .filter(|(_, (ok, _))| !ok)
        .map(|(q, (_, v))| (render_rational(q), v.clone()))
        .collect();
    checks.push(PropertyCheck {
        name: "|s''| <= ε outside (a, b)".into(),
        holds: violations.is_empty(),
        detail: format!("{} of {} grid points violate", violations.len(), outside.len()),
    });
    Ok(SPropertiesReport { spec: spec.clone(), a: a.clone(), b: b.clone(), eps: eps.clone(), grid, checks, violations })
}
