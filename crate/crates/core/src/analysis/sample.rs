//! Tabulated `g`, `g'` or `g''` on an even grid of `[0, 1]`, as CSV.

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::bounds::best_decimal_from_ln;
use super::logderiv::{ln_g, log_derivatives_at, product_reliability_with_ceiling};
use super::spec::ProductSpec;
use super::sprops::{values_at_one, EXACT_GRID_DEGREE};
use crate::complete::CompleteCache;
use crate::error::{Error, Result};
use crate::poly::rational::to_scientific;
use crate::poly::{Polynomial, Rational};

pub const DEFAULT_SAMPLE_DIGITS: usize = 50;
/// Significant digits printed for the abscissa.
const Q_DIGITS: usize = 17;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleRow {
    pub q: Rational,
    /// Decimal `m.mmm…e±E`, truncated toward zero, or `0`.
    pub value: String,
    /// Sign of the sampled value.
    pub sign: i8,
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

fn exact_row(q: Rational, v: &Rational, digits: usize) -> SampleRow {
    SampleRow { value: to_scientific(v, digits), sign: sign_of(v), q }
}

/// `g^(deriv)(q)` as `g(q) · factor` with `g` carried in log space.
fn log_row(spec: &ProductSpec, cache: &CompleteCache, q: Rational, deriv: u8, digits: usize) -> Result<SampleRow> {
    let factor = match deriv {
        0 => Rational::one(),
        1 => log_derivatives_at(spec, cache, &q)?.0,
        _ => log_derivatives_at(spec, cache, &q)?.1,
    };
    if q.is_zero() {
        // g(0) = 1
        return Ok(exact_row(q, &factor, digits));
    }
    if factor.is_zero() {
        return Ok(SampleRow { q, value: "0".into(), sign: 0 });
    }
    let prec = 4 * digits as u32 + 64;
    let log = ln_g(spec, cache, &q, prec)?.add(&super::bounds::ln(&factor.abs(), prec));
    let sign = sign_of(&factor);
    let text = best_decimal_from_ln(&log, digits);
    Ok(SampleRow { q, value: if sign < 0 { format!("-{text}") } else { text }, sign })
}

/// Rows at `q_j = j/(points-1)`. Products up to degree [`EXACT_GRID_DEGREE`] are expanded and
/// evaluated exactly; larger ones go through `g^(d) = g · (g^(d)/g)` with `ln g` certified.
pub fn sample_rows(spec: &ProductSpec, deriv: u8, points: usize, digits: usize, cache: &CompleteCache) -> Result<Vec<SampleRow>> {
    if points < 2 {
        return Err(Error::Precondition("sampling needs at least 2 points".into()));
    }
    if deriv > 2 {
        return Err(Error::Precondition(format!("derivative order {deriv} is not one of 0, 1, 2")));
    }
    let digits = digits.max(1);
    let last = (points - 1) as i64;
    let qs: Vec<Rational> = (0..=last).map(|j| Rational::new(j.into(), last.into())).collect();
    let exact = if spec.total_degree().to_usize().is_some_and(|d| d <= EXACT_GRID_DEGREE) {
        let mut p = product_reliability_with_ceiling(spec, cache, EXACT_GRID_DEGREE)?;
        for _ in 0..deriv {
            p = p.derivative();
        }
        Some(p)
    } else {
        None
    };
    let at_one = || -> Result<Rational> { Ok(values_at_one(spec, cache)?[deriv as usize].clone()) };
    qs.into_par_iter()
        .map(|q| match &exact {
            Some(p) => {
                let v = Polynomial::eval(p, &q);
                Ok(exact_row(q, &v, digits))
            }
            None if q.is_one() => Ok(exact_row(q, &at_one()?, digits)),
            None => log_row(spec, cache, q, deriv, digits),
        })
        .collect()
}

pub fn rows_to_csv(rows: &[SampleRow]) -> String {
    let mut out = String::from("q,value\n");
    for row in rows {
        out.push_str(&to_scientific(&row.q, Q_DIGITS));
        out.push(',');
        out.push_str(&row.value);
        out.push('\n');
    }
    out
}

/// CSV with header `q,value` and LF line endings.
pub fn sample_csv(spec: &ProductSpec, deriv: u8, points: usize, digits: usize, cache: &CompleteCache) -> Result<String> {
    Ok(rows_to_csv(&sample_rows(spec, deriv, points, digits, cache)?))
}

/// Sign alternations along the sampled sequence, zeros skipped.
pub fn sign_alternations(rows: &[SampleRow]) -> usize {
    let signs: Vec<i8> = rows.iter().map(|r| r.sign).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::inflect::count_inflections;
    use crate::analysis::spec::parse_spec;

    fn values(s: &str, deriv: u8, points: usize) -> Vec<String> {
        let rows = sample_rows(&parse_spec(s).unwrap(), deriv, points, 6, &CompleteCache::new()).unwrap();
        rows.into_iter().map(|r| r.value).collect()
    }

    #[test]
    fn k3_second_derivative() {
        assert_eq!(values("K3", 2, 3), ["-6.00000e0", "0", "6.00000e0"]);
    }

    #[test]
    fn k2_second_derivative_is_zero() {
        assert!(values("K2", 2, 7).iter().all(|v| v == "0"));
    }

    #[test]
    fn csv_layout() {
        let csv = sample_csv(&parse_spec("K3").unwrap(), 0, 2, 3, &CompleteCache::new()).unwrap();
        assert_eq!(csv, "q,value\n0,1.00e0\n1.0000000000000000e0,0\n");
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn log_path_agrees_with_exact_path() {
        // K3^700 is above the expansion threshold; compare leading digits with K3^700 expanded
        let c = CompleteCache::new();
        let spec = parse_spec("K3^700").unwrap();
        let logs = sample_rows(&spec, 2, 9, 20, &c).unwrap();
        let g2 = product_reliability_with_ceiling(&spec, &c, 3000).unwrap().derivative().derivative();
        for row in &logs {
            let exact = to_scientific(&g2.eval(&row.q), 20);
            assert_eq!(row.value, exact, "q = {}", row.q);
        }
    }

    #[test]
    fn sampled_alternations_never_exceed_exact_count() {
        let c = CompleteCache::new();
        for s in ["K3", "K4^2*K3", "K2^5*K3^4*K4^3*K5^92"] {
            let spec = parse_spec(s).unwrap();
            let rows = sample_rows(&spec, 2, 257, 8, &c).unwrap();
            let exact = count_inflections(&spec, &c).unwrap().sign_changes;
            assert!(sign_alternations(&rows) <= exact, "{s}");
        }
    }

    #[test]
    fn huge_exponent_is_sampled_in_log_space() {
        let rows = sample_rows(&parse_spec("K14^100000000").unwrap(), 2, 5, 10, &CompleteCache::new()).unwrap();
        assert_eq!(rows[0].value, "0");
        assert_eq!(rows[4].value, "0");
        assert!(rows[1].value.contains("e-"));
    }
}
