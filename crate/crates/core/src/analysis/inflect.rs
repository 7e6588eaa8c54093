use serde::{Deserialize, Serialize};

use super::logderiv::{log_second_derivative_numerator, product_reliability_with_ceiling};
use super::spec::ProductSpec;
use crate::complete::CompleteCache;
use crate::error::{Error, Result};
use crate::poly::{count_sign_changes, render_rational, InflectionReport, Polynomial, Rational};

/// Specs whose expanded reliability stays at or below this degree are also counted
/// through the explicit second derivative, and the two counts must agree.
pub const CROSS_CHECK_DEGREE: usize = 120;

/// Inflection count of a product, with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InflectionSummary {
    pub spec: ProductSpec,
    #[serde(flatten)]
    pub report: InflectionReport,
    pub touch_points: usize,
    pub numerator_degree: Option<usize>,
    /// True when the explicit `g''` was expanded and gave the same count.
    pub cross_checked: bool,
}

fn empty_report() -> InflectionReport {
    InflectionReport { sign_changes: 0, distinct_roots: 0, isolating_intervals: Vec::new(), endpoint_multiplicity: (0, 0) }
}

fn on_unit_interval(p: &Polynomial) -> Result<InflectionReport> {
    if p.is_zero() {
        return Ok(empty_report());
    }
    count_sign_changes(p, &Rational::from_integer(0.into()), &Rational::from_integer(1.into()))
}

/// Sign changes of `g''` on `(0, 1)`, decided through the log-derivative numerator.
pub fn count_inflections(spec: &ProductSpec, cache: &CompleteCache) -> Result<InflectionReport> {
    Ok(inflection_summary(spec, cache)?.report)
}

pub fn inflection_summary(spec: &ProductSpec, cache: &CompleteCache) -> Result<InflectionSummary> {
    let (p, _) = log_second_derivative_numerator(spec, cache)?;
    let report = on_unit_interval(&p)?;
    let cross_checked = match product_reliability_with_ceiling(spec, cache, CROSS_CHECK_DEGREE) {
        Ok(g) => {
            let direct = on_unit_interval(&g.derivative().derivative())?;
            if direct.sign_changes != report.sign_changes {
                return Err(Error::Inconsistent(format!(
                    "{spec}: log-derivative gives {} sign changes, expanded g'' gives {}",
                    report.sign_changes, direct.sign_changes
                )));
            }
            true
        }
        Err(Error::DegreeCeiling { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok(InflectionSummary {
        spec: spec.clone(),
        touch_points: report.touch_points(),
        numerator_degree: p.degree(),
        report,
        cross_checked,
    })
}

impl InflectionSummary {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} inflection point(s) on (0, 1)\n  distinct roots of g'': {} ({} touch point(s))\n",
            self.spec, self.report.sign_changes, self.report.distinct_roots, self.touch_points
        );
        for (a, b) in &self.report.isolating_intervals {
            out.push_str(&format!("  ({}, {})\n", render_rational(a), render_rational(b)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::spec::parse_spec;
    use crate::poly::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        let c = CompleteCache::new();
        let count = |s: &str| count_inflections(&parse_spec(s).unwrap(), &c).unwrap().sign_changes;
        assert_eq!(count("K3"), 1);
        assert_eq!(count("K2"), 0);
        assert_eq!(count("K2^2"), 0);
        let r = count_inflections(&parse_spec("K3").unwrap(), &c).unwrap();
        let (a, b) = &r.isolating_intervals[0];
        assert!(a < &rat(1, 2) && &rat(1, 2) < b);
    }

    #[test]
    fn single_complete_graphs_have_one_inflection() {
        let c = CompleteCache::new();
        for n in 3..=8 {
            let s = ProductSpec::from_pairs(&[(n, 1)]).unwrap();
            let summary = inflection_summary(&s, &c).unwrap();
            assert_eq!(summary.report.sign_changes, 1, "K{n}");
            assert_eq!(summary.cross_checked, n <= 16);
        }
    }

    #[test]
    fn summary_json_round_trips() {
        let c = CompleteCache::new();
        let s = inflection_summary(&parse_spec("K4^2*K3").unwrap(), &c).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"spec\":\"K4^2*K3\""));
        assert_eq!(serde_json::from_str::<InflectionSummary>(&json).unwrap(), s);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn log_path_agrees_with_expanded_second_derivative(fs in prop::collection::vec((2usize..7, 1u64..5), 1..4)) {
            let c = CompleteCache::new();
            let s = ProductSpec::from_pairs(&fs).unwrap();
            let (p, _) = log_second_derivative_numerator(&s, &c).unwrap();
            let g = product_reliability_with_ceiling(&s, &c, 1000).unwrap();
            let a = on_unit_interval(&p).unwrap().sign_changes;
            let b = on_unit_interval(&g.derivative().derivative()).unwrap().sign_changes;
            prop_assert_eq!(a, b);
        }
    }
}
