//! Greedy search for products `g_k = s_k · g_(k−1)` of complete-graph powers whose second
//! derivative keeps alternating.
//!
//! Step `k` appends one factor `K_n^ℓ` whose transition sits in the interval `I_(k,1)` and
//! picks a checkpoint `q_k` there. A candidate is accepted when, for the new product,
//! `g''(q_i) > 0` at every checkpoint and `g'(q_i) < g'(q_(i−1))` for every consecutive pair,
//! which forces two sign changes of `g''` in each `[q_(i−1), q_i]`. Floating point only
//! proposes candidates; the signs are confirmed with exact rationals and the derivative
//! comparison with certified logarithms.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bounds::decide;
use super::inflect::inflection_summary;
use super::logderiv::{ln_abs_g_prime, log_derivatives_at};
use super::spec::{parse_spec, ProductSpec};
use crate::complete::{edge_count, CompleteCache};
use crate::error::{Error, Result};
use crate::poly::json::{rational_string, rational_strings};
use crate::poly::rational::rat;
use crate::poly::{InflectionReport, Rational};

/// Known witnesses for 3, 4 and 5 inflection points, used when the search stalls.
pub const FALLBACK_WITNESSES: [(&str, usize); 3] = [
    ("K2^5*K3^4*K4^3*K5^92", 3),
    ("K2^2*K4^2*K14^750", 4),
    ("K2^5*K3^4*K5^116*K14^100000000", 5),
];

/// Dyadic intervals `I_(k,m) = (a_(k,m), b_(k,m))`.
///
/// `I_(k,1) = (x_(2k), x_(2k+1))` with `x_j` the dyadic rounding of `a_(0,1)·ρ^j`; deeper
/// levels shrink symmetrically about the centre so that `b − a <= 2^(−m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalFamily {
    #[serde(with = "rational_string")]
    pub start: Rational,
    #[serde(with = "rational_string")]
    pub ratio: Rational,
    pub count: usize,
}

const FAMILY_GRID_BITS: usize = 20;

impl IntervalFamily {
    /// `a_(0,1) = 1/64`, `ρ = 11/10`, as many intervals as fit below `1/8`.
    pub fn standard() -> Self {
        let mut fam = IntervalFamily { start: rat(1, 64), ratio: rat(11, 10), count: 0 };
        while fam.boundary(2 * fam.count + 1) < rat(1, 8) {
            fam.count += 1;
        }
        fam
    }

    fn boundary(&self, j: usize) -> Rational {
        let x = &self.start * num_traits::Pow::pow(&self.ratio, j as u32);
        let scale = Rational::from_integer(num_bigint::BigInt::one() << FAMILY_GRID_BITS);
        (x * &scale).floor() / scale
    }

    /// `I_(k,m)` for `k < count` and `m >= 1`.
    pub fn interval(&self, k: usize, m: u32) -> (Rational, Rational) {
        assert!(k < self.count && m >= 1);
        let (a, b) = (self.boundary(2 * k), self.boundary(2 * k + 1));
        let centre = (&a + &b) / Rational::from_integer(2.into());
        let half = (&b - &a) / Rational::from_integer(2.into());
        let cap = Rational::new(1.into(), num_bigint::BigInt::one() << (m as usize + 1));
        let h = half.min(cap);
        (&centre - &h, &centre + &h)
    }

    /// Largest `m <= 64` with `q` in `I_(k,m)`, or `None` if `q` is outside `I_(k,1)`.
    pub fn depth_of(&self, k: usize, q: &Rational) -> Option<u32> {
        (1..=64).take_while(|&m| {
            let (a, b) = self.interval(k, m);
            &a < q && q < &b
        }).last()
    }
}

/// Limits on the candidate scan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Largest complete graph tried as a new factor.
    pub max_n: usize,
    /// Transition points tried per `n`, spread from `a_(k,1)` to `1.5·b_(k,1)`.
    pub transitions: usize,
    /// Checkpoint grid points per interval (dyadic).
    pub grid: usize,
    /// Upper bound on `Σ C(n, 2)` over distinct bases, which drives the exact count's cost.
    pub max_distinct_degree: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_n: 16, transitions: 16, grid: 64, max_distinct_degree: 160 }
    }
}

/// One accepted extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub k: usize,
    pub n: usize,
    #[serde(with = "crate::poly::json::biguint_string")]
    pub ell: BigUint,
    #[serde(with = "rational_string")]
    pub checkpoint: Rational,
    /// Deepest `m` with the checkpoint inside `I_(k,m)`.
    pub depth: u32,
    pub candidates_tried: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionState {
    pub target: usize,
    pub spec: ProductSpec,
    #[serde(with = "rational_strings")]
    pub checkpoints: Vec<Rational>,
    pub family: IntervalFamily,
    pub steps: Vec<StepRecord>,
    pub enumeration: String,
    pub budget: SearchBudget,
    pub inflections: InflectionReport,
    pub reached: bool,
    /// Set when the spec is a stored witness rather than the search's own product; `steps`
    /// then record the stalled search and `checkpoints` is empty.
    pub fallback: Option<String>,
}

impl ConstructionState {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "target {}: {} with {} inflection point(s){}\n",
            self.target,
            self.spec,
            self.inflections.sign_changes,
            if self.reached { "" } else { " (target not reached)" }
        );
        for s in &self.steps {
            out.push_str(&format!(
                "  step {}: K{}^{} checkpoint {} (depth {}, {} candidate(s))\n",
                s.k,
                s.n,
                s.ell,
                crate::poly::render_rational(&s.checkpoint),
                s.depth,
                s.candidates_tried
            ));
        }
        if let Some(f) = &self.fallback {
            out.push_str(&format!("  search stalled; using stored witness {f}\n"));
        }
        out
    }
}

/// `r`, `r'`, `r''` and `1 − r` at a grid point, rounded to `f64` from exact values.
#[derive(Clone, Copy, Debug)]
struct FloatJet {
    r: f64,
    d1: f64,
    d2: f64,
    one_minus_r: f64,
}

struct JetTable {
    jets: HashMap<(usize, Rational), FloatJet>,
}

impl JetTable {
    fn build(ns: &[usize], qs: &[Rational], cache: &CompleteCache) -> Result<Self> {
        let keys: Vec<(usize, Rational)> = ns.iter().flat_map(|&n| qs.iter().map(move |q| (n, q.clone()))).collect();
        let jets = keys
            .into_par_iter()
            .map(|(n, q)| {
                let r = cache.reliability(n)?;
                let d1 = r.derivative();
                let d2 = d1.derivative();
                let v = r.eval(&q);
                let jet = FloatJet {
                    r: v.to_f64().unwrap_or(f64::NAN),
                    d1: d1.eval(&q).to_f64().unwrap_or(f64::NAN),
                    d2: d2.eval(&q).to_f64().unwrap_or(f64::NAN),
                    one_minus_r: (Rational::one() - &v).to_f64().unwrap_or(f64::NAN),
                };
                Ok(((n, q), jet))
            })
            .collect::<Result<_>>()?;
        Ok(JetTable { jets })
    }

    /// `(ln g, L, L² + L')` in floating point for factors with `f64` exponents.
    fn logs(&self, factors: &[(usize, f64)], q: &Rational) -> (f64, f64, f64) {
        let (mut lg, mut l1, mut dl) = (0.0, 0.0, 0.0);
        for &(n, l) in factors {
            let j = self.jets[&(n, q.clone())];
            let ratio = j.d1 / j.r;
            lg += l * (-j.one_minus_r).ln_1p();
            l1 += l * ratio;
            dl += l * (j.d2 / j.r - ratio * ratio);
        }
        (lg, l1, l1 * l1 + dl)
    }

    fn ln_abs_g_prime(&self, factors: &[(usize, f64)], q: &Rational) -> f64 {
        let (lg, l1, _) = self.logs(factors, q);
        lg + (-l1).ln()
    }
}

/// Exact confirmation: `g''(q_i) > 0` for all checkpoints and `|g'|` strictly increasing
/// along them (`g' < 0` on `(0, 1)`, so this is `g'(q_i) < g'(q_(i−1))`).
pub fn confirm_checkpoints(spec: &ProductSpec, checkpoints: &[Rational], cache: &CompleteCache) -> Result<bool> {
    for q in checkpoints {
        let (_, second) = log_derivatives_at(spec, cache, q)?;
        if !second.is_positive() {
            return Ok(false);
        }
    }
    for pair in checkpoints.windows(2) {
        let increasing = decide(|p| {
            let (s0, l0) = ln_abs_g_prime(spec, cache, &pair[0], p).ok()?;
            let (s1, l1) = ln_abs_g_prime(spec, cache, &pair[1], p).ok()?;
            if s0 >= 0 || s1 >= 0 {
                return Some(false);
            }
            let (l0, l1) = (l0?, l1?);
            if l1.lo > l0.hi {
                Some(true)
            } else if l1.hi <= l0.lo {
                Some(false)
            } else {
                None
            }
        });
        if increasing != Some(true) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn distinct_degree(spec: &ProductSpec) -> usize {
    spec.merged().factors().iter().map(|(n, _)| edge_count(*n)).sum()
}

fn candidates(k: usize, fam: &IntervalFamily, budget: &SearchBudget) -> Vec<(usize, BigUint)> {
    let (a, b) = fam.interval(k, 1);
    let (a, b) = (a.to_f64().unwrap(), b.to_f64().unwrap() * 1.5);
    let mut out = Vec::new();
    for n in 3..=budget.max_n {
        for t in 0..budget.transitions {
            let frac = if budget.transitions > 1 { t as f64 / (budget.transitions - 1) as f64 } else { 0.0 };
            let c = a * (b / a).powf(frac);
            // transition where ℓ·n·c^(n−1) = 1
            let l = (1.0 / (n as f64 * c.powi(n as i32 - 1))).round().max(1.0);
            let l = BigUint::from_f64(l).expect("finite exponent");
            if !out.contains(&(n, l.clone())) {
                out.push((n, l));
            }
        }
    }
    out
}

fn grid(k: usize, fam: &IntervalFamily, points: usize) -> Vec<Rational> {
    let (a, b) = fam.interval(k, 1);
    let steps = points.next_power_of_two().max(2);
    (1..steps).map(|j| &a + (&b - &a) * rat(j as i64, steps as i64)).collect()
}

/// Tries one extension of `(spec, checkpoints)` in the enumeration order, returning the
/// first candidate that passes the float screen and the exact confirmation.
fn extend(
    spec: Option<&ProductSpec>,
    checkpoints: &[Rational],
    k: usize,
    fam: &IntervalFamily,
    budget: &SearchBudget,
    cache: &CompleteCache,
) -> Result<Option<(ProductSpec, Rational, usize)>> {
    let cands = candidates(k, fam, budget);
    let pts = grid(k, fam, budget.grid);
    let mut ns: Vec<usize> = (3..=budget.max_n).collect();
    if let Some(s) = spec {
        ns.extend(s.factors().iter().map(|(n, _)| *n));
    }
    ns.sort_unstable();
    ns.dedup();
    let all_q: Vec<Rational> = checkpoints.iter().cloned().chain(pts.iter().cloned()).collect();
    let table = JetTable::build(&ns, &all_q, cache)?;
    let base: Vec<(usize, f64)> = spec
        .map(|s| s.factors().iter().map(|(n, l)| (*n, l.to_f64().unwrap_or(f64::INFINITY))).collect())
        .unwrap_or_default();
    let found = cands.par_iter().enumerate().find_map_first(|(idx, (n, l))| {
        let new_spec = match spec {
            Some(s) => s.with_factor(*n, l.clone()).ok()?,
            None => ProductSpec::new(vec![(*n, l.clone())]).ok()?,
        };
        if distinct_degree(&new_spec) > budget.max_distinct_degree {
            return None;
        }
        let mut factors = base.clone();
        factors.push((*n, l.to_f64()?));
        // earlier facts must survive the new factor
        if checkpoints.iter().any(|q| table.logs(&factors, q).2 <= 0.0) {
            return None;
        }
        if checkpoints.windows(2).any(|w| table.ln_abs_g_prime(&factors, &w[1]) <= table.ln_abs_g_prime(&factors, &w[0])) {
            return None;
        }
        let prev = checkpoints.last().map(|q| table.ln_abs_g_prime(&factors, q));
        for q in &pts {
            let (_, _, second) = table.logs(&factors, q);
            if second <= 0.0 || prev.is_some_and(|p| table.ln_abs_g_prime(&factors, q) <= p) {
                continue;
            }
            let mut all = checkpoints.to_vec();
            all.push(q.clone());
            if confirm_checkpoints(&new_spec, &all, cache).ok()? {
                return Some((new_spec, q.clone(), idx + 1));
            }
        }
        None
    });
    Ok(found)
}

fn finish(state: &mut ConstructionState, cache: &CompleteCache) -> Result<()> {
    state.inflections = inflection_summary(&state.spec, cache)?.report;
    state.reached = state.inflections.sign_changes >= state.target;
    Ok(())
}

/// Extends the product one factor per step until its exact inflection count reaches
/// `target`, falling back to a stored witness when the scan runs dry.
pub fn construction_search(target: usize, cache: &CompleteCache, budget: &SearchBudget) -> Result<ConstructionState> {
    let fam = IntervalFamily::standard();
    let mut spec: Option<ProductSpec> = None;
    let mut checkpoints = Vec::new();
    let mut steps = Vec::new();
    let mut best: Option<ConstructionState> = None;
    let enumeration = format!(
        "k = 0, 1, ...; per step n = 3..={} ascending, then {} transition points from a_(k,1) to 1.5·b_(k,1) ascending; checkpoints on a {}-point dyadic grid of I_(k,1), leftmost first",
        budget.max_n, budget.transitions, budget.grid
    );
    for k in 0..fam.count {
        let Some((next, q, tried)) = extend(spec.as_ref(), &checkpoints, k, &fam, budget, cache)? else {
            break;
        };
        let (n, l) = next.factors().last().cloned().expect("nonempty");
        steps.push(StepRecord { k, n, ell: l, depth: fam.depth_of(k, &q).unwrap_or(0), checkpoint: q.clone(), candidates_tried: tried });
        checkpoints.push(q);
        spec = Some(next.clone());
        let mut state = ConstructionState {
            target,
            spec: next,
            checkpoints: checkpoints.clone(),
            family: fam.clone(),
            steps: steps.clone(),
            enumeration: enumeration.clone(),
            budget: budget.clone(),
            inflections: InflectionReport { sign_changes: 0, distinct_roots: 0, isolating_intervals: vec![], endpoint_multiplicity: (0, 0) },
            reached: false,
            fallback: None,
        };
        finish(&mut state, cache)?;
        let done = state.reached;
        best = Some(state);
        if done {
            break;
        }
    }
    if let Some(state) = &best {
        if state.reached {
            return Ok(best.unwrap());
        }
    }
    let witness = FALLBACK_WITNESSES.iter().find(|(_, count)| *count >= target);
    match (witness, best) {
        (Some((text, _)), best) => {
            let mut state = best.unwrap_or_else(|| empty_state(target, &fam, budget, &enumeration));
            // the checkpoints belonged to the stalled product; the steps stay as a record
            state.checkpoints.clear();
            state.spec = parse_spec(text)?;
            state.fallback = Some(text.to_string());
            finish(&mut state, cache)?;
            Ok(state)
        }
        (None, Some(state)) => Ok(state),
        (None, None) => Err(Error::Precondition("no candidate passed the first step within the budget".into())),
    }
}

fn empty_state(target: usize, fam: &IntervalFamily, budget: &SearchBudget, enumeration: &str) -> ConstructionState {
    ConstructionState {
        target,
        spec: ProductSpec::from_pairs(&[(2, 1)]).expect("valid"),
        checkpoints: vec![],
        family: fam.clone(),
        steps: vec![],
        enumeration: enumeration.to_string(),
        budget: budget.clone(),
        inflections: InflectionReport { sign_changes: 0, distinct_roots: 0, isolating_intervals: vec![], endpoint_multiplicity: (0, 0) },
        reached: false,
        fallback: None,
    }
}

/// `g'(q1) − g'(q0)`, exactly, for a polynomial small enough to hold.
pub fn derivative_difference(g: &crate::poly::Polynomial, q0: &Rational, q1: &Rational) -> Rational {
    let d = g.derivative();
    d.eval(q1) - d.eval(q0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::logderiv::product_reliability;
    use num_traits::Zero;
    use proptest::prelude::*;

    #[test]
    fn family_invariants() {
        let fam = IntervalFamily::standard();
        assert_eq!(fam.interval(0, 1).0, rat(1, 64));
        assert!(fam.count >= 5);
        let mut prev_b = Rational::zero();
        for k in 0..fam.count {
            let (a, b) = fam.interval(k, 1);
            assert!(prev_b < a && a < b && b < rat(1, 8));
            prev_b = b;
            for m in 1..40 {
                let (a1, b1) = fam.interval(k, m);
                let (a2, b2) = fam.interval(k, m + 1);
                assert!(a1 < b1 && &b1 - &a1 <= rat(1, 1) / Rational::from_integer(num_bigint::BigInt::one() << m));
                assert!(a1 <= a2 && b2 <= b1);
            }
        }
    }

    #[test]
    fn target_zero_is_a_single_factor() {
        let c = CompleteCache::new();
        let s = construction_search(0, &c, &SearchBudget::default()).unwrap();
        assert!(s.reached);
        assert_eq!(s.spec.factors().len(), 1);
        assert_eq!(s.checkpoints.len(), 1);
        assert!(s.fallback.is_none());
    }

    #[test]
    fn target_three_is_found_by_the_search() {
        let c = CompleteCache::new();
        let s = construction_search(3, &c, &SearchBudget::default()).unwrap();
        assert!(s.reached, "{}", s.to_text());
        assert!(s.inflections.sign_changes >= 3);
        for (i, step) in s.steps.iter().enumerate() {
            assert_eq!(step.k, i);
            assert!(step.depth >= 1);
        }
        assert!(s.checkpoints.windows(2).all(|w| w[0] < w[1]));
        assert!(s.checkpoints.iter().all(|q| q.is_positive() && q < &rat(1, 8)));
        assert!(confirm_checkpoints(&s.spec, &s.checkpoints, &c).unwrap());
        // one more factor per step
        assert_eq!(s.spec.factors().len(), s.steps.len());
    }

    #[test]
    fn confirmation_rejects_bad_checkpoints() {
        let c = CompleteCache::new();
        let s = parse_spec("K3").unwrap();
        // g'' < 0 before the inflection near 1/2
        assert!(!confirm_checkpoints(&s, &[rat(1, 4)], &c).unwrap());
        assert!(confirm_checkpoints(&s, &[rat(3, 4)], &c).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn derivative_difference_is_the_integral_of_g2(fs in prop::collection::vec((2usize..6, 1u64..4), 1..3), a in 1i64..50, w in 1i64..50) {
            let c = CompleteCache::new();
            let g = product_reliability(&ProductSpec::from_pairs(&fs).unwrap(), &c).unwrap();
            let (q0, q1) = (rat(a, 100), rat(a + w, 100));
            let integral = g.derivative().derivative().integrate(&q0, &q1);
            prop_assert_eq!(derivative_difference(&g, &q0, &q1), integral);
        }
    }
}
