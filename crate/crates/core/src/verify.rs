//! Deterministic verification suites for the structural facts about reliability polynomials.
//!
//! Every suite is exact: rational grid points, exact polynomial identities and exhaustive
//! enumeration. A suite report lists each failing instance rather than stopping at the first.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complete::{edge_count, spanning_counts_complete, CompleteCache};
use crate::error::{Error, Result};
use crate::graphs::{
    bridge_pair_counts, bridges, brute_force_spanning_counts, connected_graphs_up_to, one_point_union, SimpleGraph,
    MAX_BRUTE_FORCE_EDGES,
};
use crate::poly::rational::{int, rat};
use crate::poly::{from_spanning_form, spanning_derivative, to_spanning_form, Polynomial, Rational};

/// Bumped whenever a suite changes what it checks.
pub const SUITE_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Sandwich,
    Ratio,
    Derivbound,
    Endpoints,
    DerivativeSigns,
    ProductLaw,
    BridgePairs,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Sandwich,
        Suite::Ratio,
        Suite::Derivbound,
        Suite::Endpoints,
        Suite::DerivativeSigns,
        Suite::ProductLaw,
        Suite::BridgePairs,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sandwich => "sandwich",
            Suite::Ratio => "ratio",
            Suite::Derivbound => "derivbound",
            Suite::Endpoints => "endpoints",
            Suite::DerivativeSigns => "derivative-signs",
            Suite::ProductLaw => "product-law",
            Suite::BridgePairs => "bridge-pairs",
            Suite::Oracle => "oracle",
        }
    }

    /// Default `n_max`: largest `K_n` for the complete-graph suites, largest vertex count
    /// for the graph-corpus suites.
    pub fn default_n_max(self) -> usize {
        match self {
            Suite::Sandwich => 16,
            Suite::Ratio | Suite::Derivbound => 12,
            Suite::DerivativeSigns => 10,
            Suite::Endpoints | Suite::BridgePairs => 5,
            Suite::ProductLaw => 4,
            Suite::Oracle => 6,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Suite::Sandwich => "1 - (n+1)q^(n-1) <= r_n(q) <= 1 - (n-1)q^(n-1) at q = j/256, j <= 32",
            Suite::Ratio => "C(n,2)^2 (1-q)^2 / 2 - r_n has non-negative spanning counts and is >= 0 at q = j/64",
            Suite::Derivbound => "q(1-q)|f'(q)| <= C(n,2)|f(q)| for f in {r_n, 1 - r_n, -r_n'} at q = j/64",
            Suite::Endpoints => "f'(0) = 0 iff bridgeless, f'(1) = 0 with >= 3 vertices, on every connected graph",
            Suite::DerivativeSigns => "spanning counts of r_n' are <= 0 and match the expanded derivative",
            Suite::ProductLaw => "R(G*H) = R(G) R(H) for every pair and every attachment",
            Suite::BridgePairs => "bridge-pair counts equal the negated spanning derivative counts",
            Suite::Oracle => "recurrence counts equal enumeration for K_2..K_6 and N_(n-1) = n^(n-2) up to K_10",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub version: u32,
    pub n_max: usize,
    pub statement: String,
    /// Number of individual facts checked.
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} (v{}, n-max {}): {}\n  {}: {} checks, {} failure(s)\n",
            self.suite,
            self.version,
            self.n_max,
            self.statement,
            if self.passed() { "pass" } else { "FAIL" },
            self.checked,
            self.failures.len()
        );
        for f in self.failures.iter().take(20) {
            out.push_str(&format!("  {f}\n"));
        }
        out
    }
}

/// Collects `(checked, failures)` from independent parts in their original order.
fn tally(parts: Vec<(usize, Vec<String>)>) -> (usize, Vec<String>) {
    parts.into_iter().fold((0, Vec::new()), |(c, mut f), (pc, pf)| {
        f.extend(pf);
        (c + pc, f)
    })
}

fn grid(step: i64, count: i64) -> Vec<Rational> {
    (0..=count).map(|j| rat(j, step)).collect()
}

fn q_pow(q: &Rational, k: usize) -> Rational {
    Pow::pow(q, k as u32)
}

fn sandwich(n_max: usize, cache: &CompleteCache) -> Result<(usize, Vec<String>)> {
    let parts = (2..=n_max)
        .into_par_iter()
        .map(|n| {
            let r = cache.reliability(n)?;
            let mut failures = Vec::new();
            let pts = grid(256, 32);
            for q in &pts {
                let v = r.eval(q);
                let p = q_pow(q, n - 1);
                let lower = int(1) - int(n as i64 + 1) * &p;
                let upper = int(1) - int(n as i64 - 1) * &p;
                if !(lower <= v && v <= upper) {
                    failures.push(format!("K{n} at q = {q}"));
                }
            }
            Ok((pts.len(), failures))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(tally(parts))
}

fn ratio(n_max: usize, cache: &CompleteCache) -> Result<(usize, Vec<String>)> {
    let parts = (3..=n_max)
        .into_par_iter()
        .map(|n| {
            let r = cache.reliability(n)?;
            let m = edge_count(n);
            let half_m2 = rat(1, 2) * q_pow(&int(m as i64), 2);
            let bound = Polynomial::one_minus_q().pow_u64(2).scale(&half_m2);
            let gap = &bound - r.as_ref();
            let mut failures = Vec::new();
            if !to_spanning_form(&gap, m)?.all_nonnegative() {
                failures.push(format!("K{n}: spanning counts of the gap are not all >= 0"));
            }
            let pts = grid(64, 64);
            for q in &pts {
                if gap.eval(q).is_negative() {
                    failures.push(format!("K{n} at q = {q}"));
                }
            }
            Ok((pts.len() + 1, failures))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(tally(parts))
}

fn derivbound(n_max: usize, cache: &CompleteCache) -> Result<(usize, Vec<String>)> {
    let parts = (2..=n_max)
        .into_par_iter()
        .map(|n| {
            let r = cache.reliability(n)?;
            let m = int(edge_count(n) as i64);
            let fs = [
                ("r", r.as_ref().clone()),
                ("1-r", &Polynomial::one() - r.as_ref()),
                ("-r'", &Polynomial::zero() - &r.derivative()),
            ];
            let pts = grid(64, 64);
            let mut failures = Vec::new();
            for (name, f) in &fs {
                let d = f.derivative();
                for q in &pts {
                    let lhs = q * (int(1) - q) * d.eval(q).abs();
                    let rhs = &m * f.eval(q).abs();
                    if lhs > rhs {
                        failures.push(format!("K{n}, f = {name}, q = {q}"));
                    }
                }
            }
            Ok((fs.len() * pts.len(), failures))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(tally(parts))
}

fn reliability_of(g: &SimpleGraph) -> Result<Polynomial> {
    Ok(from_spanning_form(&brute_force_spanning_counts(g)?))
}

fn endpoints(n_max: usize) -> Result<(usize, Vec<String>)> {
    let corpus = connected_graphs_up_to(n_max);
    let parts = corpus
        .par_iter()
        .map(|g| {
            let d = reliability_of(g)?.derivative();
            let bridgeless = bridges(g)?.is_empty();
            let mut failures = Vec::new();
            let mut checked = 1;
            if d.eval(&int(0)).is_zero() != bridgeless {
                failures.push(format!("f'(0) vs bridges on {}", g.to_json()));
            }
            if g.vertex_count() >= 3 {
                checked += 1;
                if !d.eval(&int(1)).is_zero() {
                    failures.push(format!("f'(1) != 0 on {}", g.to_json()));
                }
            }
            Ok((checked, failures))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(tally(parts))
}

fn derivative_signs(n_max: usize, cache: &CompleteCache) -> Result<(usize, Vec<String>)> {
    let parts = (2..=n_max)
        .into_par_iter()
        .map(|n| {
            let s = spanning_counts_complete(n, cache)?;
            let d = spanning_derivative(&s)?;
            let mut failures = Vec::new();
            if !d.all_nonpositive() {
                failures.push(format!("K{n}: a derivative count is positive"));
            }
            if from_spanning_form(&d) != cache.reliability(n)?.derivative() {
                failures.push(format!("K{n}: spanning derivative disagrees with the expanded derivative"));
            }
            Ok((2, failures))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(tally(parts))
}

/// Small connected graphs, each with at most `n_max` vertices, in a fixed order.
pub fn product_corpus(n_max: usize) -> Vec<NamedGraph> {
    let g = |v: usize, e: &[(usize, usize)]| SimpleGraph::new(v, e.to_vec()).expect("valid corpus graph");
    let all = vec![
        ("K2", SimpleGraph::complete(2)),
        ("P3", SimpleGraph::path(3)),
        ("K3", SimpleGraph::complete(3)),
        ("P4", SimpleGraph::path(4)),
        ("star4", g(4, &[(0, 1), (0, 2), (0, 3)])),
        ("C4", SimpleGraph::cycle(4)),
        ("paw", g(4, &[(0, 1), (1, 2), (0, 2), (2, 3)])),
        ("diamond", g(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])),
        ("K4", SimpleGraph::complete(4)),
        ("C5", SimpleGraph::cycle(5)),
        ("house", g(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 4)])),
        ("K5", SimpleGraph::complete(5)),
    ];
    all.into_iter().filter(|(_, g)| g.vertex_count() <= n_max).collect()
}

pub type NamedGraph = (&'static str, SimpleGraph);

/// Unordered pairs `(G, H)` from the corpus whose union fits the enumeration limit.
pub fn product_pairs(n_max: usize) -> Vec<(NamedGraph, NamedGraph)> {
    let corpus = product_corpus(n_max);
    let mut pairs = Vec::new();
    for i in 0..corpus.len() {
        for j in i..corpus.len() {
            if corpus[i].1.edge_count() + corpus[j].1.edge_count() <= 16 {
                pairs.push((corpus[i].clone(), corpus[j].clone()));
            }
        }
    }
    pairs
}

fn product_law(n_max: usize) -> Result<(usize, Vec<String>)> {
    let parts = product_pairs(n_max)
        .par_iter()
        .map(|((gn, g), (hn, h))| {
            let expected = &reliability_of(g)? * &reliability_of(h)?;
            let mut failures = Vec::new();
            let mut checked = 0;
            for a in 0..g.vertex_count() {
                for b in 0..h.vertex_count() {
                    checked += 1;
                    let union = one_point_union(&[g.clone(), h.clone()], &[a, b])?;
                    if reliability_of(&union)? != expected {
                        failures.push(format!("{gn} * {hn} glued at ({a}, {b})"));
                    }
                }
            }
            Ok((checked, failures))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(tally(parts))
}

fn bridge_pairs(n_max: usize) -> Result<(usize, Vec<String>)> {
    let corpus: Vec<SimpleGraph> = connected_graphs_up_to(n_max)
        .into_iter()
        .filter(|g| g.edge_count() >= 1 && g.edge_count() <= MAX_BRUTE_FORCE_EDGES.min(10))
        .collect();
    let parts = corpus
        .par_iter()
        .map(|g| {
            let pairs = bridge_pair_counts(g)?;
            let d = spanning_derivative(&brute_force_spanning_counts(g)?)?;
            let negated: Vec<Rational> = d.counts().iter().map(|c| -c).collect();
            let pairs: Vec<Rational> = pairs.into_iter().map(Rational::from_integer).collect();
            let failures = if pairs == negated { Vec::new() } else { vec![format!("bridge pairs on {}", g.to_json())] };
            Ok((1, failures))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(tally(parts))
}

fn oracle(n_max: usize, cache: &CompleteCache) -> Result<(usize, Vec<String>)> {
    let mut checked = 0;
    let mut failures = Vec::new();
    let brute_max = n_max.min(7);
    for n in 2..=brute_max {
        checked += 1;
        let brute = brute_force_spanning_counts(&SimpleGraph::complete(n))?;
        if spanning_counts_complete(n, cache)? != brute {
            failures.push(format!("K{n}: recurrence and enumeration disagree"));
        }
    }
    for n in 2..=n_max.max(10) {
        checked += 1;
        let s = spanning_counts_complete(n, cache)?;
        let cayley = Rational::from_integer(Pow::pow(BigInt::from(n), (n - 2) as u32));
        if s.counts()[n - 1] != cayley {
            failures.push(format!("K{n}: N_(n-1) != n^(n-2)"));
        }
        if s.counts()[..n - 1].iter().any(|c| !c.is_zero()) {
            failures.push(format!("K{n}: a count below n - 1 edges is nonzero"));
        }
        if s.counts()[s.m()] != Rational::one() {
            failures.push(format!("K{n}: the full edge set is not counted once"));
        }
    }
    Ok((checked, failures))
}

/// Runs one suite; `n_max = None` uses [`Suite::default_n_max`].
pub fn run_suite(suite: Suite, n_max: Option<usize>, cache: &CompleteCache) -> Result<SuiteReport> {
    let n_max = n_max.unwrap_or(suite.default_n_max());
    let (checked, failures) = match suite {
        Suite::Sandwich => sandwich(n_max, cache)?,
        Suite::Ratio => ratio(n_max, cache)?,
        Suite::Derivbound => derivbound(n_max, cache)?,
        Suite::Endpoints => {
            if n_max > 6 {
                return Err(Error::Precondition("the endpoints corpus is limited to 6 vertices".into()));
            }
            endpoints(n_max)?
        }
        Suite::DerivativeSigns => derivative_signs(n_max, cache)?,
        Suite::ProductLaw => product_law(n_max)?,
        Suite::BridgePairs => {
            if n_max > 6 {
                return Err(Error::Precondition("the bridge-pairs corpus is limited to 6 vertices".into()));
            }
            bridge_pairs(n_max)?
        }
        Suite::Oracle => oracle(n_max, cache)?,
    };
    Ok(SuiteReport {
        suite,
        version: SUITE_VERSION,
        n_max,
        statement: suite.describe().to_string(),
        checked,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.name()));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let c = CompleteCache::new();
        for s in Suite::ALL {
            let r = run_suite(s, Some(4), &c).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn product_corpus_has_enough_pairs() {
        assert!(product_pairs(4).len() >= 20);
    }

    #[test]
    fn reports_are_deterministic() {
        let c = CompleteCache::new();
        let a = serde_json::to_string(&run_suite(Suite::Endpoints, Some(4), &c).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(Suite::Endpoints, Some(4), &c).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
