//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest harness so the
//! lines always reach the console; the process fails if any criterion fails.

use std::time::Instant;

use relpoly::analysis::{count_inflections, find_theorem_params, parse_spec};
use relpoly::cli::run_with;
use relpoly::complete::CompleteCache;
use relpoly::graphs::{brute_force_spanning_counts, monte_carlo_reliability, SimpleGraph};
use relpoly::poly::rational::rat;
use relpoly::poly::{from_spanning_form, Rational};
use relpoly::verify::{product_pairs, run_suite, Suite};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + Sync + 'a>);

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("relpoly").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned() + &String::from_utf8_lossy(&err))
}

fn suites(list: &[Suite], cache: &CompleteCache) -> Outcome {
    let mut notes = Vec::new();
    for &s in list {
        let r = run_suite(s, None, cache).map_err(|e| format!("{s}: {e}"))?;
        if !r.passed() {
            return Err(format!("{s}: {} failure(s), first: {:?}", r.failures.len(), r.failures.first()));
        }
        notes.push(format!("{s} {} checks", r.checked));
    }
    Ok(notes.join(", "))
}

fn three_products(cache: &CompleteCache) -> Outcome {
    let cases = [("K2^5*K3^4*K4^3*K5^92", 3), ("K2^2*K4^2*K14^750", 4), ("K2^5*K3^4*K5^116*K14^100000000", 5)];
    let (code, out) = cli(&["inflect", "--spec", cases[0].0]);
    if code != 0 || !out.contains(": 3 inflection point(s)") {
        return Err(format!("inflect command: exit {code}, output {out:?}"));
    }
    let mut counts = Vec::new();
    for (s, want) in cases {
        let got = count_inflections(&parse_spec(s).unwrap(), cache).map_err(|e| e.to_string())?.sign_changes;
        if got < want {
            return Err(format!("{s}: {got} < {want}"));
        }
        counts.push(got.to_string());
    }
    Ok(format!("counts {} (need >= 3, 4, 5)", counts.join(", ")))
}

fn structural(cache: &CompleteCache) -> Outcome {
    let (code, out) = cli(&["verify", "--suite", "endpoints", "--n-max", "5"]);
    if code != 0 {
        return Err(format!("verify endpoints exit {code}: {out}"));
    }
    suites(&[Suite::DerivativeSigns, Suite::BridgePairs, Suite::Endpoints], cache)
}

fn product_law(cache: &CompleteCache) -> Outcome {
    let pairs = product_pairs(Suite::ProductLaw.default_n_max()).len();
    if pairs < 20 {
        return Err(format!("only {pairs} graph pairs"));
    }
    suites(&[Suite::ProductLaw], cache).map(|s| format!("{pairs} pairs, {s}"))
}

fn theorem_witness() -> Outcome {
    let (code, out) = cli(&["theorem-params", "--a", "1/32", "--b", "1/16", "--eps", "1/100"]);
    if code != 0 {
        return Err(format!("theorem-params exit {code}: {out}"));
    }
    let p = find_theorem_params(&rat(1, 32), &rat(1, 16), &rat(1, 100), 400).map_err(|e| e.to_string())?;
    let pinned = (17u32, 1u64, 56u64);
    if !(p.found && p.separation_verified && p.conditions.all_hold()) {
        return Err(format!("not certified: {}", p.to_text()));
    }
    if (p.big_n.clone(), p.k, p.i) != (pinned.0.into(), pinned.1, pinned.2) {
        return Err(format!("witness moved: N = {}, k = {}, i = {}", p.big_n, p.k, p.i));
    }
    Ok(format!("N = {}, k = {}, i = {}, five conditions certified", p.big_n, p.k, p.i))
}

fn construction(cache: &CompleteCache) -> Outcome {
    let (code, out) = cli(&["search", "--target", "3", "--json"]);
    if code != 0 {
        return Err(format!("search exit {code}: {out}"));
    }
    let state: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let spec = state["spec"].as_str().ok_or("no spec in output")?;
    let count = count_inflections(&parse_spec(spec).unwrap(), cache).map_err(|e| e.to_string())?.sign_changes;
    if count < 3 {
        return Err(format!("{spec} has {count} inflection points"));
    }
    let how = if state["fallback"].is_null() { "found by search" } else { "fallback witness" };
    Ok(format!("{spec}: {count} inflection points, {how}"))
}

fn monte_carlo() -> Outcome {
    let mut worst = 0.0f64;
    for n in [4usize, 5] {
        let g = SimpleGraph::complete(n);
        let exact_poly = from_spanning_form(&brute_force_spanning_counts(&g).map_err(|e| e.to_string())?);
        for (j, q) in [rat(1, 4), rat(1, 2), rat(3, 4)].into_iter().enumerate() {
            let seed = 1000 + 10 * n as u64 + j as u64;
            let est = monte_carlo_reliability(&g, &q, 1_000_000, seed).map_err(|e| e.to_string())?;
            let exact: Rational = exact_poly.eval(&q);
            if !est.within(&exact, 4) {
                return Err(format!("K{n} at q = {q}: estimate {} vs exact {exact}", est.estimate));
            }
            let z = {
                use num_traits::ToPrimitive;
                let d = (&est.estimate - &exact).to_f64().unwrap_or(0.0).abs();
                let se = est.variance().to_f64().unwrap_or(0.0).sqrt();
                if se > 0.0 { d / se } else { 0.0 }
            };
            worst = worst.max(z);
        }
    }
    Ok(format!("6 estimates of 10^6 trials, largest deviation {worst:.2} standard errors"))
}

fn main() {
    let cache = CompleteCache::new();
    let criteria: Vec<Criterion> = vec![
        ("three-product inflection counts", Box::new(|| three_products(&cache))),
        ("recurrence vs enumeration", Box::new(|| suites(&[Suite::Oracle], &cache))),
        ("sandwich bound", Box::new(|| suites(&[Suite::Sandwich], &cache))),
        ("ratio and derivative bounds", Box::new(|| suites(&[Suite::Ratio, Suite::Derivbound], &cache))),
        ("structural derivative facts", Box::new(|| structural(&cache))),
        ("product law", Box::new(|| product_law(&cache))),
        ("theorem-parameter witness", Box::new(theorem_witness)),
        ("construction search", Box::new(|| construction(&cache))),
        ("monte carlo consistency", Box::new(monte_carlo)),
    ];
    let results: Vec<(Outcome, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let r = f();
                    (r, start.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| (Err("panicked".into()), 0.0)))
            .collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (r, secs))) in criteria.iter().zip(results).enumerate() {
        match r {
            Ok(note) => println!("PASS {} {name}: {note} [{secs:.1} s]", i + 1),
            Err(note) => {
                failed += 1;
                println!("FAIL {} {name}: {note} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
