//! Sturm sequences on their own: root counts of `r_n''` on (0, 1) and the isolating intervals.

use relpoly::complete::CompleteCache;
use relpoly::poly::rational::int;
use relpoly::poly::{count_sign_changes, render_rational, SturmChain};

fn main() -> relpoly::Result<()> {
    let cache = CompleteCache::new();
    for n in [3, 5, 8, 12] {
        let second = cache.reliability(n)?.derivative().derivative();
        let chain = SturmChain::new(&second)?;
        let report = count_sign_changes(&second, &int(0), &int(1))?;
        println!("r_{n}'': chain of length {}, {} sign change(s) on (0, 1)", chain.len(), report.sign_changes);
        for (a, b) in &report.isolating_intervals {
            println!("  root in ({}, {})", render_rational(a), render_rational(b));
        }
    }
    Ok(())
}
