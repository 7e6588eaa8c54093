//! Reliability polynomials of small complete graphs in both bases, with Cayley's count.

use relpoly::complete::{spanning_counts_complete, CompleteCache};
use relpoly::poly::render_rational;

fn main() -> relpoly::Result<()> {
    let cache = CompleteCache::new();
    for n in 2..=6 {
        let r = cache.reliability(n)?;
        let s = spanning_counts_complete(n, &cache)?;
        let counts: Vec<String> = s.counts().iter().map(render_rational).collect();
        println!("r_{n} = {}", r.to_text());
        println!("  N = [{}], spanning trees N_{} = {}", counts.join(", "), n - 1, counts[n - 1]);
    }
    Ok(())
}
