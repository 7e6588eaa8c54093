//! Exact inflection counts for three products of complete graphs.

use std::time::Instant;

use relpoly::analysis::{inflection_summary, parse_spec};
use relpoly::complete::CompleteCache;

fn main() -> relpoly::Result<()> {
    let cache = CompleteCache::new();
    for text in ["K2^5*K3^4*K4^3*K5^92", "K2^2*K4^2*K14^750", "K2^5*K3^4*K5^116*K14^100000000"] {
        let start = Instant::now();
        let summary = inflection_summary(&parse_spec(text)?, &cache)?;
        print!("{}", summary.to_text());
        println!("  ({:.1?})", start.elapsed());
    }
    Ok(())
}
