//! Builds products with a requested number of inflection points, one factor per step.

use std::time::Instant;

use relpoly::analysis::{construction_search, SearchBudget};
use relpoly::complete::CompleteCache;

fn main() -> relpoly::Result<()> {
    let cache = CompleteCache::new();
    for target in [0, 1, 3, 4] {
        let start = Instant::now();
        let state = construction_search(target, &cache, &SearchBudget::default())?;
        print!("{}", state.to_text());
        println!("  ({:.1?})", start.elapsed());
    }
    Ok(())
}
