//! Writes `g''` on a 401-point grid for three products with 3, 4 and 5 inflection points,
//! one CSV per product, into the directory given as the first argument (default `.`).

use std::path::PathBuf;

use relpoly::analysis::{count_inflections, parse_spec, sample_rows, sign_alternations};
use relpoly::analysis::sample::rows_to_csv;
use relpoly::complete::CompleteCache;

fn main() -> relpoly::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let cache = CompleteCache::new();
    for (i, text) in ["K2^5*K3^4*K4^3*K5^92", "K2^2*K4^2*K14^750", "K2^5*K3^4*K5^116*K14^100000000"].iter().enumerate() {
        let spec = parse_spec(text)?;
        let rows = sample_rows(&spec, 2, 401, 20, &cache)?;
        let path = dir.join(format!("g2_{}.csv", i + 1));
        std::fs::write(&path, rows_to_csv(&rows)).map_err(|source| relpoly::Error::Io { path: path.clone(), source })?;
        println!(
            "{text}: {} sampled sign alternations, {} exact inflection points -> {}",
            sign_alternations(&rows),
            count_inflections(&spec, &cache)?.sign_changes,
            path.display()
        );
    }
    Ok(())
}
