//! Endpoint and flatness facts for single sharp powers and for a product with a bridge.

use relpoly::analysis::{parse_spec, verify_s_properties};
use relpoly::complete::CompleteCache;
use relpoly::poly::rational::rat;

fn main() -> relpoly::Result<()> {
    let cache = CompleteCache::new();
    let cases = [
        ("K14^100000000", rat(1, 20), rat(1, 4), rat(1, 100)),
        ("K56^803784444631904346795840040159891735261368357513214245352923986167681", rat(1, 32), rat(1, 16), rat(1, 100)),
        ("K3^4*K2", rat(1, 8), rat(7, 8), rat(1, 2)),
    ];
    for (text, a, b, eps) in cases {
        let report = verify_s_properties(&parse_spec(text)?, (&a, &b), &eps, 64, &cache)?;
        print!("{}", report.to_text());
    }
    Ok(())
}
