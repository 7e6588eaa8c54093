use relpoly::complete::CompleteCache;
use relpoly::verify::{run_suite, Suite};

fn main() -> relpoly::Result<()> {
    let cache = CompleteCache::new();
    let mut all = true;
    for suite in Suite::ALL {
        let report = run_suite(suite, None, &cache)?;
        all &= report.passed();
        print!("{}", report.to_text());
    }
    println!("{}", if all { "all suites pass" } else { "some suites FAILED" });
    Ok(())
}
