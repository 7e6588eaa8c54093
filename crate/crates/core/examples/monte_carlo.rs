//! Seeded Monte Carlo estimates next to the exact reliability.

use relpoly::graphs::{brute_force_spanning_counts, monte_carlo_reliability, one_point_union, SimpleGraph};
use relpoly::poly::from_spanning_form;
use relpoly::poly::rational::{rat, to_scientific};

fn main() -> relpoly::Result<()> {
    let bowtie = one_point_union(&[SimpleGraph::complete(3), SimpleGraph::complete(3)], &[0, 0])?;
    for (name, g) in [("K4", SimpleGraph::complete(4)), ("K5", SimpleGraph::complete(5)), ("bowtie", bowtie)] {
        let exact = from_spanning_form(&brute_force_spanning_counts(&g)?);
        for q in [rat(1, 4), rat(1, 2), rat(3, 4)] {
            let est = monte_carlo_reliability(&g, &q, 200_000, 7)?;
            println!(
                "{name} q = {q}: exact {}, estimate {} ± {}, within 4 SE: {}",
                to_scientific(&exact.eval(&q), 8),
                to_scientific(&est.estimate, 8),
                &est.std_error[..10.min(est.std_error.len())],
                est.within(&exact.eval(&q), 4)
            );
        }
    }
    Ok(())
}
