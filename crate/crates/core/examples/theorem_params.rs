//! Parameters (N, k, i) for which `K_(ik)^(N^i)` has a sharp drop inside `(a, b)`.

use relpoly::analysis::find_theorem_params;
use relpoly::analysis::theorem::DEFAULT_MAX_I;
use relpoly::poly::rational::rat;

fn main() -> relpoly::Result<()> {
    for (a, b, eps) in [(rat(1, 32), rat(1, 16), rat(1, 100)), (rat(1, 10), rat(1, 9), rat(1, 10))] {
        let params = find_theorem_params(&a, &b, &eps, DEFAULT_MAX_I)?;
        println!("a = {a}, b = {b}, eps = {eps}");
        print!("{}", params.to_text());
    }
    Ok(())
}
