//! Seeded Monte Carlo estimation of all-terminal reliability.
//!
//! Generator: ChaCha8 keyed by `seed` (through `SeedableRng::seed_from_u64`), with trials
//! grouped into blocks of [`BLOCK_TRIALS`]; block `b` reads ChaCha stream `b`. Results
//! depend only on `(seed, trials, q, graph)`, never on how blocks are scheduled.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::graph::{DisjointSets, SimpleGraph};
use crate::error::{Error, Result};
use crate::poly::rational::{render_rational, sqrt_decimal};
use crate::poly::Rational;

pub const GENERATOR: &str = "chacha8-stream-per-4096-trials";
pub const BLOCK_TRIALS: u64 = 4096;
const STD_ERROR_DIGITS: u32 = 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MCEstimate {
    #[serde(serialize_with = "as_text")]
    pub q: Rational,
    pub trials: u64,
    pub successes: u64,
    #[serde(serialize_with = "as_text")]
    pub estimate: Rational,
    /// `sqrt(p(1-p)/trials)` as a fixed-point decimal.
    pub std_error: String,
    pub seed: u64,
    pub generator: &'static str,
}

fn as_text<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&render_rational(r))
}

impl MCEstimate {
    /// `p(1-p)/trials`, the exact square of the standard error.
    pub fn variance(&self) -> Rational {
        let p = &self.estimate;
        p * (Rational::one() - p) / Rational::from_integer(BigInt::from(self.trials))
    }

    /// True when `|estimate - exact| <= k · std_error`, decided exactly by squaring.
    pub fn within(&self, exact: &Rational, k: u32) -> bool {
        let diff = &self.estimate - exact;
        let k2 = Rational::from_integer(BigInt::from(k * k));
        &diff * &diff <= k2 * self.variance()
    }
}

/// Edge-failure test: `Exact(num, den)` draws from `0..den`; otherwise a 64-bit threshold.
enum FailureTest {
    Exact(u64, u64),
    Threshold(u64),
    Always,
    Never,
}

impl FailureTest {
    fn new(q: &Rational) -> Self {
        if q.is_zero() {
            return FailureTest::Never;
        }
        if q.is_one() {
            return FailureTest::Always;
        }
        match (q.numer().to_u64(), q.denom().to_u64()) {
            (Some(n), Some(d)) => FailureTest::Exact(n, d),
            _ => {
                let scaled = (q * Rational::from_integer(BigInt::one() << 64)).floor().to_integer();
                FailureTest::Threshold(scaled.to_u64().unwrap_or(u64::MAX))
            }
        }
    }

    fn fails(&self, rng: &mut ChaCha8Rng) -> bool {
        match *self {
            FailureTest::Exact(n, d) => rng.gen_range(0..d) < n,
            FailureTest::Threshold(t) => rng.gen::<u64>() < t,
            FailureTest::Always => true,
            FailureTest::Never => false,
        }
    }
}

/// Deletes each edge independently with probability `q` and tests connectivity.
pub fn monte_carlo_reliability(g: &SimpleGraph, q: &Rational, trials: u64, seed: u64) -> Result<MCEstimate> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    if q < &Rational::zero() || q > &Rational::one() {
        return Err(Error::Precondition(format!("q = {} is outside [0, 1]", render_rational(q))));
    }
    let test = FailureTest::new(q);
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    let successes: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let n = BLOCK_TRIALS.min(trials - b * BLOCK_TRIALS);
            let mut ok = 0u64;
            for _ in 0..n {
                let mut ds = DisjointSets::new(g.vertex_count());
                for &(u, w) in g.edges() {
                    if !test.fails(&mut rng) {
                        ds.union(u, w);
                    }
                }
                if ds.components() == 1 {
                    ok += 1;
                }
            }
            ok
        })
        .sum();
    let estimate = Rational::new(BigInt::from(successes), BigInt::from(trials));
    let mut est = MCEstimate {
        q: q.clone(),
        trials,
        successes,
        estimate,
        std_error: String::new(),
        seed,
        generator: GENERATOR,
    };
    est.std_error = sqrt_decimal(&est.variance(), STD_ERROR_DIGITS);
    Ok(est)
}
