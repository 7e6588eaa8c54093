//! The spanning-subgraph basis `{(1-q)^i q^(m-i)}` for polynomials of degree at most `m`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::polynomial::Polynomial;
use super::rational::{binomial, Rational};
use crate::error::{Error, Result};

/// Coefficients `N_0..N_m` of `Σ N_i (1-q)^i q^(m-i)`.
///
/// For a reliability polynomial, `N_i` counts connected spanning subgraphs with `i` edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpanningForm {
    m: usize,
    counts: Vec<Rational>,
}

impl SpanningForm {
    /// Panics unless `counts.len() == m + 1`.
    pub fn new(m: usize, counts: Vec<Rational>) -> Self {
        assert_eq!(counts.len(), m + 1, "a spanning form over m edges has m + 1 counts");
        SpanningForm { m, counts }
    }

    pub fn from_ints(counts: &[i64]) -> Self {
        assert!(!counts.is_empty());
        Self::new(
            counts.len() - 1,
            counts.iter().map(|&c| Rational::from_integer(c.into())).collect(),
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn counts(&self) -> &[Rational] {
        &self.counts
    }

    pub fn is_integral(&self) -> bool {
        self.counts.iter().all(|c| c.is_integer())
    }

    pub fn all_nonnegative(&self) -> bool {
        self.counts.iter().all(|c| !c.is_negative())
    }

    pub fn all_nonpositive(&self) -> bool {
        self.counts.iter().all(|c| !c.is_positive())
    }

    /// Integer counts, `None` if any count is fractional.
    pub fn integer_counts(&self) -> Option<Vec<BigInt>> {
        self.counts
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

/// Coefficient of `q^j` in `(1-q)^i q^(m-i)`.
fn basis_coeff(m: usize, i: usize, j: usize) -> BigInt {
    if j + i < m || j > m {
        return BigInt::zero();
    }
    let t = (j + i - m) as u64;
    let c = binomial(i as u64, t);
    if t % 2 == 1 {
        -c
    } else {
        c
    }
}

/// Rewrites `p` in the spanning basis over `m` edges by back-substitution: the basis
/// element for index `m - j` is the only one whose lowest power of `q` is `q^j`.
pub fn to_spanning_form(p: &Polynomial, m: usize) -> Result<SpanningForm> {
    if let Some(d) = p.degree() {
        if d > m {
            return Err(Error::DegreeAboveEdgeCount { degree: d, m });
        }
    }
    let mut counts = vec![Rational::zero(); m + 1];
    #[allow(clippy::needless_range_loop)]
    for j in 0..=m {
        let mut acc = p.coeff(j);
        for i in (m - j + 1)..=m {
            if counts[i].is_zero() {
                continue;
            }
            let b = basis_coeff(m, i, j);
            if !b.is_zero() {
                acc -= &counts[i] * Rational::from_integer(b);
            }
        }
        counts[m - j] = acc;
    }
    Ok(SpanningForm::new(m, counts))
}

/// Expands `Σ N_i (1-q)^i q^(m-i)` into the power basis.
pub fn from_spanning_form(s: &SpanningForm) -> Polynomial {
    let m = s.m;
    let mut coeffs = vec![Rational::zero(); m + 1];
    for (i, n_i) in s.counts.iter().enumerate() {
        if n_i.is_zero() {
            continue;
        }
        // (1-q)^i q^(m-i), built incrementally through the binomial row
        let mut b = BigInt::from(1);
        for t in 0..=i {
            let term = if t % 2 == 1 { -b.clone() } else { b.clone() };
            coeffs[m - i + t] += n_i * Rational::from_integer(term);
            b = b * BigInt::from(i - t) / BigInt::from(t + 1);
        }
    }
    Polynomial::new(coeffs)
}

/// Derivative in the spanning basis over `m - 1` edges:
/// `c_i = (m - i) N_i - (i + 1) N_(i+1)`.
pub fn spanning_derivative(s: &SpanningForm) -> Result<SpanningForm> {
    if s.m == 0 {
        return Err(Error::Precondition("spanning_derivative needs m >= 1".into()));
    }
    let m = s.m;
    let counts = (0..m)
        .map(|i| {
            let a = &s.counts[i] * Rational::from_integer(BigInt::from(m - i));
            let b = &s.counts[i + 1] * Rational::from_integer(BigInt::from(i + 1));
            a - b
        })
        .collect();
    Ok(SpanningForm::new(m - 1, counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::int;

    #[test]
    fn small_conversions() {
        let one_minus_q = Polynomial::from_ints(&[1, -1]);
        assert_eq!(to_spanning_form(&one_minus_q, 1).unwrap(), SpanningForm::from_ints(&[0, 1]));
        let r3 = Polynomial::from_ints(&[1, 0, -3, 2]);
        assert_eq!(to_spanning_form(&r3, 3).unwrap(), SpanningForm::from_ints(&[0, 0, 3, 1]));
        assert_eq!(to_spanning_form(&Polynomial::one(), 0).unwrap(), SpanningForm::from_ints(&[1]));
        assert!(to_spanning_form(&r3, 2).is_err());
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(from_spanning_form(&SpanningForm::from_ints(&[0, 1])), Polynomial::from_ints(&[1, -1]));
        assert_eq!(
            from_spanning_form(&SpanningForm::from_ints(&[0, 0, 3, 1])),
            Polynomial::from_ints(&[1, 0, -3, 2])
        );
    }

    #[test]
    fn k4_expansion_matches_pointwise_sum() {
        let s = SpanningForm::from_ints(&[0, 0, 0, 16, 15, 6, 1]);
        let p = from_spanning_form(&s);
        // evaluate Σ N_i (1-q)^i q^(6-i) directly at a few points
        for q in [int(0), int(1), Rational::new(1.into(), 3.into()), Rational::new(5.into(), 7.into())] {
            let direct: Rational = s
                .counts()
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    n * num_traits::Pow::pow(int(1) - &q, i as u32) * num_traits::Pow::pow(q.clone(), (6 - i) as u32)
                })
                .sum();
            assert_eq!(p.eval(&q), direct);
        }
        assert_eq!(p, Polynomial::from_ints(&[1, 0, 0, -4, -3, 12, -6]));
    }

    #[test]
    fn derivative_examples() {
        let d = spanning_derivative(&SpanningForm::from_ints(&[0, 1])).unwrap();
        assert_eq!(d, SpanningForm::from_ints(&[-1]));
        let d = spanning_derivative(&SpanningForm::from_ints(&[0, 0, 3, 1])).unwrap();
        assert_eq!(d, SpanningForm::from_ints(&[0, -6, 0]));
        assert_eq!(from_spanning_form(&d), Polynomial::from_ints(&[0, -6, 6]));
        let d = spanning_derivative(&SpanningForm::from_ints(&[0, 0, 0, 0])).unwrap();
        assert_eq!(d, SpanningForm::from_ints(&[0, 0, 0]));
        assert!(spanning_derivative(&SpanningForm::from_ints(&[1])).is_err());
    }
}
