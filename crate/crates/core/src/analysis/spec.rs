//! Product specifications `K2^5*K3^4*...` naming one-point unions of complete graphs.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::complete::edge_count;
use crate::error::{Error, Result};

/// Ordered factors `(n, ℓ)`: `ℓ` copies of `K_n` glued at one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ProductSpec {
    factors: Vec<(usize, BigUint)>,
}

impl ProductSpec {
    pub fn new(factors: Vec<(usize, BigUint)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSpec("a spec needs at least one factor".into()));
        }
        for (n, l) in &factors {
            if *n < 2 {
                return Err(Error::InvalidSpec(format!("K{n}: n must be at least 2")));
            }
            if l.is_zero() {
                return Err(Error::InvalidSpec(format!("K{n}^0: exponent must be at least 1")));
            }
        }
        Ok(ProductSpec { factors })
    }

    /// Convenience constructor for small exponents.
    pub fn from_pairs(pairs: &[(usize, u64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(n, l)| (n, BigUint::from(l))).collect())
    }

    pub fn factors(&self) -> &[(usize, BigUint)] {
        &self.factors
    }

    /// Duplicate bases summed, sorted by `n`.
    pub fn merged(&self) -> ProductSpec {
        let mut map = std::collections::BTreeMap::<usize, BigUint>::new();
        for (n, l) in &self.factors {
            *map.entry(*n).or_default() += l;
        }
        ProductSpec { factors: map.into_iter().collect() }
    }

    /// `Σ ℓ·C(n, 2)`: the edge count of the union, and the degree of its reliability.
    pub fn total_degree(&self) -> BigUint {
        self.factors.iter().map(|(n, l)| l * BigUint::from(edge_count(*n))).sum()
    }

    pub fn vertex_count(&self) -> BigUint {
        BigUint::one() + self.factors.iter().map(|(n, l)| l * BigUint::from(n - 1)).sum::<BigUint>()
    }

    /// Appends a factor, keeping order.
    pub fn with_factor(&self, n: usize, l: BigUint) -> Result<ProductSpec> {
        let mut factors = self.factors.clone();
        factors.push((n, l));
        ProductSpec::new(factors)
    }
}

impl fmt::Display for ProductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, l)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "K{n}")?;
            if !l.is_one() {
                write!(f, "^{l}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for ProductSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

impl TryFrom<String> for ProductSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        parse_spec(&s)
    }
}

impl From<ProductSpec> for String {
    fn from(s: ProductSpec) -> String {
        s.to_string()
    }
}

/// Canonical text: `^1` omitted, factors in stored order.
pub fn render_spec(spec: &ProductSpec) -> String {
    spec.to_string()
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    text: &'a str,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.at < self.chars.len() && self.chars[self.at].1.is_whitespace() {
            self.at += 1;
        }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.text.len(), |c| c.0)
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).map(|c| c.1)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos(), msg: msg.into() }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.at += 1;
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected '{want}', found '{c}'"))),
            None => Err(self.err(format!("expected '{want}', found end of input"))),
        }
    }

    /// Digits with optional `,` or `_` group separators and interior whitespace.
    fn integer(&mut self) -> Result<BigUint> {
        let braced = self.peek() == Some('{');
        if braced {
            self.at += 1;
        }
        self.skip_ws();
        let start = self.pos();
        let mut digits = String::new();
        while let Some(c) = self.peek() {
            match c {
                '0'..='9' => digits.push(c),
                ',' | '_' if !digits.is_empty() => {}
                _ => break,
            }
            self.at += 1;
        }
        if digits.is_empty() {
            return Err(match self.peek() {
                Some(c) => self.err(format!("expected an integer, found '{c}'")),
                None => self.err("expected an integer, found end of input"),
            });
        }
        if braced {
            self.expect('}')?;
        }
        digits.parse().map_err(|_| Error::Parse { pos: start, msg: "bad integer".into() })
    }
}

/// Parses `term ('*' term)*` with `term := 'K' int ('^' int)?`.
///
/// Whitespace is ignored, a missing exponent means 1, integers may contain `,` or `_`
/// separators and may be wrapped in braces (`K_{14}^{100,000,000}` also parses).
pub fn parse_spec(text: &str) -> Result<ProductSpec> {
    let mut cur = Cursor { chars: text.char_indices().collect(), at: 0, text };
    let mut factors = Vec::new();
    loop {
        cur.expect('K')?;
        if cur.peek() == Some('_') {
            cur.at += 1;
        }
        let n_pos = cur.pos();
        let n = cur.integer()?;
        let exp_pos = cur.pos();
        let l = if cur.peek() == Some('^') {
            cur.at += 1;
            cur.integer()?
        } else {
            BigUint::one()
        };
        let n: usize = n
            .try_into()
            .map_err(|_| Error::Parse { pos: n_pos, msg: "complete-graph size too large".into() })?;
        if n < 2 {
            return Err(Error::Parse { pos: n_pos, msg: format!("K{n}: n must be at least 2") });
        }
        if l.is_zero() {
            return Err(Error::Parse { pos: exp_pos, msg: "exponent must be at least 1".into() });
        }
        factors.push((n, l));
        match cur.peek() {
            None => break,
            Some('*') => cur.at += 1,
            Some(c) => return Err(cur.err(format!("expected '*' or end of input, found '{c}'"))),
        }
    }
    ProductSpec::new(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pairs(s: &ProductSpec) -> Vec<(usize, u64)> {
        s.factors().iter().map(|(n, l)| (*n, l.try_into().unwrap())).collect()
    }

    #[test]
    fn parses_examples() {
        let s = parse_spec("K2^5*K3^4*K4^3*K5^92").unwrap();
        assert_eq!(pairs(&s), vec![(2, 5), (3, 4), (4, 3), (5, 92)]);
        assert_eq!(pairs(&parse_spec("K7").unwrap()), vec![(7, 1)]);
        let big = parse_spec(" K2^5 * K3^4*K5^116 * K14^100,000,000 ").unwrap();
        assert_eq!(big.factors()[3].1, BigUint::from(100_000_000u32));
        let braces = parse_spec("K_{14}^{100_000_000}").unwrap();
        assert_eq!(braces.factors(), &[(14, BigUint::from(100_000_000u32))]);
    }

    #[test]
    fn rejects_bad_input_with_positions() {
        assert!(matches!(parse_spec("K1^2"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_spec("K3^0"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_spec("K3*"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_spec("K3 x"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_spec(""), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_spec("K^2"), Err(Error::Parse { pos: 1, .. })));
        assert!(parse_spec("K3^").is_err());
    }

    #[test]
    fn render_and_merge() {
        let s = parse_spec("K3^2*K2*K3^5").unwrap();
        assert_eq!(render_spec(&s), "K3^2*K2*K3^5");
        assert_eq!(render_spec(&s.merged()), "K2*K3^7");
        assert_eq!(s.total_degree(), BigUint::from(22u32));
        assert_eq!(s.vertex_count(), BigUint::from(16u32));
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "\"K3^2*K2*K3^5\"");
        assert_eq!(serde_json::from_str::<ProductSpec>(&json).unwrap(), s);
    }

    proptest! {
        #[test]
        fn parse_inverts_render(fs in prop::collection::vec((2usize..40, 1u64..u64::MAX), 1..6)) {
            let s = ProductSpec::from_pairs(&fs).unwrap();
            let text = render_spec(&s);
            prop_assert_eq!(parse_spec(&text).unwrap(), s);
        }

        #[test]
        fn render_of_parse_is_idempotent(fs in prop::collection::vec((2usize..40, 1u64..1000), 1..6), spaced in any::<bool>()) {
            let mut text = ProductSpec::from_pairs(&fs).unwrap().to_string();
            if spaced {
                text = text.replace('*', " * ").replace("^1*", "*");
            }
            let once = render_spec(&parse_spec(&text).unwrap());
            prop_assert_eq!(render_spec(&parse_spec(&once).unwrap()), once);
        }
    }
}
