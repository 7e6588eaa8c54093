//! JSON forms: `{"coeffs": [["num", "den"], ...]}`, plus `"m"` for spanning forms.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::polynomial::Polynomial;
use super::rational::Rational;
use super::spanning::SpanningForm;

fn to_pairs(cs: &[Rational]) -> Vec<[String; 2]> {
    cs.iter().map(|c| [c.numer().to_string(), c.denom().to_string()]).collect()
}

fn from_pairs<E: serde::de::Error>(pairs: Vec<[String; 2]>) -> Result<Vec<Rational>, E> {
    pairs
        .into_iter()
        .map(|[n, d]| {
            let n: BigInt = n.parse().map_err(|_| E::custom(format!("bad numerator {n:?}")))?;
            let d: BigInt = d.parse().map_err(|_| E::custom(format!("bad denominator {d:?}")))?;
            if d.sign() != num_bigint::Sign::Plus {
                return Err(E::custom("denominator must be positive"));
            }
            Ok(Rational::new(n, d))
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    coeffs: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
struct SpanningRepr {
    m: usize,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyRepr { coeffs: to_pairs(self.coeffs()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        Ok(Polynomial::new(from_pairs(repr.coeffs)?))
    }
}

impl Serialize for SpanningForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SpanningRepr { m: self.m(), coeffs: to_pairs(self.counts()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpanningForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SpanningRepr::deserialize(d)?;
        let counts = from_pairs(repr.coeffs)?;
        if counts.len() != repr.m + 1 {
            return Err(D::Error::custom(format!(
                "spanning form over m = {} needs {} counts, got {}",
                repr.m,
                repr.m + 1,
                counts.len()
            )));
        }
        Ok(SpanningForm::new(repr.m, counts))
    }
}

/// `#[serde(with = "...")]` helper writing a rational as `"p/q"` (or `"p"`).
pub mod rational_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::poly::rational::{parse_rational, render_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Same as [`rational_string`] for lists.
pub mod rational_strings {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::poly::rational::{parse_rational, render_rational, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(render_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Big integers as decimal strings.
pub mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_json_shape() {
        let p = Polynomial::new(vec![Rational::new(1.into(), 3.into()), Rational::from_integer((-2).into())]);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"coeffs":[["1","3"],["-2","1"]]}"#);
        let back: Polynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn spanning_json_checks_length() {
        let s = SpanningForm::from_ints(&[0, 0, 3, 1]);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with(r#"{"m":3,"#));
        assert_eq!(serde_json::from_str::<SpanningForm>(&text).unwrap(), s);
        assert!(serde_json::from_str::<SpanningForm>(r#"{"m":2,"coeffs":[["1","1"]]}"#).is_err());
        assert!(serde_json::from_str::<Polynomial>(r#"{"coeffs":[["1","0"]]}"#).is_err());
    }

    #[test]
    fn huge_coefficients_survive() {
        let big: BigInt = "123456789012345678901234567890123456789".parse().unwrap();
        let p = Polynomial::from_bigints(vec![big.clone(), -big]);
        let back: Polynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
