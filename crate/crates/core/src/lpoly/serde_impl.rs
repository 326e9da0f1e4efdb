//! Text encoding: a list of `[exponent-vector, coefficient]` pairs in
//! descending lexicographic order, e.g. `[[[2,0],1],[[1,1],-3],[[0,0],1]]`.
//! Coefficients outside the `i64` range are written as decimal strings.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LaurentPoly;

struct Coef<'a>(&'a BigInt);

impl Serialize for Coef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct OwnedCoef(BigInt);

impl<'de> Deserialize<'de> for OwnedCoef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = OwnedCoef;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<OwnedCoef, E> {
                Ok(OwnedCoef(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<OwnedCoef, E> {
                Ok(OwnedCoef(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<OwnedCoef, E> {
                v.parse().map(OwnedCoef).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for (e, c) in self.terms().rev() {
            seq.serialize_element(&(e, Coef(c)))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    /// The variable count is taken from the exponent vectors; an empty list
    /// decodes to the zero polynomial in 0 variables (callers that know the
    /// count fix it with [`LaurentPoly::with_num_vars`]).
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a list of [exponents, coefficient] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<LaurentPoly, A::Error> {
                let mut terms: Vec<(Vec<i64>, BigInt)> = Vec::new();
                while let Some((e, c)) = seq.next_element::<(Vec<i64>, OwnedCoef)>()? {
                    terms.push((e, c.0));
                }
                let m = terms.first().map_or(0, |t| t.0.len());
                LaurentPoly::from_terms(m, terms).map_err(de::Error::custom)
            }
        }
        d.deserialize_seq(V)
    }
}

impl LaurentPoly {
    /// Re-labels the variable count of a zero polynomial; nonzero inputs must
    /// already match.
    pub fn with_num_vars(self, num_vars: usize) -> Result<Self, super::PolyError> {
        if self.is_zero() {
            return Ok(Self::zero(num_vars));
        }
        if self.num_vars() != num_vars {
            return Err(super::PolyError::VarMismatch {
                left: self.num_vars(),
                right: num_vars,
            });
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_example() {
        let text = "[[[2,0],1],[[1,1],-3],[[0,0],1]]";
        let p: LaurentPoly = serde_json::from_str(text).unwrap();
        assert_eq!(p.to_string(), "t1^2 - 3*t1*t2 + 1");
        assert_eq!(serde_json::to_string(&p).unwrap(), text);
    }

    #[test]
    fn big_coefficients_survive() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let p = LaurentPoly::monomial(1, vec![-2], big);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"[[[-2],"123456789012345678901234567890"]]"#);
        let q: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn ragged_exponents_rejected() {
        assert!(serde_json::from_str::<LaurentPoly>("[[[1],1],[[1,2],1]]").is_err());
    }
}
