//! `{"symbols": [...], "terms": [{"exp": [...], "coef": "<decimal>"}, ...]}`
//!
//! Terms are written leading term first. Reading accepts any term order but
//! rejects zero coefficients, repeated exponent vectors and wrong lengths, so a
//! document that reads back is always the canonical form of its polynomial.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Monomial, MultiPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub symbols: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: String,
}

impl From<&MultiPoly> for PolyJson {
    fn from(p: &MultiPoly) -> Self {
        PolyJson {
            symbols: p.symbols().to_vec(),
            terms: p
                .terms()
                .rev()
                .map(|(m, c)| TermJson {
                    exp: m.exps().to_vec(),
                    coef: c.to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for MultiPoly {
    type Error = PolyError;

    fn try_from(j: PolyJson) -> Result<Self, PolyError> {
        let mut p = MultiPoly::zero(&j.symbols);
        p.check_symbols_distinct()?;
        let mut terms = BTreeMap::new();
        for t in j.terms {
            if t.exp.len() != j.symbols.len() {
                return Err(PolyError::Json(format!(
                    "exponent vector {:?} does not match {} symbols",
                    t.exp,
                    j.symbols.len()
                )));
            }
            let c: BigInt = t
                .coef
                .parse()
                .map_err(|_| PolyError::Json(format!("bad coefficient {:?}", t.coef)))?;
            if c.is_zero() {
                return Err(PolyError::Json("zero coefficient stored".into()));
            }
            if terms.insert(Monomial::new(t.exp.clone()), c).is_some() {
                return Err(PolyError::Json(format!("repeated exponent vector {:?}", t.exp)));
            }
        }
        p.terms = terms;
        Ok(p)
    }
}

impl MultiPoly {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolyJson::from(self)).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<MultiPoly, PolyError> {
        let j: PolyJson = serde_json::from_str(s).map_err(|e| PolyError::Json(e.to_string()))?;
        MultiPoly::try_from(j)
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = PolyJson::deserialize(deserializer)?;
        MultiPoly::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_leading_term_first() {
        let p = MultiPoly::parse("3 - a*b^2 + b", &["a", "b"]).unwrap();
        assert_eq!(
            p.to_json(),
            r#"{"symbols":["a","b"],"terms":[{"exp":[1,2],"coef":"-1"},{"exp":[0,1],"coef":"1"},{"exp":[0,0],"coef":"3"}]}"#
        );
    }

    #[test]
    fn rejects_non_canonical_documents() {
        let zero = r#"{"symbols":["a"],"terms":[{"exp":[1],"coef":"0"}]}"#;
        let repeat = r#"{"symbols":["a"],"terms":[{"exp":[1],"coef":"2"},{"exp":[1],"coef":"3"}]}"#;
        let short = r#"{"symbols":["a","b"],"terms":[{"exp":[1],"coef":"2"}]}"#;
        let junk = r#"{"symbols":["a"],"terms":[{"exp":[1],"coef":"2x"}]}"#;
        for doc in [zero, repeat, short, junk] {
            assert!(matches!(MultiPoly::from_json(doc), Err(PolyError::Json(_))), "{doc}");
        }
    }

    #[test]
    fn huge_coefficients_survive() {
        let p = MultiPoly::parse("(123456789*a - 987654321)^9", &["a"]).unwrap();
        let back = MultiPoly::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.to_json(), p.to_json());
    }
}
