//! Polynomials with rational coefficients, stored as an integer polynomial
//! over a positive integer denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{MultiPoly, PolyError};

/// `num / den` with `den > 0` and `gcd(content(num), den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    num: MultiPoly,
    den: BigInt,
}

impl QPoly {
    pub fn new(num: MultiPoly, den: BigInt) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let mut q = QPoly { num, den };
        q.normalize();
        Ok(q)
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            self.num = -&self.num;
        }
        let g = self.num.content().gcd(&self.den);
        if !g.is_one() {
            self.num = self.num.div_integer_exact(&g).expect("g divides the content");
            self.den /= &g;
        }
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The integer polynomial, when the denominator is 1.
    pub fn to_integral(&self) -> Option<MultiPoly> {
        self.den.is_one().then(|| self.num.clone())
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let l = self.den.lcm(&o.den);
        let num = &self.num.scale(&(&l / &self.den)) + &o.num.scale(&(&l / &o.den));
        QPoly::new(num, l).expect("nonzero denominator")
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        QPoly::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominator")
    }

    pub fn scale(&self, k: &BigInt) -> QPoly {
        QPoly::new(self.num.scale(k), self.den.clone()).expect("nonzero denominator")
    }

    /// Exact quotient in `Q[symbols]`; fails when `d` does not divide `self`
    /// as polynomials with rational coefficients.
    pub fn exact_div(&self, d: &QPoly) -> Result<QPoly, PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        // both numerators are split into content * primitive part; by Gauss's
        // lemma the quotient of primitive parts is integral when it exists
        let (cn, cd) = (self.num.content(), d.num.content());
        let pn = self.num.div_integer_exact(&cn)?;
        let pd = d.num.div_integer_exact(&cd)?;
        let q = pn.exact_div(&pd)?;
        QPoly::new(q.scale(&(&cn * &d.den)), &self.den * &cd)
    }
}

impl From<MultiPoly> for QPoly {
    fn from(num: MultiPoly) -> Self {
        QPoly {
            num,
            den: BigInt::one(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(e: &str) -> MultiPoly {
        MultiPoly::parse(e, &["x", "y"]).unwrap()
    }

    #[test]
    fn division_over_the_rationals() {
        let f = QPoly::from(p("3*x^2 - 3*y^2"));
        let g = QPoly::from(p("2*x + 2*y"));
        let q = f.exact_div(&g).unwrap();
        assert_eq!(q.numer(), &p("3*x - 3*y"));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(&q.mul(&g), &f);
    }

    #[test]
    fn normalizes_sign_and_common_factors() {
        let q = QPoly::new(p("4*x - 6"), BigInt::from(-8)).unwrap();
        assert_eq!(q.numer(), &p("-2*x + 3"));
        assert_eq!(q.denom(), &BigInt::from(4));
        let z = q.sub(&q);
        assert!(z.is_zero());
        assert_eq!(z.denom(), &BigInt::one());
    }

    #[test]
    fn inexact_division_reported() {
        let f = QPoly::from(p("x^2 + y"));
        let g = QPoly::from(p("x + y"));
        assert_eq!(f.exact_div(&g), Err(PolyError::InexactDivision));
    }
}
