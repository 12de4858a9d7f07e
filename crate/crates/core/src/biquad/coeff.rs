use num_bigint::BigInt;
use num_complex::Complex64;

use super::BiquadError;
use crate::poly::{MultiPoly, PolyError, QPoly, QuadExtPoly};

/// Ring operations needed to evaluate the closed forms.
pub trait Coeff: Clone {
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn scaled(&self, k: i64) -> Self;
    fn neg(&self) -> Self;
    fn is_zero_coeff(&self) -> bool;
}

/// Coefficients that also support the exact divisions of the recursion.
pub trait Divisible: Coeff {
    fn divide(&self, d: &Self, level: usize, entry: &'static str) -> Result<Self, BiquadError>;
    fn half(&self) -> Self;
}

impl Coeff for Complex64 {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn scaled(&self, k: i64) -> Self {
        self * k as f64
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_coeff(&self) -> bool {
        *self == Complex64::new(0.0, 0.0)
    }
}

impl Divisible for Complex64 {
    fn divide(&self, d: &Self, level: usize, entry: &'static str) -> Result<Self, BiquadError> {
        if d.is_zero_coeff() {
            return Err(BiquadError::ZeroDivisor { level, entry });
        }
        Ok(self / d)
    }
    fn half(&self) -> Self {
        self * 0.5
    }
}

impl Coeff for MultiPoly {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn scaled(&self, k: i64) -> Self {
        self.scale(&BigInt::from(k))
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
}

impl Coeff for QPoly {
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn scaled(&self, k: i64) -> Self {
        self.scale(&BigInt::from(k))
    }
    fn neg(&self) -> Self {
        QPoly::neg(self)
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
}

impl Divisible for QPoly {
    fn divide(&self, d: &Self, level: usize, entry: &'static str) -> Result<Self, BiquadError> {
        self.exact_div(d).map_err(|e| match e {
            PolyError::InexactDivision => BiquadError::InexactDivision { level, entry },
            PolyError::DivisionByZero => BiquadError::ZeroDivisor { level, entry },
            other => BiquadError::Poly(other),
        })
    }
    fn half(&self) -> Self {
        QPoly::new(self.numer().clone(), self.denom() * 2).expect("nonzero denominator")
    }
}

impl Coeff for QuadExtPoly {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn scaled(&self, k: i64) -> Self {
        self.scale(&BigInt::from(k))
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
}

impl Coeff for BigInt {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn scaled(&self, k: i64) -> Self {
        self * k
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_coeff(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}
