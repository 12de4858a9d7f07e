//! Complex scalars at double or extended precision, dense univariate
//! polynomials over them, and an all-roots solver.

mod mp;
mod roots;
mod upoly;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

pub use mp::MpComplex;
pub use roots::{aberth, aberth_with, initial_guesses, RootError, RootOptions};
pub use upoly::UPoly;

/// Working precision for numeric kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Precision {
    #[default]
    Double,
    /// Binary floating point with the given mantissa length.
    Extended { bits: u32 },
}

impl Precision {
    pub fn bits(&self) -> u32 {
        match self {
            Precision::Double => 53,
            Precision::Extended { bits } => *bits,
        }
    }
}

/// A complex field element at some fixed working precision.
///
/// `Ctx` carries whatever is needed to create new constants at the same
/// precision (nothing for `Complex64`, the mantissa length for [`MpComplex`]).
pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Ctx: Copy + Default + Debug + PartialEq + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn from_c64(z: Complex64, ctx: Self::Ctx) -> Self;
    fn from_bigint(c: &BigInt, ctx: Self::Ctx) -> Self;
    fn to_c64(&self) -> Complex64;
    /// Unit roundoff of the working precision.
    fn epsilon(ctx: Self::Ctx) -> f64;
    fn sqrt(&self) -> Self;
    fn is_exact_zero(&self) -> bool;

    fn zero(ctx: Self::Ctx) -> Self {
        Self::from_c64(Complex64::new(0.0, 0.0), ctx)
    }

    fn one(ctx: Self::Ctx) -> Self {
        Self::from_c64(Complex64::new(1.0, 0.0), ctx)
    }

    fn from_f64(x: f64, ctx: Self::Ctx) -> Self {
        Self::from_c64(Complex64::new(x, 0.0), ctx)
    }

    fn from_i64(n: i64, ctx: Self::Ctx) -> Self {
        Self::from_bigint(&BigInt::from(n), ctx)
    }

    fn norm(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Same precision as `self`.
    fn lift(&self, z: Complex64) -> Self {
        Self::from_c64(z, self.ctx())
    }

    fn powi(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ctx());
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Complex64 {
    type Ctx = ();

    fn ctx(&self) {}

    fn from_c64(z: Complex64, _: ()) -> Self {
        z
    }

    fn from_bigint(c: &BigInt, _: ()) -> Self {
        Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn epsilon(_: ()) -> f64 {
        f64::EPSILON / 2.0
    }

    fn sqrt(&self) -> Self {
        Complex64::sqrt(*self)
    }

    fn is_exact_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

/// Runs `f` with the scalar type selected by `precision`, converting the
/// result back to double precision.
pub fn with_precision<R>(
    precision: Precision,
    f64_path: impl FnOnce() -> R,
    mp_path: impl FnOnce(u32) -> R,
) -> R {
    match precision {
        Precision::Double => f64_path(),
        Precision::Extended { bits } => mp_path(bits),
    }
}

/// Parses "re+imi" style complex literals: `0.5-0.25i`, `2`, `-i`, `3i`, `1e-3+2e-1i`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i').or_else(|| s.strip_suffix('j')) else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not part of an exponent and not leading
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    let imag = |t: &str| -> Option<f64> {
        match t {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => t.parse().ok(),
        }
    };
    match split {
        Some(i) => {
            let re = body[..i].parse::<f64>().ok()?;
            let im = imag(&body[i..])?;
            Some(Complex64::new(re, im))
        }
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

pub fn format_complex(z: Complex64) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_complex_literals() {
        assert_eq!(parse_complex("0.5-0.25i"), Some(Complex64::new(0.5, -0.25)));
        assert_eq!(parse_complex("2"), Some(Complex64::new(2.0, 0.0)));
        assert_eq!(parse_complex("-i"), Some(Complex64::new(0.0, -1.0)));
        assert_eq!(parse_complex("3i"), Some(Complex64::new(0.0, 3.0)));
        assert_eq!(parse_complex("1e-3+2e-1i"), Some(Complex64::new(1e-3, 0.2)));
        assert_eq!(parse_complex("-1e-3-2e+1i"), Some(Complex64::new(-1e-3, -20.0)));
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex(""), None);
    }

    #[test]
    fn complex_format_round_trips() {
        for z in [Complex64::new(0.6, 0.1), Complex64::new(-2.0, -0.5), Complex64::new(1e-9, 0.0)] {
            assert_eq!(parse_complex(&format_complex(z)), Some(z));
        }
    }
}
