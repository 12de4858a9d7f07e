use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use dashu_base::{Abs, SquareRoot};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_complex::Complex64;

use super::Scalar;

type Real = FBig<HalfEven, 2>;

fn real(x: f64, bits: usize) -> Real {
    Real::try_from(x)
        .expect("finite f64")
        .with_precision(bits)
        .value()
}

/// Complex number with binary mantissas of a fixed, configurable length.
#[derive(Clone, PartialEq)]
pub struct MpComplex {
    re: Real,
    im: Real,
    bits: usize,
}

impl MpComplex {
    pub fn new(z: Complex64, bits: u32) -> Self {
        let bits = bits.max(16) as usize;
        MpComplex {
            re: real(z.re, bits),
            im: real(z.im, bits),
            bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits as u32
    }

    fn from_parts(re: Real, im: Real, bits: usize) -> Self {
        MpComplex {
            re: re.with_precision(bits).value(),
            im: im.with_precision(bits).value(),
            bits,
        }
    }

    fn norm_sqr_real(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Debug for MpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_c64();
        write!(f, "MpComplex[{}]({}{:+}i)", self.bits, z.re, z.im)
    }
}

impl Add for MpComplex {
    type Output = MpComplex;
    fn add(self, rhs: MpComplex) -> MpComplex {
        let bits = self.bits.max(rhs.bits);
        MpComplex::from_parts(self.re + rhs.re, self.im + rhs.im, bits)
    }
}

impl Sub for MpComplex {
    type Output = MpComplex;
    fn sub(self, rhs: MpComplex) -> MpComplex {
        let bits = self.bits.max(rhs.bits);
        MpComplex::from_parts(self.re - rhs.re, self.im - rhs.im, bits)
    }
}

impl Mul for MpComplex {
    type Output = MpComplex;
    fn mul(self, rhs: MpComplex) -> MpComplex {
        let bits = self.bits.max(rhs.bits);
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        MpComplex::from_parts(re, im, bits)
    }
}

impl Div for MpComplex {
    type Output = MpComplex;
    fn div(self, rhs: MpComplex) -> MpComplex {
        let bits = self.bits.max(rhs.bits);
        let den = rhs.norm_sqr_real();
        let re = (&self.re * &rhs.re + &self.im * &rhs.im) / &den;
        let im = (&self.im * &rhs.re - &self.re * &rhs.im) / &den;
        MpComplex::from_parts(re, im, bits)
    }
}

impl Neg for MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex {
            re: -self.re,
            im: -self.im,
            bits: self.bits,
        }
    }
}

impl Scalar for MpComplex {
    type Ctx = u32;

    fn ctx(&self) -> u32 {
        self.bits as u32
    }

    fn from_c64(z: Complex64, bits: u32) -> Self {
        MpComplex::new(z, bits)
    }

    fn from_bigint(c: &BigInt, bits: u32) -> Self {
        let bits = bits.max(16) as usize;
        let i = IBig::from_str(&c.to_string()).expect("decimal integer");
        MpComplex {
            re: Real::from(i).with_precision(bits).value(),
            im: real(0.0, bits),
            bits,
        }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().value(), self.im.to_f64().value())
    }

    fn epsilon(bits: u32) -> f64 {
        2f64.powi(-(bits.max(16) as i32))
    }

    fn sqrt(&self) -> Self {
        if self.re.repr().is_zero() && self.im.repr().is_zero() {
            return self.clone();
        }
        let bits = self.bits;
        let two = real(2.0, bits);
        let r = self.norm_sqr_real().sqrt();
        let re_nonneg = self.re >= real(0.0, bits);
        if re_nonneg {
            let t = ((&r + &self.re) / &two).sqrt();
            let im = &self.im / (&two * &t);
            MpComplex::from_parts(t, im, bits)
        } else {
            let t = ((&r - &self.re) / &two).sqrt();
            let re = self.im.clone().abs() / (&two * &t);
            let im = if self.im >= real(0.0, bits) { t } else { -t };
            MpComplex::from_parts(re, im, bits)
        }
    }

    fn is_exact_zero(&self) -> bool {
        self.re.repr().is_zero() && self.im.repr().is_zero()
    }

    fn norm(&self) -> f64 {
        let z = self.to_c64();
        z.re.hypot(z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_matches_double_precision() {
        let a = Complex64::new(0.3, -1.7);
        let b = Complex64::new(-2.25, 0.5);
        let (ma, mb) = (MpComplex::new(a, 200), MpComplex::new(b, 200));
        let close = |x: Complex64, y: Complex64| (x - y).norm() < 1e-14;
        assert!(close((ma.clone() + mb.clone()).to_c64(), a + b));
        assert!(close((ma.clone() - mb.clone()).to_c64(), a - b));
        assert!(close((ma.clone() * mb.clone()).to_c64(), a * b));
        assert!(close((ma.clone() / mb.clone()).to_c64(), a / b));
        assert!(close(ma.sqrt().to_c64(), a.sqrt()));
        assert!(close(mb.sqrt().to_c64(), b.sqrt()));
        assert!(close((-ma).to_c64(), -a));
    }

    #[test]
    fn carries_more_digits_than_f64() {
        // (1 + 2^-80) - 1 vanishes in f64 but not at 200 bits
        let tiny = 2f64.powi(-80);
        let one = MpComplex::new(Complex64::new(1.0, 0.0), 200);
        let x = one.clone() + MpComplex::new(Complex64::new(tiny, 0.0), 200);
        let d = (x - one).to_c64();
        assert_eq!(d.re, tiny);
    }

    #[test]
    fn sqrt_squares_back() {
        for z in [
            Complex64::new(-4.0, 0.0),
            Complex64::new(-1.0, -1e-30),
            Complex64::new(0.0, 2.0),
            Complex64::new(3.0, -4.0),
        ] {
            let m = MpComplex::new(z, 256);
            let s = m.sqrt();
            let back = (s.clone() * s.clone() - m).norm();
            assert!(back < 1e-60, "{z}: {back}");
            assert!(s.to_c64().re >= 0.0);
        }
    }

    #[test]
    fn big_integers_convert_exactly() {
        let c: BigInt = "123456789012345678901234567890".parse().unwrap();
        let m = MpComplex::from_bigint(&c, 256);
        let back = m.to_c64().re;
        assert!((back - 1.2345678901234568e29).abs() / back < 1e-15);
    }
}
