//! Elements `base + ext * p` of the ring `Z[syms][p] / (p^2 - trace*p - constant)`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{MultiPoly, PolyError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExtPoly {
    base: MultiPoly,
    ext: MultiPoly,
    /// p^2 = trace * p + constant
    trace: MultiPoly,
    constant: MultiPoly,
}

impl QuadExtPoly {
    pub fn new(
        base: MultiPoly,
        ext: MultiPoly,
        trace: MultiPoly,
        constant: MultiPoly,
    ) -> Result<Self, PolyError> {
        base.ensure_same_symbols(&ext)?;
        base.ensure_same_symbols(&trace)?;
        base.ensure_same_symbols(&constant)?;
        Ok(QuadExtPoly {
            base,
            ext,
            trace,
            constant,
        })
    }

    /// The element `c` with no `p` component, in the same extension as `self`.
    pub fn lift(&self, c: MultiPoly) -> Self {
        QuadExtPoly {
            ext: MultiPoly::zero(c.symbols()),
            base: c,
            trace: self.trace.clone(),
            constant: self.constant.clone(),
        }
    }

    /// The generator `p` itself.
    pub fn generator(trace: MultiPoly, constant: MultiPoly) -> Result<Self, PolyError> {
        let zero = MultiPoly::zero(trace.symbols());
        let one = MultiPoly::one(trace.symbols());
        Self::new(zero, one, trace, constant)
    }

    pub fn base(&self) -> &MultiPoly {
        &self.base
    }

    pub fn ext(&self) -> &MultiPoly {
        &self.ext
    }

    pub fn trace(&self) -> &MultiPoly {
        &self.trace
    }

    pub fn constant(&self) -> &MultiPoly {
        &self.constant
    }

    pub fn scale(&self, k: &num_bigint::BigInt) -> Self {
        QuadExtPoly {
            base: self.base.scale(k),
            ext: self.ext.scale(k),
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.ext.is_zero()
    }

    fn same_ring(&self, other: &Self) {
        assert!(
            self.trace == other.trace && self.constant == other.constant,
            "elements of different quadratic extensions"
        );
    }

    /// Numeric value with the symbols at `point` and `p` at `p_value`.
    pub fn eval_c64(&self, point: &[Complex64], p_value: Complex64) -> Complex64 {
        self.base.eval_c64(point) + self.ext.eval_c64(point) * p_value
    }
}

impl Add for &QuadExtPoly {
    type Output = QuadExtPoly;
    fn add(self, rhs: &QuadExtPoly) -> QuadExtPoly {
        self.same_ring(rhs);
        QuadExtPoly {
            base: &self.base + &rhs.base,
            ext: &self.ext + &rhs.ext,
            ..self.clone()
        }
    }
}

impl Sub for &QuadExtPoly {
    type Output = QuadExtPoly;
    fn sub(self, rhs: &QuadExtPoly) -> QuadExtPoly {
        self.same_ring(rhs);
        QuadExtPoly {
            base: &self.base - &rhs.base,
            ext: &self.ext - &rhs.ext,
            ..self.clone()
        }
    }
}

impl Mul for &QuadExtPoly {
    type Output = QuadExtPoly;
    /// (x + yp)(z + wp) = xz + yw*constant + (xw + yz + yw*trace) p
    fn mul(self, rhs: &QuadExtPoly) -> QuadExtPoly {
        self.same_ring(rhs);
        let yw = &self.ext * &rhs.ext;
        let base = &(&self.base * &rhs.base) + &(&yw * &self.constant);
        let ext = &(&(&self.base * &rhs.ext) + &(&self.ext * &rhs.base)) + &(&yw * &self.trace);
        QuadExtPoly {
            base,
            ext,
            ..self.clone()
        }
    }
}

impl Neg for &QuadExtPoly {
    type Output = QuadExtPoly;
    fn neg(self) -> QuadExtPoly {
        QuadExtPoly {
            base: -&self.base,
            ext: -&self.ext,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: [&str; 3] = ["r", "s", "v"];

    fn poly(e: &str) -> MultiPoly {
        MultiPoly::parse(e, &S).unwrap()
    }

    fn p() -> QuadExtPoly {
        QuadExtPoly::generator(poly("r - v + 1"), poly("-r")).unwrap()
    }

    #[test]
    fn generator_squares_by_minimal_relation() {
        let sq = &p() * &p();
        assert_eq!(sq.base(), &poly("-r"));
        assert_eq!(sq.ext(), &poly("r - v + 1"));
    }

    #[test]
    fn base_only_elements_act_like_polynomials() {
        let x = p().lift(poly("r*s - 2"));
        let y = p().lift(poly("v^2 + s"));
        assert_eq!((&x * &y).base(), &(&poly("r*s - 2") * &poly("v^2 + s")));
        assert!((&x * &y).ext().is_zero());
        assert_eq!((&x + &y).base(), &poly("r*s - 2 + v^2 + s"));
    }

    #[test]
    fn numeric_root_agrees_with_reduction() {
        let pt = [
            Complex64::new(0.3, 0.1),
            Complex64::new(-1.2, 0.4),
            Complex64::new(2.0, -0.5),
        ];
        let t = pt[0] - pt[2] + 1.0;
        let pv = (t + (t * t - 4.0 * pt[0]).sqrt()) / 2.0;
        let x = &p().lift(poly("r + s")) + &p();
        let y = &p().lift(poly("v")) - &(&p() * &p().lift(poly("s^2")));
        let lhs = (&x * &y).eval_c64(&pt, pv);
        let rhs = x.eval_c64(&pt, pv) * y.eval_c64(&pt, pv);
        assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
    }
}
