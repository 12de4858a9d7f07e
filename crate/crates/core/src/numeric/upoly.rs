use super::Scalar;

/// Dense univariate polynomial, coefficients in ascending powers.
#[derive(Clone, Debug)]
pub struct UPoly<S: Scalar> {
    pub coeffs: Vec<S>,
}

impl<S: Scalar> UPoly<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        let mut p = UPoly { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * z^k`.
    pub fn monomial(c: S, k: usize) -> Self {
        let ctx = c.ctx();
        let mut coeffs = vec![S::zero(ctx); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// Drops exactly-zero leading coefficients.
    pub fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(S::is_exact_zero) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn ctx(&self) -> S::Ctx {
        self.coeffs.first().map(S::ctx).unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let ctx = self.ctx();
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(|| S::zero(ctx));
                let b = other.coeffs.get(i).cloned().unwrap_or_else(|| S::zero(ctx));
                a + b
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&S::from_f64(-1.0, other.ctx())))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let ctx = self.ctx();
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(vec![S::zero(ctx)]);
        }
        let mut out = vec![S::zero(ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// Multiplies by `z`.
    pub fn shift(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(S::zero(self.ctx()));
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    pub fn eval(&self, z: &S) -> S {
        let mut acc = S::zero(z.ctx());
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    /// Value and first derivative by Horner's scheme.
    pub fn eval_with_derivative(&self, z: &S) -> (S, S) {
        let ctx = z.ctx();
        let mut p = S::zero(ctx);
        let mut dp = S::zero(ctx);
        for c in self.coeffs.iter().rev() {
            dp = dp * z.clone() + p.clone();
            p = p * z.clone() + c.clone();
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        let ctx = self.ctx();
        if self.coeffs.len() <= 1 {
            return Self::new(vec![S::zero(ctx)]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * S::from_f64(k as f64, ctx))
                .collect(),
        )
    }

    /// Largest coefficient modulus, for overflow checks.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(S::norm).fold(0.0, f64::max)
    }
}
