use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use super::{Scalar, UPoly};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RootError {
    #[error("root finder did not converge: {unconverged} of {degree} roots still moving after {iterations} sweeps")]
    NoConvergence {
        degree: usize,
        unconverged: usize,
        iterations: usize,
    },
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("non-finite coefficient")]
    NonFinite,
}

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    pub max_sweeps: usize,
    /// Relative step size below which a root is considered converged; values
    /// below a few units of roundoff are raised to that floor.
    pub tolerance: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            max_sweeps: 2000,
            tolerance: 0.0,
        }
    }
}

/// Initial radii from the upper convex hull of (k, log|a_k|).
fn newton_polygon_guesses(mags: &[f64]) -> Vec<Complex64> {
    let n = mags.len() - 1;
    let logs: Vec<f64> = mags
        .iter()
        .map(|&m| if m > 0.0 { m.ln() } else { f64::NEG_INFINITY })
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..=n {
        if logs[k] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let (i, j) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop j if it lies on or below the segment i -> k
            let cross = (j as f64 - i as f64) * (logs[k] - logs[i]) - (k as f64 - i as f64) * (logs[j] - logs[i]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut guesses = Vec::with_capacity(n);
    let mut offset = 0.4;
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let count = j - i;
        let r = ((logs[i] - logs[j]) / count as f64).exp();
        for t in 0..count {
            let theta = 2.0 * PI * t as f64 / count as f64 + offset;
            guesses.push(Complex64::from_polar(r, theta));
        }
        offset += 0.7;
    }
    guesses
}

/// Newton correction p(z)/p'(z), evaluated on the reversed polynomial when
/// |z| > 1 to keep intermediate values bounded. The flag reports that the
/// value is already below the rounding error of Horner's scheme.
fn newton_ratio<S: Scalar>(p: &UPoly<S>, rev: &UPoly<S>, z: &S) -> (S, bool) {
    let ctx = z.ctx();
    let floor = |q: &UPoly<S>, v: &S, r: f64| {
        let bound = q.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
        v.norm() <= 4.0 * q.coeffs.len() as f64 * S::epsilon(ctx) * bound
    };
    if z.norm() <= 1.0 {
        let (v, d) = p.eval_with_derivative(z);
        let small = floor(p, &v, z.norm());
        if d.is_exact_zero() {
            return (v, small);
        }
        (v / d, small)
    } else {
        let n = S::from_f64(p.degree() as f64, ctx);
        let w = S::one(ctx) / z.clone();
        let (q, dq) = rev.eval_with_derivative(&w);
        let small = floor(rev, &q, w.norm());
        let den = n * q.clone() - w * dq;
        if den.is_exact_zero() {
            return (q, small);
        }
        (z.clone() * q / den, small)
    }
}

/// All complex roots of `p` by Aberth-Ehrlich simultaneous iteration.
///
/// Roots at zero coming from exactly-zero low-order coefficients are split off
/// and returned exactly.
pub fn aberth<S: Scalar>(p: &UPoly<S>, opts: RootOptions) -> Result<Vec<S>, RootError> {
    let ctx = p.ctx();
    if p.coeffs.iter().all(S::is_exact_zero) {
        return Err(RootError::ZeroPolynomial);
    }
    let mags: Vec<f64> = p.coeffs.iter().map(S::norm).collect();
    if mags.iter().any(|m| !m.is_finite()) {
        return Err(RootError::NonFinite);
    }
    let zeros = p.coeffs.iter().take_while(|c| c.is_exact_zero()).count();
    let core = UPoly::new(p.coeffs[zeros..].to_vec());
    let mut roots: Vec<S> = (0..zeros).map(|_| S::zero(ctx)).collect();
    let n = core.degree();
    if n == 0 {
        return Ok(roots);
    }
    if n == 1 {
        roots.push(-(core.coeffs[0].clone() / core.coeffs[1].clone()));
        return Ok(roots);
    }
    let rev = UPoly::new(core.coeffs.iter().rev().cloned().collect());
    let guesses = newton_polygon_guesses(&mags[zeros..])
        .into_iter()
        .map(|g| S::from_c64(g, ctx))
        .collect();
    roots.extend(aberth_with(guesses, |z| newton_ratio(&core, &rev, z), opts)?);
    Ok(roots)
}

/// Initial guesses for a polynomial with coefficient moduli `mags`
/// (ascending powers): circles whose radii follow the Newton polygon.
pub fn initial_guesses(mags: &[f64]) -> Vec<Complex64> {
    newton_polygon_guesses(mags)
}

/// Aberth-Ehrlich iteration for a function given only through its Newton
/// correction. `newton(z)` returns `p(z)/p'(z)` and whether `p(z)` is already
/// below its evaluation error; `guesses` fixes the number of roots.
pub fn aberth_with<S: Scalar>(
    mut z: Vec<S>,
    newton: impl Fn(&S) -> (S, bool),
    opts: RootOptions,
) -> Result<Vec<S>, RootError> {
    let n = z.len();
    let Some(ctx) = z.first().map(S::ctx) else { return Ok(z) };
    let tol = opts.tolerance.max(8.0 * S::epsilon(ctx));
    let mut done = vec![false; n];
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps && done.iter().any(|d| !d) {
        sweeps += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, small) = newton(&z[i]);
            let mut sum = S::zero(ctx);
            for j in 0..n {
                if j != i {
                    let diff = z[i].clone() - z[j].clone();
                    if !diff.is_exact_zero() {
                        sum = sum + S::one(ctx) / diff;
                    }
                }
            }
            let den = S::one(ctx) - ratio.clone() * sum;
            let step = if den.is_exact_zero() { ratio } else { ratio / den };
            let size = step.norm();
            if !size.is_finite() {
                return Err(RootError::NonFinite);
            }
            z[i] = z[i].clone() - step;
            let scale = z[i].norm().max(f64::MIN_POSITIVE);
            if small || !(size > tol * scale) {
                done[i] = true;
            }
        }
    }
    let unconverged = done.iter().filter(|d| !**d).count();
    if unconverged > 0 {
        return Err(RootError::NoConvergence {
            degree: n,
            unconverged,
            iterations: sweeps,
        });
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::MpComplex;

    fn from_roots(rs: &[Complex64]) -> UPoly<Complex64> {
        let mut p = UPoly::new(vec![Complex64::new(1.0, 0.0)]);
        for r in rs {
            p = p.mul(&UPoly::new(vec![-r, Complex64::new(1.0, 0.0)]));
        }
        p
    }

    fn matched(found: &[Complex64], expected: &[Complex64], tol: f64) -> bool {
        let mut used = vec![false; found.len()];
        expected.iter().all(|e| {
            let best = found
                .iter()
                .enumerate()
                .filter(|(i, _)| !used[*i])
                .min_by(|a, b| (a.1 - e).norm().total_cmp(&(b.1 - e).norm()));
            match best {
                Some((i, f)) if (f - e).norm() < tol => {
                    used[i] = true;
                    true
                }
                _ => false,
            }
        })
    }

    #[test]
    fn recovers_known_roots() {
        let rs = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-2.0, 0.5),
            Complex64::new(0.3, -0.7),
            Complex64::new(5.0, 5.0),
            Complex64::new(-0.01, 0.0),
        ];
        let found = aberth(&from_roots(&rs), RootOptions::default()).unwrap();
        assert_eq!(found.len(), 5);
        assert!(matched(&found, &rs, 1e-10));
    }

    #[test]
    fn roots_of_unity_degree_64() {
        let mut c = vec![Complex64::new(0.0, 0.0); 65];
        c[0] = Complex64::new(-1.0, 0.0);
        c[64] = Complex64::new(1.0, 0.0);
        let found = aberth(&UPoly::new(c), RootOptions::default()).unwrap();
        assert_eq!(found.len(), 64);
        for z in &found {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.powu(64) - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn exact_zero_roots_split_off() {
        let p = UPoly::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let found = aberth(&p, RootOptions::default()).unwrap();
        assert_eq!(found.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert!(found.iter().any(|z| (z - 1.0).norm() < 1e-14));
    }

    #[test]
    fn extended_precision_separates_tight_pair() {
        // (z - 1)(z - 1 - 1e-20)(z + 2)
        let ctx = 256;
        let lift = |x: f64| MpComplex::from_f64(x, ctx);
        let r2 = lift(1.0) + lift(1e-20);
        let lin = |r: MpComplex| UPoly::new(vec![-r, lift(1.0)]);
        let p = lin(lift(1.0)).mul(&lin(r2)).mul(&lin(lift(-2.0)));
        let found = aberth(&p, RootOptions::default()).unwrap();
        let mut near_one: Vec<MpComplex> = found
            .into_iter()
            .filter(|z| (z.to_c64() - 1.0).norm() < 1e-6)
            .collect();
        assert_eq!(near_one.len(), 2);
        let b = near_one.pop().unwrap();
        let a = near_one.pop().unwrap();
        let gap = (a - b).norm();
        assert!((gap - 1e-20).abs() < 1e-30, "gap {gap}");
    }

    #[test]
    fn zero_polynomial_rejected() {
        let p = UPoly::new(vec![Complex64::new(0.0, 0.0); 3]);
        assert_eq!(aberth(&p, RootOptions::default()), Err(RootError::ZeroPolynomial));
    }
}
