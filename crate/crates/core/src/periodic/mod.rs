//! Periodic points of the normal form `Z(z) = z (h' + z) / (1 + h z)`.
//!
//! The n-fold map is composed exactly as a dense rational function, the
//! periodic points are the roots of `num(z) - z den(z)`, and each root is
//! polished by Newton's method on the iterated map itself. Near the
//! integrable limit `h h' = 1` the roots cluster around the fossil points and
//! the computation moves to extended precision.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maps::{normal_form, normal_form_derivative, MapError};
use crate::numeric::{aberth_with, initial_guesses, MpComplex, Precision, RootError, RootOptions, Scalar, UPoly};

/// Largest supported composition depth.
pub const N_MAX: usize = 10;
/// Bound on `|Z^(n)(z) - z|` for a reported point.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
/// Two roots are the same point if closer than this times `1 + |z|`; in
/// extended precision the bound shrinks with the square root of the unit
/// roundoff.
pub const DEDUP_TOLERANCE: f64 = 1e-7;
/// Half-width of the neutral band around `|multiplier| = 1`.
pub const CLASS_TOLERANCE: f64 = 1e-9;
/// Below this `|h h' - 1|` the root finder starts in extended precision.
pub const EXTENDED_THRESHOLD: f64 = 1e-3;
pub const START_BITS: u32 = 256;
pub const MAX_BITS: u32 = 2048;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PeriodicError {
    #[error("period {0} outside 1..={N_MAX}")]
    Period(usize),
    #[error("coefficients of Z^({n}) overflow double precision")]
    Overflow { n: usize },
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error("{unresolved} of {total} roots of Z^({n}) = z not resolved at {bits} bits")]
    Unresolved {
        n: usize,
        total: usize,
        unresolved: usize,
        bits: u32,
    },
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Attracting,
    Repelling,
    Neutral,
}

impl Class {
    pub fn of(multiplier: Complex64) -> Class {
        let m = multiplier.norm();
        if m > 1.0 + CLASS_TOLERANCE {
            Class::Repelling
        } else if m < 1.0 - CLASS_TOLERANCE {
            Class::Attracting
        } else {
            Class::Neutral
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Attracting => "attracting",
            Class::Repelling => "repelling",
            Class::Neutral => "neutral",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPoint {
    pub z: Complex64,
    pub period: usize,
    pub multiplier: Complex64,
    pub class: Class,
}

/// `num / den` with dense coefficients. `degree_bound` is `2^n` for the n-fold
/// normal form, reached unless the map is integrable.
#[derive(Debug, Clone)]
pub struct RationalFunc1D<S: Scalar> {
    pub num: UPoly<S>,
    pub den: UPoly<S>,
    pub degree_bound: usize,
}

impl<S: Scalar> RationalFunc1D<S> {
    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    pub fn eval(&self, z: &S) -> S {
        self.num.eval(z) / self.den.eval(z)
    }

    /// `num(z) - z den(z)`, whose roots are the finite fixed points.
    pub fn fixed_point_polynomial(&self) -> UPoly<S> {
        self.num.sub(&self.den.shift())
    }
}

/// `h h' = 1` up to rounding of the inputs.
pub fn is_integrable(h: Complex64, hp: Complex64) -> bool {
    (h * hp - 1.0).norm() <= 64.0 * f64::EPSILON
}

pub fn compose_n(h: Complex64, hp: Complex64, n: usize) -> Result<RationalFunc1D<Complex64>, PeriodicError> {
    compose_n_with(h, hp, n, ())
}

/// `Z^(n) = N (h' D + N) / (D (D + h N))` with `N / D = Z^(n-1)`.
///
/// When `h h' = 1` the factor `D + h N = h (h' D + N)` is cancelled at every
/// step, leaving `Z^(n) = z / h^n`.
pub fn compose_n_with<S: Scalar>(
    h: Complex64,
    hp: Complex64,
    n: usize,
    ctx: S::Ctx,
) -> Result<RationalFunc1D<S>, PeriodicError> {
    if n == 0 || n > N_MAX {
        return Err(PeriodicError::Period(n));
    }
    if h.norm() == 0.0 {
        return Err(PeriodicError::Degenerate("h = 0".into()));
    }
    let (hs, hps) = (S::from_c64(h, ctx), S::from_c64(hp, ctx));
    let mut num = UPoly::monomial(S::one(ctx), 1);
    let mut den = UPoly::constant(S::one(ctx));
    let integrable = is_integrable(h, hp);
    for _ in 0..n {
        if integrable {
            den = den.scale(&hs);
            continue;
        }
        let left = den.scale(&hps).add(&num);
        let right = den.add(&num.scale(&hs));
        num = num.mul(&left);
        den = den.mul(&right);
        if !(num.max_norm().is_finite() && den.max_norm().is_finite()) {
            return Err(PeriodicError::Overflow { n });
        }
    }
    Ok(RationalFunc1D {
        num,
        den,
        degree_bound: 1 << n,
    })
}

/// `Z^(m)(z)` and its derivative by iterating the map.
pub fn iterate_with_derivative<S: Scalar>(h: Complex64, hp: Complex64, z: &S, m: usize) -> Result<(S, S), MapError> {
    let mut w = z.clone();
    let mut d = S::one(z.ctx());
    for _ in 0..m {
        d = d * normal_form_derivative(h, hp, w.clone())?;
        w = normal_form(h, hp, w)?;
    }
    Ok((w, d))
}

fn residual<S: Scalar>(h: Complex64, hp: Complex64, z: &S, m: usize) -> f64 {
    match iterate_with_derivative(h, hp, z, m) {
        Ok((w, _)) => (w - z.clone()).norm(),
        Err(_) => f64::INFINITY,
    }
}

fn divisors(n: usize) -> impl Iterator<Item = usize> {
    (1..=n).filter(move |m| n % m == 0)
}

/// `#_n = 2^n - Σ #_ν - 2` over the divisors `1 < ν < n`, with `#_1 = 2`
/// fixed points in the finite plane.
pub fn count_formula(n: usize) -> u64 {
    if n <= 1 {
        return 2;
    }
    let lower: u64 = divisors(n).filter(|&m| m > 1 && m < n).map(count_formula).sum();
    (1u64 << n) - lower - 2
}

/// The closed form `2^n - Σ 2^ν + 2 (r - 1)` over the `r` divisors `1 < ν < n`.
/// It agrees with [`count_formula`] for `n < 8`.
pub fn count_formula_closed(n: usize) -> i64 {
    if n <= 1 {
        return 2;
    }
    let nu: Vec<usize> = divisors(n).filter(|&m| m > 1 && m < n).collect();
    let r = nu.len() as i64;
    (1i64 << n) - nu.iter().map(|&v| 1i64 << v).sum::<i64>() + 2 * (r - 1)
}

/// Points of exact period `n` together with what the solver needed.
#[derive(Debug, Clone)]
pub struct PeriodicReport {
    pub points: Vec<PeriodicPoint>,
    /// Mantissa bits of the pass that succeeded (53 for double precision).
    pub bits: u32,
    /// Finite roots of `Z^(n)(z) = z`, all periods.
    pub roots: usize,
}

pub fn periodic_points(h: Complex64, hp: Complex64, n: usize) -> Result<Vec<PeriodicPoint>, PeriodicError> {
    periodic_report(h, hp, n).map(|r| r.points)
}

/// Chooses the precision: double unless `|h h' - 1| < EXTENDED_THRESHOLD`,
/// escalating from [`START_BITS`] to [`MAX_BITS`] by doubling while some root
/// fails its residual or two roots collapse onto each other.
pub fn periodic_report(h: Complex64, hp: Complex64, n: usize) -> Result<PeriodicReport, PeriodicError> {
    let near = (h * hp - 1.0).norm() < EXTENDED_THRESHOLD;
    if !near {
        match periodic_report_with(h, hp, n, Precision::Double) {
            Ok(r) => return Ok(r),
            Err(PeriodicError::Unresolved { .. } | PeriodicError::Roots(_) | PeriodicError::Overflow { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let mut bits = START_BITS;
    loop {
        match periodic_report_with(h, hp, n, Precision::Extended { bits }) {
            Err(PeriodicError::Unresolved { .. } | PeriodicError::Roots(_)) if bits < MAX_BITS => bits *= 2,
            other => return other,
        }
    }
}

pub fn periodic_report_with(
    h: Complex64,
    hp: Complex64,
    n: usize,
    precision: Precision,
) -> Result<PeriodicReport, PeriodicError> {
    match precision {
        Precision::Double => solve::<Complex64>(h, hp, n, (), 53, None),
        Precision::Extended { bits } => {
            // double-precision roots are usually good enough as Newton seeds
            if let Ok(seeds) = find_roots::<Complex64>(h, hp, n, ()) {
                let seeds = seeds.into_iter().map(|z| MpComplex::new(z, bits)).collect();
                if let Ok(r) = solve::<MpComplex>(h, hp, n, bits, bits, Some(seeds)) {
                    return Ok(r);
                }
            }
            solve::<MpComplex>(h, hp, n, bits, bits, None)
        }
    }
}

/// Newton correction for `P = num - z den` of `Z^(n)`, evaluated along the
/// orbit instead of from dense coefficients. With `w_k = Z^(k)(z)` and
/// `D_k = D_{k-1}² (1 + h w_{k-1})`,
/// `P'/P = D_n'/D_n + (w_n' - 1)/(w_n - z)`.
/// The flag is set once `w_n - z` is within the rounding error of the orbit.
pub fn fixed_point_newton<S: Scalar>(h: Complex64, hp: Complex64, n: usize, z: &S) -> (S, bool) {
    let ctx = z.ctx();
    let (hs, hps) = (z.lift(h), z.lift(hp));
    let one = S::one(ctx);
    let two = S::from_f64(2.0, ctx);
    let mut w = z.clone();
    let mut dw = one.clone();
    let mut log_d = S::zero(ctx);
    let mut wmax = z.norm();
    for _ in 0..n {
        let t = one.clone() + hs.clone() * w.clone();
        if t.is_exact_zero() {
            // exactly on a pole of the orbit; nudge off it
            return (z.lift(Complex64::new(1e-3 * (1.0 + z.norm()), 0.0)), false);
        }
        log_d = two.clone() * log_d + hs.clone() * dw.clone() / t.clone();
        let dz = (hps.clone() + two.clone() * w.clone() + hs.clone() * w.clone() * w.clone()) / (t.clone() * t.clone());
        dw = dw * dz;
        w = w.clone() * (hps.clone() + w.clone()) / t;
        wmax = wmax.max(w.norm());
    }
    let g = w - z.clone();
    let small = g.norm() <= 8.0 * n as f64 * S::epsilon(ctx) * (1.0 + dw.norm()) * (1.0 + wmax);
    let den = log_d * g.clone() + dw - one;
    if den.is_exact_zero() {
        return (g, small);
    }
    (g / den, small)
}

/// Newton-polygon guesses from the dense composition when it fits in double
/// precision, a circle otherwise.
fn start_guesses(h: Complex64, hp: Complex64, n: usize) -> Vec<Complex64> {
    let degree = 1usize << n;
    if let Ok(rf) = compose_n(h, hp, n) {
        let p = rf.fixed_point_polynomial();
        if p.degree() == degree {
            let mags: Vec<f64> = p.coeffs.iter().map(|c| c.norm()).collect();
            let g = initial_guesses(&mags);
            if g.len() == degree {
                return g;
            }
        }
    }
    let r = 1.0 + hp.norm() + 1.0 / h.norm();
    (0..degree)
        .map(|k| Complex64::from_polar(r, 0.4 + std::f64::consts::TAU * k as f64 / degree as f64))
        .collect()
}

/// All finite roots of `Z^(n)(z) = z` by Aberth iteration on the orbit.
fn find_roots<S: Scalar>(h: Complex64, hp: Complex64, n: usize, ctx: S::Ctx) -> Result<Vec<S>, PeriodicError> {
    if n == 0 || n > N_MAX {
        return Err(PeriodicError::Period(n));
    }
    if h.norm() == 0.0 {
        return Err(PeriodicError::Degenerate("h = 0".into()));
    }
    if is_integrable(h, hp) {
        // Z^(n) = z / h^n: only z = 0, unless h^n = 1
        let hn = h.powu(n as u32);
        if (hn - 1.0).norm() <= 64.0 * f64::EPSILON {
            return Err(PeriodicError::Degenerate("h h' = 1 and h^n = 1: every point is periodic".into()));
        }
        return Ok(vec![S::zero(ctx)]);
    }
    let guesses = start_guesses(h, hp, n).into_iter().map(|g| S::from_c64(g, ctx)).collect();
    Ok(aberth_with(guesses, |z| fixed_point_newton(h, hp, n, z), RootOptions::default())?)
}

fn solve<S: Scalar>(
    h: Complex64,
    hp: Complex64,
    n: usize,
    ctx: S::Ctx,
    bits: u32,
    seeds: Option<Vec<S>>,
) -> Result<PeriodicReport, PeriodicError> {
    let raw = match seeds {
        Some(s) => s,
        None => find_roots(h, hp, n, ctx)?,
    };
    let roots = polish_all(h, hp, n, raw);
    let total = roots.len();
    let shrink = (S::epsilon(ctx) / <Complex64 as Scalar>::epsilon(())).sqrt();
    let dedup = DEDUP_TOLERANCE * shrink;

    let tol = |z: Complex64| RESIDUAL_TOLERANCE * (1.0 + z.norm());
    let mut unresolved = 0;
    let mut kept: Vec<(S, Complex64)> = Vec::new();
    for s in roots {
        let z = s.to_c64();
        if !(residual(h, hp, &s, n) < tol(z)) {
            unresolved += 1;
            continue;
        }
        if kept.iter().any(|(_, k)| (k - z).norm() < dedup * (1.0 + k.norm())) {
            // a simple root found twice means another one was lost
            unresolved += 1;
            continue;
        }
        kept.push((s, z));
    }
    if unresolved > 0 {
        return Err(PeriodicError::Unresolved {
            n,
            total,
            unresolved,
            bits,
        });
    }

    let mut points = Vec::new();
    for (s, z) in kept {
        // points of period n crowd the fixed point z_p as h h' -> 1, so the
        // divisor test tightens with the working precision
        let period = divisors(n)
            .find(|&m| residual(h, hp, &s, m) < shrink * tol(z))
            .unwrap_or(n);
        if period != n {
            continue;
        }
        let (_, d) = iterate_with_derivative(h, hp, &s, n).expect("residual was finite");
        let multiplier = d.to_c64();
        points.push(PeriodicPoint {
            z,
            period,
            multiplier,
            class: Class::of(multiplier),
        });
    }
    points.sort_by(|a, b| a.z.re.total_cmp(&b.z.re).then(a.z.im.total_cmp(&b.z.im)));
    Ok(PeriodicReport {
        points,
        bits,
        roots: total,
    })
}

/// Newton on `Z^(n)(z) - z`. A root stops moving once a step would exceed
/// half the distance to its nearest neighbour, so a cluster never collapses
/// onto one member.
fn polish_all<S: Scalar>(h: Complex64, hp: Complex64, n: usize, roots: Vec<S>) -> Vec<S> {
    let approx: Vec<Complex64> = roots.iter().map(S::to_c64).collect();
    roots
        .into_iter()
        .enumerate()
        .map(|(i, z)| {
            let gap = approx
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, w)| (w - approx[i]).norm())
                .fold(f64::INFINITY, f64::min);
            polish(h, hp, n, z, 0.5 * gap)
        })
        .collect()
}

fn polish<S: Scalar>(h: Complex64, hp: Complex64, n: usize, start: S, radius: f64) -> S {
    let ctx = start.ctx();
    let eps = S::epsilon(ctx);
    let origin = start.to_c64();
    let mut z = start;
    for _ in 0..60 {
        let Ok((w, d)) = iterate_with_derivative(h, hp, &z, n) else { break };
        let g = w - z.clone();
        let dg = d - S::one(ctx);
        if dg.is_exact_zero() {
            break;
        }
        let step = g / dg;
        let next = z.clone() - step.clone();
        if (next.to_c64() - origin).norm() > radius {
            break;
        }
        z = next;
        if step.norm() <= 4.0 * eps * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// Multiplier of the cycle through `z`, the product of one-step derivatives.
pub fn cycle_multiplier(h: Complex64, hp: Complex64, z: Complex64, period: usize) -> Result<Complex64, MapError> {
    iterate_with_derivative(h, hp, &z, period).map(|(_, d)| d)
}

/// `(-1/h, -1, -h, …, -h^(n-2))`; for `n = 1` only `-1/h`.
pub fn fossil_points(h: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = vec![-1.0 / h];
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..n.saturating_sub(1) {
        out.push(-p);
        p *= h;
    }
    out
}

pub fn dist_to_fossil(z: Complex64, fossils: &[Complex64]) -> f64 {
    fossils.iter().map(|f| (z - f).norm()).fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionRow {
    pub delta: f64,
    pub period: usize,
    pub z: Complex64,
    pub multiplier: Complex64,
    pub class: Class,
    pub dist_to_fossil: f64,
}

pub const TRANSITION_CSV_HEADER: &str = "delta,period,re_z,im_z,re_multiplier,im_multiplier,class,dist_to_fossil";

impl TransitionRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{:e},{},{:.17e},{:.17e},{:.17e},{:.17e},{},{:.17e}",
            self.delta,
            self.period,
            self.z.re,
            self.z.im,
            self.multiplier.re,
            self.multiplier.im,
            self.class,
            self.dist_to_fossil
        )
    }
}

/// Period-`n` points at `h' = (1 + δ) / h` for each `δ` of the grid.
pub fn transition_scan(h: Complex64, n: usize, delta_grid: &[f64]) -> Result<Vec<TransitionRow>, PeriodicError> {
    if delta_grid.iter().any(|d| !d.is_finite() || *d < 0.0) {
        return Err(PeriodicError::Degenerate("δ must be finite and nonnegative".into()));
    }
    if delta_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(PeriodicError::Degenerate("δ grid must be strictly decreasing".into()));
    }
    let fossils = fossil_points(h, n);
    let per_delta: Vec<Result<Vec<TransitionRow>, PeriodicError>> = delta_grid
        .par_iter()
        .map(|&delta| {
            let hp = (1.0 + delta) / h;
            let hp = if delta == 0.0 { 1.0 / h } else { hp };
            let pts = periodic_points(h, hp, n)?;
            Ok(pts
                .into_iter()
                .map(|p| TransitionRow {
                    delta,
                    period: p.period,
                    z: p.z,
                    multiplier: p.multiplier,
                    class: p.class,
                    dist_to_fossil: dist_to_fossil(p.z, &fossils),
                })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_delta {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Per-δ aggregate of a scan: number of points, largest distance to the
/// fossil set and largest `|multiplier|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionSummary {
    pub delta: f64,
    pub count: usize,
    pub max_dist: f64,
    pub max_abs_multiplier: f64,
}

pub fn summarize(rows: &[TransitionRow], delta_grid: &[f64]) -> Vec<TransitionSummary> {
    delta_grid
        .iter()
        .map(|&delta| {
            let sel: Vec<&TransitionRow> = rows.iter().filter(|r| r.delta == delta).collect();
            TransitionSummary {
                delta,
                count: sel.len(),
                max_dist: sel.iter().map(|r| r.dist_to_fossil).fold(0.0, f64::max),
                max_abs_multiplier: sel.iter().map(|r| r.multiplier.norm()).fold(0.0, f64::max),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests;
