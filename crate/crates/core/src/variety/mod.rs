//! Invariant varieties of periodic points checked on concrete maps.
//!
//! A condition `γ_n(invariants) = 0` is verified by constructing points whose
//! invariants satisfy it, iterating the map `n` times and measuring how far
//! the orbit lands from its start. Points off the variety serve as negative
//! controls.

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maps::{MapError, MapId};
use crate::numeric::{aberth, MpComplex, RootOptions, Scalar, UPoly};
use crate::poly::{MultiPoly, PolyError};

/// Invariants of a constructed point agree with the target to this (relative).
pub const CONSTRUCTION_TOLERANCE: f64 = 1e-12;
/// A verified point returns to within this distance after `n` steps.
pub const RETURN_TOLERANCE: f64 = 1e-8;
/// Negative controls must stay at least this far from their start.
pub const CONTROL_THRESHOLD: f64 = 1e-3;
/// Free coordinates are drawn from the disk of this radius.
pub const SAMPLE_RADIUS: f64 = 2.0;
/// Samples closer than this to a denominator zero are redrawn.
pub const POLE_MARGIN: f64 = 1e-6;
const MAX_RESAMPLES_PER_POINT: usize = 1000;
/// Mantissa bits for samples that miss the return tolerance in double.
pub const EXTENDED_BITS: u32 = 256;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum VarietyError {
    #[error("period {0} not supported here")]
    Period(usize),
    #[error("root index k = {k} must lie in 1..{n}")]
    RootIndex { k: usize, n: usize },
    #[error("gave up after {0} resamples")]
    Resamples(usize),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `γ_n = 0` for a map, written in the map's invariants only.
#[derive(Debug, Clone)]
pub struct VarietyCondition {
    pub map: String,
    pub period: usize,
    pub gamma: MultiPoly,
    pub description: String,
}

impl VarietyCondition {
    /// `γ` involves only the given invariant symbols, which is what makes the
    /// periodicity condition fully correlated.
    pub fn is_fully_correlated(&self, invariant_symbols: &[&str]) -> bool {
        self.gamma
            .symbols()
            .iter()
            .enumerate()
            .all(|(i, s)| !self.gamma.involves(i) || invariant_symbols.contains(&s.as_str()))
    }

    pub fn mobius(n: usize) -> Self {
        VarietyCondition {
            map: "2d-bc".into(),
            period: n,
            gamma: mobius_gamma(n),
            description: format!("1 + h + ... + h^{} with h = y(1-bx), c = 0", n.saturating_sub(1)),
        }
    }

    pub fn lv(n: usize) -> Result<Self, VarietyError> {
        let expr = match n {
            3 => LV_GAMMA3,
            4 => LV_GAMMA4,
            5 => LV_GAMMA5,
            _ => return Err(VarietyError::Period(n)),
        };
        Ok(VarietyCondition {
            map: "lv3".into(),
            period: n,
            gamma: MultiPoly::parse(expr, &["r", "s"])?,
            description: format!("gamma_{n}(r, s) with r = xyz, s = (1-x)(1-y)(1-z)"),
        })
    }
}

pub const LV_GAMMA3: &str = "r^2 + s^2 - r*s + r + s + 1";
pub const LV_GAMMA4: &str = "3*r*s + s + s^3 - 3*s^2*r + r^3*s + 6*r^2*s - r^3";
pub const LV_GAMMA5: &str = "r^3*s^4 - r^3*s^2 - 6*r^4*s^5 + 10*r^3*s^6 + 3*s^5*r + s^6 + s^5 + 3*r^4*s^4 \
    - 3*r^5*s^3 - 6*r^4*s^3 - r^6*s^3 + 3*r^5*s^4 + s^4 + 21*s^4*r^2 + 6*s^4*r + r^3*s^7 + s^7 \
    + 27*s^5*r^2 - 3*s^6*r - r^3*s^5 + 21*r^2*s^6 - 10*r^3*s^3 - 6*r*s^7 + s^8";

/// `1 + h + ... + h^(n-1)`
pub fn mobius_gamma(n: usize) -> MultiPoly {
    let terms = (0..n.max(1)).map(|k| (vec![k as u32], 1.into()));
    MultiPoly::from_terms(&["h"], terms).expect("one symbol")
}

/// `Γ₂(h, x) = h + 1 + c h x (c h x + b x - 1 - h) / (1 - b x)`
pub fn gamma2_full(h: Complex64, x: Complex64, b: Complex64, c: Complex64) -> Result<Complex64, MapError> {
    let den = 1.0 - b * x;
    if den.norm() < crate::maps::POLE_TOLERANCE {
        return Err(MapError::Pole {
            map: "1d-bc",
            denominator: "1-bx",
        });
    }
    Ok(h + 1.0 + c * h * x * (c * h * x + b * x - 1.0 - h) / den)
}

/// `Γ₂ (1 - b x)` as a polynomial in `h, x, b, c`.
pub fn gamma2_numerator() -> MultiPoly {
    MultiPoly::parse("(h + 1)*(1 - b*x) + c*h*x*(c*h*x + b*x - 1 - h)", &["h", "x", "b", "c"]).expect("valid expression")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarietyReport {
    pub condition: String,
    pub period: usize,
    pub samples: usize,
    pub passes: usize,
    pub resamples: usize,
    pub max_return_residual: f64,
    pub negative_control_min_distance: f64,
    /// Largest drift of the invariants along the verified orbits.
    pub max_invariant_drift: f64,
    /// Verified points that already returned at a proper divisor of the period.
    pub early_returns: usize,
    /// Samples that missed in double and were redone at [`EXTENDED_BITS`].
    pub extended: usize,
    /// Multiplicative order of the invariant on the variety (2-d check only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

impl VarietyReport {
    pub fn all_pass(&self) -> bool {
        self.passes == self.samples && self.negative_control_min_distance > CONTROL_THRESHOLD && self.early_returns == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

fn disk(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm() <= 1.0 {
            return z * SAMPLE_RADIUS;
        }
    }
}

fn dist<S: Scalar>(a: &[S], b: &[S]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.clone() - y.clone()).norm().powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Outcome of following one orbit.
struct Orbit {
    residual: f64,
    drift: f64,
    early: bool,
    extended: bool,
}

/// Iterates `n` times, recording invariant drift and returns at `m < period`.
fn follow<S: Scalar>(map: &MapId, x0: &[S], n: usize, period: usize, target: &[S]) -> Result<Orbit, MapError> {
    let mut x = x0.to_vec();
    let mut drift: f64 = 0.0;
    let mut early = false;
    for m in 1..=n {
        x = map.apply(&x)?;
        let inv = map.invariants_of(&x)?;
        for (a, t) in inv.iter().zip(target) {
            drift = drift.max((a.clone() - t.clone()).norm() / (1.0 + t.norm()));
        }
        if m < period && dist(&x, x0) < RETURN_TOLERANCE {
            early = true;
        }
    }
    Ok(Orbit {
        residual: dist(&x, x0),
        drift,
        early,
        extended: false,
    })
}

/// Samples points on `y (1 - b x) = e^(2πik/n)` and checks that the `c = 0`
/// map brings each back after `n` steps, staying on the variety throughout.
/// Negative controls use `h = e^(2πi(k + 1/2)/n) · 1.1`.
pub fn verify_variety_2d(n: usize, b: Complex64, k: usize, samples: usize, seed: u64) -> Result<VarietyReport, VarietyError> {
    if n < 2 {
        return Err(VarietyError::Period(n));
    }
    if k == 0 || k >= n {
        return Err(VarietyError::RootIndex { k, n });
    }
    let order = n / k.gcd(&n);
    let h = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
    let control_h = Complex64::from_polar(1.1, std::f64::consts::TAU * (k as f64 + 0.5) / n as f64);
    let map = MapId::TwoDimBC { b, c: Complex64::new(0.0, 0.0) };
    let point_on = |rng: &mut ChaCha8Rng, h: Complex64| -> Option<Vec<Complex64>> {
        let x = disk(rng);
        let d = 1.0 - b * x;
        if d.norm() < POLE_MARGIN {
            return None;
        }
        Some(vec![x, h / d])
    };
    let results: Vec<Result<(Orbit, f64, usize), VarietyError>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let mut resamples = 0;
            loop {
                if resamples > MAX_RESAMPLES_PER_POINT {
                    return Err(VarietyError::Resamples(resamples));
                }
                let (Some(p), Some(q)) = (point_on(&mut rng, h), point_on(&mut rng, control_h)) else {
                    resamples += 1;
                    continue;
                };
                let built = map.invariants_of(&p)?[0];
                if (built - h).norm() > CONSTRUCTION_TOLERANCE {
                    resamples += 1;
                    continue;
                }
                let orbit = follow(&map, &p, n, order, &[h]);
                let control = map.iterate(&q, n);
                match (orbit, control) {
                    (Ok(o), Ok(qn)) => return Ok((o, dist(&qn, &q), resamples)),
                    _ => resamples += 1,
                }
            }
        })
        .collect();
    summarize(format!("y(1-bx) = exp(2 pi i {k}/{n})"), n, results, Some(order))
}

/// Samples `(r, s)` on `γ_n = 0` (a random `s`, every root `r`), builds points
/// of 3dLV with `xyz = r`, `(1-x)(1-y)(1-z) = s`, and checks the return after
/// `n` steps. Negative controls are random `(r, s)` with `|γ_n| > 0.1`.
pub fn verify_variety_lv(n: usize, samples: usize, seed: u64) -> Result<VarietyReport, VarietyError> {
    let cond = VarietyCondition::lv(n)?;
    let gamma = cond.gamma.clone();
    let map = MapId::LV3;
    let results: Vec<Result<(Orbit, f64, usize), VarietyError>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let mut resamples = 0;
            loop {
                if resamples > MAX_RESAMPLES_PER_POINT {
                    return Err(VarietyError::Resamples(resamples));
                }
                let s = disk(&mut rng);
                let roots = roots_in_r(&gamma, s);
                if roots.is_empty() {
                    resamples += 1;
                    continue;
                }
                let r = roots[rng.gen_range(0..roots.len())];
                let control = loop {
                    let (cr, cs) = (disk(&mut rng), disk(&mut rng));
                    if gamma.eval_c64(&[cr, cs]).norm() > 0.1 {
                        break lv_point(&mut rng, cr, cs);
                    }
                };
                let x = disk(&mut rng);
                let (Some(p), Some(q)) = (lv_point_at(x, r, s), control) else {
                    resamples += 1;
                    continue;
                };
                let inv = map.invariants_of(&p)?;
                if (inv[0] - r).norm() > CONSTRUCTION_TOLERANCE * (1.0 + r.norm())
                    || (inv[1] - s).norm() > CONSTRUCTION_TOLERANCE * (1.0 + s.norm())
                {
                    resamples += 1;
                    continue;
                }
                match (follow(&map, &p, n, n, &[r, s]), map.iterate(&q, n)) {
                    (Ok(o), Ok(qn)) if o.residual >= RETURN_TOLERANCE => {
                        let o = lv_extended(&map, &gamma, x, r, s, n).map_or(o, |e| Orbit { extended: true, ..e });
                        return Ok((o, dist(&qn, &q), resamples));
                    }
                    (Ok(o), Ok(qn)) => return Ok((o, dist(&qn, &q), resamples)),
                    _ => resamples += 1,
                }
            }
        })
        .collect();
    summarize(format!("gamma_{n}(r, s) = 0"), n, results, None)
}

/// `γ(·, s)` as a polynomial in `r`.
pub fn gamma_in_r<S: Scalar>(gamma: &MultiPoly, s: &S) -> UPoly<S> {
    let ctx = s.ctx();
    let coeffs = gamma
        .to_univariate(0)
        .iter()
        .map(|c| c.eval(&[S::zero(ctx), s.clone()]))
        .collect();
    UPoly::new(coeffs)
}

fn newton<S: Scalar>(p: &UPoly<S>, mut r: S, steps: usize) -> S {
    for _ in 0..steps {
        let (v, d) = p.eval_with_derivative(&r);
        if d.is_exact_zero() {
            break;
        }
        r = r - v / d;
    }
    r
}

/// Roots in `r` of `γ(r, s)` at fixed `s`, polished by Newton.
pub fn roots_in_r(gamma: &MultiPoly, s: Complex64) -> Vec<Complex64> {
    let p = gamma_in_r(gamma, &s);
    if p.degree() == 0 {
        return Vec::new();
    }
    let Ok(roots) = aberth(&p, RootOptions::default()) else { return Vec::new() };
    roots.into_iter().map(|r| newton(&p, r, 5)).collect()
}

/// A point with `xyz = r` and `(1-x)(1-y)(1-z) = s` for the given `x`: `y, z`
/// are the roots of `t² - σ t + r/x` with `σ = 1 + r/x - s/(1-x)`.
pub fn lv_point_at<S: Scalar>(x: S, r: S, s: S) -> Option<Vec<S>> {
    let one = S::one(x.ctx());
    let two = S::from_f64(2.0, x.ctx());
    let four = S::from_f64(4.0, x.ctx());
    if x.norm() < POLE_MARGIN || (one.clone() - x.clone()).norm() < POLE_MARGIN {
        return None;
    }
    let yz = r / x.clone();
    let sigma = one.clone() + yz.clone() - s / (one.clone() - x.clone());
    let disc = (sigma.clone() * sigma.clone() - four * yz.clone()).sqrt();
    if disc.norm() < POLE_MARGIN {
        return None;
    }
    let y = (sigma.clone() + disc.clone()) / two.clone();
    let z = if y.norm() > POLE_MARGIN { yz / y.clone() } else { (sigma - disc) / two };
    let dens = [
        one.clone() - z.clone() + z.clone() * x.clone(),
        one.clone() - x.clone() + x.clone() * y.clone(),
        one - y.clone() + y.clone() * z.clone(),
    ];
    if dens.iter().any(|d| d.norm() < POLE_MARGIN) {
        return None;
    }
    Some(vec![x, y, z])
}

/// [`lv_point_at`] with `x` drawn from the sampling disk.
pub fn lv_point(rng: &mut ChaCha8Rng, r: Complex64, s: Complex64) -> Option<Vec<Complex64>> {
    lv_point_at(disk(rng), r, s)
}

/// Redoes one sample at [`EXTENDED_BITS`]: `r` is re-polished on `γ(·, s)`
/// and the orbit is followed in extended precision.
fn lv_extended(map: &MapId, gamma: &MultiPoly, x: Complex64, r: Complex64, s: Complex64, n: usize) -> Option<Orbit> {
    let lift = |z| MpComplex::new(z, EXTENDED_BITS);
    let s_mp = lift(s);
    let r_mp = newton(&gamma_in_r(gamma, &s_mp), lift(r), 12);
    let p = lv_point_at(lift(x), r_mp.clone(), s_mp.clone())?;
    let orbit = follow(map, &p, n, n, &[r_mp, s_mp]).ok()?;
    Some(orbit)
}

fn summarize(
    condition: String,
    period: usize,
    results: Vec<Result<(Orbit, f64, usize), VarietyError>>,
    order: Option<usize>,
) -> Result<VarietyReport, VarietyError> {
    let mut report = VarietyReport {
        condition,
        period,
        samples: results.len(),
        passes: 0,
        resamples: 0,
        max_return_residual: 0.0,
        negative_control_min_distance: f64::INFINITY,
        max_invariant_drift: 0.0,
        early_returns: 0,
        extended: 0,
        order,
    };
    for r in results {
        let (orbit, control, resamples) = r?;
        report.resamples += resamples;
        report.max_return_residual = report.max_return_residual.max(orbit.residual);
        report.max_invariant_drift = report.max_invariant_drift.max(orbit.drift);
        report.negative_control_min_distance = report.negative_control_min_distance.min(control);
        if orbit.extended {
            report.extended += 1;
        }
        if orbit.early {
            report.early_returns += 1;
        }
        if orbit.residual < RETURN_TOLERANCE {
            report.passes += 1;
        }
    }
    Ok(report)
}
