//! Julia sets of the normal form by backward iteration from the fixed point
//! 0, and the uniform approach to `J_∞ = {0, -h', -h h', -h² h', …}` as
//! `ε = h h' - 1 → 0`.
//!
//! The two preimages are written `A(z) = h z + E(z)` and
//! `B(z) = -h' - E(z)` with
//! `E(z) = ½ (h z + h') (√(1 - 4 z ε / (h z + h')²) - 1)` on the principal
//! branch, so that `E → 0` with `ε`.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Extra `-h^k h'` terms taken beyond the sample depth in `dist_to_jinf`.
pub const K_PAD: usize = 64;
/// Above this depth the preimage tree is sampled instead of enumerated.
pub const MAX_ENUMERATION_DEPTH: usize = 14;
/// A point is near the branch cut when `1 - 4 z ε / (h z + h')²` lies within
/// this angle (radians) of the negative real axis.
pub const CUT_ANGLE: f64 = 0.05;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum JuliaError {
    #[error("h z + h' vanishes at z = {0}")]
    Singular(Complex64),
    #[error("no repulsive fixed point at 0: |h'| = {0} must exceed 1")]
    NotRepulsive(f64),
    #[error("|h| = {0} must be below 1")]
    Contracting(f64),
    #[error("ε grid must be nonnegative and strictly decreasing")]
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    A,
    B,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::A => "A",
            Branch::B => "B",
        })
    }
}

/// The inverse of the normal form. `eps` is stored rather than recomputed so
/// that `ε = 0` makes `E` vanish exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseMap {
    pub h: Complex64,
    pub hp: Complex64,
    pub eps: Complex64,
}

/// Result of one inverse step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preimage {
    pub z: Complex64,
    pub e: Complex64,
    /// The square-root argument came close to the cut.
    pub near_cut: bool,
}

impl InverseMap {
    pub fn new(h: Complex64, hp: Complex64) -> Self {
        InverseMap { h, hp, eps: h * hp - 1.0 }
    }

    /// `h' = (1 + ε) / h` with `ε` real.
    pub fn from_eps(h: Complex64, eps: f64) -> Self {
        InverseMap {
            h,
            hp: (1.0 + eps) / h,
            eps: Complex64::new(eps, 0.0),
        }
    }

    /// `E(z)` and whether `z` is near the branch cut.
    pub fn e_term(&self, z: Complex64) -> Result<(Complex64, bool), JuliaError> {
        let s = self.h * z + self.hp;
        if s.norm() == 0.0 {
            return Err(JuliaError::Singular(z));
        }
        if self.eps == Complex64::new(0.0, 0.0) {
            return Ok((Complex64::new(0.0, 0.0), false));
        }
        let arg = 1.0 - 4.0 * z * self.eps / (s * s);
        let e = 0.5 * s * (arg.sqrt() - 1.0);
        let near_cut = arg.re < 0.0 && arg.im.abs() <= CUT_ANGLE.tan() * -arg.re;
        Ok((e, near_cut))
    }

    pub fn step(&self, z: Complex64, branch: Branch) -> Result<Preimage, JuliaError> {
        let (e, near_cut) = self.e_term(z)?;
        let w = match branch {
            Branch::A => self.h * z + e,
            Branch::B => -self.hp - e,
        };
        Ok(Preimage { z: w, e, near_cut })
    }

    /// `R_ε = (√2 + 1)/|h| · √|ε| (√|ε| + √|ε + 1|)`
    pub fn r_eps(&self) -> f64 {
        r_eps(self.h, self.eps)
    }

    /// `{0} ∪ {-h^k h' : k ≤ k_max}`, computed by repeated multiplication.
    pub fn jinf_points(&self, k_max: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(k_max + 2);
        out.push(Complex64::new(0.0, 0.0));
        let mut p = -self.hp;
        for _ in 0..=k_max {
            out.push(p);
            p *= self.h;
        }
        out
    }
}

pub fn inverse_step(z: Complex64, h: Complex64, hp: Complex64, branch: Branch) -> Result<Complex64, JuliaError> {
    InverseMap::new(h, hp).step(z, branch).map(|p| p.z)
}

pub fn r_eps(h: Complex64, eps: Complex64) -> f64 {
    let a = eps.norm();
    (2f64.sqrt() + 1.0) / h.norm() * a.sqrt() * (a.sqrt() + (eps + 1.0).norm().sqrt())
}

/// `J_n = (0, -1/h, -1, -h, …, -h^(n-2))` and its continuation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSet {
    pub h: Complex64,
}

impl LimitSet {
    pub fn points(&self) -> impl Iterator<Item = Complex64> {
        let h = self.h;
        std::iter::once(Complex64::new(0.0, 0.0)).chain(std::iter::successors(Some(-1.0 / h), move |p| Some(p * h)))
    }

    /// The first `n + 1` points, `J_n`.
    pub fn j_n(&self, n: usize) -> Vec<Complex64> {
        self.points().take(n + 1).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JuliaSample {
    pub z: Complex64,
    pub depth: usize,
    /// Branches in the order they were applied to 0.
    pub branch_word: String,
    pub dist_to_jinf: f64,
    /// Some step of the orbit came close to the branch cut.
    pub near_cut: bool,
    /// The point one step earlier in the backward orbit.
    pub parent: Complex64,
}

pub fn dist_to_jinf(z: Complex64, jinf: &[Complex64]) -> f64 {
    jinf.iter().map(|p| (z - p).norm()).fold(f64::INFINITY, f64::min)
}

/// Applies `word` to 0.
pub fn backward_orbit(map: &InverseMap, word: &[Branch]) -> Result<JuliaSample, JuliaError> {
    let mut z = Complex64::new(0.0, 0.0);
    let mut parent = z;
    let mut near_cut = false;
    for &b in word {
        let p = map.step(z, b)?;
        near_cut |= p.near_cut;
        parent = z;
        z = p.z;
    }
    let jinf = map.jinf_points(word.len() + K_PAD);
    Ok(JuliaSample {
        z,
        depth: word.len(),
        branch_word: word.iter().map(Branch::to_string).collect(),
        dist_to_jinf: dist_to_jinf(z, &jinf),
        near_cut,
        parent,
    })
}

fn check_repulsive(hp: Complex64) -> Result<(), JuliaError> {
    if hp.norm() <= 1.0 {
        return Err(JuliaError::NotRepulsive(hp.norm()));
    }
    Ok(())
}

fn random_word(seed: u64, index: u64, depth: usize) -> Vec<Branch> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..depth)
        .map(|_| if rng.gen::<bool>() { Branch::A } else { Branch::B })
        .collect()
}

/// `count` random backward orbits of length `depth` from 0, choosing each
/// branch with probability ½. Sample `i` draws from stream `i` of the seeded
/// generator, so the result does not depend on scheduling.
pub fn sample_julia(h: Complex64, hp: Complex64, depth: usize, count: usize, seed: u64) -> Result<Vec<JuliaSample>, JuliaError> {
    sample_with(&InverseMap::new(h, hp), depth, count, seed)
}

pub fn sample_with(map: &InverseMap, depth: usize, count: usize, seed: u64) -> Result<Vec<JuliaSample>, JuliaError> {
    check_repulsive(map.hp)?;
    (0..count as u64)
        .into_par_iter()
        .map(|i| backward_orbit(map, &random_word(seed, i, depth)))
        .collect()
}

/// All `2^depth` preimages of 0 at the given depth, in binary word order.
pub fn enumerate_julia(map: &InverseMap, depth: usize) -> Result<Vec<JuliaSample>, JuliaError> {
    check_repulsive(map.hp)?;
    (0..1u64 << depth)
        .into_par_iter()
        .map(|bits| {
            let word: Vec<Branch> = (0..depth)
                .map(|k| if bits >> (depth - 1 - k) & 1 == 0 { Branch::A } else { Branch::B })
                .collect();
            backward_orbit(map, &word)
        })
        .collect()
}

/// Every point of the preimage tree of 0 down to `depth`, root included:
/// `2^(depth+1) - 1` entries, counted with multiplicity.
pub fn preimage_tree(map: &InverseMap, depth: usize) -> Result<Vec<Complex64>, JuliaError> {
    check_repulsive(map.hp)?;
    let mut level = vec![Complex64::new(0.0, 0.0)];
    let mut all = level.clone();
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        for &z in &level {
            next.push(map.step(z, Branch::A)?.z);
            next.push(map.step(z, Branch::B)?.z);
        }
        all.extend_from_slice(&next);
        level = next;
    }
    Ok(all)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub epsilon: f64,
    pub depth: usize,
    pub count: usize,
    pub max_dist: f64,
    pub bound: f64,
    pub ratio: f64,
    pub excluded_branch_crossings: usize,
}

pub const CONVERGENCE_CSV_HEADER: &str = "epsilon,depth,count,max_dist,bound,ratio,excluded_branch_crossings";

impl ConvergenceRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{:e},{},{},{:.17e},{:.17e},{:.17e},{}",
            self.epsilon, self.depth, self.count, self.max_dist, self.bound, self.ratio, self.excluded_branch_crossings
        )
    }

    /// The sampled distances respect `R_ε / (1 - |h|)`.
    pub fn bound_holds(&self) -> bool {
        self.max_dist <= self.bound
    }
}

/// For each `ε`, the largest distance to `J_∞` over backward orbits of length
/// `depth`, against `R_ε / (1 - |h|)`. Orbits near the branch cut are counted
/// and left out. Up to depth [`MAX_ENUMERATION_DEPTH`] a `count` of at least
/// `2^depth` enumerates the whole tree; otherwise `count` words are sampled.
pub fn convergence_report(
    h: Complex64,
    eps_grid: &[f64],
    depth: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<ConvergenceRow>, JuliaError> {
    if h.norm() >= 1.0 {
        return Err(JuliaError::Contracting(h.norm()));
    }
    if eps_grid.iter().any(|e| !e.is_finite() || *e < 0.0) || eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(JuliaError::Grid);
    }
    eps_grid
        .iter()
        .map(|&eps| {
            let map = InverseMap::from_eps(h, eps);
            let samples = if depth <= MAX_ENUMERATION_DEPTH && count >= 1 << depth {
                enumerate_julia(&map, depth)?
            } else {
                sample_with(&map, depth, count, seed)?
            };
            let excluded = samples.iter().filter(|s| s.near_cut).count();
            let max_dist = samples
                .iter()
                .filter(|s| !s.near_cut)
                .map(|s| s.dist_to_jinf)
                .fold(0.0, f64::max);
            let bound = map.r_eps() / (1.0 - h.norm());
            Ok(ConvergenceRow {
                epsilon: eps,
                depth,
                count: samples.len(),
                max_dist,
                bound,
                ratio: if max_dist == 0.0 { 0.0 } else { max_dist / bound },
                excluded_branch_crossings: excluded,
            })
        })
        .collect()
}

/// Least-squares slope of `log max_dist` against `log ε` over rows with
/// `ε > 0` and a positive distance.
pub fn fit_slope(rows: &[ConvergenceRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.epsilon > 0.0 && r.max_dist > 0.0)
        .map(|r| (r.epsilon.ln(), r.max_dist.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

/// Outcome of checking `|A^s(B W) + h^s h'|` on random backward-orbit points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub s: usize,
    pub trials: usize,
    pub max_lhs: f64,
    /// `(1 - |h|^s) / (1 - |h|) · R_ε`, as printed.
    pub bound: f64,
    pub violations: usize,
    /// `(1 - |h|^(s+1)) / (1 - |h|) · R_ε`, which also covers the `-h^s E(W)` term.
    pub bound_full: f64,
    pub violations_full: usize,
    pub excluded_branch_crossings: usize,
}

/// `W` runs over backward orbits of 0 of random length below 12.
pub fn a_s_bw_bound_check(h: Complex64, hp: Complex64, s: usize, trials: usize, seed: u64) -> Result<BoundReport, JuliaError> {
    if h.norm() >= 1.0 {
        return Err(JuliaError::Contracting(h.norm()));
    }
    let map = InverseMap::new(h, hp);
    bound_check_with(&map, s, trials, seed)
}

pub fn bound_check_with(map: &InverseMap, s: usize, trials: usize, seed: u64) -> Result<BoundReport, JuliaError> {
    check_repulsive(map.hp)?;
    let ah = map.h.norm();
    let r = map.r_eps();
    let bound = (1.0 - ah.powi(s as i32)) / (1.0 - ah) * r;
    let bound_full = (1.0 - ah.powi(s as i32 + 1)) / (1.0 - ah) * r;
    let lhs: Vec<(f64, bool)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let len = rng.gen_range(0..12);
            let word: Vec<Branch> = (0..len)
                .map(|_| if rng.gen::<bool>() { Branch::A } else { Branch::B })
                .collect();
            let w = backward_orbit(map, &word)?;
            let mut p = map.step(w.z, Branch::B)?;
            let mut cut = w.near_cut || p.near_cut;
            for _ in 0..s {
                p = map.step(p.z, Branch::A)?;
                cut |= p.near_cut;
            }
            let target = -map.h.powu(s as u32) * map.hp;
            Ok(((p.z - target).norm(), cut))
        })
        .collect::<Result<_, JuliaError>>()?;
    let kept: Vec<f64> = lhs.iter().filter(|(_, c)| !c).map(|(l, _)| *l).collect();
    Ok(BoundReport {
        s,
        trials,
        max_lhs: kept.iter().copied().fold(0.0, f64::max),
        bound,
        violations: kept.iter().filter(|&&l| l > bound).count(),
        bound_full,
        violations_full: kept.iter().filter(|&&l| l > bound_full).count(),
        excluded_branch_crossings: lhs.len() - kept.len(),
    })
}
