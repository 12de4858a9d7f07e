use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{q2_of, step, to_qpoly, BiquadError, BiquadParams};
use crate::poly::{gcd_many, wedge, MultiPoly, PolyError, QPoly};

/// Parameters `q_1 = q, q_2, …, q_N` of the iterated biquadratic maps, each
/// rescaled to integer coefficients with no common integer factor.
#[derive(Clone, Debug, PartialEq)]
pub struct Trail {
    levels: Vec<BiquadParams<MultiPoly>>,
}

impl Trail {
    /// Runs the recursion up to level `n_max >= 1`.
    pub fn compute(q: &BiquadParams<MultiPoly>, n_max: usize) -> Result<Trail, BiquadError> {
        check_symbolic(q)?;
        let mut levels = vec![q.clone()];
        if n_max >= 2 {
            levels.push(integerize(&to_qpoly(&q2_of(q))));
        }
        let q1 = to_qpoly(q);
        for level in 3..=n_max {
            let qn = to_qpoly(&levels[level - 2]);
            let qm = to_qpoly(&levels[level - 3]);
            let next = step(&q1, &qn, &qm, level)?;
            levels.push(integerize(&next));
        }
        Ok(Trail { levels })
    }

    /// `q_n`, 1-based.
    pub fn level(&self, n: usize) -> &BiquadParams<MultiPoly> {
        &self.levels[n - 1]
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[BiquadParams<MultiPoly>] {
        &self.levels
    }
}

fn check_symbolic(q: &BiquadParams<MultiPoly>) -> Result<(), BiquadError> {
    for p in q.as_array() {
        q.a.ensure_same_symbols(p)?;
    }
    if q.as_array().iter().all(|p| p.is_zero()) {
        return Err(BiquadError::Degenerate("all six parameters vanish".into()));
    }
    Ok(())
}

/// Clears denominators and removes the integer content shared by all six
/// entries. The recursion is covariant under rescaling each level by a
/// constant, so this only changes the trail by per-level constants.
fn integerize(q: &BiquadParams<QPoly>) -> BiquadParams<MultiPoly> {
    let l = q
        .as_array()
        .iter()
        .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    let nums = q.map(|p| p.numer().scale(&(&l / p.denom())));
    let g = nums
        .as_array()
        .iter()
        .fold(BigInt::zero(), |acc, p| acc.gcd(&p.content()));
    if g.is_zero() || g.is_one() {
        return nums;
    }
    nums.map(|p| p.div_integer_exact(&g).expect("common content"))
}

/// The 15 pairwise wedges `(g ∧ g')_n` for `g < g'` in `(a, …, f)` order.
pub fn wedges(q: &BiquadParams<MultiPoly>, qn: &BiquadParams<MultiPoly>) -> Vec<MultiPoly> {
    let g = q.as_array();
    let gn = qn.as_array();
    let pairs: Vec<(usize, usize)> = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).collect();
    pairs
        .par_iter()
        .map(|&(i, j)| wedge(g[i], gn[i], g[j], gn[j]))
        .collect()
}

/// Normalized gcd of the 15 wedges; for `q_n` in the trail this is `γ_{n+1}`
/// up to a constant. Fails as degenerate when every wedge vanishes.
pub fn extract_gamma(q: &BiquadParams<MultiPoly>, qn: &BiquadParams<MultiPoly>) -> Result<MultiPoly, BiquadError> {
    check_symbolic(q)?;
    check_symbolic(qn)?;
    q.a.ensure_same_symbols(&qn.a)?;
    let mut ws = wedges(q, qn);
    // small polynomials first keeps the running gcd cheap
    ws.sort_by_key(|w| w.num_terms());
    gcd_many(ws.iter())?
        .ok_or_else(|| BiquadError::Degenerate("all wedges vanish; q_n is proportional to q".into()))
}

/// The hatted coefficients of `S(Q, x; q_{n+1}) = c_{n+1}(Q − x)² + γ² K(Q, x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KFactor {
    pub a: MultiPoly,
    pub b: MultiPoly,
    pub d: MultiPoly,
    pub e: MultiPoly,
    pub f: MultiPoly,
}

impl KFactor {
    /// `K` as a biquadratic with `c = 0`.
    pub fn as_params(&self) -> BiquadParams<MultiPoly> {
        BiquadParams {
            a: self.a.clone(),
            b: self.b.clone(),
            c: MultiPoly::zero(self.a.symbols()),
            d: self.d.clone(),
            e: self.e.clone(),
            f: self.f.clone(),
        }
    }
}

/// Divides every entry of `q_next` except `c` by `γ²`.
pub fn k_factor(q_next: &BiquadParams<MultiPoly>, gamma: &MultiPoly) -> Result<KFactor, BiquadError> {
    let g2 = gamma * gamma;
    let div = |p: &MultiPoly, entry: &'static str| {
        p.exact_div(&g2).map_err(|e| match e {
            PolyError::InexactDivision => BiquadError::InexactDivision { level: 0, entry },
            other => BiquadError::Poly(other),
        })
    };
    Ok(KFactor {
        a: div(&q_next.a, "a")?,
        b: div(&q_next.b, "b")?,
        d: div(&q_next.d, "d")?,
        e: div(&q_next.e, "e")?,
        f: div(&q_next.f, "f")?,
    })
}

/// One exported γ: `gamma` is primitive with a positive leading coefficient
/// and `normalization` is that leading coefficient, so `gamma / normalization`
/// is monic in graded-lex order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaEntry {
    pub period: usize,
    pub gamma: MultiPoly,
    pub normalization: String,
}

impl GammaEntry {
    pub fn new(period: usize, gamma: MultiPoly) -> GammaEntry {
        let normalization = gamma.leading_coeff().to_string();
        GammaEntry {
            period,
            gamma,
            normalization,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaSeries {
    pub entries: Vec<GammaEntry>,
    pub trail: Trail,
}

impl GammaSeries {
    /// γ for periods `3..=max_period`; period `n + 1` comes from the wedges
    /// of `q_n` against `q`, with the γ of lower periods divided out.
    pub fn compute(q: &BiquadParams<MultiPoly>, max_period: usize) -> Result<GammaSeries, BiquadError> {
        if max_period < 3 {
            return Err(BiquadError::Degenerate("γ series starts at period 3".into()));
        }
        let trail = Trail::compute(q, max_period - 1)?;
        let mut entries: Vec<GammaEntry> = Vec::new();
        for n in 2..max_period {
            let mut g = extract_gamma(q, trail.level(n))?;
            // q_n is also proportional to q wherever the map has a period d
            // dividing n - 1, so those γ_d divide every wedge as well
            for lower in entries.iter().filter(|e| (n - 1) % e.period == 0) {
                while let Ok(rest) = g.exact_div(&lower.gamma) {
                    if rest.is_constant() {
                        break;
                    }
                    g = rest;
                }
            }
            entries.push(GammaEntry::new(n + 1, g.primitive_part()));
        }
        Ok(GammaSeries { entries, trail })
    }

    pub fn gamma(&self, period: usize) -> Option<&MultiPoly> {
        self.entries.iter().find(|e| e.period == period).map(|e| &e.gamma)
    }

    /// Each γ with the parameter symbols replaced by `bindings`, with
    /// monomial content removed and renormalized.
    pub fn substituted(
        &self,
        bindings: &[(&str, MultiPoly)],
        target: &[impl AsRef<str>],
    ) -> Result<Vec<GammaEntry>, BiquadError> {
        self.entries
            .iter()
            .map(|e| {
                let s = e.gamma.substitute(bindings, target)?;
                if s.is_zero() {
                    return Ok(GammaEntry::new(e.period, s));
                }
                let (_, core) = s.monomial_content();
                Ok(GammaEntry::new(e.period, core.primitive_part()))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("serializable")
    }
}
