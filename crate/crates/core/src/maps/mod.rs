//! The concrete maps: forward evaluation, invariants, the one-dimensional
//! reduction of the two-dimensional `(b, c)` map and its conjugacy to the
//! degree-two normal form.
//!
//! Evaluation is generic over [`Scalar`], so every map also runs at extended
//! precision. Parameters are always given in double precision and lifted.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::biquad::{phi_eta_rho, BiquadParams, PhiEtaRho};
use crate::numeric::Scalar;

/// A denominator counts as vanishing below this multiple of `1 + |numerator|`.
pub const POLE_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MapError {
    #[error("{map}: pole, denominator `{denominator}` vanishes")]
    Pole {
        map: &'static str,
        denominator: &'static str,
    },
    #[error("{map} acts on points of dimension {expected}, got {got}")]
    Dimension {
        map: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("unknown map id `{0}`")]
    UnknownId(String),
    #[error("map `{map}` needs parameter `{name}`")]
    MissingParameter { map: &'static str, name: String },
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
}

/// Points are plain coordinate vectors.
pub type StatePoint<S = Complex64> = Vec<S>;

#[derive(Debug, Clone, PartialEq)]
pub enum MapId {
    /// `(x, y) -> (xy, x + y - xy)`
    TwoDimLogistic,
    /// `(x, y) -> (xy, y (1-bx)(1-cxy) / ((1-cx)(1-bxy)))`
    TwoDimBC { b: Complex64, c: Complex64 },
    /// `x -> h x (1-cx) / (1-bx)`
    OneDimBC { h: Complex64, b: Complex64, c: Complex64 },
    /// Three-dimensional Lotka-Volterra.
    LV3,
    /// Discrete Painlevé V on four coordinates.
    PainleveV,
    /// `(x_n, x_{n+1}) -> (x_{n+1}, x_{n+2})` conserving `H` built from `q'`, `q''`.
    Qrt {
        q1: BiquadParams<Complex64>,
        q2: BiquadParams<Complex64>,
    },
    /// `z -> z (h' + z) / (1 + h z)`
    NormalForm { h: Complex64, hp: Complex64 },
}

pub const MAP_IDS: [&str; 7] = ["2d-bc", "lv3", "painleve5", "qrt", "normal-form", "2d-logistic", "1d-bc"];

const QRT_PARAMS: [&str; 12] = ["a1", "b1", "c1", "d1", "e1", "f1", "a2", "b2", "c2", "d2", "e2", "f2"];

impl MapId {
    pub fn id(&self) -> &'static str {
        match self {
            MapId::TwoDimLogistic => "2d-logistic",
            MapId::TwoDimBC { .. } => "2d-bc",
            MapId::OneDimBC { .. } => "1d-bc",
            MapId::LV3 => "lv3",
            MapId::PainleveV => "painleve5",
            MapId::Qrt { .. } => "qrt",
            MapId::NormalForm { .. } => "normal-form",
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            MapId::OneDimBC { .. } | MapId::NormalForm { .. } => 1,
            MapId::TwoDimLogistic | MapId::TwoDimBC { .. } | MapId::Qrt { .. } => 2,
            MapId::LV3 => 3,
            MapId::PainleveV => 4,
        }
    }

    pub fn num_invariants(&self) -> usize {
        match self {
            MapId::OneDimBC { .. } | MapId::NormalForm { .. } => 0,
            MapId::TwoDimLogistic | MapId::TwoDimBC { .. } | MapId::Qrt { .. } => 1,
            MapId::LV3 => 2,
            MapId::PainleveV => 3,
        }
    }

    /// Parameter names accepted by [`MapId::from_id`]. The QRT map takes
    /// `q' = (a1, …, f1)` and `q'' = (a2, …, f2)`.
    pub fn parameter_names(id: &str) -> Result<&'static [&'static str], MapError> {
        Ok(match id {
            "2d-logistic" | "lv3" | "painleve5" => &[],
            "2d-bc" => &["b", "c"],
            "1d-bc" => &["h", "b", "c"],
            "qrt" => &QRT_PARAMS,
            "normal-form" => &["h", "hp"],
            other => return Err(MapError::UnknownId(other.to_string())),
        })
    }

    /// Builds a map from its string id and named complex parameters.
    pub fn from_id(id: &str, params: &BTreeMap<String, Complex64>) -> Result<MapId, MapError> {
        let names = Self::parameter_names(id)?;
        let static_id = MAP_IDS.iter().find(|m| **m == id).copied().unwrap_or("map");
        let get = |name: &str| {
            params.get(name).copied().ok_or_else(|| MapError::MissingParameter {
                map: static_id,
                name: name.to_string(),
            })
        };
        for name in names {
            get(name)?;
        }
        Ok(match id {
            "2d-logistic" => MapId::TwoDimLogistic,
            "lv3" => MapId::LV3,
            "painleve5" => MapId::PainleveV,
            "2d-bc" => MapId::TwoDimBC { b: get("b")?, c: get("c")? },
            "1d-bc" => MapId::OneDimBC { h: get("h")?, b: get("b")?, c: get("c")? },
            "normal-form" => MapId::NormalForm { h: get("h")?, hp: get("hp")? },
            "qrt" => {
                let v: Vec<Complex64> = QRT_PARAMS.iter().map(|n| get(n)).collect::<Result<_, _>>()?;
                MapId::Qrt {
                    q1: BiquadParams::from_array([v[0], v[1], v[2], v[3], v[4], v[5]]),
                    q2: BiquadParams::from_array([v[6], v[7], v[8], v[9], v[10], v[11]]),
                }
            }
            _ => unreachable!("checked by parameter_names"),
        })
    }

    fn check_dim<S>(&self, x: &[S]) -> Result<(), MapError> {
        if x.len() != self.dimension() {
            return Err(MapError::Dimension {
                map: self.id(),
                expected: self.dimension(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// The image of `x`.
    pub fn apply<S: Scalar>(&self, x: &[S]) -> Result<StatePoint<S>, MapError> {
        self.check_dim(x)?;
        let map = self.id();
        let one = || S::one(x[0].ctx());
        let lift = |z: Complex64| x[0].lift(z);
        match self {
            MapId::TwoDimLogistic => {
                let xy = x[0].clone() * x[1].clone();
                Ok(vec![xy.clone(), x[0].clone() + x[1].clone() - xy])
            }
            MapId::TwoDimBC { b, c } => {
                let (b, c) = (lift(*b), lift(*c));
                let xy = x[0].clone() * x[1].clone();
                let num = x[1].clone()
                    * (one() - b.clone() * x[0].clone())
                    * (one() - c.clone() * xy.clone());
                let den = (one() - c * x[0].clone()) * (one() - b * xy.clone());
                Ok(vec![xy, divide(num, den, map, "(1-cx)(1-bxy)")?])
            }
            MapId::OneDimBC { h, b, c } => {
                let num = lift(*h) * x[0].clone() * (one() - lift(*c) * x[0].clone());
                let den = one() - lift(*b) * x[0].clone();
                Ok(vec![divide(num, den, map, "1-bx")?])
            }
            MapId::LV3 => {
                let (u, v, w) = (x[0].clone(), x[1].clone(), x[2].clone());
                let p = one() - v.clone() + v.clone() * w.clone();
                let q = one() - w.clone() + w.clone() * u.clone();
                let r = one() - u.clone() + u.clone() * v.clone();
                Ok(vec![
                    divide(u * p.clone(), q.clone(), map, "1-z+zx")?,
                    divide(v * q, r.clone(), map, "1-x+xy")?,
                    divide(w * r, p, map, "1-y+yz")?,
                ])
            }
            MapId::PainleveV => {
                // t(i) = 1 - x_i + x_i x_{i+1} - x_i x_{i+1} x_{i+2}, indices mod 4
                let t = |i: usize| {
                    let (a, b, c) = (x[i % 4].clone(), x[(i + 1) % 4].clone(), x[(i + 2) % 4].clone());
                    one() - a.clone() + a.clone() * b.clone() - a * b * c
                };
                const DEN: [&str; 4] = ["1-x4+x4x1-x4x1x2", "1-x1+x1x2-x1x2x3", "1-x2+x2x3-x2x3x4", "1-x3+x3x4-x3x4x1"];
                (0..4)
                    .map(|k| divide(x[k].clone() * t(k + 1), t(k + 3), map, DEN[k]))
                    .collect()
            }
            MapId::Qrt { q1, q2 } => {
                let next = qrt_step(q1, q2, x[0].clone(), x[1].clone())?;
                Ok(vec![x[1].clone(), next])
            }
            MapId::NormalForm { h, hp } => Ok(vec![normal_form(*h, *hp, x[0].clone())?]),
        }
    }

    /// Applies the map `n` times.
    pub fn iterate<S: Scalar>(&self, x: &[S], n: usize) -> Result<StatePoint<S>, MapError> {
        let mut p = x.to_vec();
        for _ in 0..n {
            p = self.apply(&p)?;
        }
        Ok(p)
    }

    /// Values of the invariants at `x` (empty for the one-dimensional maps).
    pub fn invariants_of<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>, MapError> {
        self.check_dim(x)?;
        let map = self.id();
        let one = || S::one(x[0].ctx());
        let lift = |z: Complex64| x[0].lift(z);
        match self {
            MapId::TwoDimLogistic => Ok(vec![x[0].clone() + x[1].clone()]),
            MapId::TwoDimBC { b, c } => Ok(vec![two_dim_bc_invariant(*b, *c, x[0].clone(), x[1].clone())?]),
            MapId::LV3 => {
                let prod = x.iter().cloned().fold(one(), |acc, v| acc * v);
                let co = x.iter().cloned().fold(one(), |acc, v| acc * (one() - v));
                Ok(vec![prod, co])
            }
            MapId::PainleveV => {
                let prod = x.iter().cloned().fold(one(), |acc, v| acc * v);
                let co = x.iter().cloned().fold(one(), |acc, v| acc * (one() - v));
                let h3 = (one() - x[1].clone() * x[3].clone()) * (one() - x[0].clone() * x[2].clone());
                Ok(vec![prod, co, h3])
            }
            MapId::Qrt { q1, q2 } => {
                let (t1, t2) = (lift_pe(q1, &lift), lift_pe(q2, &lift));
                let form = |t: &PhiEtaRho<S>| {
                    let y = x[1].clone();
                    quad_at_s(&t.phi, &x[0]) * y.clone() * y.clone() + quad_at_s(&t.eta, &x[0]) * y + quad_at_s(&t.rho, &x[0])
                };
                Ok(vec![divide(-form(&t1), form(&t2), map, "φ''(x)y²+η''(x)y+ρ''(x)")?])
            }
            MapId::OneDimBC { .. } | MapId::NormalForm { .. } => Ok(Vec::new()),
        }
    }
}

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for MapId {
    type Err = MapError;
    /// Only parameter-free maps can be named without parameters.
    fn from_str(s: &str) -> Result<Self, MapError> {
        MapId::from_id(s, &BTreeMap::new())
    }
}

fn divide<S: Scalar>(num: S, den: S, map: &'static str, denominator: &'static str) -> Result<S, MapError> {
    if den.norm() < POLE_TOLERANCE * (1.0 + num.norm()) {
        return Err(MapError::Pole { map, denominator });
    }
    Ok(num / den)
}

fn lift_pe<S: Scalar>(q: &BiquadParams<Complex64>, lift: &impl Fn(Complex64) -> S) -> PhiEtaRho<S> {
    let t = phi_eta_rho(q);
    PhiEtaRho {
        phi: t.phi.map(lift),
        eta: t.eta.map(lift),
        rho: t.rho.map(lift),
    }
}

fn quad_at_s<S: Scalar>(t: &[S; 3], x: &S) -> S {
    (t[0].clone() * x.clone() + t[1].clone()) * x.clone() + t[2].clone()
}

/// `H(x, y) = y (1 - bx) / (1 - cx)`
pub fn two_dim_bc_invariant<S: Scalar>(b: Complex64, c: Complex64, x: S, y: S) -> Result<S, MapError> {
    let one = S::one(x.ctx());
    let num = y * (one.clone() - x.lift(b) * x.clone());
    let den = one - x.lift(c) * x;
    divide(num, den, "2d-bc", "1-cx")
}

/// `z (h' + z) / (1 + h z)`
pub fn normal_form<S: Scalar>(h: Complex64, hp: Complex64, z: S) -> Result<S, MapError> {
    let num = z.clone() * (z.lift(hp) + z.clone());
    let den = S::one(z.ctx()) + z.lift(h) * z;
    divide(num, den, "normal-form", "1+hz")
}

/// Derivative of the normal form, `(h' + 2z + h z²) / (1 + h z)²`.
pub fn normal_form_derivative<S: Scalar>(h: Complex64, hp: Complex64, z: S) -> Result<S, MapError> {
    let two = S::from_f64(2.0, z.ctx());
    let num = z.lift(hp) + two * z.clone() + z.lift(h) * z.clone() * z.clone();
    let den = S::one(z.ctx()) + z.lift(h) * z;
    divide(num, den.clone() * den, "normal-form", "(1+hz)^2")
}

/// Both preimages of `z` under the normal form,
/// `(h z − h' ± √((h z + h')² + 4(1 − h h') z)) / 2`.
pub fn normal_form_inverse<S: Scalar>(h: Complex64, hp: Complex64, z: S) -> [S; 2] {
    let (hs, hps) = (z.lift(h), z.lift(hp));
    let half = S::from_f64(0.5, z.ctx());
    let four = S::from_f64(4.0, z.ctx());
    let s = hs.clone() * z.clone() + hps.clone();
    let disc = (s.clone() * s + four * (S::one(z.ctx()) - hs.clone() * hps.clone()) * z.clone()).sqrt();
    let base = hs * z - hps;
    [
        (base.clone() + disc.clone()) * half.clone(),
        (base - disc) * half,
    ]
}

/// `x -> h x (1 - cx) / (1 - bx)` on the level set `H = h` of the `(b, c)` map.
pub fn reduce_two_dim(b: Complex64, c: Complex64, h: Complex64) -> MapId {
    MapId::OneDimBC { h, b, c }
}

/// The second coordinate on the level set, `Y = h (1 - cX) / (1 - bX)`.
pub fn companion_y<S: Scalar>(b: Complex64, c: Complex64, h: Complex64, big_x: S) -> Result<S, MapError> {
    let one = S::one(big_x.ctx());
    let num = big_x.lift(h) * (one.clone() - big_x.lift(c) * big_x.clone());
    let den = one - big_x.lift(b) * big_x;
    divide(num, den, "1d-bc", "1-bX")
}

/// The conjugacy of the reduced `(b, c)` map to the normal form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFormConjugacy {
    pub h: Complex64,
    pub hp: Complex64,
    /// `z = offset + slope / x`
    pub offset: Complex64,
    pub slope: Complex64,
}

impl NormalFormConjugacy {
    pub fn normal_form(&self) -> MapId {
        MapId::NormalForm { h: self.h, hp: self.hp }
    }

    /// `z(x)`; `x = 0` goes to `z = ∞`, reported as a pole.
    pub fn z_of_x<S: Scalar>(&self, x: S) -> Result<S, MapError> {
        let q = divide(x.lift(self.slope), x.clone(), "conjugacy", "x")?;
        Ok(x.lift(self.offset) + q)
    }

    pub fn x_of_z<S: Scalar>(&self, z: S) -> Result<S, MapError> {
        divide(z.lift(self.slope), z.clone() - z.lift(self.offset), "conjugacy", "z-z_p")
    }
}

/// `h' = (1 + c (1 - h)² / (b - c)) / h` and the change of variable
/// `z = (1 - h') / (1 - h) + (1 - h) / (h (b - c)) · 1/x`.
pub fn conjugate_to_normal(b: Complex64, c: Complex64, h: Complex64) -> Result<NormalFormConjugacy, MapError> {
    let bc = b - c;
    if bc.norm() == 0.0 {
        return Err(MapError::Degenerate("b = c".into()));
    }
    if h.norm() == 0.0 || (1.0 - h).norm() == 0.0 {
        return Err(MapError::Degenerate("h must differ from 0 and 1".into()));
    }
    let hp = (1.0 + c / bc * (1.0 - h) * (1.0 - h)) / h;
    Ok(NormalFormConjugacy {
        h,
        hp,
        offset: (1.0 - hp) / (1.0 - h),
        slope: (1.0 - h) / (h * bc),
    })
}

/// Fixed points of the normal form in the finite plane, `0` and
/// `z_p = (1 - h') / (1 - h)`, with their multipliers `h'` and
/// `(2 - h - h') / (1 - h h')`; `∞` has multiplier `h`.
pub fn normal_form_fixed_points(h: Complex64, hp: Complex64) -> [(Complex64, Complex64); 2] {
    [
        (Complex64::new(0.0, 0.0), hp),
        ((1.0 - hp) / (1.0 - h), (2.0 - h - hp) / (1.0 - h * hp)),
    ]
}

/// `z± = −1/h ± √(1 − h h')/h`
pub fn normal_form_critical_points(h: Complex64, hp: Complex64) -> [Complex64; 2] {
    let r = (1.0 - h * hp).sqrt() / h;
    [-1.0 / h + r, -1.0 / h - r]
}

/// `x_{n+2}` of the symmetric QRT recurrence built from `q'` and `q''`.
pub fn qrt_step<S: Scalar>(
    q1: &BiquadParams<Complex64>,
    q2: &BiquadParams<Complex64>,
    x_n: S,
    x_np1: S,
) -> Result<S, MapError> {
    let lift = |z: Complex64| x_n.lift(z);
    let (t1, t2) = (lift_pe(q1, &lift), lift_pe(q2, &lift));
    let at = |t: &[S; 3]| quad_at_s(t, &x_np1);
    let (p1, e1, r1) = (at(&t1.phi), at(&t1.eta), at(&t1.rho));
    let (p2, e2, r2) = (at(&t2.phi), at(&t2.eta), at(&t2.rho));
    let er = e1.clone() * r2.clone() - r1.clone() * e2.clone();
    let rp = r1 * p2.clone() - p1.clone() * r2;
    let pe = p1 * e2 - e1 * p2;
    let num = er - x_n.clone() * rp.clone();
    let den = rp - x_n * pe;
    divide(num, den, "qrt", "(ρ'φ''-φ'ρ'')(y) - x(φ'η''-η'φ'')(y)")
}

#[cfg(test)]
mod tests;
