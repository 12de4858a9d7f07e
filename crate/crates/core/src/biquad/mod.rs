//! Biquadratic maps `S(X, x; q) = 0`, the closed-form second iterate, the
//! recursion `q_n -> q_{n+1}` and extraction of the γ polynomials.
//!
//! Parameters are generic over [`Coeff`]: exact polynomials ([`MultiPoly`] or
//! the rational-scaled [`QPoly`] used inside the recursion), elements of the
//! Painlevé quadratic extension, or complex numbers.

mod coeff;
mod series;

use num_bigint::BigInt;
use num_traits::Zero;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{MultiPoly, PolyError, QPoly, QuadExtPoly};

pub use coeff::{Coeff, Divisible};
pub use series::{extract_gamma, k_factor, wedges, GammaEntry, GammaSeries, KFactor, Trail};

pub const ENTRY_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BiquadError {
    #[error("level {level}: {entry} is not an exact polynomial quotient")]
    InexactDivision { level: usize, entry: &'static str },
    #[error("level {level}: divisor {entry}_{{n-1}} vanishes")]
    ZeroDivisor { level: usize, entry: &'static str },
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The six parameters `q = (a, b, c, d, e, f)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiquadParams<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub e: T,
    pub f: T,
}

impl<T> BiquadParams<T> {
    pub fn from_array([a, b, c, d, e, f]: [T; 6]) -> Self {
        BiquadParams { a, b, c, d, e, f }
    }

    pub fn as_array(&self) -> [&T; 6] {
        [&self.a, &self.b, &self.c, &self.d, &self.e, &self.f]
    }

    pub fn into_array(self) -> [T; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> BiquadParams<U> {
        BiquadParams::from_array(self.as_array().map(f))
    }

    pub fn try_map<U, E>(&self, mut f: impl FnMut(&T) -> Result<U, E>) -> Result<BiquadParams<U>, E> {
        let [a, b, c, d, e, f_] = self.as_array();
        Ok(BiquadParams {
            a: f(a)?,
            b: f(b)?,
            c: f(c)?,
            d: f(d)?,
            e: f(e)?,
            f: f(f_)?,
        })
    }
}

impl<T: Coeff> BiquadParams<T> {
    pub fn is_all_zero(&self) -> bool {
        self.as_array().iter().all(|x| x.is_zero_coeff())
    }
}

/// The generic parameters: one symbol per entry, over the symbols `a..f`.
pub fn generic() -> BiquadParams<MultiPoly> {
    BiquadParams::from_array(
        MultiPoly::vars(&ENTRY_NAMES)
            .try_into()
            .expect("six symbols"),
    )
}

/// `aX²x² + b(X+x)Xx + c(X−x)² + dXx + e(X+x) + f`
pub fn eval_s<T: Coeff>(big: &T, x: &T, q: &BiquadParams<T>) -> T {
    let xx = big.times(x);
    let sum = big.plus(x);
    let diff = big.minus(x);
    q.a.times(&xx.times(&xx))
        .plus(&q.b.times(&sum.times(&xx)))
        .plus(&q.c.times(&diff.times(&diff)))
        .plus(&q.d.times(&xx))
        .plus(&q.e.times(&sum))
        .plus(&q.f)
}

/// Coefficient triples (x², x, 1) of φ, η, ρ, so that
/// `S(y, x) = φ(x) y² + η(x) y + ρ(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiEtaRho<T> {
    pub phi: [T; 3],
    pub eta: [T; 3],
    pub rho: [T; 3],
}

pub fn phi_eta_rho<T: Coeff>(q: &BiquadParams<T>) -> PhiEtaRho<T> {
    PhiEtaRho {
        phi: [q.a.clone(), q.b.clone(), q.c.clone()],
        eta: [q.b.clone(), q.d.minus(&q.c.scaled(2)), q.e.clone()],
        rho: [q.c.clone(), q.e.clone(), q.f.clone()],
    }
}

/// Value of a coefficient triple (x², x, 1) at `x`.
pub fn quad_at<T: Coeff>(t: &[T; 3], x: &T) -> T {
    t[0].times(x).plus(&t[1]).times(x).plus(&t[2])
}

/// The closed-form parameters of the second iterate.
pub fn q2_of<T: Coeff>(q: &BiquadParams<T>) -> BiquadParams<T> {
    let BiquadParams { a, b, c, d, e, f } = q;
    let m = |x: &T, y: &T| x.times(y);
    let ae_cb = m(a, e).minus(&m(c, b));
    let ad_2ac_bb = m(a, d).minus(&m(a, c).scaled(2)).minus(&m(b, b));
    let be_cd_2cc = m(b, e).minus(&m(c, d)).plus(&m(c, c).scaled(2));
    let af2_be_cd_4cc = m(a, f)
        .scaled(2)
        .minus(&m(b, e))
        .plus(&m(c, d))
        .minus(&m(c, c).scaled(4));
    let bf_ce = m(b, f).minus(&m(c, e));
    let af_cc = m(a, f).minus(&m(c, c));
    let df_2cf_ee = m(d, f).minus(&m(c, f).scaled(2)).minus(&m(e, e));

    let a2 = m(&ae_cb, &ae_cb).minus(&m(&ad_2ac_bb, &be_cd_2cc));
    let b2 = m(&ae_cb, &af2_be_cd_4cc).minus(&m(&ad_2ac_bb, &bf_ce));
    let c2 = m(&af_cc, &af_cc).minus(&m(&ae_cb, &bf_ce));
    let d2 = m(&af_cc, &af_cc)
        .scaled(4)
        .minus(&m(&ae_cb, &bf_ce).scaled(2))
        .minus(&m(&be_cd_2cc, &be_cd_2cc))
        .minus(&m(&ad_2ac_bb, &df_2cf_ee));
    let e2 = m(&bf_ce, &af2_be_cd_4cc).minus(&m(&df_2cf_ee, &ae_cb));
    let f2 = m(&bf_ce, &bf_ce).minus(&m(&df_2cf_ee, &be_cd_2cc));
    BiquadParams::from_array([a2, b2, c2, d2, e2, f2])
}

/// One step of the recursion: `q_{n+1}` from `q`, `q_n` and `q_{n-1}`.
/// `level` is n + 1 and only labels errors.
pub fn step<T: Divisible>(
    q: &BiquadParams<T>,
    qn: &BiquadParams<T>,
    qm: &BiquadParams<T>,
    level: usize,
) -> Result<BiquadParams<T>, BiquadError> {
    let g = q.as_array();
    let gn = qn.as_array();
    // w[i][j] = (g_i ∧ g_j)_n
    let mut w: Vec<Vec<T>> = (0..6).map(|_| Vec::with_capacity(6)).collect();
    for i in 0..6 {
        for j in 0..6 {
            let v = if i == j {
                g[i].minus(g[i])
            } else if j < i {
                w[j][i].neg()
            } else {
                g[i].times(gn[j]).minus(&g[j].times(gn[i]))
            };
            w[i].push(v);
        }
    }
    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;
    const D: usize = 3;
    const E: usize = 4;
    const F: usize = 5;
    let wd = |i: usize, j: usize| &w[i][j];
    let div = |num: T, den: &T, entry: &'static str| num.divide(den, level, entry);

    let nonzero = |x: &T, entry: &'static str| {
        if x.is_zero_coeff() {
            Err(BiquadError::ZeroDivisor { level, entry })
        } else {
            Ok(())
        }
    };
    nonzero(&qm.a, "a")?;
    nonzero(&qm.c, "c")?;
    nonzero(&qm.d, "d")?;
    nonzero(&qm.f, "f")?;

    // a_{n+1}, and b_{n+1} = (-b_{n-1} a_{n+1} + Z - Y/2) / a_{n-1}
    let a_num = wd(A, C).times(wd(A, C)).minus(&wd(A, B).times(wd(B, C)));
    let a1 = div(a_num, &qm.a, "a")?;
    let z = wd(A, C).times(&wd(A, E).plus(&wd(B, C).scaled(2)));
    let y = wd(A, B)
        .times(wd(B, E))
        .minus(&wd(A, B).times(wd(C, D)))
        .plus(&wd(A, D).times(wd(B, C)));
    let b_num = qm.b.times(&a1).neg().plus(&z).minus(&y.half());
    let b1 = div(b_num, &qm.a, "b")?;

    let (cn, bn, en, fnn, an) = (&qn.c, &qn.b, &qn.e, &qn.f, &qn.a);
    let (a, b, c, e, f) = (&q.a, &q.b, &q.c, &q.e, &q.f);
    let t1 = c.times(en).minus(&b.times(fnn));
    let t2 = a.times(en).minus(&b.times(cn));
    let t3 = c.times(bn).minus(&e.times(an));
    let t4 = f.times(bn).minus(&e.times(cn));
    let t5 = a.times(fnn).minus(&c.times(cn));
    let t6 = f.times(an).minus(&c.times(cn));
    let c_num = t1
        .times(&t2)
        .plus(&t3.times(&t4))
        .plus(&t5.times(&t5))
        .plus(&t6.times(&t6));
    let c1 = div(c_num.half(), &qm.c, "c")?;

    let f_num = wd(F, C).times(wd(F, C)).minus(&wd(F, E).times(wd(E, C)));
    let f1 = div(f_num, &qm.f, "f")?;
    let z2 = wd(F, C).times(&wd(F, B).plus(&wd(E, C).scaled(2)));
    let y2 = wd(F, E)
        .times(wd(E, B))
        .minus(&wd(F, E).times(wd(C, D)))
        .plus(&wd(F, D).times(wd(E, C)));
    let e_num = qm.e.times(&f1).neg().plus(&z2).minus(&y2.half());
    let e1 = div(e_num, &qm.f, "e")?;

    let d_num = qm
        .f
        .times(&a1)
        .plus(&qm.a.times(&f1))
        .plus(&qm.b.times(&e1).scaled(4))
        .plus(&qm.e.times(&b1).scaled(4))
        .neg()
        .plus(&wd(A, F).times(wd(A, F)))
        .plus(&wd(C, D).times(wd(C, D)))
        .minus(&wd(A, B).times(wd(E, F)))
        .minus(&wd(B, C).times(wd(C, E)))
        .plus(&wd(A, D).times(wd(D, F)))
        .plus(&wd(B, E).times(wd(A, F)).scaled(2))
        .minus(
            &wd(C, E)
                .scaled(3)
                .minus(wd(B, F))
                .minus(wd(D, E))
                .times(&wd(B, C).scaled(3).minus(wd(A, E)).minus(wd(B, D))),
        )
        .plus(
            &wd(A, D)
                .minus(wd(A, C))
                .times(&wd(C, F).minus(wd(D, F)))
                .scaled(2),
        )
        .plus(
            &wd(B, C)
                .plus(wd(A, E))
                .times(&wd(B, F).plus(wd(C, E)))
                .scaled(2),
        );
    let d1 = div(d_num, &qm.d, "d")?;
    Ok(BiquadParams::from_array([a1, b1, c1, d1, e1, f1]))
}

/// The 3dLV parameters in terms of the invariants (r, s).
pub fn specialize_lv<T: Coeff>(r: &T, s: &T, one: &T) -> BiquadParams<T> {
    let rs = r.times(s);
    BiquadParams {
        a: r.plus(one),
        b: s.minus(&r.scaled(2)).minus(one),
        c: r.minus(s),
        d: s.times(s)
            .plus(&rs)
            .plus(&r.scaled(5))
            .minus(&s.scaled(2))
            .plus(one),
        e: rs.plus(r).neg(),
        f: one.minus(one),
    }
}

pub const LV_SYMBOLS: [&str; 2] = ["r", "s"];

pub fn lv_symbolic() -> BiquadParams<MultiPoly> {
    let v = MultiPoly::vars(&LV_SYMBOLS);
    specialize_lv(&v[0], &v[1], &MultiPoly::one(&LV_SYMBOLS))
}

pub fn lv_numeric(r: Complex64, s: Complex64) -> BiquadParams<Complex64> {
    specialize_lv(&r, &s, &Complex64::new(1.0, 0.0))
}

pub const PAINLEVE_SYMBOLS: [&str; 3] = ["r", "s", "v"];

/// The Painlevé V reduction coefficients over `Z[r, s, v][p]` with
/// `p² = (r − v + 1) p − r`.
pub fn specialize_painleve() -> BiquadParams<QuadExtPoly> {
    let poly = |e: &str| MultiPoly::parse(e, &PAINLEVE_SYMBOLS).expect("fixed expression");
    let p = QuadExtPoly::generator(poly("r - v + 1"), poly("-r")).expect("same symbols");
    let entry = |ext: &str, base: &str| {
        QuadExtPoly::new(poly(base), poly(ext), p.trace().clone(), p.constant().clone())
            .expect("same symbols")
    };
    BiquadParams {
        a: entry("s + v - r + 1", "r - 1"),
        b: entry("2*r - s - v - 2", "-2*r - s - v + 2"),
        c: entry("1 - r", "r + s + v - 1"),
        d: entry("4*(1 - r)", "2*(r - 1)*(s + 2) + (s + v)*(4 - s - v)"),
        e: entry("2*r + s + v - 2", "(s + 1)*(v - 2*r - 1) + (v - 3)*(v - 1)"),
        f: entry("-(r + r*s + v - 1)", "r + r*s*(r - v + 1) - (v - 1)^2"),
    }
}

/// The two roots of `p² − (r − v + 1) p + r = 0`.
pub fn painleve_p_roots(r: Complex64, v: Complex64) -> [Complex64; 2] {
    let t = r - v + 1.0;
    let disc = (t * t - 4.0 * r).sqrt();
    [(t + disc) / 2.0, (t - disc) / 2.0]
}

/// Numeric Painlevé V parameters at a chosen root `p`.
pub fn painleve_numeric(r: Complex64, s: Complex64, v: Complex64, p: Complex64) -> BiquadParams<Complex64> {
    let point = [r, s, v];
    specialize_painleve().map(|x| x.eval_c64(&point, p))
}

/// `S(Q, x; q)` as a polynomial over the parameter symbols followed by `Q`, `x`.
pub fn s_polynomial(q: &BiquadParams<MultiPoly>, big: &str, small: &str) -> Result<MultiPoly, BiquadError> {
    let mut syms = q.a.symbols().to_vec();
    for s in [big, small] {
        if syms.iter().any(|t| t == s) {
            return Err(PolyError::DuplicateSymbol(s.to_string()).into());
        }
        syms.push(s.to_string());
    }
    let lifted = q.try_map(|p| p.embed(&syms))?;
    let bq = MultiPoly::var(&syms, big)?;
    let x = MultiPoly::var(&syms, small)?;
    Ok(eval_s(&bq, &x, &lifted))
}

/// Resultant in `X` of `S(Q, X; q_n)` and `S(X, x; q)` for integer
/// parameters, as a polynomial over `(Q, X, x)` free of `X`.
pub fn w_resultant(qn: &BiquadParams<BigInt>, q: &BiquadParams<BigInt>) -> Result<MultiPoly, BiquadError> {
    if qn.a.is_zero() || q.a.is_zero() {
        return Err(BiquadError::Degenerate("leading coefficient a vanishes".into()));
    }
    let syms = ["Q", "X", "x"];
    let lift = |p: &BiquadParams<BigInt>| p.map(|c| MultiPoly::constant(&syms, c.clone()));
    let vars = MultiPoly::vars(&syms);
    let first = eval_s(&vars[0], &vars[1], &lift(qn));
    let second = eval_s(&vars[1], &vars[2], &lift(q));
    let r = crate::poly::resultant(&first, &second, "X")?;
    if r.is_zero() {
        return Err(BiquadError::Degenerate("resultant vanishes identically".into()));
    }
    Ok(r)
}

/// `W_2`: eliminates `X` between `S(Q, X; q)` and `S(X, x; q)`.
pub fn resultant_w2_oracle(q: &BiquadParams<BigInt>) -> Result<MultiPoly, BiquadError> {
    w_resultant(q, q)
}

/// Resultant of `p2 X² + p1 X + p0` and `q2 X² + q1 X + q0`.
pub fn quadratic_resultant<T: Coeff>(p: &[T; 3], q: &[T; 3]) -> T {
    let [p2, p1, p0] = p;
    let [q2, q1, q0] = q;
    let u = p2.times(q0).minus(&p0.times(q2));
    let v = p2.times(q1).minus(&p1.times(q2));
    let w = p1.times(q0).minus(&p0.times(q1));
    u.times(&u).minus(&v.times(&w))
}

/// Numeric `W_{n+1}(Q, x)`: eliminates `X` between `S(Q, X; q_n)` and `S(X, x; q)`.
pub fn w_numeric(big: Complex64, x: Complex64, qn: &BiquadParams<Complex64>, q: &BiquadParams<Complex64>) -> Complex64 {
    let first = phi_eta_rho(qn);
    let second = phi_eta_rho(q);
    let at = |t: &PhiEtaRho<Complex64>, z: Complex64| [quad_at(&t.phi, &z), quad_at(&t.eta, &z), quad_at(&t.rho, &z)];
    quadratic_resultant(&at(&first, big), &at(&second, x))
}

/// Both roots `Y` of `S(Y, x; q) = 0`.
pub fn branch_roots(x: Complex64, q: &BiquadParams<Complex64>) -> Result<[Complex64; 2], BiquadError> {
    let t = phi_eta_rho(q);
    let (p2, p1, p0) = (quad_at(&t.phi, &x), quad_at(&t.eta, &x), quad_at(&t.rho, &x));
    if p2.norm() == 0.0 {
        return Err(BiquadError::Degenerate("φ(x) vanishes".into()));
    }
    let disc = (p1 * p1 - 4.0 * p2 * p0).sqrt();
    // pick the numerically stable pairing
    let s = if (p1.conj() * disc).re >= 0.0 { -p1 - disc } else { -p1 + disc };
    if s.norm() == 0.0 {
        let r = -p1 / (2.0 * p2);
        return Ok([r, r]);
    }
    Ok([s / (2.0 * p2), 2.0 * p0 / s])
}

/// Orbits of `x0` under the two branches of the biquadratic correspondence.
/// The first root of `S(Y, x0) = 0` is labelled forward, the second backward;
/// each orbit then continues by Vieta, `x_{k+1} = −η(x_k)/φ(x_k) − x_{k−1}`,
/// which never switches branch. Returns `(forward, backward)`, each of
/// length `steps + 1` and starting at `x0`.
pub fn branch_orbits(
    x0: Complex64,
    q: &BiquadParams<Complex64>,
    steps: usize,
) -> Result<(Vec<Complex64>, Vec<Complex64>), BiquadError> {
    let [fwd, bwd] = branch_roots(x0, q)?;
    let t = phi_eta_rho(q);
    let continue_orbit = |first: Complex64| -> Result<Vec<Complex64>, BiquadError> {
        let mut orbit = vec![x0, first];
        while orbit.len() <= steps {
            let k = orbit.len() - 1;
            let xk = orbit[k];
            let phi = quad_at(&t.phi, &xk);
            if phi.norm() == 0.0 {
                return Err(BiquadError::Degenerate("φ vanishes along the orbit".into()));
            }
            orbit.push(-quad_at(&t.eta, &xk) / phi - orbit[k - 1]);
        }
        orbit.truncate(steps + 1);
        Ok(orbit)
    };
    Ok((continue_orbit(fwd)?, continue_orbit(bwd)?))
}

pub fn integer_params(q: &[i64; 6]) -> BiquadParams<BigInt> {
    BiquadParams::from_array(q.map(BigInt::from))
}

/// Lifts integer-coefficient parameters into the recursion's rational type.
pub fn to_qpoly(q: &BiquadParams<MultiPoly>) -> BiquadParams<QPoly> {
    q.map(|p| QPoly::from(p.clone()))
}
