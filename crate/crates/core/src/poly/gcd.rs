//! Multivariate gcd over the integers.
//!
//! [`gcd`] strips integer and monomial contents, removes one variable per
//! shared grading (see `grading`), then tries the heuristic
//! evaluation gcd (every candidate is confirmed by exact division) and falls
//! back to the recursive subresultant remainder sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::grading::{find_grading, rehomogenize};
use super::{Monomial, MultiPoly, PolyError};

const HEURISTIC_ATTEMPTS: usize = 6;

/// Greatest common divisor, normalized to integer content 1 and a positive
/// leading coefficient. `gcd(0, 0)` is zero.
pub fn gcd(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
    f.ensure_same_symbols(g)?;
    if f.is_zero() {
        return Ok(g.primitive_part());
    }
    if g.is_zero() {
        return Ok(f.primitive_part());
    }
    let (mf, f1) = f.monomial_content();
    let (mg, g1) = g.monomial_content();
    let m = mf.gcd(&mg);
    let (f1, g1) = (f1.primitive_part(), g1.primitive_part());
    let core = if f1.is_constant() || g1.is_constant() {
        MultiPoly::one(f.symbols())
    } else if f1 == g1 {
        f1
    } else if let Some((x, w)) = find_grading(&f1, &g1) {
        let one = BigInt::one();
        let h = gcd(&f1.eval_var_integer(x, &one), &g1.eval_var_integer(x, &one))?;
        rehomogenize(&h, x, &w)
    } else if let Some(h) = heuristic_gcd(&f1, &g1) {
        h
    } else {
        prs_gcd_primitive(&f1, &g1)?
    };
    Ok(core.mul_term(&m, &BigInt::one()).primitive_part())
}

/// gcd of a list, short-circuiting once the running gcd divides the next entry.
pub fn gcd_many<'a>(polys: impl IntoIterator<Item = &'a MultiPoly>) -> Result<Option<MultiPoly>, PolyError> {
    let mut acc: Option<MultiPoly> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.primitive_part(),
            Some(a) if a.is_one() => return Ok(Some(a)),
            Some(a) if a.divides(p) => a,
            Some(a) => gcd(&a, p)?,
        });
    }
    Ok(acc)
}

/// gcd by the recursive subresultant remainder sequence only.
pub fn subresultant_gcd(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
    f.ensure_same_symbols(g)?;
    if f.is_zero() {
        return Ok(g.primitive_part());
    }
    if g.is_zero() {
        return Ok(f.primitive_part());
    }
    let c = f.content().gcd(&g.content());
    let h = prs_gcd_primitive(&f.primitive_part(), &g.primitive_part())?;
    Ok(h.scale(&c).primitive_part())
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let mut r = c.mod_floor(m);
    if &r * 2 > *m {
        r -= m;
    }
    r
}

/// Heuristic gcd by evaluation at large integers and ξ-adic reconstruction.
/// Returns `None` when no candidate could be confirmed.
pub fn heuristic_gcd(f: &MultiPoly, g: &MultiPoly) -> Option<MultiPoly> {
    let h = heu_rec(f, g)?;
    Some(h.primitive_part())
}

fn heu_rec(f: &MultiPoly, g: &MultiPoly) -> Option<MultiPoly> {
    let var = (0..f.nvars()).find(|&i| f.involves(i) || g.involves(i));
    let Some(var) = var else {
        // both constant
        let c = f.constant_term().gcd(&g.constant_term());
        return Some(MultiPoly::constant(f.symbols(), c));
    };
    if !f.involves(var) || !g.involves(var) {
        // gcd cannot involve `var`; use the content in `var` of the other side
        let (a, b) = if f.involves(var) { (g, f) } else { (f, g) };
        let coeffs = b.to_univariate(var);
        let mut acc = a.clone();
        for c in coeffs.iter().filter(|c| !c.is_zero()) {
            acc = heu_rec(&acc, c)?;
            if acc.is_constant() {
                break;
            }
        }
        return Some(acc);
    }
    let bound = f.max_coeff_abs().min(g.max_coeff_abs());
    let mut xi: BigInt = bound * 2 + 29;
    for _ in 0..HEURISTIC_ATTEMPTS {
        let fx = f.eval_var_integer(var, &xi);
        let gx = g.eval_var_integer(var, &xi);
        if !fx.is_zero() && !gx.is_zero() {
            if let Some(hx) = heu_rec(&fx, &gx) {
                let candidate = reconstruct(&hx, &xi, var).primitive_part();
                if !candidate.is_zero() && candidate.divides(f) && candidate.divides(g) {
                    // integer content of the true gcd
                    let c = f.content().gcd(&g.content());
                    return Some(candidate.scale(&c));
                }
            }
        }
        xi = (&xi * 73794u32) / 27011u32 + 1;
    }
    None
}

/// Inverse of evaluation at `xi`: reads the symmetric ξ-adic digits of every
/// coefficient as the coefficients of successive powers of `var`.
fn reconstruct(hx: &MultiPoly, xi: &BigInt, var: usize) -> MultiPoly {
    let mut rest = hx.clone();
    let mut out = MultiPoly::zero(hx.symbols());
    let mut k = 0u32;
    while !rest.is_zero() {
        let digit = rest.map_coeffs(|c| symmetric_mod(c, xi));
        let mut e = vec![0u32; hx.nvars()];
        e[var] = k;
        out = &out + &digit.mul_term(&Monomial::new(e), &BigInt::one());
        rest = (&rest - &digit)
            .div_integer_exact(xi)
            .expect("digits removed exactly");
        k += 1;
        if k > 10_000 {
            break;
        }
    }
    out
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`, both given as
/// coefficient vectors in one variable.
fn prem(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    if r.len() < b.len() {
        return r;
    }
    let mut pending = r.len() - b.len() + 1;
    while r.len() >= b.len() && pending > 0 {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        // r = lb * r - lr * x^(dr-db) * b
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lr * bc);
        }
        r.pop();
        while r.last().is_some_and(MultiPoly::is_zero) {
            r.pop();
        }
        pending -= 1;
    }
    if pending > 0 && !r.is_empty() {
        let f = lb.pow(pending as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

fn content_in(coeffs: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
    let mut acc = MultiPoly::zero(coeffs[0].symbols());
    for c in coeffs {
        acc = gcd(&acc, c)?;
        if acc.is_one() {
            break;
        }
    }
    Ok(acc)
}

fn div_all(coeffs: &[MultiPoly], d: &MultiPoly) -> Result<Vec<MultiPoly>, PolyError> {
    coeffs.iter().map(|c| c.exact_div(d)).collect()
}

/// Subresultant PRS on primitive inputs (integer content 1).
fn prs_gcd_primitive(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
    let var = (0..f.nvars()).find(|&i| f.involves(i) || g.involves(i));
    let Some(var) = var else {
        return Ok(MultiPoly::one(f.symbols()));
    };
    if !f.involves(var) || !g.involves(var) {
        let (a, b) = if f.involves(var) { (g, f) } else { (f, g) };
        let cb = content_in(&b.to_univariate(var))?;
        return gcd(a, &cb);
    }
    let fu = f.to_univariate(var);
    let gu = g.to_univariate(var);
    let cf = content_in(&fu)?;
    let cg = content_in(&gu)?;
    let c = gcd(&cf, &cg)?;
    let (mut a, mut b) = (div_all(&fu, &cf)?, div_all(&gu, &cg)?);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let one = MultiPoly::one(f.symbols());
    let mut gs = one.clone();
    let mut hs = one.clone();
    loop {
        let delta = (a.len() - b.len()) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            b = vec![one.clone()];
            break;
        }
        let den = &gs * &hs.pow(delta);
        a = b;
        b = div_all(&r, &den)?;
        gs = a[a.len() - 1].clone();
        hs = if delta == 0 {
            hs
        } else {
            gs.pow(delta).exact_div(&hs.pow(delta - 1))?
        };
    }
    let cb = content_in(&b)?;
    let pb = div_all(&b, &cb)?;
    let h = MultiPoly::from_univariate(&pb, var, f.symbols());
    Ok((&h * &c).primitive_part())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s, &["a", "b", "c"]).unwrap()
    }

    #[test]
    fn prem_matches_definition() {
        // a = x^2 + 1, b = 2x + 1 in Z[x]; prem = 4*(x^2+1) mod (2x+1) = 5
        let x = |s: &str| MultiPoly::parse(s, &["x"]).unwrap();
        let a = x("x^2 + 1").to_univariate(0);
        let b = x("2*x + 1").to_univariate(0);
        let r = prem(&a, &b);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0], x("5"));
    }

    #[test]
    fn both_algorithms_agree_on_small_cases() {
        let w = p("a*b - c^2 + 3*a");
        let f = &p("a + b^2 - 2") * &w;
        let g = &p("c*a - b + 7") * &w;
        let want = w.primitive_part();
        assert_eq!(subresultant_gcd(&f, &g).unwrap(), want);
        assert_eq!(heuristic_gcd(&f, &g).unwrap(), want);
        assert_eq!(gcd(&f, &g).unwrap(), want);
    }

    #[test]
    fn coprime_inputs_give_one() {
        let f = p("a^2 + b^2 + 1");
        let g = p("a - b*c");
        assert!(gcd(&f, &g).unwrap().is_one());
        assert!(subresultant_gcd(&f, &g).unwrap().is_one());
    }

    #[test]
    fn monomial_and_integer_content() {
        let f = p("6*a^2*b + 4*a*b^2");
        let g = p("9*a*b^3");
        assert_eq!(gcd(&f, &g).unwrap(), p("a*b"));
    }

    #[test]
    fn gcd_many_short_circuits() {
        let w = p("a + b + c");
        let list = [&w * &p("a"), &w * &p("b - 1"), &w * &p("c^2 + a")];
        assert_eq!(gcd_many(list.iter()).unwrap().unwrap(), w);
        assert_eq!(gcd_many(std::iter::empty()).unwrap(), None);
    }
}
