//! Gradings shared by two polynomials, used to drop a variable before a gcd.
//!
//! If `f` and `g` are homogeneous for a weight vector `w` with nonnegative
//! entries and `w[x] = 1`, setting `x = 1` is injective on `w`-homogeneous
//! polynomials not divisible by `x`, and it commutes with factorization. The
//! gcd can then be taken with one variable fewer and lifted back.

use std::collections::BTreeMap;

use num_integer::Integer;

use super::{Monomial, MultiPoly};

/// A variable `x` and weights `w` with `w[x] = 1` making both inputs
/// `w`-homogeneous. Only variables that occur are considered.
pub(super) fn find_grading(f: &MultiPoly, g: &MultiPoly) -> Option<(usize, Vec<i64>)> {
    let n = f.nvars();
    let active: Vec<usize> = (0..n).filter(|&i| f.involves(i) || g.involves(i)).collect();
    if active.len() < 2 {
        return None;
    }
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for p in [f, g] {
        let mut it = p.terms.keys();
        let Some(first) = it.next() else { continue };
        for m in it {
            let diff: Vec<i128> = active
                .iter()
                .map(|&i| m.0[i] as i128 - first.0[i] as i128)
                .collect();
            insert_row(&mut rows, diff);
            if rows.len() == active.len() {
                return None;
            }
        }
    }
    for v in nullspace(&rows, active.len()) {
        let v = if v.iter().all(|&x| x <= 0) { v.iter().map(|x| -x).collect() } else { v };
        if v.iter().any(|&x| x < 0) {
            continue;
        }
        if let Some(k) = v.iter().position(|&x| x == 1) {
            let mut w = vec![0i64; n];
            for (j, &i) in active.iter().enumerate() {
                w[i] = v[j] as i64;
            }
            return Some((active[k], w));
        }
    }
    None
}

/// Adds `row` to a fully reduced echelon basis, keeping entries small.
fn insert_row(rows: &mut Vec<Vec<i128>>, mut row: Vec<i128>) {
    for r in rows.iter() {
        let p = r.iter().position(|&x| x != 0).expect("nonzero basis row");
        if row[p] != 0 {
            let (a, b) = (r[p], row[p]);
            let l = a.lcm(&b);
            let (ka, kb) = (l / a, l / b);
            for (x, y) in row.iter_mut().zip(r) {
                *x = *x * kb - y * ka;
            }
        }
    }
    let Some(p) = row.iter().position(|&x| x != 0) else { return };
    normalize(&mut row);
    for r in rows.iter_mut() {
        if r[p] != 0 {
            let (a, b) = (row[p], r[p]);
            let l = a.lcm(&b);
            let (ka, kb) = (l / a, l / b);
            for (x, y) in r.iter_mut().zip(&row) {
                *x = *x * kb - y * ka;
            }
            normalize(r);
        }
    }
    rows.push(row);
    rows.sort_by_key(|r| r.iter().position(|&x| x != 0));
}

fn normalize(row: &mut [i128]) {
    let g = row.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    if g > 1 {
        row.iter_mut().for_each(|x| *x /= g);
    }
    if let Some(&lead) = row.iter().find(|&&x| x != 0) {
        if lead < 0 {
            row.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Integer basis of the right nullspace of a fully reduced echelon basis.
fn nullspace(rows: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    let pivots: Vec<usize> = rows
        .iter()
        .map(|r| r.iter().position(|&x| x != 0).unwrap())
        .collect();
    let l = rows
        .iter()
        .zip(&pivots)
        .fold(1i128, |acc, (r, &p)| acc.lcm(&r[p]));
    (0..n)
        .filter(|j| !pivots.contains(j))
        .map(|j| {
            let mut v = vec![0i128; n];
            v[j] = l;
            for (r, &p) in rows.iter().zip(&pivots) {
                v[p] = -r[j] * (l / r[p]);
            }
            normalize(&mut v);
            v
        })
        .collect()
}

/// Restores `x` in a polynomial obtained by setting `x = 1`: every term is
/// raised to the largest `w`-degree present.
pub(super) fn rehomogenize(h: &MultiPoly, x: usize, w: &[i64]) -> MultiPoly {
    let wdeg = |m: &Monomial| -> i64 { m.0.iter().zip(w).map(|(&e, &wi)| e as i64 * wi).sum() };
    let Some(top) = h.terms.keys().map(wdeg).max() else { return h.clone() };
    let terms: BTreeMap<Monomial, _> = h
        .terms
        .iter()
        .map(|(m, c)| {
            let mut e = m.0.to_vec();
            e[x] += (top - wdeg(m)) as u32;
            (Monomial::new(e), c.clone())
        })
        .collect();
    h.with_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(e: &str) -> MultiPoly {
        MultiPoly::parse(e, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn total_degree_found_first_variable() {
        let (x, w) = find_grading(&p("x^2 + y*z"), &p("x*y - z^2")).unwrap();
        assert_eq!(x, 0);
        assert_eq!(w, vec![1, 1, 1]);
    }

    #[test]
    fn weighted_grading() {
        // weights (1, 2, 3)
        let (x, w) = find_grading(&p("x^3 + x*y + z"), &p("y^3 - z^2 + x^2*y^2")).unwrap();
        assert_eq!((x, w), (0, vec![1, 2, 3]));
    }

    #[test]
    fn no_grading_for_inhomogeneous() {
        assert!(find_grading(&p("x^2 + y"), &p("x + y^2")).is_none());
    }

    #[test]
    fn rehomogenize_inverts_dehomogenize() {
        let f = p("x^3*z + 2*x*y^2*z - z^4 + y^3*z");
        let d = f.eval_var_integer(0, &1.into());
        assert_eq!(rehomogenize(&d, 0, &[1, 1, 1]), f);
    }
}
