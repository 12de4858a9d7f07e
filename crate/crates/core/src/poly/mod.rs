//! Exact multivariate polynomials over the integers.
//!
//! A [`MultiPoly`] carries its own ordered symbol list; every binary operation
//! requires both operands to be declared over the same symbols. Terms are kept
//! in a `BTreeMap` keyed by [`Monomial`], whose ordering is graded
//! lexicographic over the declared symbol order, so the last entry of the map
//! is always the leading term.

mod gcd;
mod grading;
mod json;
mod parse;
mod qpoly;
mod quadext;
mod resultant;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use thiserror::Error;

pub use gcd::{gcd, gcd_many, heuristic_gcd, subresultant_gcd};
pub use json::{PolyJson, TermJson};
pub use qpoly::QPoly;
pub use quadext::QuadExtPoly;
pub use resultant::resultant;

use crate::numeric::Scalar;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("symbol sets differ: {left:?} vs {right:?}")]
    SymbolMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("inexact division: divisor does not divide dividend exactly")]
    InexactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}

/// Exponent vector, one entry per declared symbol.
///
/// Ordered graded-lexicographically: higher total degree is larger; ties are
/// broken by comparing exponents left to right, larger exponent first.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn new(exps: impl Into<Box<[u32]>>) -> Self {
        Monomial(exps.into())
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if b > a {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out.into_boxed_slice()))
    }

    /// Componentwise minimum: the gcd of two monomials.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact polynomial with arbitrary-precision integer coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    symbols: Arc<[String]>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero(symbols: &[impl AsRef<str>]) -> Self {
        MultiPoly {
            symbols: symbols.iter().map(|s| s.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(symbols: &[impl AsRef<str>], c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(symbols);
        let c = c.into();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(p.nvars()), c);
        }
        p
    }

    pub fn one(symbols: &[impl AsRef<str>]) -> Self {
        Self::constant(symbols, 1)
    }

    /// The polynomial consisting of the single symbol `name`.
    pub fn var(symbols: &[impl AsRef<str>], name: &str) -> Result<Self, PolyError> {
        let mut p = Self::zero(symbols);
        let idx = p.symbol_index(name)?;
        let mut e = vec![0; p.nvars()];
        e[idx] = 1;
        p.terms.insert(Monomial::new(e), BigInt::one());
        Ok(p)
    }

    /// One variable polynomial per declared symbol, in order.
    pub fn vars(symbols: &[impl AsRef<str>]) -> Vec<Self> {
        let zero = Self::zero(symbols);
        (0..zero.nvars())
            .map(|i| {
                let mut p = zero.clone();
                let mut e = vec![0; zero.nvars()];
                e[i] = 1;
                p.terms.insert(Monomial::new(e), BigInt::one());
                p
            })
            .collect()
    }

    pub fn from_terms(
        symbols: &[impl AsRef<str>],
        terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
    ) -> Result<Self, PolyError> {
        let mut p = Self::zero(symbols);
        p.check_symbols_distinct()?;
        for (e, c) in terms {
            if e.len() != p.nvars() {
                return Err(PolyError::Json(format!(
                    "exponent vector of length {} for {} symbols",
                    e.len(),
                    p.nvars()
                )));
            }
            p.add_term(Monomial::new(e), c);
        }
        Ok(p)
    }

    fn with_terms(&self, terms: BTreeMap<Monomial, BigInt>) -> Self {
        MultiPoly {
            symbols: self.symbols.clone(),
            terms,
        }
    }

    fn check_symbols_distinct(&self) -> Result<(), PolyError> {
        for (i, s) in self.symbols.iter().enumerate() {
            if self.symbols[..i].contains(s) {
                return Err(PolyError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(())
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn nvars(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol_index(&self, name: &str) -> Result<usize, PolyError> {
        self.symbols
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| PolyError::UnknownSymbol(name.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms
            .get(&Monomial::one(self.nvars()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_default()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn max_coeff_abs(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn ensure_same_symbols(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.symbols, &other.symbols) || self.symbols == other.symbols {
            Ok(())
        } else {
            Err(PolyError::SymbolMismatch {
                left: self.symbols.to_vec(),
                right: other.symbols.to_vec(),
            })
        }
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.ensure_same_symbols(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.ensure_same_symbols(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.ensure_same_symbols(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.with_terms(BTreeMap::new()));
        }
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.terms.len() == 1 {
            let (m, c) = small.terms.iter().next().unwrap();
            return Ok(large.mul_term(m, c));
        }
        let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
        acc.reserve(small.terms.len() * large.terms.len() / 2);
        for (m1, c1) in &small.terms {
            for (m2, c2) in &large.terms {
                let prod = c1 * c2;
                *acc.entry(m1.mul(m2)).or_default() += prod;
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(self.with_terms(terms))
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> MultiPoly {
        if c.is_zero() {
            return self.with_terms(BTreeMap::new());
        }
        self.with_terms(self.terms.iter().map(|(m2, c2)| (m.mul(m2), c * c2)).collect())
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        self.mul_term(&Monomial::one(self.nvars()), c)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = Self::one(&self.symbols);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Divides every coefficient by the integer `d`; fails unless all are multiples of it.
    pub fn div_integer_exact(&self, d: &BigInt) -> Result<MultiPoly, PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return Err(PolyError::InexactDivision);
            }
            terms.insert(m.clone(), q);
        }
        Ok(self.with_terms(terms))
    }

    /// Exact quotient `self / g` by leading-term elimination.
    pub fn exact_div(&self, g: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.ensure_same_symbols(g)?;
        let (lm, lc) = g.leading_term().ok_or(PolyError::DivisionByZero)?;
        if g.terms.len() == 1 {
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                let qm = m.checked_div(lm).ok_or(PolyError::InexactDivision)?;
                let (qc, r) = c.div_rem(lc);
                if !r.is_zero() {
                    return Err(PolyError::InexactDivision);
                }
                terms.insert(qm, qc);
            }
            return Ok(self.with_terms(terms));
        }
        // Cheap necessary conditions before the full elimination.
        if let (Some(df), Some(dg)) = (self.total_degree(), g.total_degree()) {
            if dg > df {
                return Err(PolyError::InexactDivision);
            }
        }
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        let rest: Vec<(&Monomial, &BigInt)> = g.terms.iter().rev().skip(1).collect();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.checked_div(lm).ok_or(PolyError::InexactDivision)?;
            let (qc, r) = c.div_rem(lc);
            if !r.is_zero() {
                return Err(PolyError::InexactDivision);
            }
            for (gm, gc) in &rest {
                let prod = &qc * *gc;
                let key = qm.mul(gm);
                use std::collections::btree_map::Entry;
                match rem.entry(key) {
                    Entry::Vacant(v) => {
                        v.insert(-prod);
                    }
                    Entry::Occupied(mut o) => {
                        *o.get_mut() -= prod;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            quot.insert(qm, qc);
        }
        Ok(self.with_terms(quot))
    }

    pub fn divides(&self, f: &MultiPoly) -> bool {
        f.exact_div(self).is_ok()
    }

    /// gcd of all integer coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the integer content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.div_integer_exact(&c).expect("content divides every coefficient")
    }

    /// Largest monomial dividing every term, and the cofactor.
    pub fn monomial_content(&self) -> (Monomial, MultiPoly) {
        let mut iter = self.terms.keys();
        let Some(first) = iter.next() else {
            return (Monomial::one(self.nvars()), self.clone());
        };
        let m = iter.fold(first.clone(), |acc, x| acc.gcd(x));
        let rest = self.with_terms(
            self.terms
                .iter()
                .map(|(k, c)| (k.checked_div(&m).unwrap(), c.clone()))
                .collect(),
        );
        (m, rest)
    }

    pub fn from_monomial(&self, m: Monomial, c: BigInt) -> MultiPoly {
        let mut p = self.with_terms(BTreeMap::new());
        p.add_term(m, c);
        p
    }

    /// When `self = k * other` for a nonzero rational k, returns (num, den) of k.
    pub fn ratio_to(&self, other: &MultiPoly) -> Option<(BigInt, BigInt)> {
        if self.symbols != other.symbols || self.terms.len() != other.terms.len() {
            return None;
        }
        let (lm, lc) = self.leading_term()?;
        let (om, oc) = other.leading_term()?;
        if lm != om {
            return None;
        }
        // self * oc == other * lc, termwise
        for ((m1, c1), (m2, c2)) in self.terms.iter().zip(other.terms.iter()) {
            if m1 != m2 || c1 * oc != c2 * lc {
                return None;
            }
        }
        let g = lc.gcd(oc);
        let (mut n, mut d) = (lc / &g, oc / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Some((n, d))
    }

    pub fn equal_up_to_constant(&self, other: &MultiPoly) -> bool {
        self.ratio_to(other).is_some()
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs(&self, mut f: impl FnMut(&BigInt) -> BigInt) -> MultiPoly {
        self.with_terms(
            self.terms
                .iter()
                .filter_map(|(m, c)| {
                    let v = f(c);
                    (!v.is_zero()).then(|| (m.clone(), v))
                })
                .collect(),
        )
    }

    /// Re-expresses the polynomial over `symbols`, which must contain every
    /// symbol this polynomial actually uses.
    pub fn embed(&self, symbols: &[impl AsRef<str>]) -> Result<MultiPoly, PolyError> {
        let target = MultiPoly::zero(symbols);
        target.check_symbols_distinct()?;
        let mut map = Vec::with_capacity(self.nvars());
        for (i, s) in self.symbols.iter().enumerate() {
            match target.symbols.iter().position(|t| t == s) {
                Some(j) => map.push(Some(j)),
                None if self.involves(i) => return Err(PolyError::UnknownSymbol(s.clone())),
                None => map.push(None),
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; target.nvars()];
                for (i, &x) in m.0.iter().enumerate() {
                    if let Some(j) = map[i] {
                        e[j] = x;
                    }
                }
                (Monomial::new(e), c.clone())
            })
            .collect();
        Ok(target.with_terms(terms))
    }

    /// Coefficients of `self` as a polynomial in `var`; entry k multiplies var^k.
    pub fn to_univariate(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![self.with_terms(BTreeMap::new()); deg + 1];
        if self.is_zero() {
            return vec![];
        }
        for (m, c) in &self.terms {
            let k = m.0[var] as usize;
            let mut e = m.0.to_vec();
            e[var] = 0;
            out[k].terms.insert(Monomial::new(e), c.clone());
        }
        out
    }

    pub fn from_univariate(coeffs: &[MultiPoly], var: usize, symbols: &[String]) -> MultiPoly {
        let mut p = MultiPoly::zero(symbols);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut e = m.0.to_vec();
                e[var] += k as u32;
                p.add_term(Monomial::new(e), v.clone());
            }
        }
        p
    }

    /// Substitutes the integer `value` for symbol `var`; the symbol stays declared.
    pub fn eval_var_integer(&self, var: usize, value: &BigInt) -> MultiPoly {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut powers = Vec::with_capacity(deg + 1);
        let mut acc = BigInt::one();
        for _ in 0..=deg {
            powers.push(acc.clone());
            acc *= value;
        }
        let mut out = self.with_terms(BTreeMap::new());
        for (m, c) in &self.terms {
            let mut e = m.0.to_vec();
            let k = e[var] as usize;
            e[var] = 0;
            out.add_term(Monomial::new(e), c * &powers[k]);
        }
        out
    }

    /// Symbolic substitution. Every symbol of `self` is either bound in
    /// `bindings` (to a polynomial over `target`) or retained, in which case it
    /// must also be a symbol of `target`.
    pub fn substitute(
        &self,
        bindings: &[(&str, MultiPoly)],
        target: &[impl AsRef<str>],
    ) -> Result<MultiPoly, PolyError> {
        let zero = MultiPoly::zero(target);
        let mut images = Vec::with_capacity(self.nvars());
        for (i, s) in self.symbols.iter().enumerate() {
            if let Some((_, p)) = bindings.iter().find(|(name, _)| name == s) {
                images.push(p.embed(target)?);
            } else if self.involves(i) {
                images.push(MultiPoly::var(target, s)?);
            } else {
                images.push(zero.clone());
            }
        }
        // cache powers per variable
        let mut cache: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|p| vec![MultiPoly::one(target), p.clone()])
            .collect();
        let mut out = zero.clone();
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while cache[i].len() <= e {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                term = &term * &cache[i][e];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Numeric evaluation with one value per declared symbol.
    pub fn eval<S: Scalar>(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars(), "one value per symbol");
        let ctx = point.first().map(Scalar::ctx).unwrap_or_default();
        let mut total = S::zero(ctx);
        let maxdeg: Vec<usize> = (0..self.nvars())
            .map(|i| self.degree_in(i).unwrap_or(0) as usize)
            .collect();
        let powers: Vec<Vec<S>> = point
            .iter()
            .zip(&maxdeg)
            .map(|(x, &d)| {
                let mut v = vec![S::one(ctx)];
                for k in 0..d {
                    let next = v[k].clone() * x.clone();
                    v.push(next);
                }
                v
            })
            .collect();
        for (m, c) in &self.terms {
            let mut t = S::from_bigint(c, ctx);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t * powers[i][e as usize].clone();
                }
            }
            total = total + t;
        }
        total
    }

    pub fn eval_c64(&self, point: &[Complex64]) -> Complex64 {
        self.eval(point)
    }

    /// Numeric evaluation with values given by symbol name.
    pub fn eval_named(&self, values: &[(&str, Complex64)]) -> Result<Complex64, PolyError> {
        let mut point = Vec::with_capacity(self.nvars());
        for (i, s) in self.symbols.iter().enumerate() {
            match values.iter().find(|(n, _)| n == s) {
                Some((_, v)) => point.push(*v),
                None if self.involves(i) => return Err(PolyError::UnknownSymbol(s.clone())),
                None => point.push(Complex64::new(0.0, 0.0)),
            }
        }
        Ok(self.eval_c64(&point))
    }

    /// Coefficients as f64 (lossy), for numeric work on large integers.
    pub fn coeff_f64(c: &BigInt) -> f64 {
        c.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            for (s, &e) in self.symbols.iter().zip(m.0.iter()) {
                match e {
                    0 => {}
                    1 => factors.push(s.clone()),
                    _ => factors.push(format!("{s}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.symbols.join(","), self)
    }
}

// Operator impls panic on mismatched symbol sets; use the `try_*` methods
// where the symbol sets are not already known to agree.
impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("symbol sets must agree")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("symbol sets must agree")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("symbol sets must agree")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.map_coeffs(|c| -c)
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// `g * gp_n - gp * g_n`
pub fn wedge(g: &MultiPoly, g_n: &MultiPoly, gp: &MultiPoly, gp_n: &MultiPoly) -> MultiPoly {
    &(g * gp_n) - &(gp * g_n)
}
