//! Exact multivariate polynomials and rational functions over Q.
//!
//! This is the small symbolic toolkit behind the functional-invariant product
//! relations, the Hurwitz-profile normal forms, and the Landau-Ginzburg
//! potential transformations. Those checks are identities of rational
//! functions in a handful of variables, so the representation is deliberately
//! plain:
//!
//!   - `MPoly`: sum of monomials with nonnegative exponents, coefficients
//!     in Q, zero coefficients never stored;
//!   - `RationalFunc`: a pair num/den of polynomials, den nonzero, reduced
//!     only by stripping the common monomial content (no gcd computation);
//!     equality is decided exactly by cross-multiplication.
//!
//! Substitution of a rational function for a variable is total and exact.
//! All inputs in the identity checks have tiny degrees, so the absence of
//! full gcd reduction never hurts.

use crate::rat::{q_to_string, Q};
use num::traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

// ============================================================
// Polynomial ring
// ============================================================

/// An ordered list of variable names shared by all polynomials in a check.
#[derive(Debug, PartialEq, Eq)]
pub struct PolyRing {
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new(vars: &[&str]) -> Arc<Self> {
        let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        for (i, a) in names.iter().enumerate() {
            for b in names.iter().skip(i + 1) {
                assert!(a != b, "duplicate variable `{a}`");
            }
        }
        Arc::new(PolyRing { vars: names })
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i]
    }
}

// ============================================================
// Polynomials
// ============================================================

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl MPoly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        MPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Q) -> Self {
        let mut p = MPoly::zero(ring);
        p.add_term(vec![0; ring.n_vars()], c);
        p
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        MPoly::constant(ring, Q::one())
    }

    pub fn var(ring: &Arc<PolyRing>, name: &str) -> Self {
        let i = ring
            .index(name)
            .unwrap_or_else(|| panic!("ring has no variable `{name}`"));
        let mut exps = vec![0; ring.n_vars()];
        exps[i] = 1;
        let mut p = MPoly::zero(ring);
        p.add_term(exps, Q::one());
        p
    }

    pub fn monomial(ring: &Arc<PolyRing>, exps: Vec<u32>, c: Q) -> Self {
        assert_eq!(exps.len(), ring.n_vars(), "exponent arity mismatch");
        let mut p = MPoly::zero(ring);
        p.add_term(exps, c);
        p
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Q) {
        assert_eq!(exps.len(), self.ring.n_vars(), "exponent arity mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn same_ring(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "polynomials from different rings"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = MPoly::zero(&self.ring);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return MPoly::zero(&self.ring);
        }
        let mut out = MPoly::zero(&self.ring);
        for (e, k) in &self.terms {
            out.terms.insert(e.clone(), k.clone() * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_ring(other);
        let mut out = MPoly::zero(&self.ring);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps: Vec<u32> = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                out.add_term(exps, c1.clone() * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = MPoly::one(&self.ring);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        let i = self
            .ring
            .index(name)
            .unwrap_or_else(|| panic!("ring has no variable `{name}`"));
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Replace `name` by a rational function; the result is rational.
    /// The substitution is simultaneous over all occurrences of `name`;
    /// later substitutions see whatever the image introduced.
    pub fn subst(&self, name: &str, image: &RationalFunc) -> RationalFunc {
        let i = self
            .ring
            .index(name)
            .unwrap_or_else(|| panic!("ring has no variable `{name}`"));
        // Group terms by the exponent of the substituted variable.
        let mut by_exp: BTreeMap<u32, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[i];
            let mut rest = e.clone();
            rest[i] = 0;
            by_exp
                .entry(k)
                .or_insert_with(|| MPoly::zero(&self.ring))
                .add_term(rest, c.clone());
        }
        let mut out = RationalFunc::zero(&self.ring);
        for (k, poly) in by_exp {
            let term = RationalFunc::from_poly(poly).mul(&image.pow(k as i64));
            out = out.add(&term);
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let cs = q_to_string(c);
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", cs),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let mut parts: Vec<String> = Vec::new();
            for (i, k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => parts.push(self.ring.name(i).to_string()),
                    _ => parts.push(format!("{}^{}", self.ring.name(i), k)),
                }
            }
            if parts.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag == "1" {
                write!(f, "{}", parts.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, parts.join("*"))?;
            }
        }
        Ok(())
    }
}

// ============================================================
// Rational functions
// ============================================================

#[derive(Debug, Clone)]
pub struct RationalFunc {
    num: MPoly,
    den: MPoly,
}

impl RationalFunc {
    /// num/den with the common monomial content stripped. Panics if den = 0.
    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        num.same_ring(&den);
        if num.is_zero() {
            return RationalFunc {
                num,
                den: MPoly::one(den.ring()),
            };
        }
        // Per variable, the largest monomial dividing both num and den.
        let n = num.ring().n_vars();
        let mut common = vec![u32::MAX; n];
        for (e, _) in num.iter_terms().chain(den.iter_terms()) {
            for (i, k) in e.iter().enumerate() {
                common[i] = common[i].min(*k);
            }
        }
        if common.iter().all(|&k| k == 0) {
            return RationalFunc { num, den };
        }
        let strip = |p: &MPoly| {
            let mut out = MPoly::zero(p.ring());
            for (e, c) in p.iter_terms() {
                let exps: Vec<u32> = e.iter().zip(common.iter()).map(|(a, b)| a - b).collect();
                out.terms.insert(exps, c.clone());
            }
            out
        };
        RationalFunc {
            num: strip(&num),
            den: strip(&den),
        }
    }

    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        RationalFunc {
            num: MPoly::zero(ring),
            den: MPoly::one(ring),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        RationalFunc::from_poly(MPoly::one(ring))
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Q) -> Self {
        RationalFunc::from_poly(MPoly::constant(ring, c))
    }

    pub fn var(ring: &Arc<PolyRing>, name: &str) -> Self {
        RationalFunc::from_poly(MPoly::var(ring, name))
    }

    pub fn from_poly(p: MPoly) -> Self {
        let one = MPoly::one(p.ring());
        RationalFunc { num: p, den: one }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.num.ring()
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero rational function");
        RationalFunc::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational function");
        RationalFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Q) -> Self {
        RationalFunc::new(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut out = RationalFunc::one(self.ring());
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Exact equality, decided by cross-multiplication.
    pub fn eq_exact(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Replace `name` by a rational function, in num and den.
    pub fn subst_var(&self, name: &str, image: &RationalFunc) -> Self {
        let n = self.num.subst(name, image);
        let d = self.den.subst(name, image);
        assert!(
            !d.is_zero(),
            "substitution for `{name}` sends the denominator to zero"
        );
        n.div(&d)
    }

    /// If self = c * prod v_i^{k_i} with c != 0, return (c, signed exponents).
    /// Used to accept normal forms up to an invertible monomial factor.
    ///
    /// Complete even for unreduced fractions: if num = c * x^k * den as
    /// polynomials, then the lex-least terms of num and den stand in exactly
    /// that ratio, so the candidate read off from them is the only possible
    /// monomial value, and one cross-multiplication verifies it.
    pub fn as_monomial(&self) -> Option<(Q, Vec<i64>)> {
        if self.num.is_zero() {
            return None;
        }
        let (en, cn) = self.num.iter_terms().next().unwrap();
        let (ed, cd) = self.den.iter_terms().next().unwrap();
        let c = cn.clone() / cd.clone();
        let exps: Vec<i64> = en
            .iter()
            .zip(ed.iter())
            .map(|(a, b)| *a as i64 - *b as i64)
            .collect();
        let pos: Vec<u32> = exps.iter().map(|&k| k.max(0) as u32).collect();
        let neg: Vec<u32> = exps.iter().map(|&k| (-k).max(0) as u32).collect();
        let lhs = self.num.mul(&MPoly::monomial(self.ring(), neg, Q::one()));
        let rhs = self.den.mul(&MPoly::monomial(self.ring(), pos, c.clone()));
        if lhs == rhs {
            Some((c, exps))
        } else {
            None
        }
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == MPoly::one(self.ring()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

// ============================================================
// Tests
// ============================================================
