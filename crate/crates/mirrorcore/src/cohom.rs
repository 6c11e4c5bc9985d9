//! Truncated polynomial cohomology coefficients.
//!
//! I-functions take values in a ring of the form
//!
//!   Q[p_1, ..., p_g] / (p_1^{k_1}, ..., p_g^{k_g}),
//!
//! the presentation of an ambient cohomology ring truncated at the orders the
//! identities are verified in ("mod H^3, P^2" style statements). Elements are
//! finite sums  sum_e  c_e * p^e  with exact rational coefficients; any
//! product monomial with e_i >= k_i vanishes.
//!
//! Operations:
//!   - ring arithmetic (add, sub, cmul, pow, scalar action)
//!   - inversion of elements with invertible scalar part, via the finite
//!     geometric series (1 + n)^(-1) = sum (-n)^j over the nilpotency bound
//!   - extraction of a named coefficient
//!   - substitution of one generator by an element of a target algebra,
//!     used for identities that set the exceptional class to a linear
//!     combination of base classes.

use crate::rat::{q_to_string, Q};
use num::traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CohomError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("element has zero scalar part and is not invertible")]
    NonInvertible,
}

// ============================================================
// Algebra descriptor
// ============================================================

/// A finite list of nilpotent generators. `order` is the vanishing power:
/// p^order = 0 (so order = 3 keeps 1, p, p^2).
#[derive(Debug, PartialEq, Eq)]
pub struct NilpotentAlgebra {
    gens: Vec<(String, u16)>,
}

impl NilpotentAlgebra {
    pub fn new(gens: &[(&str, u16)]) -> Arc<Self> {
        assert!(!gens.is_empty(), "algebra needs at least one generator");
        for (name, order) in gens {
            assert!(*order >= 1, "generator `{name}` needs order >= 1");
        }
        let mut seen: Vec<&str> = Vec::new();
        for (name, _) in gens {
            assert!(!seen.contains(name), "duplicate generator `{name}`");
            seen.push(name);
        }
        Arc::new(Self {
            gens: gens.iter().map(|(n, o)| (n.to_string(), *o)).collect(),
        })
    }

    pub fn gen_count(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_name(&self, i: usize) -> &str {
        &self.gens[i].0
    }

    pub fn gen_order(&self, i: usize) -> u16 {
        self.gens[i].1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|(n, _)| n == name)
    }

    /// Largest total degree of a nonzero monomial: sum (k_i - 1).
    pub fn nilpotency_bound(&self) -> u32 {
        self.gens.iter().map(|(_, o)| (*o as u32) - 1).sum()
    }

    fn monomial_in_bounds(&self, exps: &[u16]) -> bool {
        exps.iter()
            .zip(self.gens.iter())
            .all(|(e, (_, o))| e < o)
    }
}

// ============================================================
// Elements
// ============================================================

/// An element of a `NilpotentAlgebra`: a map from exponent vectors to
/// nonzero rational coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone)]
pub struct CohomElement {
    alg: Arc<NilpotentAlgebra>,
    terms: BTreeMap<Vec<u16>, Q>,
}

impl PartialEq for CohomElement {
    fn eq(&self, other: &Self) -> bool {
        self.alg == other.alg && self.terms == other.terms
    }
}

impl CohomElement {
    pub fn zero(alg: &Arc<NilpotentAlgebra>) -> Self {
        Self {
            alg: Arc::clone(alg),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(alg: &Arc<NilpotentAlgebra>, c: Q) -> Self {
        let mut out = Self::zero(alg);
        if !c.is_zero() {
            out.terms.insert(vec![0; alg.gen_count()], c);
        }
        out
    }

    pub fn one(alg: &Arc<NilpotentAlgebra>) -> Self {
        Self::scalar(alg, Q::one())
    }

    pub fn generator(alg: &Arc<NilpotentAlgebra>, name: &str) -> Result<Self, CohomError> {
        let i = alg
            .index_of(name)
            .ok_or_else(|| CohomError::UnknownGenerator(name.to_string()))?;
        let mut out = Self::zero(alg);
        if alg.gen_order(i) > 1 {
            let mut exps = vec![0u16; alg.gen_count()];
            exps[i] = 1;
            out.terms.insert(exps, Q::one());
        }
        Ok(out)
    }

    /// sum_i c_i * p_{name_i} as an element (a degree-one form).
    pub fn linear_form(
        alg: &Arc<NilpotentAlgebra>,
        combo: &[(Q, &str)],
    ) -> Result<Self, CohomError> {
        let mut out = Self::zero(alg);
        for (c, name) in combo {
            let g = Self::generator(alg, name)?;
            out = out.add(&g.scale(c));
        }
        Ok(out)
    }

    pub fn algebra(&self) -> &Arc<NilpotentAlgebra> {
        &self.alg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial with the given exponents (zero padded on
    /// the right if fewer exponents than generators are given).
    pub fn coeff(&self, exps: &[u16]) -> Q {
        let mut key = vec![0u16; self.alg.gen_count()];
        key[..exps.len()].copy_from_slice(exps);
        self.terms.get(&key).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scalar_part(&self) -> Q {
        self.coeff(&[])
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&Vec<u16>, &Q)> {
        self.terms.iter()
    }

    fn insert_term(&mut self, exps: Vec<u16>, c: Q) {
        if c.is_zero() || !self.alg.monomial_in_bounds(&exps) {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.alg == other.alg, "algebra mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero(&self.alg);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.clone() * k;
        }
        out
    }

    /// Ring product; monomials that leave the truncation vanish.
    pub fn cmul(&self, other: &Self) -> Self {
        assert!(self.alg == other.alg, "algebra mismatch");
        let mut out = Self::zero(&self.alg);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut e = e1.clone();
                let mut fits = true;
                for (i, x) in e.iter_mut().enumerate() {
                    *x += e2[i];
                    if *x >= self.alg.gen_order(i) {
                        fits = false;
                        break;
                    }
                }
                if fits {
                    out.insert_term(e, c1 * c2);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.alg);
        for _ in 0..k {
            out = out.cmul(self);
        }
        out
    }

    /// Inverse of an element whose scalar part is nonzero. Writes
    /// u = s(1 + n) with n nilpotent and sums the finite geometric series.
    pub fn inv(&self) -> Result<Self, CohomError> {
        let s = self.scalar_part();
        if s.is_zero() {
            return Err(CohomError::NonInvertible);
        }
        let s_inv = s.recip();
        // n = u/s - 1
        let n = self.scale(&s_inv).sub(&Self::one(&self.alg));
        let mut acc = Self::one(&self.alg);
        let mut pw = Self::one(&self.alg);
        for _ in 0..self.alg.nilpotency_bound() {
            pw = pw.cmul(&n).neg();
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw);
        }
        Ok(acc.scale(&s_inv))
    }

    /// Substitute the named generator by `image` (an element of `target`),
    /// mapping every other generator to the target generator of the same
    /// name. The result lives in `target` and is re-truncated there.
    pub fn subst_generator(
        &self,
        name: &str,
        target: &Arc<NilpotentAlgebra>,
        image: &CohomElement,
    ) -> Result<CohomElement, CohomError> {
        assert!(image.alg == *target, "image must live in the target algebra");
        let src_idx = self
            .alg
            .index_of(name)
            .ok_or_else(|| CohomError::UnknownGenerator(name.to_string()))?;
        // Map every non-substituted source generator to its namesake.
        let mut gen_map: Vec<Option<usize>> = Vec::new();
        for i in 0..self.alg.gen_count() {
            if i == src_idx {
                gen_map.push(None);
            } else {
                let j = target
                    .index_of(self.alg.gen_name(i))
                    .ok_or_else(|| CohomError::UnknownGenerator(self.alg.gen_name(i).into()))?;
                gen_map.push(Some(j));
            }
        }
        let mut out = CohomElement::zero(target);
        for (e, c) in &self.terms {
            let mut base = CohomElement::scalar(target, c.clone());
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                match gen_map[i] {
                    None => base = base.cmul(&image.pow(ei as u32)),
                    Some(j) => {
                        let mut exps = vec![0u16; target.gen_count()];
                        exps[j] = ei;
                        let mut mono = CohomElement::zero(target);
                        if target.monomial_in_bounds(&exps) {
                            mono.terms.insert(exps, Q::one());
                        }
                        base = base.cmul(&mono);
                    }
                }
                if base.is_zero() {
                    break;
                }
            }
            out = out.add(&base);
        }
        Ok(out)
    }
}

impl fmt::Display for CohomElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, x)| **x > 0)
                .map(|(i, x)| {
                    if *x == 1 {
                        self.alg.gen_name(i).to_string()
                    } else {
                        format!("{}^{}", self.alg.gen_name(i), x)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", q_to_string(c))?;
            } else {
                write!(f, "{}*{}", q_to_string(c), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

// ============================================================
// Tests
// ============================================================
