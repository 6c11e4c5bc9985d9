//! Truncated multivariate series with Laurent variables and formal logs.
//!
//! The series ring underlying every identity in this crate:
//!
//!   - deformation variables q_1, ..., q_k: exponents >= 0, truncated by a
//!     joint total degree bound;
//!   - Laurent variables y_1, ..., y_l: integer exponents confined to a
//!     per-variable window [lo, hi] with lo <= 0 <= hi;
//!   - formal log symbols, each tied to one of the variables above: exponents
//!     >= 0, truncated by a joint total degree bound. "log q" never expands;
//!     it only participates through theta derivatives and linear remappings.
//!
//! Coefficients come from any exact ring implementing `Coeff` (rationals, or
//! truncated cohomology elements for I-functions).
//!
//! Truncation semantics: addition and multiplication silently clip results to
//! the truncation box. Residue extraction and substitution are strict and
//! return typed errors when information would be lost, because those are the
//! points where clipping would corrupt an identity rather than truncate it.
//!
//! Key operations:
//!   mul             truncated product
//!   hadamard        Hadamard product in a subset S of deformation variables:
//!                   terms pair only when their q_S-exponents agree, which
//!                   stay fixed while all other exponents add
//!   constant_term   coefficient extraction in one Laurent variable (the
//!                   formal residue against dy/y picks the y^0 coefficient)
//!   theta           q d/dq, lowering tied log symbols
//!   map_log         linear change of log symbols, e.g. log q0 -> log q0 - log y

use crate::cohom::CohomElement;
use crate::rat::{q_to_string, Q};
use num::traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("unknown variable `{0}`")]
    UnknownVar(String),
    #[error("substitution pushed `{var}` to exponent {exp} outside its window")]
    WindowOverflow { var: String, exp: i32 },
    #[error("substitution pushed total q-degree to {0} beyond the truncation")]
    DegreeOverflow(u32),
    #[error("residue in `{var}` hit a surviving log symbol `{log}`")]
    LogInResidue { var: String, log: String },
}

// ============================================================
// Variable tables and truncation boxes
// ============================================================

/// Which variable a log symbol is the log of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarSlot {
    Defo(usize),
    Laurent(usize),
}

#[derive(Debug, PartialEq, Eq)]
pub struct LogSym {
    pub name: String,
    pub of: VarSlot,
}

/// Ordered variable layout of a series: exponent vectors are
/// [deformation..., laurent..., logs...].
#[derive(Debug, PartialEq, Eq)]
pub struct VarTable {
    defo: Vec<String>,
    laurent: Vec<String>,
    logs: Vec<LogSym>,
}

impl VarTable {
    /// `logs` are (log-name, of-variable-name) pairs; the referenced variable
    /// must exist among `defo` or `laurent`.
    pub fn new(defo: &[&str], laurent: &[&str], logs: &[(&str, &str)]) -> Arc<Self> {
        let mut all: Vec<&str> = Vec::new();
        for n in defo.iter().chain(laurent.iter()) {
            assert!(!all.contains(n), "duplicate variable `{n}`");
            all.push(n);
        }
        let logs = logs
            .iter()
            .map(|(name, of)| {
                assert!(!all.contains(name), "log name `{name}` shadows a variable");
                let of = if let Some(i) = defo.iter().position(|v| v == of) {
                    VarSlot::Defo(i)
                } else if let Some(i) = laurent.iter().position(|v| v == of) {
                    VarSlot::Laurent(i)
                } else {
                    panic!("log `{name}` refers to unknown variable `{of}`");
                };
                LogSym {
                    name: name.to_string(),
                    of,
                }
            })
            .collect();
        Arc::new(Self {
            defo: defo.iter().map(|s| s.to_string()).collect(),
            laurent: laurent.iter().map(|s| s.to_string()).collect(),
            logs,
        })
    }

    pub fn n_defo(&self) -> usize {
        self.defo.len()
    }
    pub fn n_laurent(&self) -> usize {
        self.laurent.len()
    }
    pub fn n_logs(&self) -> usize {
        self.logs.len()
    }
    pub fn width(&self) -> usize {
        self.defo.len() + self.laurent.len() + self.logs.len()
    }

    pub fn defo_index(&self, name: &str) -> Option<usize> {
        self.defo.iter().position(|v| v == name)
    }
    pub fn laurent_index(&self, name: &str) -> Option<usize> {
        self.laurent.iter().position(|v| v == name)
    }
    pub fn log_index(&self, name: &str) -> Option<usize> {
        self.logs.iter().position(|l| l.name == name)
    }

    pub fn defo_name(&self, i: usize) -> &str {
        &self.defo[i]
    }
    pub fn laurent_name(&self, i: usize) -> &str {
        &self.laurent[i]
    }
    pub fn log_name(&self, i: usize) -> &str {
        &self.logs[i].name
    }
    pub fn log_of(&self, i: usize) -> VarSlot {
        self.logs[i].of
    }

    pub fn pos_defo(&self, i: usize) -> usize {
        assert!(i < self.defo.len());
        i
    }
    pub fn pos_laurent(&self, i: usize) -> usize {
        assert!(i < self.laurent.len());
        self.defo.len() + i
    }
    pub fn pos_log(&self, i: usize) -> usize {
        assert!(i < self.logs.len());
        self.defo.len() + self.laurent.len() + i
    }

    /// Log indices tied to the given slot.
    pub fn logs_of(&self, slot: VarSlot) -> Vec<usize> {
        self.logs
            .iter()
            .enumerate()
            .filter(|(_, l)| l.of == slot)
            .map(|(i, _)| i)
            .collect()
    }

    fn var_display(&self, pos: usize) -> &str {
        let nd = self.defo.len();
        let nl = self.laurent.len();
        if pos < nd {
            &self.defo[pos]
        } else if pos < nd + nl {
            &self.laurent[pos - nd]
        } else {
            &self.logs[pos - nd - nl].name
        }
    }

    /// Table with one Laurent variable and its tied logs removed, plus the
    /// positions of the removed columns in the old layout.
    pub fn drop_laurent(&self, idx: usize) -> (Arc<VarTable>, Vec<usize>) {
        assert!(idx < self.laurent.len());
        let mut removed = vec![self.pos_laurent(idx)];
        for li in self.logs_of(VarSlot::Laurent(idx)) {
            removed.push(self.pos_log(li));
        }
        let laurent: Vec<&str> = self
            .laurent
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, v)| v.as_str())
            .collect();
        let defo: Vec<&str> = self.defo.iter().map(|s| s.as_str()).collect();
        let logs: Vec<(&str, &str)> = self
            .logs
            .iter()
            .filter(|l| l.of != VarSlot::Laurent(idx))
            .map(|l| {
                let of = match l.of {
                    VarSlot::Defo(i) => self.defo[i].as_str(),
                    VarSlot::Laurent(i) => self.laurent[i].as_str(),
                };
                (l.name.as_str(), of)
            })
            .collect();
        (VarTable::new(&defo, &laurent, &logs), removed)
    }
}

/// Truncation box. `windows[i]` bounds the i-th Laurent exponent, and must
/// contain 0 so that units exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncSpec {
    pub q_total: u32,
    pub windows: Vec<(i32, i32)>,
    pub log_total: u32,
}

impl TruncSpec {
    pub fn new(q_total: u32, windows: Vec<(i32, i32)>, log_total: u32) -> Self {
        for (lo, hi) in &windows {
            assert!(*lo <= 0 && 0 <= *hi, "window must contain 0");
        }
        Self {
            q_total,
            windows,
            log_total,
        }
    }

    /// Box for series in deformation variables only.
    pub fn q_only(q_total: u32) -> Self {
        Self::new(q_total, Vec::new(), 0)
    }

    fn admits(&self, vt: &VarTable, exps: &[i32]) -> bool {
        debug_assert_eq!(exps.len(), vt.width());
        debug_assert_eq!(self.windows.len(), vt.n_laurent());
        let nd = vt.n_defo();
        let nl = vt.n_laurent();
        let mut q_deg: i64 = 0;
        for &e in &exps[..nd] {
            if e < 0 {
                return false;
            }
            q_deg += e as i64;
        }
        if q_deg > self.q_total as i64 {
            return false;
        }
        for (i, &e) in exps[nd..nd + nl].iter().enumerate() {
            let (lo, hi) = self.windows[i];
            if e < lo || e > hi {
                return false;
            }
        }
        let mut l_deg: i64 = 0;
        for &e in &exps[nd + nl..] {
            if e < 0 {
                return false;
            }
            l_deg += e as i64;
        }
        l_deg <= self.log_total as i64
    }

    fn drop_window(&self, idx: usize) -> Self {
        let mut windows = self.windows.clone();
        windows.remove(idx);
        Self {
            q_total: self.q_total,
            windows,
            log_total: self.log_total,
        }
    }
}

// ============================================================
// Coefficient rings
// ============================================================

/// Exact coefficient ring for series.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale_q(&self, k: &Q) -> Self;
    fn show(&self) -> String;
}

impl Coeff for Q {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self.clone()
    }
    fn scale_q(&self, k: &Q) -> Self {
        self * k
    }
    fn show(&self) -> String {
        q_to_string(self)
    }
}

impl Coeff for CohomElement {
    fn is_zero(&self) -> bool {
        CohomElement::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.cmul(other)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
    fn scale_q(&self, k: &Q) -> Self {
        self.scale(k)
    }
    fn show(&self) -> String {
        format!("({self})")
    }
}

// ============================================================
// Series
// ============================================================

#[derive(Debug, Clone)]
pub struct Series<C: Coeff> {
    vars: Arc<VarTable>,
    trunc: TruncSpec,
    terms: BTreeMap<Vec<i32>, C>,
}

pub type QSeries = Series<Q>;
pub type CohomSeries = Series<CohomElement>;

impl<C: Coeff> PartialEq for Series<C> {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.trunc == other.trunc && self.terms == other.terms
    }
}

impl<C: Coeff> Series<C> {
    pub fn zero(vars: &Arc<VarTable>, trunc: &TruncSpec) -> Self {
        assert_eq!(trunc.windows.len(), vars.n_laurent());
        Self {
            vars: Arc::clone(vars),
            trunc: trunc.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }
    pub fn trunc(&self) -> &TruncSpec {
        &self.trunc
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
    pub fn iter_terms(&self) -> impl Iterator<Item = (&Vec<i32>, &C)> {
        self.terms.iter()
    }
    pub fn coeff_at(&self, exps: &[i32]) -> Option<&C> {
        self.terms.get(exps)
    }

    /// Add one term, clipping to the truncation box and dropping zeros.
    pub fn add_term(&mut self, exps: Vec<i32>, c: C) {
        assert_eq!(exps.len(), self.vars.width(), "exponent arity mismatch");
        if c.is_zero() || !self.trunc.admits(&self.vars, &exps) {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add_ref(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn assert_compatible(&self, other: &Self, what: &str) {
        assert!(self.vars == other.vars, "{what}: variable tables differ");
        assert!(self.trunc == other.trunc, "{what}: truncations differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other, "add");
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
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg_ref();
        }
        out
    }

    pub fn scale(&self, k: &Q) -> Self {
        let mut out = Self::zero(&self.vars, &self.trunc);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.scale_q(k));
        }
        out
    }

    /// Multiply every coefficient by a fixed ring element on the left.
    pub fn scale_coeff(&self, k: &C) -> Self {
        let mut out = Self::zero(&self.vars, &self.trunc);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), k.mul_ref(c));
        }
        out
    }

    /// Truncated product. Terms leaving the box are clipped.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_compatible(other, "mul");
        let mut out = Self::zero(&self.vars, &self.trunc);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i32> = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                if self.trunc.admits(&self.vars, &e) {
                    out.add_term(e, c1.mul_ref(c2));
                }
            }
        }
        out
    }

    /// Hadamard product in the deformation variables listed by index in
    /// `subset`: exponents there must match and stay fixed; every other
    /// exponent (other q's, Laurent, logs) adds as in an ordinary product.
    pub fn hadamard(&self, other: &Self, subset: &[usize]) -> Self {
        self.assert_compatible(other, "hadamard");
        for w in subset.windows(2) {
            assert!(w[0] < w[1], "subset must be strictly increasing");
        }
        for &i in subset {
            assert!(i < self.vars.n_defo(), "subset index out of range");
        }
        let mut out = Self::zero(&self.vars, &self.trunc);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                if subset.iter().any(|&i| e1[i] != e2[i]) {
                    continue;
                }
                let e: Vec<i32> = e1
                    .iter()
                    .zip(e2.iter())
                    .enumerate()
                    .map(|(i, (a, b))| if subset.contains(&i) { *a } else { a + b })
                    .collect();
                if self.trunc.admits(&self.vars, &e) {
                    out.add_term(e, c1.mul_ref(c2));
                }
            }
        }
        out
    }

    /// Coefficient of `var^k` in the named Laurent variable, as a series
    /// without that variable. Fails if a tied log symbol survives in any
    /// extracted term.
    pub fn laurent_coefficient(&self, var: &str, k: i32) -> Result<Self, SeriesError> {
        let idx = self
            .vars
            .laurent_index(var)
            .ok_or_else(|| SeriesError::UnknownVar(var.to_string()))?;
        let pos = self.vars.pos_laurent(idx);
        let tied: Vec<usize> = self
            .vars
            .logs_of(VarSlot::Laurent(idx))
            .iter()
            .map(|&li| self.vars.pos_log(li))
            .collect();
        let (new_vars, removed) = self.vars.drop_laurent(idx);
        let new_trunc = self.trunc.drop_window(idx);
        let mut out = Series::zero(&new_vars, &new_trunc);
        for (e, c) in &self.terms {
            if e[pos] != k {
                continue;
            }
            for &lp in &tied {
                if e[lp] != 0 {
                    return Err(SeriesError::LogInResidue {
                        var: var.to_string(),
                        log: self.vars.var_display(lp).to_string(),
                    });
                }
            }
            let mut ne: Vec<i32> = Vec::with_capacity(new_vars.width());
            for (p, &x) in e.iter().enumerate() {
                if !removed.contains(&p) {
                    ne.push(x);
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Formal residue against the measure dy/y: the y^0 coefficient.
    pub fn constant_term(&self, var: &str) -> Result<Self, SeriesError> {
        self.laurent_coefficient(var, 0)
    }

    /// theta_v = v d/dv. Exponent term: e_v * (term); each log symbol tied to
    /// v with exponent k contributes k * (term with that log lowered).
    pub fn theta(&self, var: &str) -> Result<Self, SeriesError> {
        let (pos, slot) = if let Some(i) = self.vars.defo_index(var) {
            (self.vars.pos_defo(i), VarSlot::Defo(i))
        } else if let Some(i) = self.vars.laurent_index(var) {
            (self.vars.pos_laurent(i), VarSlot::Laurent(i))
        } else {
            return Err(SeriesError::UnknownVar(var.to_string()));
        };
        let tied: Vec<usize> = self
            .vars
            .logs_of(slot)
            .iter()
            .map(|&li| self.vars.pos_log(li))
            .collect();
        let mut out = Self::zero(&self.vars, &self.trunc);
        for (e, c) in &self.terms {
            if e[pos] != 0 {
                out.add_term(e.clone(), c.scale_q(&crate::rat::qi(e[pos] as i64)));
            }
            for &lp in &tied {
                if e[lp] > 0 {
                    let mut ne = e.clone();
                    ne[lp] -= 1;
                    out.add_term(ne, c.scale_q(&crate::rat::qi(e[lp] as i64)));
                }
            }
        }
        Ok(out)
    }

    /// Replace the named log symbol L by a linear combination of log symbols,
    /// expanding L^k multinomially. Total log degree is preserved, so no
    /// information can leave the truncation box.
    pub fn map_log(&self, log: &str, image: &[(Q, &str)]) -> Result<Self, SeriesError> {
        let li = self
            .vars
            .log_index(log)
            .ok_or_else(|| SeriesError::UnknownVar(log.to_string()))?;
        let lpos = self.vars.pos_log(li);
        let image_pos: Vec<(Q, usize)> = image
            .iter()
            .map(|(c, name)| {
                self.vars
                    .log_index(name)
                    .map(|j| (c.clone(), self.vars.pos_log(j)))
                    .ok_or_else(|| SeriesError::UnknownVar(name.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let mut out = Self::zero(&self.vars, &self.trunc);
        for (e, c) in &self.terms {
            let k = e[lpos];
            if k == 0 {
                out.add_term(e.clone(), c.clone());
                continue;
            }
            // Expand (sum_j c_j L_j)^k term by term.
            let mut base = e.clone();
            base[lpos] = 0;
            let mut acc: Vec<(Vec<i32>, Q)> = vec![(base, Q::from_integer(1.into()))];
            for _ in 0..k {
                let mut next: Vec<(Vec<i32>, Q)> = Vec::new();
                for (ee, cc) in &acc {
                    for (ic, ip) in &image_pos {
                        let mut ne = ee.clone();
                        ne[*ip] += 1;
                        next.push((ne, cc * ic));
                    }
                }
                acc = next;
            }
            for (ne, factor) in acc {
                out.add_term(ne, c.scale_q(&factor));
            }
        }
        Ok(out)
    }

    /// Substitute q -> q * (monomial in the other variables), the exact
    /// monomial change of variables used to glue charts (for example
    /// q0 -> q0/y). Strict: any term leaving the truncation box is an error.
    pub fn subst_defo_monomial(
        &self,
        var: &str,
        extra: &[(&str, i32)],
    ) -> Result<Self, SeriesError> {
        let di = self
            .vars
            .defo_index(var)
            .ok_or_else(|| SeriesError::UnknownVar(var.to_string()))?;
        let dpos = self.vars.pos_defo(di);
        let extra_pos: Vec<(usize, i32)> = extra
            .iter()
            .map(|(name, k)| {
                if let Some(i) = self.vars.defo_index(name) {
                    Ok((self.vars.pos_defo(i), *k))
                } else if let Some(i) = self.vars.laurent_index(name) {
                    Ok((self.vars.pos_laurent(i), *k))
                } else {
                    Err(SeriesError::UnknownVar(name.to_string()))
                }
            })
            .collect::<Result<_, _>>()?;
        let mut out = Self::zero(&self.vars, &self.trunc);
        let nd = self.vars.n_defo();
        let nl = self.vars.n_laurent();
        for (e, c) in &self.terms {
            let d = e[dpos];
            let mut ne = e.clone();
            for (p, k) in &extra_pos {
                ne[*p] += d * k;
            }
            if !self.trunc.admits(&self.vars, &ne) {
                // Identify the offending coordinate for the error message.
                for (i, &x) in ne.iter().enumerate().skip(nd).take(nl) {
                    let (lo, hi) = self.trunc.windows[i - nd];
                    if x < lo || x > hi {
                        return Err(SeriesError::WindowOverflow {
                            var: self.vars.laurent_name(i - nd).to_string(),
                            exp: x,
                        });
                    }
                }
                let q_deg: i64 = ne[..nd].iter().map(|&x| x as i64).sum();
                return Err(SeriesError::DegreeOverflow(q_deg.max(0) as u32));
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Transform coefficients (dropping zeros), keeping exponents.
    pub fn map_coeff<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> Series<D> {
        let mut out = Series::zero(&self.vars, &self.trunc);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Re-clip to a (usually smaller) truncation box over the same variables.
    pub fn with_trunc(&self, trunc: &TruncSpec) -> Self {
        let mut out = Self::zero(&self.vars, trunc);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Smallest exponent vector where the two series differ, with both
    /// coefficients rendered.
    pub fn first_mismatch(&self, other: &Self) -> Option<(Vec<i32>, String, String)> {
        self.assert_compatible(other, "first_mismatch");
        let mut keys: Vec<&Vec<i32>> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let a = self.terms.get(k);
            let b = other.terms.get(k);
            if a != b {
                let sa = a.map(|c| c.show()).unwrap_or_else(|| "0".into());
                let sb = b.map(|c| c.show()).unwrap_or_else(|| "0".into());
                return Some((k.clone(), sa, sb));
            }
        }
        None
    }

    /// Human-readable monomial for an exponent vector, e.g. "q1^2*y^-1".
    pub fn monomial_string(&self, exps: &[i32]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, e)| **e != 0)
            .map(|(p, e)| {
                let v = self.vars.var_display(p);
                if *e == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl<C: Coeff> fmt::Display for Series<C> {
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
            let mono = self.monomial_string(e);
            if mono == "1" {
                write!(f, "{}", c.show())?;
            } else {
                write!(f, "{}*{}", c.show(), mono)?;
            }
        }
        Ok(())
    }
}

impl Series<Q> {
    pub fn one(vars: &Arc<VarTable>, trunc: &TruncSpec) -> Self {
        let mut out = Self::zero(vars, trunc);
        out.add_term(vec![0; vars.width()], num::traits::One::one());
        out
    }

    pub fn coeff_q(&self, exps: &[i32]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(Q::zero)
    }
}

// ============================================================
// Tests
// ============================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{qi, qr};

    fn qy_table() -> (Arc<VarTable>, TruncSpec) {
        let vt = VarTable::new(&["q"], &["y"], &[]);
        let tr = TruncSpec::new(4, vec![(-3, 3)], 0);
        (vt, tr)
    }

    fn term(vt: &Arc<VarTable>, tr: &TruncSpec, exps: &[i32], c: Q) -> QSeries {
        let mut s = QSeries::zero(vt, tr);
        s.add_term(exps.to_vec(), c);
        s
    }

    #[test]
    fn product_clips_to_box() {
        let (vt, tr) = qy_table();
        let a = term(&vt, &tr, &[3, 0], qi(1));
        let b = term(&vt, &tr, &[2, 0], qi(1));
        assert!(a.mul(&b).is_zero());
        let c = term(&vt, &tr, &[0, 2], qi(1));
        let d = term(&vt, &tr, &[0, 2], qi(1));
        assert!(c.mul(&d).is_zero());
        let e = term(&vt, &tr, &[0, -2], qi(5));
        assert_eq!(c.mul(&e).coeff_q(&[0, 0]), qi(5));
    }

    #[test]
    fn hadamard_pairs_matching_q_exponents() {
        let vt = VarTable::new(&["q"], &["y"], &[]);
        let tr = TruncSpec::new(3, vec![(-2, 2)], 0);
        // a = sum_d (d+1) q^d y^-d, b = sum_d 10^d q^d y^d
        let mut a = QSeries::zero(&vt, &tr);
        let mut b = QSeries::zero(&vt, &tr);
        for d in 0..=2 {
            a.add_term(vec![d, -d], qi((d + 1) as i64));
            b.add_term(vec![d, d], qi(10i64.pow(d as u32)));
        }
        let h = a.hadamard(&b, &[0]);
        // q^d coefficient at y^0: (d+1)*10^d
        for d in 0..=2i32 {
            assert_eq!(h.coeff_q(&[d, 0]), qi((d as i64 + 1) * 10i64.pow(d as u32)));
        }
        // mismatched q-degrees contribute nothing at other y exponents except
        // pairings with equal q: y exponent -d + d' for d == d' is 0 only.
        assert_eq!(h.coeff_q(&[1, 1]), qi(0));
    }

    #[test]
    fn constant_term_drops_variable() {
        let (vt, tr) = qy_table();
        let mut s = QSeries::zero(&vt, &tr);
        s.add_term(vec![1, 0], qi(7));
        s.add_term(vec![1, 2], qi(9));
        let ct = s.constant_term("y").unwrap();
        assert_eq!(ct.vars().n_laurent(), 0);
        assert_eq!(ct.coeff_q(&[1]), qi(7));
    }

    #[test]
    fn residue_rejects_surviving_log() {
        let vt = VarTable::new(&["q"], &["y"], &[("Ly", "y")]);
        let tr = TruncSpec::new(2, vec![(-1, 1)], 2);
        let mut s = QSeries::zero(&vt, &tr);
        s.add_term(vec![0, 0, 1], qi(1));
        assert!(matches!(
            s.constant_term("y"),
            Err(SeriesError::LogInResidue { .. })
        ));
    }

    #[test]
    fn theta_on_logs() {
        // theta_q (q^2 * Lq^2) = 2 q^2 Lq^2 + 2 q^2 Lq
        let vt = VarTable::new(&["q"], &[], &[("Lq", "q")]);
        let tr = TruncSpec::new(3, vec![], 2);
        let mut s = QSeries::zero(&vt, &tr);
        s.add_term(vec![2, 2], qi(1));
        let t = s.theta("q").unwrap();
        assert_eq!(t.coeff_q(&[2, 2]), qi(2));
        assert_eq!(t.coeff_q(&[2, 1]), qi(2));
    }

    #[test]
    fn map_log_is_degree_preserving() {
        // L0^2 -> (L0 - Ly)^2 = L0^2 - 2 L0 Ly + Ly^2
        let vt = VarTable::new(&["q0"], &["y"], &[("L0", "q0"), ("Ly", "y")]);
        let tr = TruncSpec::new(1, vec![(-1, 1)], 2);
        let mut s = QSeries::zero(&vt, &tr);
        s.add_term(vec![0, 0, 2, 0], qi(1));
        let t = s.map_log("L0", &[(qi(1), "L0"), (qi(-1), "Ly")]).unwrap();
        assert_eq!(t.coeff_q(&[0, 0, 2, 0]), qi(1));
        assert_eq!(t.coeff_q(&[0, 0, 1, 1]), qi(-2));
        assert_eq!(t.coeff_q(&[0, 0, 0, 2]), qi(1));
    }

    #[test]
    fn monomial_substitution_is_strict() {
        let vt = VarTable::new(&["q0"], &["y"], &[]);
        let tr = TruncSpec::new(3, vec![(-2, 2)], 0);
        let mut s = QSeries::zero(&vt, &tr);
        s.add_term(vec![2, 0], qi(1));
        // q0 -> q0/y lands on y^-2: inside the window.
        let t = s.subst_defo_monomial("q0", &[("y", -1)]).unwrap();
        assert_eq!(t.coeff_q(&[2, -2]), qi(1));
        // A q0^3 term would need y^-3: strict error.
        let mut s2 = QSeries::zero(&vt, &tr);
        s2.add_term(vec![3, 0], qi(1));
        assert!(matches!(
            s2.subst_defo_monomial("q0", &[("y", -1)]),
            Err(SeriesError::WindowOverflow { .. })
        ));
    }

    #[test]
    fn first_mismatch_reports_smallest_key() {
        let (vt, tr) = qy_table();
        let a = term(&vt, &tr, &[1, 0], qi(3));
        let b = term(&vt, &tr, &[1, 0], qr(3, 2));
        let (key, sa, sb) = a.first_mismatch(&b).unwrap();
        assert_eq!(key, vec![1, 0]);
        assert_eq!((sa.as_str(), sb.as_str()), ("3", "3/2"));
        assert!(a.first_mismatch(&a).is_none());
    }
}
