//! Holomorphic period series and their gluing identities.
//!
//! For a degeneration model (see `toric`) write, for a degree vector d,
//!
//!   den(d)  = prod_j <D_j, d>!
//!   oth(d)  = prod_{l >= 1} <rho_l, d>!
//!   a1, a2  = <rho_01, d>, <rho_02, d>
//!
//! One-sided blow-up family:
//!   f0_central(q)    = sum oth a1! a2! / den * q^d
//!   f0_smoothing(q)  = sum oth (a1+a2)! / den * q^d
//!   f0_lg1(q, y)     = sum oth a1! a2! / den * q^d y^{-a2}
//!   f0_lg2(q, y)     = sum_{d, d0} oth (d0+a1)! a2! / (den d0!) * q^d y^{d0}
//!   identity:  f0_smoothing *_q f0_central = ct_y [ f0_lg1 *_q f0_lg2 ]
//!
//! Two-sided blow-up family (extra class q0, exceptional degree d0):
//!   f0_smoothing_two(q, q0) = sum oth (d0+a1)! (d0+a2)! / (den d0!^2) q^d q0^{d0}
//!   f0_lg1_two(q, q0, y)    = sum oth a1! (d0+a2)! / (den d0!) q^d (q0/y)^{d0}
//!   f0_lg2_two(q, y)        = sum oth (d0+a1)! a2! / (den d0!) q^d y^{d0}
//!   identity:  f0_smoothing_two *_q f0_central = ct_y [ f0_lg1_two *_q f0_lg2_two ]
//!
//! Reconstruction: the smoothing period is also the formal residue of the
//! central period pulled back along the generalized functional invariant,
//!   lambda_i = q_i / ((1-y)^{s_i} y^{e_i})                (one-sided)
//!   lambda_i = q_i / ((1-y)^{s_i} (1-q0/y)^{e_i})         (two-sided)
//! with scaling 1/(1-y) resp. 1/((1-y)(1-q0/y)), extracted against dy/y.
//! The pullbacks are assembled degree by degree with exact local expansion
//! bounds, so every coefficient inside the truncation window is exact.
//!
//! The quartic-surface pencil iteration (quintic case) uses the scaling
//! 1/(y(1-y)) against the measure dy, i.e. the y^{-1} coefficient.

use crate::rat::{q_factorial, Q};
use crate::series::{QSeries, Series, TruncSpec, VarTable};
use crate::toric::{degrees, ToricModel};
use num::traits::One;
use std::sync::Arc;

// ============================================================
// Coefficient kernels
// ============================================================

struct DegreeData {
    a1: i64,
    a2: i64,
    /// oth(d) / den(d)
    base: Q,
}

fn degree_data(m: &ToricModel, d: &[i32]) -> DegreeData {
    let mut den = Q::one();
    for row in &m.rows {
        den *= q_factorial(ToricModel::pair(row, d) as u32);
    }
    let mut oth = Q::one();
    for l in 1..m.groups.len() {
        oth *= q_factorial(ToricModel::pair(&m.rho_group(l), d) as u32);
    }
    DegreeData {
        a1: ToricModel::pair(&m.rho1(), d),
        a2: ToricModel::pair(&m.rho2(), d),
        base: oth / den,
    }
}

fn defo_positions(m: &ToricModel, vars: &VarTable) -> Vec<usize> {
    m.class_names
        .iter()
        .map(|n| {
            vars.defo_index(n)
                .unwrap_or_else(|| panic!("variable table lacks class `{n}`"))
        })
        .collect()
}

fn put_degree(exps: &mut [i32], pos: &[usize], d: &[i32]) {
    for (p, x) in pos.iter().zip(d.iter()) {
        exps[*p] = *x;
    }
}

// ============================================================
// Variable table helpers
// ============================================================

/// Table and box over the model's classes only, at joint order `q_order`.
pub fn q_table(m: &ToricModel, q_order: u32) -> (Arc<VarTable>, TruncSpec) {
    let names: Vec<&str> = m.class_names.iter().map(|s| s.as_str()).collect();
    (
        VarTable::new(&names, &[], &[]),
        TruncSpec::q_only(q_order),
    )
}

/// Table and box over (classes, y) with the model's exact residue window.
pub fn qy_table(m: &ToricModel, q_order: u32) -> (Arc<VarTable>, TruncSpec) {
    let names: Vec<&str> = m.class_names.iter().map(|s| s.as_str()).collect();
    let w = m.window(q_order);
    (
        VarTable::new(&names, &["y"], &[]),
        TruncSpec::new(q_order, vec![w], 0),
    )
}

/// Table and box over (classes, q0) with a joint total-degree cap.
pub fn qq0_table(m: &ToricModel, joint_order: u32) -> (Arc<VarTable>, TruncSpec) {
    let mut names: Vec<&str> = m.class_names.iter().map(|s| s.as_str()).collect();
    names.push("q0");
    (
        VarTable::new(&names, &[], &[]),
        TruncSpec::q_only(joint_order),
    )
}

/// Table and box over (classes, q0, y) for the two-sided gluing. The window
/// (-J, +J) at joint order J contains every pairing the residue needs.
pub fn qq0y_table(m: &ToricModel, joint_order: u32) -> (Arc<VarTable>, TruncSpec) {
    let mut names: Vec<&str> = m.class_names.iter().map(|s| s.as_str()).collect();
    names.push("q0");
    let j = joint_order as i32;
    (
        VarTable::new(&names, &["y"], &[]),
        TruncSpec::new(joint_order, vec![(-j, j)], 0),
    )
}

// ============================================================
// One-sided blow-up series
// ============================================================

pub fn f0_central(m: &ToricModel, vars: &Arc<VarTable>, trunc: &TruncSpec) -> QSeries {
    let pos = defo_positions(m, vars);
    let mut out = QSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let dd = degree_data(m, &d);
        let c = dd.base.clone()
            * q_factorial(dd.a1 as u32)
            * q_factorial(dd.a2 as u32);
        let mut exps = vec![0i32; vars.width()];
        put_degree(&mut exps, &pos, &d);
        out.add_term(exps, c);
    }
    out
}

pub fn f0_smoothing(m: &ToricModel, vars: &Arc<VarTable>, trunc: &TruncSpec) -> QSeries {
    let pos = defo_positions(m, vars);
    let mut out = QSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let dd = degree_data(m, &d);
        let c = dd.base.clone() * q_factorial((dd.a1 + dd.a2) as u32);
        let mut exps = vec![0i32; vars.width()];
        put_degree(&mut exps, &pos, &d);
        out.add_term(exps, c);
    }
    out
}

pub fn f0_lg1(m: &ToricModel, vars: &Arc<VarTable>, trunc: &TruncSpec) -> QSeries {
    let pos = defo_positions(m, vars);
    let ypos = vars.pos_laurent(vars.laurent_index("y").expect("table lacks y"));
    let mut out = QSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let dd = degree_data(m, &d);
        let c = dd.base.clone()
            * q_factorial(dd.a1 as u32)
            * q_factorial(dd.a2 as u32);
        let mut exps = vec![0i32; vars.width()];
        put_degree(&mut exps, &pos, &d);
        exps[ypos] = -(dd.a2 as i32);
        out.add_term(exps, c);
    }
    out
}

pub fn f0_lg2(m: &ToricModel, vars: &Arc<VarTable>, trunc: &TruncSpec) -> QSeries {
    let pos = defo_positions(m, vars);
    let yi = vars.laurent_index("y").expect("table lacks y");
    let ypos = vars.pos_laurent(yi);
    let hi = trunc.windows[yi].1;
    let mut out = QSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let dd = degree_data(m, &d);
        let a2f = q_factorial(dd.a2 as u32);
        for d0 in 0..=hi {
            let c = dd.base.clone() * q_factorial((d0 as i64 + dd.a1) as u32) * &a2f
                / q_factorial(d0 as u32);
            let mut exps = vec![0i32; vars.width()];
            put_degree(&mut exps, &pos, &d);
            exps[ypos] = d0;
            out.add_term(exps, c);
        }
    }
    out
}

// ============================================================
// Two-sided blow-up series
// ============================================================

pub fn f0_smoothing_two(m: &ToricModel, vars: &Arc<VarTable>, trunc: &TruncSpec) -> QSeries {
    let pos = defo_positions(m, vars);
    let p0 = vars.pos_defo(vars.defo_index("q0").expect("table lacks q0"));
    let mut out = QSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let dd = degree_data(m, &d);
        let dtot: i32 = d.iter().sum();
        for d0 in 0..=(trunc.q_total as i32 - dtot) {
            let d0f = q_factorial(d0 as u32);
            let c = dd.base.clone()
                * q_factorial((d0 as i64 + dd.a1) as u32)
                * q_factorial((d0 as i64 + dd.a2) as u32)
                / (&d0f * &d0f);
            let mut exps = vec![0i32; vars.width()];
            put_degree(&mut exps, &pos, &d);
            exps[p0] = d0;
            out.add_term(exps, c);
        }
    }
    out
}

/// Already glued: the chart-1 series with its exceptional variable replaced
/// by q0/y, so exponents carry q0^{d0} y^{-d0}.
pub fn f0_lg1_two(m: &ToricModel, vars: &Arc<VarTable>, trunc: &TruncSpec) -> QSeries {
    let pos = defo_positions(m, vars);
    let p0 = vars.pos_defo(vars.defo_index("q0").expect("table lacks q0"));
    let ypos = vars.pos_laurent(vars.laurent_index("y").expect("table lacks y"));
    let mut out = QSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let dd = degree_data(m, &d);
        let dtot: i32 = d.iter().sum();
        let a1f = q_factorial(dd.a1 as u32);
        for d0 in 0..=(trunc.q_total as i32 - dtot) {
            let c = dd.base.clone() * &a1f * q_factorial((d0 as i64 + dd.a2) as u32)
                / q_factorial(d0 as u32);
            let mut exps = vec![0i32; vars.width()];
            put_degree(&mut exps, &pos, &d);
            exps[p0] = d0;
            exps[ypos] = -d0;
            out.add_term(exps, c);
        }
    }
    out
}

pub fn f0_lg2_two(m: &ToricModel, vars: &Arc<VarTable>, trunc: &TruncSpec) -> QSeries {
    // Same display as the one-sided chart-2 series; the y window bounds d0.
    f0_lg2(m, vars, trunc)
}

// ============================================================
// Pullbacks along functional invariants
// ============================================================

/// (1/(1-y)) f0_central(lambda) with lambda_i = q_i/((1-y)^{s_i} y^{e_i}):
/// per degree d the pullback contributes
///   base(d) a1! a2! q^d y^{-a2} (1-y)^{-(1+a1)},
/// expanded exactly for every exponent inside the window.
pub fn pullback_one_sided(m: &ToricModel, vars: &Arc<VarTable>, trunc: &TruncSpec) -> QSeries {
    let pos = defo_positions(m, vars);
    let yi = vars.laurent_index("y").expect("table lacks y");
    let ypos = vars.pos_laurent(yi);
    let hi = trunc.windows[yi].1;
    let mut out = QSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let dd = degree_data(m, &d);
        let c0 = dd.base.clone()
            * q_factorial(dd.a1 as u32)
            * q_factorial(dd.a2 as u32);
        let b = (1 + dd.a1) as u32;
        let kmax = hi + dd.a2 as i32;
        for k in 0..=kmax {
            let c = c0.clone() * Q::from_integer(crate::rat::neg_binomial(b, k as u32));
            let mut exps = vec![0i32; vars.width()];
            put_degree(&mut exps, &pos, &d);
            exps[ypos] = k - dd.a2 as i32;
            out.add_term(exps, c);
        }
    }
    out
}

/// (1/((1-y)(1-q0/y))) f0_central(lambda) with
/// lambda_i = q_i/((1-y)^{s_i} (1-q0/y)^{e_i}): per degree d,
///   base(d) a1! a2! q^d (1-y)^{-(1+a1)} (1-q0/y)^{-(1+a2)}.
pub fn pullback_two_sided(m: &ToricModel, vars: &Arc<VarTable>, trunc: &TruncSpec) -> QSeries {
    let pos = defo_positions(m, vars);
    let p0 = vars.pos_defo(vars.defo_index("q0").expect("table lacks q0"));
    let yi = vars.laurent_index("y").expect("table lacks y");
    let ypos = vars.pos_laurent(yi);
    let (lo, hi) = trunc.windows[yi];
    let mut out = QSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let dd = degree_data(m, &d);
        let dtot: i32 = d.iter().sum();
        let c0 = dd.base.clone()
            * q_factorial(dd.a1 as u32)
            * q_factorial(dd.a2 as u32);
        let b1 = (1 + dd.a1) as u32;
        let b2 = (1 + dd.a2) as u32;
        for j in 0..=(trunc.q_total as i32 - dtot) {
            let cj = c0.clone() * Q::from_integer(crate::rat::neg_binomial(b2, j as u32));
            for k in 0..=(hi + j) {
                let ye = k - j;
                if ye < lo || ye > hi {
                    continue;
                }
                let c = cj.clone() * Q::from_integer(crate::rat::neg_binomial(b1, k as u32));
                let mut exps = vec![0i32; vars.width()];
                put_degree(&mut exps, &pos, &d);
                exps[p0] = j;
                exps[ypos] = ye;
                out.add_term(exps, c);
            }
        }
    }
    out
}

/// Quartic-surface pencil iteration: with lambda = psi/(y (1-y)^4) the
/// integrand f0_K3(lambda) / (y(1-y)) contributes, per degree d,
///   (4d)!/(d!)^4 psi^d y^{-d-1} (1-y)^{-(4d+1)},
/// and the gluing extracts the y^{-1} coefficient (measure dy).
pub fn pullback_quartic_pencil(vars: &Arc<VarTable>, trunc: &TruncSpec) -> QSeries {
    let ppos = vars.pos_defo(vars.defo_index("psi").expect("table lacks psi"));
    let yi = vars.laurent_index("y").expect("table lacks y");
    let ypos = vars.pos_laurent(yi);
    let (lo, hi) = trunc.windows[yi];
    let mut out = QSeries::zero(vars, trunc);
    for d in 0..=trunc.q_total as i32 {
        let c0 = q_factorial(4 * d as u32) / q_factorial(d as u32).pow(4);
        for k in 0..=(hi + d + 1) {
            let ye = k - d - 1;
            if ye < lo || ye > hi {
                continue;
            }
            let c = c0.clone() * Q::from_integer(crate::rat::neg_binomial(4 * d as u32 + 1, k as u32));
            let mut exps = vec![0i32; vars.width()];
            exps[ppos] = d;
            exps[ypos] = ye;
            out.add_term(exps, c);
        }
    }
    out
}

/// The quintic mirror period sum (5d)!/(d!)^5 psi^d, target of the pencil
/// iteration.
pub fn quintic_mirror_period(vars: &Arc<VarTable>, trunc: &TruncSpec) -> QSeries {
    let ppos = vars.pos_defo(vars.defo_index("psi").expect("table lacks psi"));
    let mut out = QSeries::zero(vars, trunc);
    for d in 0..=trunc.q_total as i32 {
        let c = q_factorial(5 * d as u32) / q_factorial(d as u32).pow(5);
        let mut exps = vec![0i32; vars.width()];
        exps[ppos] = d;
        out.add_term(exps, c);
    }
    out
}

// ============================================================
// Identity evaluators
// ============================================================

/// A failed identity: where, and the two exact values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub location: String,
    pub lhs: String,
    pub rhs: String,
}

impl Mismatch {
    pub fn describe(&self) -> String {
        format!(
            "first mismatch at {}: lhs = {}, rhs = {}",
            self.location, self.lhs, self.rhs
        )
    }
}

pub(crate) fn compare<C: crate::series::Coeff>(
    lhs: &Series<C>,
    rhs: &Series<C>,
) -> Result<(), Mismatch> {
    match lhs.first_mismatch(rhs) {
        None => Ok(()),
        Some((exps, a, b)) => Err(Mismatch {
            location: lhs.monomial_string(&exps),
            lhs: a,
            rhs: b,
        }),
    }
}

pub(crate) fn all_defo_indices(vars: &VarTable, m: &ToricModel) -> Vec<usize> {
    let mut v: Vec<usize> = m
        .class_names
        .iter()
        .map(|n| vars.defo_index(n).unwrap())
        .collect();
    v.sort();
    v
}

/// f0_smoothing *_q f0_central = ct_y [ f0_lg1 *_q f0_lg2 ].
pub fn check_period_glue_one_sided(m: &ToricModel, q_order: u32) -> Result<(), Mismatch> {
    let (qv, qt) = q_table(m, q_order);
    let (yv, yt) = qy_table(m, q_order);
    let lhs = f0_smoothing(m, &qv, &qt).hadamard(
        &f0_central(m, &qv, &qt),
        &all_defo_indices(&qv, m),
    );
    let integrand = f0_lg1(m, &yv, &yt).hadamard(&f0_lg2(m, &yv, &yt), &all_defo_indices(&yv, m));
    let rhs = integrand
        .constant_term("y")
        .expect("no logs in period series");
    compare(&lhs, &rhs)
}

/// f0_smoothing_two *_q f0_central = ct_y [ f0_lg1_two *_q f0_lg2_two ],
/// all at joint order (total degree in q and q0).
pub fn check_period_glue_two_sided(m: &ToricModel, joint_order: u32) -> Result<(), Mismatch> {
    let (qv, qt) = qq0_table(m, joint_order);
    let (yv, yt) = qq0y_table(m, joint_order);
    let subset_q = all_defo_indices(&qv, m);
    let lhs = f0_smoothing_two(m, &qv, &qt).hadamard(&f0_central(m, &qv, &qt), &subset_q);
    let subset_y = all_defo_indices(&yv, m);
    let integrand = f0_lg1_two(m, &yv, &yt).hadamard(&f0_lg2_two(m, &yv, &yt), &subset_y);
    let rhs = integrand
        .constant_term("y")
        .expect("no logs in period series");
    compare(&lhs, &rhs)
}

/// ct_y of the one-sided pullback reproduces the smoothing period.
pub fn check_reconstruct_one_sided(m: &ToricModel, q_order: u32) -> Result<(), Mismatch> {
    let (qv, qt) = q_table(m, q_order);
    let (yv, yt) = qy_table(m, q_order);
    let lhs = f0_smoothing(m, &qv, &qt);
    let rhs = pullback_one_sided(m, &yv, &yt)
        .constant_term("y")
        .expect("no logs in period series");
    compare(&lhs, &rhs)
}

/// ct_y of the two-sided pullback reproduces the two-sided smoothing period.
pub fn check_reconstruct_two_sided(m: &ToricModel, joint_order: u32) -> Result<(), Mismatch> {
    let (qv, qt) = qq0_table(m, joint_order);
    let (yv, yt) = qq0y_table(m, joint_order);
    let lhs = f0_smoothing_two(m, &qv, &qt);
    let rhs = pullback_two_sided(m, &yv, &yt)
        .constant_term("y")
        .expect("no logs in period series");
    compare(&lhs, &rhs)
}

/// The y^{-1} coefficient of the quartic-pencil integrand reproduces the
/// quintic mirror period.
pub fn check_quartic_pencil(q_order: u32) -> Result<(), Mismatch> {
    let yv = VarTable::new(&["psi"], &["y"], &[]);
    let yt = TruncSpec::new(q_order, vec![(-(q_order as i32) - 1, 1)], 0);
    let qv = VarTable::new(&["psi"], &[], &[]);
    let qt = TruncSpec::q_only(q_order);
    let lhs = quintic_mirror_period(&qv, &qt);
    let rhs = pullback_quartic_pencil(&yv, &yt)
        .laurent_coefficient("y", -1)
        .expect("no logs in period series");
    compare(&lhs, &rhs)
}

// ============================================================
// Tests
// ============================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;
    use crate::toric::{
        conifold_p4xp1, p1_power, p1_power_base, pn_x_p1, pn_x_p1_base, quintic_p4,
    };

    #[test]
    fn central_period_quintic_matches_quartic_pencil_numbers() {
        // Central slice of the quintic degeneration: quartic surface numbers
        // (4d)!/(d!)^4 = 1, 24, 2520, 369600.
        let m = quintic_p4();
        let (v, t) = q_table(&m, 3);
        let s = f0_central(&m, &v, &t);
        for (d, w) in [(0i32, 1i64), (1, 24), (2, 2520), (3, 369600)] {
            assert_eq!(s.coeff_q(&[d]), qi(w));
        }
    }

    #[test]
    fn smoothing_period_quintic_frozen_values() {
        let m = quintic_p4();
        let (v, t) = q_table(&m, 3);
        let s = f0_smoothing(&m, &v, &t);
        for (d, w) in [(0i32, 1i64), (1, 120), (2, 113400), (3, 168168000)] {
            assert_eq!(s.coeff_q(&[d]), qi(w));
        }
    }

    #[test]
    fn chart1_quintic_carries_y_minus_4d() {
        let m = quintic_p4();
        let (v, t) = qy_table(&m, 2);
        let s = f0_lg1(&m, &v, &t);
        assert_eq!(s.coeff_q(&[1, -4]), qi(24));
        assert_eq!(s.coeff_q(&[1, 0]), qi(0));
    }

    #[test]
    fn chart2_quintic_frozen_values() {
        // (4d + ... ) table: oth = 1, a1 = d, a2 = 4d:
        // (d0+d)! (4d)! / ((d!)^5 d0!); at d = 1: 24*(d0+1).
        let m = quintic_p4();
        let (v, t) = qy_table(&m, 2);
        let s = f0_lg2(&m, &v, &t);
        assert_eq!(s.coeff_q(&[1, 0]), qi(24));
        assert_eq!(s.coeff_q(&[1, 1]), qi(48));
        assert_eq!(s.coeff_q(&[1, 2]), qi(72));
    }

    #[test]
    fn two_sided_smoothing_quintic_frozen_values() {
        // (d0+d)!(d0+4d)!/((d0!)^2 (d!)^5): rows d = 0, 1, 2.
        let m = quintic_p4();
        let (v, t) = qq0_table(&m, 3);
        let s = f0_smoothing_two(&m, &v, &t);
        let want = [
            (0, 0, 1i64),
            (0, 1, 1),
            (1, 0, 24),
            (1, 1, 240),
            (1, 2, 1080),
            (2, 0, 2520),
            (2, 1, 68040),
        ];
        for (d, d0, w) in want {
            assert_eq!(s.coeff_q(&[d, d0]), qi(w), "at d={d}, d0={d0}");
        }
    }

    #[test]
    fn conifold_family_is_the_quintic_two_sided_family() {
        // The registry presentation in P^4 x P^1 and the two-sided blow-up of
        // the quintic give the same smoothing period under q2 <-> q0.
        let c = conifold_p4xp1();
        let (cv, ct) = q_table(&c, 4);
        let via_registry = f0_smoothing(&c, &cv, &ct);
        let q = quintic_p4();
        let (qv, qt) = qq0_table(&q, 4);
        let via_blowup = f0_smoothing_two(&q, &qv, &qt);
        // Same exponent layout: (q1, q2) vs (q1, q0).
        for (e, coeff) in via_registry.iter_terms() {
            assert_eq!(via_blowup.coeff_q(e), *coeff, "at {e:?}");
        }
        assert_eq!(via_registry.term_count(), via_blowup.term_count());
    }

    #[test]
    fn p1_power_registry_matches_its_base_two_sided_family() {
        // Same consistency for the (P^1)^3 family: registry smoothing period
        // equals the two-sided family of (P^1)^2 under q3 <-> q0.
        let reg = p1_power(2);
        let (rv, rt) = q_table(&reg, 3);
        let via_registry = f0_smoothing(&reg, &rv, &rt);
        let base = p1_power_base(2);
        let (bv, bt) = qq0_table(&base, 3);
        let via_blowup = f0_smoothing_two(&base, &bv, &bt);
        for (e, coeff) in via_registry.iter_terms() {
            assert_eq!(via_blowup.coeff_q(e), *coeff, "at {e:?}");
        }
        assert_eq!(via_registry.term_count(), via_blowup.term_count());
    }

    #[test]
    fn first_block_display_coefficients() {
        // (P^1)^2 base: ((d0+d1+d2)!)^2/((d0!)^2 (d1!)^2 (d2!)^2).
        let base = p1_power_base(2);
        let (v, t) = qq0_table(&base, 3);
        let s = f0_smoothing_two(&base, &v, &t);
        assert_eq!(s.coeff_q(&[1, 0, 0]), qi(1));
        assert_eq!(s.coeff_q(&[1, 1, 0]), qi(4));
        assert_eq!(s.coeff_q(&[1, 0, 1]), qi(4));
        assert_eq!(s.coeff_q(&[1, 1, 0]), qi(4));
        assert_eq!(s.coeff_q(&[0, 0, 2]), qi(1));
        assert_eq!(s.coeff_q(&[1, 1, 1]), qi(36));
    }

    #[test]
    fn glue_one_sided_quintic_both_orientations() {
        check_period_glue_one_sided(&quintic_p4(), 3).unwrap();
        check_period_glue_one_sided(&quintic_p4().flip(), 3).unwrap();
    }

    #[test]
    fn glue_one_sided_other_models() {
        check_period_glue_one_sided(&conifold_p4xp1(), 2).unwrap();
        check_period_glue_one_sided(&pn_x_p1(2, 3), 2).unwrap();
        check_period_glue_one_sided(&p1_power(2), 2).unwrap();
    }

    #[test]
    fn glue_two_sided_models() {
        check_period_glue_two_sided(&quintic_p4(), 3).unwrap();
        check_period_glue_two_sided(&p1_power_base(2), 3).unwrap();
        check_period_glue_two_sided(&pn_x_p1_base(2, 3), 3).unwrap();
    }

    #[test]
    fn reconstruct_models() {
        check_reconstruct_one_sided(&quintic_p4(), 3).unwrap();
        check_reconstruct_one_sided(&quintic_p4().flip(), 2).unwrap();
        check_reconstruct_two_sided(&quintic_p4(), 3).unwrap();
        check_reconstruct_two_sided(&p1_power_base(2), 3).unwrap();
    }

    #[test]
    fn quartic_pencil_reproduces_quintic_numbers() {
        check_quartic_pencil(4).unwrap();
        // And the frozen degree-1 value is 120, not the 360 a y^0 reading
        // of the dy-measure display would give.
        let yv = VarTable::new(&["psi"], &["y"], &[]);
        let yt = TruncSpec::new(1, vec![(-2, 1)], 0);
        let s = pullback_quartic_pencil(&yv, &yt)
            .laurent_coefficient("y", -1)
            .unwrap();
        assert_eq!(s.coeff_q(&[1]), qi(120));
    }

    #[test]
    fn mismatch_reporting_shape() {
        let m = quintic_p4();
        let (v, t) = q_table(&m, 2);
        let a = f0_central(&m, &v, &t);
        let b = f0_smoothing(&m, &v, &t);
        let err = compare(&a, &b).unwrap_err();
        assert_eq!(err.location, "q1");
        assert_eq!(err.lhs, "24");
        assert_eq!(err.rhs, "120");
    }
}
