//! Cohomology-valued I-functions and their gluing identities.
//!
//! All series here take coefficients in a truncated polynomial algebra
//! Q[H_1..H_r]/(H_i^{k_i}), extended by a class P for the blow-up families.
//! Writing, for a degree vector d,
//!
//!   G(d)   = prod_j prod_{k=1}^{<D_j,d>} (D_j + k)      (inverted),
//!   O(d)   = prod_{l >= 1} prod_{k=1}^{<rho_l,d>} (rho_l + k),
//!   a1, a2 = <rho_01, d>, <rho_02, d>,
//!
//! with D_j and rho_l the corresponding linear forms in the H_i, the
//! builders are:
//!
//!   I_smoothing = e^{sum_i H_i L_i} sum_d O(d)/G(d)
//!                   prod_{k<=a1+a2}(rho_0 + k) q^d            (rho_0 = rho_01 + rho_02)
//!   I_central   = e^{sum_i H_i L_i} sum_d O(d)/G(d)
//!                   prod_{k<=a1}(rho_01+k) prod_{k<=a2}(rho_02+k) q^d
//!
//! One-sided blow-up charts (P substituted by rho_02 at the end):
//!
//!   I_chart1 = e^{sum H_i L_i - rho_02 L_y} sum_d [central summand] q^d y^{-a2}
//!   I_chart2 = e^{sum H_i L_i + P L_y} sum_{d,d0} O/G
//!                prod_{k<=a1+d0}(rho_01+P+k) prod_{k<=a2}(rho_02+k)
//!                / prod_{k<=d0}(P+k) q^d y^{d0}
//!
//!   identity:  I_smoothing *_q I_central
//!                = ct_y [ I_chart1 *_q I_chart2|_{P=rho_02} ].
//!
//! Two-sided blow-up (P a genuine class of the algebra, L_0 = log q_0):
//!
//!   I_smoothing_two = e^{sum H_i L_i + P L_0} sum_{d,d0} O/G
//!       prod_{k<=a1+d0}(rho_01+P+k) prod_{k<=a2+d0}(rho_02+P+k)
//!       / prod_{k<=d0}(P+k)^2 q^d q0^{d0}
//!   I_chart1_two    = ... prod_{k<=a1}(rho_01+k) prod_{k<=a2+d0}(rho_02+P+k)
//!       / prod_{k<=d0}(P+k) q^d q0^{d0}
//!   I_chart2_two    = e^{sum H_i L_i + P L_y} ... prod_{k<=a1+d0}(rho_01+P+k)
//!       prod_{k<=a2}(rho_02+k) / prod_{k<=d0}(P+k) q^d y^{d0}
//!
//!   identity:  I_smoothing_two *_q I_central
//!                = ct_y [ I_chart1_two(q, q0/y) *_q I_chart2_two(q, y) ],
//!
//! where q0 -> q0/y also shifts the log: L_0 -> L_0 - L_y.
//!
//! The relative I-function of the quintic family restricted to its quartic
//! divisor, evaluated at z = 1, coincides literally with the chart
//! I-functions above; `check_rel_i0` pins that equality.

use crate::cohom::{CohomElement, NilpotentAlgebra};
use crate::periods::{all_defo_indices, compare, Mismatch};
use crate::rat::Q;
use crate::series::{CohomSeries, QSeries, TruncSpec, VarTable};
use crate::toric::{degrees, ToricModel};
use num::traits::One;
use std::sync::Arc;

// ============================================================
// Algebra helpers
// ============================================================

/// The cohomology algebra of a model: one generator per Kaehler class, with
/// the model's default truncation orders.
pub fn model_algebra(m: &ToricModel) -> Arc<NilpotentAlgebra> {
    let orders = m.default_orders();
    let gens: Vec<(&str, u16)> = m
        .class_names
        .iter()
        .map(|s| s.as_str())
        .zip(orders.iter().copied())
        .collect();
    NilpotentAlgebra::new(&gens)
}

/// The model algebra extended by the exceptional class P at order `p_order`.
pub fn model_algebra_with_p(m: &ToricModel, p_order: u16) -> Arc<NilpotentAlgebra> {
    let orders = m.default_orders();
    let mut gens: Vec<(&str, u16)> = m
        .class_names
        .iter()
        .map(|s| s.as_str())
        .zip(orders.iter().copied())
        .collect();
    gens.push(("P", p_order));
    NilpotentAlgebra::new(&gens)
}

/// Truncation order for P that loses nothing under the substitution
/// P -> rho_02: one more than the largest power of rho_02 that can survive.
pub fn presubstitution_p_order(m: &ToricModel) -> u16 {
    let orders = m.default_orders();
    let mut bound: u16 = 1;
    for (i, (_, e)) in crate::invariants::class_exponents(m).iter().enumerate() {
        if *e > 0 {
            bound += orders[i] - 1;
        }
    }
    bound
}

/// The linear form sum_i v_i H_i in the given algebra.
pub fn class_form(alg: &Arc<NilpotentAlgebra>, m: &ToricModel, v: &[i64]) -> CohomElement {
    let pairs: Vec<(Q, &str)> = v
        .iter()
        .map(|&x| crate::rat::qi(x))
        .zip(m.class_names.iter().map(|s| s.as_str()))
        .collect();
    CohomElement::linear_form(alg, &pairs).expect("class names are algebra generators")
}

/// prod_{k=1}^{n} (base + k); the empty product for n = 0.
pub fn rising(base: &CohomElement, n: i64) -> CohomElement {
    assert!(n >= 0, "rising product needs a nonnegative length");
    let alg = base.algebra().clone();
    let mut acc = CohomElement::one(&alg);
    for k in 1..=n {
        acc = acc.cmul(&base.add(&CohomElement::scalar(&alg, crate::rat::qi(k))));
    }
    acc
}

struct ISummand {
    a1: i64,
    a2: i64,
    /// O(d) / G(d): the part common to every family.
    base: CohomElement,
}

fn i_summand(alg: &Arc<NilpotentAlgebra>, m: &ToricModel, d: &[i32]) -> ISummand {
    let mut denom = CohomElement::one(alg);
    for row in &m.rows {
        let form = class_form(alg, m, row);
        denom = denom.cmul(&rising(&form, ToricModel::pair(row, d)));
    }
    let mut base = denom.inv().expect("rising factors have nonzero scalar part");
    for l in 1..m.groups.len() {
        let rho = m.rho_group(l);
        let form = class_form(alg, m, &rho);
        base = base.cmul(&rising(&form, ToricModel::pair(&rho, d)));
    }
    ISummand {
        a1: ToricModel::pair(&m.rho1(), d),
        a2: ToricModel::pair(&m.rho2(), d),
        base,
    }
}

// ============================================================
// Variable helpers
// ============================================================

fn any_pos(vars: &VarTable, name: &str) -> usize {
    if let Some(i) = vars.defo_index(name) {
        vars.pos_defo(i)
    } else if let Some(i) = vars.laurent_index(name) {
        vars.pos_laurent(i)
    } else {
        panic!("variable table lacks `{name}`")
    }
}

fn class_positions(m: &ToricModel, vars: &VarTable) -> Vec<usize> {
    m.class_names.iter().map(|n| any_pos(vars, n)).collect()
}

/// Upper bound for the exceptional degree carried by `name`: its window top
/// when it is a Laurent variable, the remaining joint budget otherwise.
fn exceptional_bound(vars: &VarTable, trunc: &TruncSpec, name: &str, q_deg: i32) -> i32 {
    if let Some(i) = vars.laurent_index(name) {
        trunc.windows[i].1
    } else {
        trunc.q_total as i32 - q_deg
    }
}

/// e^{sum_g c_g L_g} expanded to the truncation's total log order.
pub fn exp_prefactor(
    vars: &Arc<VarTable>,
    trunc: &TruncSpec,
    terms: &[(CohomElement, &str)],
) -> CohomSeries {
    let mut out = CohomSeries::zero(vars, trunc);
    let alg = match terms.first() {
        Some((c, _)) => c.algebra().clone(),
        None => {
            panic!("prefactor needs at least one term to fix the algebra")
        }
    };
    out.add_term(vec![0; vars.width()], CohomElement::one(&alg));
    for (elem, log_name) in terms {
        let li = vars
            .log_index(log_name)
            .unwrap_or_else(|| panic!("variable table lacks log `{log_name}`"));
        let lpos = vars.pos_log(li);
        let mut factor = CohomSeries::zero(vars, trunc);
        let mut power = CohomElement::one(&alg);
        let mut j_fact = Q::one();
        for j in 0..=trunc.log_total {
            if j > 0 {
                power = power.cmul(elem);
                j_fact *= crate::rat::qi(j as i64);
            }
            if power.is_zero() {
                break;
            }
            let mut exps = vec![0i32; vars.width()];
            exps[lpos] = j as i32;
            factor.add_term(exps, power.scale(&(Q::one() / &j_fact)));
        }
        out = out.mul(&factor);
    }
    out
}

// ============================================================
// Builders: one-sided family
// ============================================================

fn log_name(var: &str) -> String {
    format!("L{var}")
}

fn base_prefactor_terms<'a>(
    alg: &Arc<NilpotentAlgebra>,
    m: &'a ToricModel,
) -> Vec<(CohomElement, String)> {
    m.class_names
        .iter()
        .map(|name| {
            (
                CohomElement::generator(alg, name).expect("class generator"),
                log_name(name),
            )
        })
        .collect()
}

fn prefactor_from(
    vars: &Arc<VarTable>,
    trunc: &TruncSpec,
    terms: &[(CohomElement, String)],
) -> CohomSeries {
    let borrowed: Vec<(CohomElement, &str)> = terms
        .iter()
        .map(|(c, s)| (c.clone(), s.as_str()))
        .collect();
    exp_prefactor(vars, trunc, &borrowed)
}

/// I-function of the smoothing total space.
pub fn i_smoothing(
    m: &ToricModel,
    alg: &Arc<NilpotentAlgebra>,
    vars: &Arc<VarTable>,
    trunc: &TruncSpec,
) -> CohomSeries {
    let pos = class_positions(m, vars);
    let rho0: Vec<i64> = m
        .rho1()
        .iter()
        .zip(m.rho2().iter())
        .map(|(a, b)| a + b)
        .collect();
    let rho0_form = class_form(alg, m, &rho0);
    let mut sum = CohomSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let s = i_summand(alg, m, &d);
        let c = s.base.cmul(&rising(&rho0_form, s.a1 + s.a2));
        let mut exps = vec![0i32; vars.width()];
        for (p, x) in pos.iter().zip(d.iter()) {
            exps[*p] = *x;
        }
        sum.add_term(exps, c);
    }
    prefactor_from(vars, trunc, &base_prefactor_terms(alg, m)).mul(&sum)
}

/// I-function of the central (common anticanonical) slice.
pub fn i_central(
    m: &ToricModel,
    alg: &Arc<NilpotentAlgebra>,
    vars: &Arc<VarTable>,
    trunc: &TruncSpec,
) -> CohomSeries {
    let pos = class_positions(m, vars);
    let rho1_form = class_form(alg, m, &m.rho1());
    let rho2_form = class_form(alg, m, &m.rho2());
    let mut sum = CohomSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let s = i_summand(alg, m, &d);
        let c = s
            .base
            .cmul(&rising(&rho1_form, s.a1))
            .cmul(&rising(&rho2_form, s.a2));
        let mut exps = vec![0i32; vars.width()];
        for (p, x) in pos.iter().zip(d.iter()) {
            exps[*p] = *x;
        }
        sum.add_term(exps, c);
    }
    prefactor_from(vars, trunc, &base_prefactor_terms(alg, m)).mul(&sum)
}

/// First blow-up chart of the one-sided family: central summands weighted by
/// y^{-a2}, prefactor twisted by e^{-rho_02 L_y}.
pub fn i_chart1(
    m: &ToricModel,
    alg: &Arc<NilpotentAlgebra>,
    vars: &Arc<VarTable>,
    trunc: &TruncSpec,
) -> CohomSeries {
    let pos = class_positions(m, vars);
    let ypos = any_pos(vars, "y");
    let rho1_form = class_form(alg, m, &m.rho1());
    let rho2_form = class_form(alg, m, &m.rho2());
    let mut sum = CohomSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let s = i_summand(alg, m, &d);
        let c = s
            .base
            .cmul(&rising(&rho1_form, s.a1))
            .cmul(&rising(&rho2_form, s.a2));
        let mut exps = vec![0i32; vars.width()];
        for (p, x) in pos.iter().zip(d.iter()) {
            exps[*p] = *x;
        }
        exps[ypos] = -(s.a2 as i32);
        sum.add_term(exps, c);
    }
    let mut terms = base_prefactor_terms(alg, m);
    terms.push((rho2_form.neg(), log_name("y")));
    prefactor_from(vars, trunc, &terms).mul(&sum)
}

/// Second blow-up chart of the one-sided family, built in an algebra that
/// carries P; substitute P -> rho_02 afterwards (`substitute_p`).
pub fn i_chart2_one_sided(
    m: &ToricModel,
    alg_p: &Arc<NilpotentAlgebra>,
    vars: &Arc<VarTable>,
    trunc: &TruncSpec,
) -> CohomSeries {
    let pos = class_positions(m, vars);
    let ypos = any_pos(vars, "y");
    let p = CohomElement::generator(alg_p, "P").expect("P generator");
    let rho1_form = class_form(alg_p, m, &m.rho1());
    let rho2_form = class_form(alg_p, m, &m.rho2());
    let rho1_p = rho1_form.add(&p);
    let mut sum = CohomSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let s = i_summand(alg_p, m, &d);
        let fixed = s.base.cmul(&rising(&rho2_form, s.a2));
        let q_deg: i32 = d.iter().sum();
        for d0 in 0..=exceptional_bound(vars, trunc, "y", q_deg) {
            let c = fixed
                .cmul(&rising(&rho1_p, s.a1 + d0 as i64))
                .cmul(
                    &rising(&p, d0 as i64)
                        .inv()
                        .expect("nonzero scalar part"),
                );
            let mut exps = vec![0i32; vars.width()];
            for (pp, x) in pos.iter().zip(d.iter()) {
                exps[*pp] = *x;
            }
            exps[ypos] = d0;
            sum.add_term(exps, c);
        }
    }
    let mut terms = base_prefactor_terms(alg_p, m);
    terms.push((p, log_name("y")));
    prefactor_from(vars, trunc, &terms).mul(&sum)
}

/// Substitute P -> rho_02 coefficientwise, landing in the P-free algebra.
pub fn substitute_p(
    s: &CohomSeries,
    m: &ToricModel,
    target: &Arc<NilpotentAlgebra>,
) -> CohomSeries {
    let image = class_form(target, m, &m.rho2());
    s.map_coeff(|c| {
        c.subst_generator("P", target, &image)
            .expect("P and the class generators exist")
    })
}

// ============================================================
// Builders: two-sided family
// ============================================================

/// I-function of the two-sided blow-up total space, exceptional degree on q0.
pub fn i_smoothing_two(
    m: &ToricModel,
    alg: &Arc<NilpotentAlgebra>,
    vars: &Arc<VarTable>,
    trunc: &TruncSpec,
) -> CohomSeries {
    let pos = class_positions(m, vars);
    let qpos = any_pos(vars, "q0");
    let p = CohomElement::generator(alg, "P").expect("P generator");
    let rho1_p = class_form(alg, m, &m.rho1()).add(&p);
    let rho2_p = class_form(alg, m, &m.rho2()).add(&p);
    let mut sum = CohomSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let s = i_summand(alg, m, &d);
        let q_deg: i32 = d.iter().sum();
        for d0 in 0..=(trunc.q_total as i32 - q_deg) {
            let pinv = rising(&p, d0 as i64).inv().expect("nonzero scalar part");
            let c = s
                .base
                .cmul(&rising(&rho1_p, s.a1 + d0 as i64))
                .cmul(&rising(&rho2_p, s.a2 + d0 as i64))
                .cmul(&pinv)
                .cmul(&pinv);
            let mut exps = vec![0i32; vars.width()];
            for (pp, x) in pos.iter().zip(d.iter()) {
                exps[*pp] = *x;
            }
            exps[qpos] = d0;
            sum.add_term(exps, c);
        }
    }
    let mut terms = base_prefactor_terms(alg, m);
    terms.push((p, log_name("q0")));
    prefactor_from(vars, trunc, &terms).mul(&sum)
}

/// First chart of the two-sided family, exceptional degree on q0.
pub fn i_chart1_two(
    m: &ToricModel,
    alg: &Arc<NilpotentAlgebra>,
    vars: &Arc<VarTable>,
    trunc: &TruncSpec,
) -> CohomSeries {
    let pos = class_positions(m, vars);
    let qpos = any_pos(vars, "q0");
    let p = CohomElement::generator(alg, "P").expect("P generator");
    let rho1_form = class_form(alg, m, &m.rho1());
    let rho2_p = class_form(alg, m, &m.rho2()).add(&p);
    let mut sum = CohomSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let s = i_summand(alg, m, &d);
        let fixed = s.base.cmul(&rising(&rho1_form, s.a1));
        let q_deg: i32 = d.iter().sum();
        for d0 in 0..=(trunc.q_total as i32 - q_deg) {
            let c = fixed
                .cmul(&rising(&rho2_p, s.a2 + d0 as i64))
                .cmul(
                    &rising(&p, d0 as i64)
                        .inv()
                        .expect("nonzero scalar part"),
                );
            let mut exps = vec![0i32; vars.width()];
            for (pp, x) in pos.iter().zip(d.iter()) {
                exps[*pp] = *x;
            }
            exps[qpos] = d0;
            sum.add_term(exps, c);
        }
    }
    let mut terms = base_prefactor_terms(alg, m);
    terms.push((p, log_name("q0")));
    prefactor_from(vars, trunc, &terms).mul(&sum)
}

/// Second chart of the two-sided family; the exceptional degree sits on the
/// named variable (y in the gluing, q0 in the relative-I comparison), with
/// the matching log in the prefactor.
pub fn i_chart2_two(
    m: &ToricModel,
    alg: &Arc<NilpotentAlgebra>,
    vars: &Arc<VarTable>,
    trunc: &TruncSpec,
    exceptional: &str,
) -> CohomSeries {
    let pos = class_positions(m, vars);
    let epos = any_pos(vars, exceptional);
    let p = CohomElement::generator(alg, "P").expect("P generator");
    let rho1_p = class_form(alg, m, &m.rho1()).add(&p);
    let rho2_form = class_form(alg, m, &m.rho2());
    let mut sum = CohomSeries::zero(vars, trunc);
    for d in degrees(m.r(), trunc.q_total) {
        let s = i_summand(alg, m, &d);
        let fixed = s.base.cmul(&rising(&rho2_form, s.a2));
        let q_deg: i32 = d.iter().sum();
        for d0 in 0..=exceptional_bound(vars, trunc, exceptional, q_deg) {
            let c = fixed
                .cmul(&rising(&rho1_p, s.a1 + d0 as i64))
                .cmul(
                    &rising(&p, d0 as i64)
                        .inv()
                        .expect("nonzero scalar part"),
                );
            let mut exps = vec![0i32; vars.width()];
            for (pp, x) in pos.iter().zip(d.iter()) {
                exps[*pp] = *x;
            }
            exps[epos] = d0;
            sum.add_term(exps, c);
        }
    }
    let mut terms = base_prefactor_terms(alg, m);
    terms.push((p, log_name(exceptional)));
    prefactor_from(vars, trunc, &terms).mul(&sum)
}

// ============================================================
// Tables
// ============================================================

fn log_pairs(names: &[String]) -> Vec<(String, String)> {
    names.iter().map(|n| (log_name(n), n.clone())).collect()
}

fn make_table(
    defo: &[String],
    laurent: &[String],
    logs: &[(String, String)],
) -> Arc<VarTable> {
    let d: Vec<&str> = defo.iter().map(|s| s.as_str()).collect();
    let l: Vec<&str> = laurent.iter().map(|s| s.as_str()).collect();
    let lg: Vec<(&str, &str)> = logs
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    VarTable::new(&d, &l, &lg)
}

/// (q-only table, q/y table) for the one-sided I-function gluing, with logs
/// for every deformation variable and for y.
pub fn one_sided_tables(
    m: &ToricModel,
    q_order: u32,
    log_total: u32,
) -> (Arc<VarTable>, TruncSpec, Arc<VarTable>, TruncSpec) {
    let defo: Vec<String> = m.class_names.clone();
    let mut logs = log_pairs(&defo);
    let qv = make_table(&defo, &[], &logs);
    let qt = TruncSpec::new(q_order, vec![], log_total);
    logs.push((log_name("y"), "y".to_string()));
    let yv = make_table(&defo, &["y".to_string()], &logs);
    let yt = TruncSpec::new(q_order, vec![m.window(q_order)], log_total);
    (qv, qt, yv, yt)
}

/// The same pair of tables for the two-sided gluing (extra q0 and its log).
pub fn two_sided_tables(
    m: &ToricModel,
    joint_order: u32,
    log_total: u32,
) -> (Arc<VarTable>, TruncSpec, Arc<VarTable>, TruncSpec) {
    let mut defo: Vec<String> = m.class_names.clone();
    defo.push("q0".to_string());
    let mut logs = log_pairs(&defo);
    let qv = make_table(&defo, &[], &logs);
    let qt = TruncSpec::new(joint_order, vec![], log_total);
    logs.push((log_name("y"), "y".to_string()));
    let yv = make_table(&defo, &["y".to_string()], &logs);
    let j = joint_order as i32;
    let yt = TruncSpec::new(joint_order, vec![(-j, j)], log_total);
    (qv, qt, yv, yt)
}

// ============================================================
// Identity checks
// ============================================================

fn residue_error(err: crate::series::SeriesError) -> Mismatch {
    Mismatch {
        location: "residue extraction".to_string(),
        lhs: format!("{err}"),
        rhs: "a log-free constant term in y".to_string(),
    }
}

/// One-sided I-function gluing for a model, at the given orders.
pub fn check_ifn_glue_one_sided(
    m: &ToricModel,
    q_order: u32,
    log_total: u32,
) -> Result<(), Mismatch> {
    let alg = model_algebra(m);
    let alg_p = model_algebra_with_p(m, presubstitution_p_order(m));
    let (qv, qt, yv, yt) = one_sided_tables(m, q_order, log_total);
    let subset = all_defo_indices(&qv, m);
    let lhs = i_smoothing(m, &alg, &qv, &qt).hadamard(&i_central(m, &alg, &qv, &qt), &subset);
    let c1 = i_chart1(m, &alg, &yv, &yt);
    let c2 = substitute_p(&i_chart2_one_sided(m, &alg_p, &yv, &yt), m, &alg);
    let subset_y = all_defo_indices(&yv, m);
    let rhs = c1
        .hadamard(&c2, &subset_y)
        .constant_term("y")
        .map_err(residue_error)?;
    compare(&lhs, &rhs)
}

/// Two-sided I-function gluing for a model, at the given joint order.
pub fn check_ifn_glue_two_sided(
    m: &ToricModel,
    joint_order: u32,
    log_total: u32,
    p_order: u16,
) -> Result<(), Mismatch> {
    let alg = model_algebra_with_p(m, p_order);
    let (qv, qt, yv, yt) = two_sided_tables(m, joint_order, log_total);
    let subset = all_defo_indices(&qv, m);
    let lhs = i_smoothing_two(m, &alg, &qv, &qt)
        .hadamard(&i_central(m, &alg, &qv, &qt), &subset);
    let c1 = i_chart1_two(m, &alg, &yv, &yt)
        .subst_defo_monomial("q0", &[("y", -1)])
        .map_err(residue_error)?
        .map_log(&log_name("q0"), &[(Q::one(), &log_name("q0")), (-Q::one(), &log_name("y"))])
        .map_err(residue_error)?;
    let c2 = i_chart2_two(m, &alg, &yv, &yt, "y");
    let subset_y = all_defo_indices(&yv, m);
    let rhs = c1
        .hadamard(&c2, &subset_y)
        .constant_term("y")
        .map_err(residue_error)?;
    compare(&lhs, &rhs)
}

// ============================================================
// Component identities (two-sided family of the quintic)
// ============================================================

/// Coefficient of the cohomology basis monomial `exps` as a scalar series.
pub fn extract_class(s: &CohomSeries, exps: &[u16]) -> QSeries {
    let e = exps.to_vec();
    s.map_coeff(move |c| c.coeff(&e))
}

/// The H^1 and H^2 component identities of the two-sided gluing for the
/// quintic, mod H^3 and P^2: the class-(h,0) coefficient of a Hadamard
/// product expands into h+1 pairwise Hadamard products of component series.
pub fn check_ifn_components_two_sided(
    m: &ToricModel,
    joint_order: u32,
    log_total: u32,
) -> Result<(), Mismatch> {
    assert_eq!(m.r(), 1, "component layout assumes one Kaehler class");
    let alg = model_algebra_with_p(m, 2);
    let (qv, qt, yv, yt) = two_sided_tables(m, joint_order, log_total);
    let i_tx = i_smoothing_two(m, &alg, &qv, &qt);
    let i_x0 = i_central(m, &alg, &qv, &qt);
    let t1 = i_chart1_two(m, &alg, &yv, &yt)
        .subst_defo_monomial("q0", &[("y", -1)])
        .map_err(residue_error)?
        .map_log(&log_name("q0"), &[(Q::one(), &log_name("q0")), (-Q::one(), &log_name("y"))])
        .map_err(residue_error)?;
    let t2 = i_chart2_two(m, &alg, &yv, &yt, "y");
    let subset_q = all_defo_indices(&qv, m);
    let subset_y = all_defo_indices(&yv, m);
    for h in [1u16, 2] {
        // sum_{a+b=h} f_{a,0}(lhs factors), resp. of the chart factors.
        let mut lhs: Option<QSeries> = None;
        let mut rhs_integrand: Option<QSeries> = None;
        for a in 0..=h {
            let lterm = extract_class(&i_tx, &[a, 0])
                .hadamard(&extract_class(&i_x0, &[h - a, 0]), &subset_q);
            lhs = Some(match lhs {
                None => lterm,
                Some(acc) => acc.add(&lterm),
            });
            let rterm = extract_class(&t1, &[a, 0])
                .hadamard(&extract_class(&t2, &[h - a, 0]), &subset_y);
            rhs_integrand = Some(match rhs_integrand {
                None => rterm,
                Some(acc) => acc.add(&rterm),
            });
        }
        let lhs = lhs.unwrap();
        let rhs = rhs_integrand
            .unwrap()
            .constant_term("y")
            .map_err(residue_error)?;
        compare(&lhs, &rhs).map_err(|e| Mismatch {
            location: format!("class H^{h} component: {}", e.location),
            ..e
        })?;
    }
    Ok(())
}

// ============================================================
// Relative I-function at z = 1
// ============================================================

/// Which side of the degeneration the relative I-function restricts to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelSide {
    Chart1,
    Chart2,
}

/// The z = 1 relative I-function of the quintic family against its quartic
/// slice, written directly from its closed form (quintic-specific):
///
///   Chart1: q1^H q0^P sum prod_{k<=4d+d0}(4H+P+k)
///             / (prod_{k<=d}(H+k)^4 prod_{k<=d0}(P+k)) q1^d q0^{d0}
///   Chart2: q1^H q0^P sum prod_{k<=4d}(4H+k) prod_{k<=d+d0}(H+P+k)
///             / (prod_{k<=d}(H+k)^5 prod_{k<=d0}(P+k)) q1^d q0^{d0}
pub fn rel_i0(
    side: RelSide,
    alg: &Arc<NilpotentAlgebra>,
    vars: &Arc<VarTable>,
    trunc: &TruncSpec,
) -> CohomSeries {
    let h = CohomElement::generator(alg, "q1").expect("H generator named q1");
    let p = CohomElement::generator(alg, "P").expect("P generator");
    let h4 = h.scale(&crate::rat::qi(4));
    let qpos = any_pos(vars, "q1");
    let q0pos = any_pos(vars, "q0");
    let mut sum = CohomSeries::zero(vars, trunc);
    for d in 0..=trunc.q_total as i32 {
        for d0 in 0..=(trunc.q_total as i32 - d) {
            let c = match side {
                RelSide::Chart1 => rising(&h4.add(&p), (4 * d + d0) as i64)
                    .cmul(&rising(&h, d as i64).inv().unwrap().pow(4))
                    .cmul(&rising(&p, d0 as i64).inv().unwrap()),
                RelSide::Chart2 => rising(&h4, 4 * d as i64)
                    .cmul(&rising(&h.add(&p), (d + d0) as i64))
                    .cmul(&rising(&h, d as i64).inv().unwrap().pow(5))
                    .cmul(&rising(&p, d0 as i64).inv().unwrap()),
            };
            let mut exps = vec![0i32; vars.width()];
            exps[qpos] = d;
            exps[q0pos] = d0;
            sum.add_term(exps, c);
        }
    }
    let terms: Vec<(CohomElement, &str)> =
        vec![(h.clone(), "Lq1"), (p.clone(), "Lq0")];
    exp_prefactor(vars, trunc, &terms).mul(&sum)
}

/// The z = 1 relative I-functions coincide with the chart I-functions of the
/// two-sided blow-up family of the quintic, with the exceptional degree on
/// the deformation variable q0.
pub fn check_rel_i0(joint_order: u32, log_total: u32) -> Result<(), Mismatch> {
    let m = crate::toric::quintic_p4();
    let alg = model_algebra_with_p(&m, 2);
    let (qv, qt, _, _) = two_sided_tables(&m, joint_order, log_total);
    let from_rel = rel_i0(RelSide::Chart1, &alg, &qv, &qt);
    let from_charts = i_chart1_two(&m, &alg, &qv, &qt);
    compare(&from_rel, &from_charts).map_err(|e| Mismatch {
        location: format!("relative side 1: {}", e.location),
        ..e
    })?;
    let from_rel = rel_i0(RelSide::Chart2, &alg, &qv, &qt);
    let from_charts = i_chart2_two(&m, &alg, &qv, &qt, "q0");
    compare(&from_rel, &from_charts).map_err(|e| Mismatch {
        location: format!("relative side 2: {}", e.location),
        ..e
    })
}

// ============================================================
// Tests
// ============================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{harmonic, qi};
    use crate::toric::{conifold_p4xp1, p1_power, pn_x_p1, quintic_p4};

    fn quintic_alg() -> Arc<NilpotentAlgebra> {
        model_algebra(&quintic_p4())
    }

    #[test]
    fn rising_product_h_part() {
        // prod_{k=1}^{5}(5H + k) = 120 + 1370 H + ... mod H^3.
        let alg = quintic_alg();
        let m = quintic_p4();
        let five_h = class_form(&alg, &m, &[5]);
        let prod = rising(&five_h, 5);
        assert_eq!(prod.coeff(&[0]), qi(120));
        assert_eq!(prod.coeff(&[1]), qi(1370));
    }

    #[test]
    fn central_i_matches_quartic_log_partner() {
        // The H-coefficient of the central I-function at q^n, log degree 0,
        // is 4 (4n)!/(n!)^4 (H_{4n} - H_n) for the quartic-surface family.
        let m = quintic_p4();
        let alg = quintic_alg();
        let (qv, qt, _, _) = one_sided_tables(&m, 3, 2);
        let s = i_central(&m, &alg, &qv, &qt);
        for n in 0..=3i32 {
            let scalar = crate::rat::q_factorial(4 * n as u32)
                / crate::rat::q_factorial(n as u32).pow(4);
            let want_h = scalar.clone() * qi(4) * harmonic(n as u32 + 1, 4 * n as u32);
            let c = s.coeff_at(&[n, 0]).cloned();
            let c = c.unwrap_or_else(|| CohomElement::zero(&alg));
            assert_eq!(c.coeff(&[0]), scalar, "scalar at n={n}");
            assert_eq!(c.coeff(&[1]), want_h, "H part at n={n}");
        }
        // The log-degree-1 coefficient restates the scalar: e^{HL} f(q,H).
        let c = s.coeff_at(&[1, 1]).cloned().unwrap();
        assert_eq!(c.coeff(&[1]), qi(24));
    }

    #[test]
    fn smoothing_i_matches_quintic_log_partner() {
        // H-coefficient at q^n: 5 (5n)!/(n!)^5 (H_{5n} - H_n); 770 at n = 1.
        let m = quintic_p4();
        let alg = quintic_alg();
        let (qv, qt, _, _) = one_sided_tables(&m, 2, 2);
        let s = i_smoothing(&m, &alg, &qv, &qt);
        for n in 1..=2i32 {
            let scalar = crate::rat::q_factorial(5 * n as u32)
                / crate::rat::q_factorial(n as u32).pow(5);
            let want_h = scalar.clone() * qi(5) * harmonic(n as u32 + 1, 5 * n as u32);
            let c = s.coeff_at(&[n, 0]).cloned().unwrap();
            assert_eq!(c.coeff(&[0]), scalar);
            assert_eq!(c.coeff(&[1]), want_h);
        }
        let c = s.coeff_at(&[1, 0]).cloned().unwrap();
        assert_eq!(c.coeff(&[1]), qi(770));
    }

    #[test]
    fn two_sided_smoothing_p_part() {
        // At (d, d0) = (1, 0): prod_{k<=4}(4H+P+k) prod_{k<=1}(H+P+k)
        // /prod(H+k)^5 has P-coefficient 24 (H_4 + 1).
        let m = quintic_p4();
        let alg = model_algebra_with_p(&m, 2);
        let (qv, qt, _, _) = two_sided_tables(&m, 2, 2);
        let s = i_smoothing_two(&m, &alg, &qv, &qt);
        let c = s.coeff_at(&[1, 0, 0, 0]).cloned().unwrap();
        assert_eq!(c.coeff(&[0, 0]), qi(24));
        assert_eq!(c.coeff(&[0, 1]), qi(24) * (harmonic(1, 4) + qi(1)));
    }

    #[test]
    fn scalar_parts_agree_with_period_series() {
        // The class-(0,..,0), log-free part of each I-function is the
        // corresponding period series.
        let m = quintic_p4();
        let alg = model_algebra_with_p(&m, 2);
        let (qv, qt, _, _) = two_sided_tables(&m, 3, 2);
        let f0 = extract_class(&i_smoothing_two(&m, &alg, &qv, &qt), &[0, 0]);
        let want = crate::periods::f0_smoothing_two(&m, &qv, &qt);
        assert!(f0.first_mismatch(&want).is_none());
        let f0c = extract_class(&i_central(&m, &alg, &qv, &qt), &[0, 0]);
        let wantc = crate::periods::f0_central(&m, &qv, &qt);
        assert!(f0c.first_mismatch(&wantc).is_none());
    }

    #[test]
    fn glue_one_sided_quintic_both_orientations() {
        check_ifn_glue_one_sided(&quintic_p4(), 2, 2).unwrap();
        check_ifn_glue_one_sided(&quintic_p4().flip(), 2, 2).unwrap();
    }

    #[test]
    fn glue_one_sided_log_free_variant() {
        check_ifn_glue_one_sided(&quintic_p4(), 2, 0).unwrap();
    }

    #[test]
    fn glue_one_sided_other_models() {
        check_ifn_glue_one_sided(&conifold_p4xp1(), 2, 1).unwrap();
        check_ifn_glue_one_sided(&pn_x_p1(2, 3), 2, 1).unwrap();
        check_ifn_glue_one_sided(&p1_power(2), 2, 1).unwrap();
    }

    #[test]
    fn glue_two_sided_quintic() {
        check_ifn_glue_two_sided(&quintic_p4(), 2, 2, 2).unwrap();
    }

    #[test]
    fn component_identities() {
        check_ifn_components_two_sided(&quintic_p4(), 2, 2).unwrap();
    }

    #[test]
    fn relative_i_equality() {
        check_rel_i0(2, 2).unwrap();
    }

    #[test]
    fn presubstitution_orders() {
        assert_eq!(presubstitution_p_order(&quintic_p4()), 3);
        assert_eq!(presubstitution_p_order(&quintic_p4().flip()), 3);
        assert_eq!(presubstitution_p_order(&conifold_p4xp1()), 2);
        assert_eq!(presubstitution_p_order(&p1_power(2)), 2);
    }
}
