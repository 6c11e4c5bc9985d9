//! Generalized functional invariants and their gluing laws.
//!
//! A degeneration model (see `toric`) determines, for each Kaehler class i,
//! the exponents s_i = <rho_01, e_i-th unit> summed over the first refinement
//! part and e_i over the second; concretely
//!
//!   s_i = sum_{j in S1} m_ij,   e_i = sum_{j in S2} m_ij.
//!
//! One-sided blow-up family and its two charts:
//!
//!   lambda_i     = q_i / ((1-y)^{s_i} y^{e_i})
//!   lambda_{i,1} = q_{i,1} / y_1^{e_i}
//!   lambda_{i,2} = q_{i,2} y_2^{e_i} / (1 - q_{0,2}/y_2)^{s_i}
//!
//! glued by q_i = q_{i,1} = q_{i,2} y_2^{e_i} and y = y_1 = q_{0,2}/y_2; the
//! product law states lambda_i / q_i = (lambda_{i,1}/q_i)(lambda_{i,2}/q_i).
//!
//! Two-sided blow-up family:
//!
//!   lambda_i     = q_i / ((1-y)^{s_i} (1-q_0/y)^{e_i})
//!   lambda_{i,1} = q_{i,1} / (1 - q_{0,1}/y_1)^{e_i}
//!   lambda_{i,2} = q_{i,2} / (1 - q_{0,2}/y_2)^{s_i}
//!
//! glued by y = y_1 = q_{0,2}/y_2, q_0 = q_{0,1}, q_i = q_{i,1} = q_{i,2},
//! with the same product law.
//!
//! Hurwitz cusp profiles. For partitions a = [a_1..a_n] of A and
//! b = [b_1..b_m] of B, two normalizations of the same gluing are checked.
//!
//! Normalized-at-infinity charts:
//!
//!   lambda^1 = Q prod_{i<n} (1 - c_i/y_1)^{a_i} / (1 - q_1/y_1)^A
//!   lambda^2 = Q prod_{j<m} (1 - d_j/y_2)^{b_j} / (1 - q_2/y_2)^B
//!
//! glued by q = q_1, y_1 y_2 = q, y = y_1 = q_2/y_2 (which forces q_2 = q);
//! with db_j = q/d_j the product is
//!
//!   prod_{j<m} (-db_j)^{-b_j} y^{a_n} prod_{i<n}(y - c_i)^{a_i}
//!       prod_{j<m}(y - db_j)^{b_j} / ((y-q)^A (1-y)^B),
//!
//! and after yt = (y-q)/(1-q), ct_i = f(c_i), dt_j = f(db_j),
//!
//!   z2 = Q prod_{j<m}(-db_j)^{-b_j} q^{a_n} / (1-q)^{a_n + b_m},
//!   z1 = z2 (1-q)/q,
//!   Q lambda^1 lambda^2 / (Q_1 Q_2)
//!     = z2^{1-a_n} (z1 yt + z2)^{a_n}
//!       prod(yt - ct_i)^{a_i} prod(yt - dt_j)^{b_j} / (yt^A (1-yt)^B).
//!
//! Root-normalized charts (numerator factors (q_1/y_1 - alpha_i)^{a_i},
//! (q_2/y_2 - beta_j)^{b_j}, glued by q = q_1, y = y_1 = q_2/y_2 with q_2
//! free and cancelling): same normal form with
//!
//!   z2 = Q (-1)^{sum_{i<n} a_i} prod alpha_i^{a_i} q^{a_n} / (1-q)^{a_n+b_m},
//!
//! and roots at_i = f(q/alpha_i), bt_j = f(beta_j).
//!
//! Landau-Ginzburg potential fibers. The chart-1 fiber equations
//!
//!   x_1 + ... + x_n = 1,   q_{0,1}/y_1 + sum_i q_{i,1}/x_i = 1
//!
//! become, under y_1 = q_{0,1} z_1/(z_1 + q_{0,1}), x_i -> -x_i/z_1,
//! q_{i,1} -> -q_{i,1}/z_1, nonzero monomial multiples of
//!
//!   z_1 + sum_i x_i = 0,   q_{0,1}/z_1 + sum_i q_{i,1}/x_i = 0,
//!
//! and the chart-2 equations
//!
//!   q_{0,2}/y_2 + sum_i x_i = 1,   sum_i q_{i,2}/x_i = 1
//!
//! become, under y_2 = q_{0,2}/(z_2+1), q_{i,2} -> -z_2 q_{i,2}/q_{0,2},
//! monomial multiples of z_2 + sum x_i = 0 and
//! q_{0,2}/z_2 + sum q_{i,2}/x_i = 0.

use crate::periods::Mismatch;
use crate::ratfun::{PolyRing, RationalFunc};
use crate::toric::ToricModel;
use num::traits::Zero;
use std::sync::Arc;

// ============================================================
// Per-class exponents
// ============================================================

/// (s_i, e_i) for each Kaehler class of the model.
pub fn class_exponents(m: &ToricModel) -> Vec<(u32, u32)> {
    (0..m.r())
        .map(|i| {
            let s: i64 = m.s1.iter().map(|&j| m.rows[j][i]).sum();
            let e: i64 = m.s2.iter().map(|&j| m.rows[j][i]).sum();
            (s as u32, e as u32)
        })
        .collect()
}

fn mismatch(location: &str, lhs: &RationalFunc, rhs: &RationalFunc) -> Mismatch {
    Mismatch {
        location: location.to_string(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

fn expect_eq(
    location: &str,
    lhs: &RationalFunc,
    rhs: &RationalFunc,
) -> Result<(), Mismatch> {
    if lhs.eq_exact(rhs) {
        Ok(())
    } else {
        Err(mismatch(location, lhs, rhs))
    }
}

// ============================================================
// Product laws from toric data
// ============================================================

/// One-sided product law for every class, with the chart-2 invariant built in
/// its own coordinates and glued by substitution; the chart variable y_2
/// must cancel for the identity to hold.
pub fn check_fi_product_one_sided(m: &ToricModel) -> Result<(), Mismatch> {
    let mut names: Vec<&str> = m.class_names.iter().map(|s| s.as_str()).collect();
    names.extend_from_slice(&["y", "y2", "qc2", "q02"]);
    let ring = PolyRing::new(&names);
    let one = RationalFunc::one(&ring);
    let y = RationalFunc::var(&ring, "y");
    let y2 = RationalFunc::var(&ring, "y2");
    for (i, (s, e)) in class_exponents(m).iter().enumerate() {
        let qv = RationalFunc::var(&ring, &m.class_names[i]);
        let lambda = qv
            .div(&one.sub(&y).pow(*s as i64))
            .div(&y.pow(*e as i64));
        let chart1 = qv.div(&y.pow(*e as i64));
        let qc2 = RationalFunc::var(&ring, "qc2");
        let q02 = RationalFunc::var(&ring, "q02");
        let chart2_own = qc2
            .mul(&y2.pow(*e as i64))
            .div(&one.sub(&q02.div(&y2)).pow(*s as i64));
        let chart2 = chart2_own
            .subst_var("qc2", &qv.mul(&y2.pow(-(*e as i64))))
            .subst_var("q02", &y.mul(&y2));
        let lhs = lambda.div(&qv);
        let rhs = chart1.div(&qv).mul(&chart2.div(&qv));
        expect_eq(
            &format!("one-sided product law, model {}, class {}", m.name, m.class_names[i]),
            &lhs,
            &rhs,
        )?;
    }
    Ok(())
}

/// Two-sided product law for every class, chart invariants glued by
/// substitution as above.
pub fn check_fi_product_two_sided(m: &ToricModel) -> Result<(), Mismatch> {
    let mut names: Vec<&str> = m.class_names.iter().map(|s| s.as_str()).collect();
    names.extend_from_slice(&["q0", "y", "y2", "qc1", "q01", "qc2", "q02"]);
    let ring = PolyRing::new(&names);
    let one = RationalFunc::one(&ring);
    let y = RationalFunc::var(&ring, "y");
    let y2 = RationalFunc::var(&ring, "y2");
    let q0 = RationalFunc::var(&ring, "q0");
    for (i, (s, e)) in class_exponents(m).iter().enumerate() {
        let qv = RationalFunc::var(&ring, &m.class_names[i]);
        let lambda = qv
            .div(&one.sub(&y).pow(*s as i64))
            .div(&one.sub(&q0.div(&y)).pow(*e as i64));
        let qc1 = RationalFunc::var(&ring, "qc1");
        let q01 = RationalFunc::var(&ring, "q01");
        let chart1_own = qc1.div(&one.sub(&q01.div(&y)).pow(*e as i64));
        let chart1 = chart1_own.subst_var("qc1", &qv).subst_var("q01", &q0);
        let qc2 = RationalFunc::var(&ring, "qc2");
        let q02 = RationalFunc::var(&ring, "q02");
        let chart2_own = qc2.div(&one.sub(&q02.div(&y2)).pow(*s as i64));
        let chart2 = chart2_own
            .subst_var("qc2", &qv)
            .subst_var("q02", &y.mul(&y2));
        let lhs = lambda.div(&qv);
        let rhs = chart1.div(&qv).mul(&chart2.div(&qv));
        expect_eq(
            &format!("two-sided product law, model {}, class {}", m.name, m.class_names[i]),
            &lhs,
            &rhs,
        )?;
    }
    Ok(())
}

// ============================================================
// Hurwitz cusp profiles
// ============================================================

/// All partitions of n into nonincreasing positive parts.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        let top = max.min(n);
        for k in (1..=top).rev() {
            prefix.push(k);
            rec(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All ordered profile pairs (a, b) with |a| + |b| <= max_total.
pub fn hurwitz_profile_pairs(max_total: u32) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut out = Vec::new();
    for ta in 1..max_total {
        for tb in 1..=(max_total - ta) {
            for a in partitions(ta) {
                for b in partitions(tb) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
    }
    out
}

struct HurwitzVars {
    ring: Arc<PolyRing>,
    c_names: Vec<String>,
    d_names: Vec<String>,
}

fn hurwitz_ring(a: &[u32], b: &[u32], extra: &[&str]) -> HurwitzVars {
    let c_names: Vec<String> = (1..a.len()).map(|i| format!("c{i}")).collect();
    let d_names: Vec<String> = (1..b.len()).map(|j| format!("d{j}")).collect();
    let mut names: Vec<&str> = vec!["y", "q", "Q", "y1", "y2", "qq1", "qq2"];
    names.extend(c_names.iter().map(|s| s.as_str()));
    names.extend(d_names.iter().map(|s| s.as_str()));
    names.extend_from_slice(extra);
    HurwitzVars {
        ring: PolyRing::new(&names),
        c_names,
        d_names,
    }
}

/// The three-identity check for the normalized-at-infinity charts:
/// direct glued form, tilde-coordinate form, and the (z1, z2) normal form.
pub fn check_hurwitz_normalized(a: &[u32], b: &[u32]) -> Result<(), Mismatch> {
    assert!(!a.is_empty() && !b.is_empty(), "empty cusp profile");
    let hv = hurwitz_ring(a, b, &[]);
    let ring = &hv.ring;
    let one = RationalFunc::one(ring);
    let y = RationalFunc::var(ring, "y");
    let q = RationalFunc::var(ring, "q");
    let bigq = RationalFunc::var(ring, "Q");
    let tot_a: u32 = a.iter().sum();
    let tot_b: u32 = b.iter().sum();
    let a_n = *a.last().unwrap();
    let b_m = *b.last().unwrap();
    let label = format!("cusp profile a={a:?}, b={b:?} (normalized charts)");

    // Charts in their own coordinates.
    let y1 = RationalFunc::var(ring, "y1");
    let qq1 = RationalFunc::var(ring, "qq1");
    let mut lam1 = bigq.div(&one.sub(&qq1.div(&y1)).pow(tot_a as i64));
    for (i, ai) in a.iter().take(a.len() - 1).enumerate() {
        let c = RationalFunc::var(ring, &hv.c_names[i]);
        lam1 = lam1.mul(&one.sub(&c.div(&y1)).pow(*ai as i64));
    }
    let y2 = RationalFunc::var(ring, "y2");
    let qq2 = RationalFunc::var(ring, "qq2");
    let mut lam2 = bigq.div(&one.sub(&qq2.div(&y2)).pow(tot_b as i64));
    for (j, bj) in b.iter().take(b.len() - 1).enumerate() {
        let d = RationalFunc::var(ring, &hv.d_names[j]);
        lam2 = lam2.mul(&one.sub(&d.div(&y2)).pow(*bj as i64));
    }

    // Gluing: q = q_1, y = y_1 = q_2/y_2 and y_1 y_2 = q force q_2 = q.
    let lam1 = lam1.subst_var("qq1", &q).subst_var("y1", &y);
    let lam2 = lam2.subst_var("qq2", &q).subst_var("y2", &q.div(&y));
    let glued = lam1.div(&bigq).mul(&lam2.div(&bigq));

    // Direct form of the glued invariant.
    let mut prefactor = one.clone();
    let mut num = y.pow(a_n as i64);
    for (i, ai) in a.iter().take(a.len() - 1).enumerate() {
        let c = RationalFunc::var(ring, &hv.c_names[i]);
        num = num.mul(&y.sub(&c).pow(*ai as i64));
    }
    for (j, bj) in b.iter().take(b.len() - 1).enumerate() {
        let d = RationalFunc::var(ring, &hv.d_names[j]);
        let db = q.div(&d);
        prefactor = prefactor.mul(&db.neg().pow(-(*bj as i64)));
        num = num.mul(&y.sub(&db).pow(*bj as i64));
    }
    let den = y
        .sub(&q)
        .pow(tot_a as i64)
        .mul(&one.sub(&y).pow(tot_b as i64));
    let direct = prefactor.mul(&num).div(&den);
    expect_eq(&format!("{label}, glued form"), &glued, &direct)?;

    // Tilde coordinates.
    let yt = y.sub(&q).div(&one.sub(&q));
    let f = |p: &RationalFunc| p.sub(&q).div(&one.sub(&q));
    let mut tnum = yt.add(&q.div(&one.sub(&q))).pow(a_n as i64);
    for (i, ai) in a.iter().take(a.len() - 1).enumerate() {
        let c = RationalFunc::var(ring, &hv.c_names[i]);
        tnum = tnum.mul(&yt.sub(&f(&c)).pow(*ai as i64));
    }
    for (j, bj) in b.iter().take(b.len() - 1).enumerate() {
        let d = RationalFunc::var(ring, &hv.d_names[j]);
        tnum = tnum.mul(&yt.sub(&f(&q.div(&d))).pow(*bj as i64));
    }
    let tden = yt
        .pow(tot_a as i64)
        .mul(&one.sub(&yt).pow(tot_b as i64));
    let tilde_form = prefactor
        .div(&one.sub(&q).pow(b_m as i64))
        .mul(&tnum)
        .div(&tden);
    expect_eq(&format!("{label}, tilde form"), &glued, &tilde_form)?;

    // Normal form: z2^{1-a_n} (z1 yt + z2)^{a_n} * roots / (yt^A (1-yt)^B).
    let z2 = bigq
        .mul(&prefactor)
        .mul(&q.pow(a_n as i64))
        .div(&one.sub(&q).pow((a_n + b_m) as i64));
    let z1 = z2.mul(&one.sub(&q)).div(&q);
    let mut nnum = z1.mul(&yt).add(&z2).pow(a_n as i64);
    for (i, ai) in a.iter().take(a.len() - 1).enumerate() {
        let c = RationalFunc::var(ring, &hv.c_names[i]);
        nnum = nnum.mul(&yt.sub(&f(&c)).pow(*ai as i64));
    }
    for (j, bj) in b.iter().take(b.len() - 1).enumerate() {
        let d = RationalFunc::var(ring, &hv.d_names[j]);
        nnum = nnum.mul(&yt.sub(&f(&q.div(&d))).pow(*bj as i64));
    }
    let normal = z2.pow(1 - a_n as i64).mul(&nnum).div(&tden);
    expect_eq(
        &format!("{label}, normal form"),
        &bigq.mul(&glued),
        &normal,
    )
}

/// The root-normalized charts: the chart-2 modulus q_2 stays free and must
/// cancel from the glued invariant; then the same (z1, z2) normal form holds
/// with the sign-corrected scale factor.
pub fn check_hurwitz_root_normalized(a: &[u32], b: &[u32]) -> Result<(), Mismatch> {
    assert!(!a.is_empty() && !b.is_empty(), "empty cusp profile");
    let hv = hurwitz_ring(a, b, &[]);
    let ring = &hv.ring;
    let one = RationalFunc::one(ring);
    let y = RationalFunc::var(ring, "y");
    let q = RationalFunc::var(ring, "q");
    let bigq = RationalFunc::var(ring, "Q");
    let tot_a: u32 = a.iter().sum();
    let tot_b: u32 = b.iter().sum();
    let a_n = *a.last().unwrap();
    let b_m = *b.last().unwrap();
    let label = format!("cusp profile a={a:?}, b={b:?} (root charts)");

    let y1 = RationalFunc::var(ring, "y1");
    let qq1 = RationalFunc::var(ring, "qq1");
    let mut lam1 = bigq.div(&one.sub(&qq1.div(&y1)).pow(tot_a as i64));
    for (i, ai) in a.iter().take(a.len() - 1).enumerate() {
        let c = RationalFunc::var(ring, &hv.c_names[i]);
        lam1 = lam1.mul(&qq1.div(&y1).sub(&c).pow(*ai as i64));
    }
    let y2 = RationalFunc::var(ring, "y2");
    let qq2 = RationalFunc::var(ring, "qq2");
    let mut lam2 = bigq.div(&one.sub(&qq2.div(&y2)).pow(tot_b as i64));
    for (j, bj) in b.iter().take(b.len() - 1).enumerate() {
        let d = RationalFunc::var(ring, &hv.d_names[j]);
        lam2 = lam2.mul(&qq2.div(&y2).sub(&d).pow(*bj as i64));
    }

    // Gluing: q = q_1, y = y_1 = q_2/y_2; q_2 remains free.
    let lam1 = lam1.subst_var("qq1", &q).subst_var("y1", &y);
    let lam2 = lam2.subst_var("y2", &qq2.div(&y));
    let glued = lam1.div(&bigq).mul(&lam2.div(&bigq));

    // Direct glued form: free of q_2, so this equality also proves the
    // cancellation.
    let mut num = y.pow(a_n as i64);
    for (i, ai) in a.iter().take(a.len() - 1).enumerate() {
        let c = RationalFunc::var(ring, &hv.c_names[i]);
        num = num.mul(&q.sub(&y.mul(&c)).pow(*ai as i64));
    }
    for (j, bj) in b.iter().take(b.len() - 1).enumerate() {
        let d = RationalFunc::var(ring, &hv.d_names[j]);
        num = num.mul(&y.sub(&d).pow(*bj as i64));
    }
    let den = y
        .sub(&q)
        .pow(tot_a as i64)
        .mul(&one.sub(&y).pow(tot_b as i64));
    let direct = num.div(&den);
    expect_eq(&format!("{label}, glued form"), &glued, &direct)?;

    // Normal form with the sign-corrected scale factor.
    let yt = y.sub(&q).div(&one.sub(&q));
    let sum_head: u32 = a.iter().take(a.len() - 1).sum();
    let mut z2 = bigq
        .mul(&q.pow(a_n as i64))
        .div(&one.sub(&q).pow((a_n + b_m) as i64));
    if sum_head % 2 == 1 {
        z2 = z2.neg();
    }
    for (i, ai) in a.iter().take(a.len() - 1).enumerate() {
        let c = RationalFunc::var(ring, &hv.c_names[i]);
        z2 = z2.mul(&c.pow(*ai as i64));
    }
    let z1 = z2.mul(&one.sub(&q)).div(&q);
    let mut nnum = z1.mul(&yt).add(&z2).pow(a_n as i64);
    for (i, ai) in a.iter().take(a.len() - 1).enumerate() {
        let c = RationalFunc::var(ring, &hv.c_names[i]);
        let root = q.div(&c).sub(&q).div(&one.sub(&q));
        nnum = nnum.mul(&yt.sub(&root).pow(*ai as i64));
    }
    for (j, bj) in b.iter().take(b.len() - 1).enumerate() {
        let d = RationalFunc::var(ring, &hv.d_names[j]);
        let root = d.sub(&q).div(&one.sub(&q));
        nnum = nnum.mul(&yt.sub(&root).pow(*bj as i64));
    }
    let tden = yt
        .pow(tot_a as i64)
        .mul(&one.sub(&yt).pow(tot_b as i64));
    let normal = z2.pow(1 - a_n as i64).mul(&nnum).div(&tden);
    expect_eq(
        &format!("{label}, normal form"),
        &bigq.mul(&glued),
        &normal,
    )
}

/// The quintic chain: cusp profiles ([1],[4]) and ([4],[1]) have normal forms
/// (z1 yt + z2)/(yt (1-yt)^4) and z2^{-3}(z1 yt + z2)^4/(yt^4 (1-yt)) with
///
///   ([1],[4]):  z2 = Q q/(1-q)^5,   z1 = Q/(1-q)^4,
///   ([4],[1]):  z2 = Q q^4/(1-q)^5, z1 = Q q^3/(1-q)^4,
///
/// and their z1 -> 0 limits are the one-sided invariants of the quintic
/// degeneration in its two orientations.
pub fn check_hurwitz_quintic_chain() -> Result<(), Mismatch> {
    check_hurwitz_normalized(&[1], &[4])?;
    check_hurwitz_normalized(&[4], &[1])?;

    // Explicit scale factors.
    let ring = PolyRing::new(&["y", "q", "Q"]);
    let one = RationalFunc::one(&ring);
    let q = RationalFunc::var(&ring, "q");
    let bigq = RationalFunc::var(&ring, "Q");
    let z2_14 = bigq.mul(&q).div(&one.sub(&q).pow(5));
    let z1_14 = bigq.div(&one.sub(&q).pow(4));
    expect_eq(
        "quintic chain, z1 = z2 (1-q)/q for ([1],[4])",
        &z1_14,
        &z2_14.mul(&one.sub(&q)).div(&q),
    )?;
    let z2_41 = bigq.mul(&q.pow(4)).div(&one.sub(&q).pow(5));
    let z1_41 = z2_41.mul(&one.sub(&q)).div(&q);
    expect_eq(
        "quintic chain, z1 value for ([4],[1])",
        &z1_41,
        &bigq.mul(&q.pow(3)).div(&one.sub(&q).pow(4)),
    )?;

    // z1 -> 0 limits in the free (z1, z2, yt) family.
    let fring = PolyRing::new(&["z1", "z2", "yt"]);
    let fone = RationalFunc::one(&fring);
    let z1 = RationalFunc::var(&fring, "z1");
    let z2 = RationalFunc::var(&fring, "z2");
    let yt = RationalFunc::var(&fring, "yt");
    let zero = RationalFunc::zero(&fring);

    // Profile ([1],[4]): limit is the one-sided invariant with (s,e) = (4,1).
    let normal_14 = z1
        .mul(&yt)
        .add(&z2)
        .div(&yt.mul(&fone.sub(&yt).pow(4)));
    let (s, e) = class_exponents(&crate::toric::quintic_p4().flip())[0];
    let template_41_orientation = z2
        .div(&fone.sub(&yt).pow(s as i64))
        .div(&yt.pow(e as i64));
    expect_eq(
        "quintic chain, ([1],[4]) limit z1 -> 0",
        &normal_14.subst_var("z1", &zero),
        &template_41_orientation,
    )?;

    // Profile ([4],[1]): limit is the one-sided invariant with (s,e) = (1,4).
    let normal_41 = z2
        .pow(-3)
        .mul(&z1.mul(&yt).add(&z2).pow(4))
        .div(&yt.pow(4).mul(&fone.sub(&yt)));
    let (s, e) = class_exponents(&crate::toric::quintic_p4())[0];
    let template_14_orientation = z2
        .div(&fone.sub(&yt).pow(s as i64))
        .div(&yt.pow(e as i64));
    expect_eq(
        "quintic chain, ([4],[1]) limit z1 -> 0",
        &normal_41.subst_var("z1", &zero),
        &template_14_orientation,
    )
}

// ============================================================
// Landau-Ginzburg potential fibers
// ============================================================

/// A transformed fiber equation must be a nonzero monomial multiple of its
/// normal-form target.
fn expect_monomial_multiple(
    location: &str,
    transformed: &RationalFunc,
    target: &RationalFunc,
) -> Result<(), Mismatch> {
    let quotient = transformed.div(target);
    match quotient.as_monomial() {
        Some((c, _)) if !c.is_zero() => Ok(()),
        _ => Err(mismatch(location, transformed, target)),
    }
}

/// Normal-form check for both Landau-Ginzburg charts with n fiber variables.
pub fn check_lg_normal_form(n: usize) -> Result<(), Mismatch> {
    assert!(n >= 1, "need at least one fiber variable");
    let x_names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let p_names: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
    let mut names: Vec<&str> = vec!["z1", "z2", "q01", "q02", "y1", "y2"];
    names.extend(x_names.iter().map(|s| s.as_str()));
    names.extend(p_names.iter().map(|s| s.as_str()));
    let ring = PolyRing::new(&names);
    let one = RationalFunc::one(&ring);
    let z1 = RationalFunc::var(&ring, "z1");
    let z2 = RationalFunc::var(&ring, "z2");
    let q01 = RationalFunc::var(&ring, "q01");
    let q02 = RationalFunc::var(&ring, "q02");
    let y1 = RationalFunc::var(&ring, "y1");
    let y2 = RationalFunc::var(&ring, "y2");
    let xs: Vec<RationalFunc> = x_names
        .iter()
        .map(|s| RationalFunc::var(&ring, s))
        .collect();
    let ps: Vec<RationalFunc> = p_names
        .iter()
        .map(|s| RationalFunc::var(&ring, s))
        .collect();
    let sum_x = xs.iter().fold(RationalFunc::zero(&ring), |acc, x| acc.add(x));
    let sum_px = xs
        .iter()
        .zip(ps.iter())
        .fold(RationalFunc::zero(&ring), |acc, (x, p)| {
            acc.add(&p.div(x))
        });

    // Chart 1.
    let f1 = sum_x.sub(&one);
    let f2 = q01.div(&y1).add(&sum_px).sub(&one);
    let image_y1 = q01.mul(&z1).div(&z1.add(&q01));
    let mut t1 = f1.clone();
    let mut t2 = f2.subst_var("y1", &image_y1);
    for i in 0..n {
        let xi = &xs[i];
        let pi = &ps[i];
        t1 = t1.subst_var(&x_names[i], &xi.neg().div(&z1));
        t2 = t2
            .subst_var(&x_names[i], &xi.neg().div(&z1))
            .subst_var(&p_names[i], &pi.neg().div(&z1));
    }
    let target1 = z1.add(&sum_x);
    let target2 = q01.div(&z1).add(&sum_px);
    expect_monomial_multiple(
        &format!("potential chart 1 with {n} fiber variables, first equation"),
        &t1,
        &target1,
    )?;
    // The second equation lands on the target exactly.
    expect_eq(
        &format!("potential chart 1 with {n} fiber variables, second equation"),
        &t2,
        &target2,
    )?;
    // And the first equation's monomial factor is -1/z1.
    let factor = t1.div(&target1);
    let want = one.neg().div(&z1);
    if !factor.eq_exact(&want) {
        return Err(mismatch("potential chart 1, monomial factor", &factor, &want));
    }

    // Chart 2.
    let m1 = q02.div(&y2).add(&sum_x).sub(&one);
    let m2 = sum_px.sub(&one);
    let image_y2 = q02.div(&z2.add(&one));
    let t1 = m1.subst_var("y2", &image_y2);
    let mut t2 = m2.clone();
    for i in 0..n {
        let pi = &ps[i];
        t2 = t2.subst_var(&p_names[i], &z2.neg().mul(pi).div(&q02));
    }
    let target1 = z2.add(&sum_x);
    let target2 = q02.div(&z2).add(&sum_px);
    expect_eq(
        &format!("potential chart 2 with {n} fiber variables, first equation"),
        &t1,
        &target1,
    )?;
    expect_monomial_multiple(
        &format!("potential chart 2 with {n} fiber variables, second equation"),
        &t2,
        &target2,
    )?;
    let factor = t2.div(&target2);
    let want = z2.neg().div(&q02);
    if !factor.eq_exact(&want) {
        return Err(mismatch("potential chart 2, monomial factor", &factor, &want));
    }
    Ok(())
}

// ============================================================
// Tests
// ============================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::{
        conifold_p4xp1, p1_power, p1_power_base, pn_x_p1, pn_x_p1_base, quintic_p4,
    };

    #[test]
    fn class_exponent_values() {
        assert_eq!(class_exponents(&quintic_p4()), vec![(1, 4)]);
        assert_eq!(class_exponents(&quintic_p4().flip()), vec![(4, 1)]);
        assert_eq!(class_exponents(&conifold_p4xp1()), vec![(4, 0), (0, 1)]);
        assert_eq!(class_exponents(&p1_power_base(2)), vec![(1, 1), (1, 1)]);
        assert_eq!(class_exponents(&pn_x_p1_base(2, 3)), vec![(3, 2)]);
    }

    #[test]
    fn one_sided_invariant_matches_written_displays() {
        // Orientation with (s,e) = (4,1): lambda = q1/(y (1-y)^4);
        // orientation with (s,e) = (1,4): lambda = q1/(y^4 (1-y)).
        let ring = PolyRing::new(&["q1", "y"]);
        let one = RationalFunc::one(&ring);
        let q1 = RationalFunc::var(&ring, "q1");
        let y = RationalFunc::var(&ring, "y");
        let (s, e) = class_exponents(&quintic_p4().flip())[0];
        let built = q1.div(&one.sub(&y).pow(s as i64)).div(&y.pow(e as i64));
        let display = q1.div(&y.mul(&one.sub(&y).pow(4)));
        assert!(built.eq_exact(&display));
        let (s, e) = class_exponents(&quintic_p4())[0];
        let built = q1.div(&one.sub(&y).pow(s as i64)).div(&y.pow(e as i64));
        let display = q1.div(&y.pow(4).mul(&one.sub(&y)));
        assert!(built.eq_exact(&display));
    }

    #[test]
    fn two_sided_invariant_matches_written_displays() {
        // Quintic base: lambda = q1/((1-y)(1-q0/y)^4);
        // product-of-lines base: lambda_i = q_i/((1-y)(1-q0/y)).
        let ring = PolyRing::new(&["q1", "q0", "y"]);
        let one = RationalFunc::one(&ring);
        let q1 = RationalFunc::var(&ring, "q1");
        let q0 = RationalFunc::var(&ring, "q0");
        let y = RationalFunc::var(&ring, "y");
        let (s, e) = class_exponents(&quintic_p4())[0];
        let built = q1
            .div(&one.sub(&y).pow(s as i64))
            .div(&one.sub(&q0.div(&y)).pow(e as i64));
        let display = q1
            .div(&one.sub(&y))
            .div(&one.sub(&q0.div(&y)).pow(4));
        assert!(built.eq_exact(&display));
        let (s, e) = class_exponents(&p1_power_base(2))[0];
        assert_eq!((s, e), (1, 1));
    }

    #[test]
    fn product_law_one_sided_registry() {
        for m in [
            quintic_p4(),
            quintic_p4().flip(),
            conifold_p4xp1(),
            conifold_p4xp1().flip(),
            pn_x_p1(2, 3),
            p1_power(2),
        ] {
            check_fi_product_one_sided(&m).unwrap();
        }
    }

    #[test]
    fn product_law_two_sided_registry() {
        for m in [quintic_p4(), p1_power_base(2), pn_x_p1_base(2, 3)] {
            check_fi_product_two_sided(&m).unwrap();
        }
    }

    #[test]
    fn product_line_gluing_with_free_chart_scale() {
        // The product-of-projective-spaces display: with
        // lambda_1 = Q/(1 - qc1/y1)^3, lambda_2 = Q/(1 - qc2/y2)^2 glued by
        // qc1/y1 = y, qc2/y2 = q/y, y1 y2 = 1, q = qc1 qc2, the product is
        // Q/((1-q/y)^2 (1-y)^3) and the free chart coordinate cancels.
        let ring = PolyRing::new(&["Q", "q", "y", "y1", "qc1", "qc2", "y2"]);
        let one = RationalFunc::one(&ring);
        let bigq = RationalFunc::var(&ring, "Q");
        let q = RationalFunc::var(&ring, "q");
        let y = RationalFunc::var(&ring, "y");
        let y1 = RationalFunc::var(&ring, "y1");
        let qc1 = RationalFunc::var(&ring, "qc1");
        let qc2 = RationalFunc::var(&ring, "qc2");
        let y2 = RationalFunc::var(&ring, "y2");
        let lam1 = bigq.div(&one.sub(&qc1.div(&y1)).pow(3));
        let lam2 = bigq.div(&one.sub(&qc2.div(&y2)).pow(2));
        let lam1 = lam1.subst_var("qc1", &y.mul(&y1));
        let lam2 = lam2
            .subst_var("y2", &RationalFunc::one(&ring).div(&y1))
            .subst_var("qc2", &q.div(&y.mul(&y1)));
        let product = lam1.div(&bigq).mul(&lam2.div(&bigq));
        let want = one
            .div(&one.sub(&q.div(&y)).pow(2))
            .div(&one.sub(&y).pow(3));
        assert!(product.eq_exact(&want));
        // The same (s,e) = (3,2) exponents come from the toric base model.
        assert_eq!(class_exponents(&pn_x_p1_base(2, 3)), vec![(3, 2)]);
    }

    #[test]
    fn partitions_and_pairs() {
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(1), vec![vec![1]]);
        let pairs = hurwitz_profile_pairs(6);
        assert_eq!(pairs.len(), 80);
        assert!(pairs.contains(&(vec![1], vec![4])));
        assert!(pairs.contains(&(vec![4], vec![1])));
    }

    #[test]
    fn hurwitz_small_profiles() {
        check_hurwitz_normalized(&[1], &[1]).unwrap();
        check_hurwitz_normalized(&[1], &[4]).unwrap();
        check_hurwitz_normalized(&[2, 1], &[3]).unwrap();
        check_hurwitz_normalized(&[2, 2], &[2, 1]).unwrap();
        check_hurwitz_root_normalized(&[1], &[4]).unwrap();
        check_hurwitz_root_normalized(&[2, 1], &[3]).unwrap();
        check_hurwitz_root_normalized(&[3, 2], &[1]).unwrap();
    }

    #[test]
    fn hurwitz_quintic_chain_and_limits() {
        check_hurwitz_quintic_chain().unwrap();
    }

    #[test]
    fn lg_normal_forms() {
        for n in 1..=3 {
            check_lg_normal_form(n).unwrap();
        }
    }

    #[test]
    fn lg_uses_its_stated_monomial_factors() {
        // Shape check on the mismatch path: a wrong target is rejected.
        let ring = PolyRing::new(&["z1", "x1"]);
        let z1 = RationalFunc::var(&ring, "z1");
        let x1 = RationalFunc::var(&ring, "x1");
        let good = expect_monomial_multiple("t", &z1.mul(&x1), &x1);
        assert!(good.is_ok());
        let bad = expect_monomial_multiple("t", &z1.add(&x1), &x1);
        assert!(bad.is_err());
    }
}
