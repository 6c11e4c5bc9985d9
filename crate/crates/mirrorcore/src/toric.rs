//! Toric complete-intersection degeneration data.
//!
//! A model is the combinatorial input for one Tyurin degeneration:
//!
//!   - an ambient toric variety Y with nef Picard basis p_1, ..., p_r and
//!     toric divisor rows D_j = sum_i m_ij p_i (the m x r weight matrix);
//!   - a nef partition of the rows into groups G_0, ..., G_s cutting out the
//!     Calabi-Yau complete intersection (group l has class rho_l);
//!   - a refinement of the distinguished group G_0 into disjoint parts
//!     S_1 and S_2 with classes rho_01 and rho_02. Chart 1 keeps the S_1
//!     section; the blow-up happens on the S_2 side.
//!
//! Derived quantities used everywhere downstream, writing
//! s_i = <rho_01, p_i-part> and e_i = <rho_02, p_i-part>:
//!
//!   - functional invariants carry (1-y)^{s_i} and y^{e_i} factors;
//!   - the Laurent window that makes residues exact at q-order N is
//!       lo = -N * max_i e_i,
//!       hi =  N * max(max_i e_i, max_i s_i) + N;
//!   - default cohomology truncation orders come from the unit rows of the
//!     weight matrix (a class with c unit rows is a P^{c-1} hyperplane class,
//!     truncated at order min(c, 3)), with the exceptional class at order 2.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricModel {
    pub name: String,
    /// Deformation variable names, one per Picard class.
    pub class_names: Vec<String>,
    /// Weight matrix rows: rows[j][i] is the p_i coefficient of D_j.
    pub rows: Vec<Vec<i64>>,
    /// Nef partition of row indices; groups[0] is the refined group.
    pub groups: Vec<Vec<usize>>,
    /// Refinement of groups[0]: chart-1 part.
    pub s1: Vec<usize>,
    /// Refinement of groups[0]: blow-up part.
    pub s2: Vec<usize>,
}

impl ToricModel {
    pub fn r(&self) -> usize {
        self.class_names.len()
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// Panics if the data is not a valid partition/refinement.
    pub fn validate(&self) {
        assert!(!self.groups.is_empty(), "{}: no bundle groups", self.name);
        for row in &self.rows {
            assert_eq!(row.len(), self.r(), "{}: ragged weight matrix", self.name);
            assert!(
                row.iter().all(|&x| x >= 0),
                "{}: negative weight entry",
                self.name
            );
        }
        let mut seen = vec![false; self.m()];
        for g in &self.groups {
            for &j in g {
                assert!(!seen[j], "{}: row {j} in two groups", self.name);
                seen[j] = true;
            }
        }
        assert!(
            seen.iter().all(|&b| b),
            "{}: rows left out of the partition",
            self.name
        );
        let mut in_g0 = vec![false; self.m()];
        for &j in &self.groups[0] {
            in_g0[j] = true;
        }
        let mut seen0 = vec![false; self.m()];
        for &j in self.s1.iter().chain(self.s2.iter()) {
            assert!(in_g0[j], "{}: refinement row {j} outside G0", self.name);
            assert!(!seen0[j], "{}: refinement row {j} repeated", self.name);
            seen0[j] = true;
        }
        assert_eq!(
            self.s1.len() + self.s2.len(),
            self.groups[0].len(),
            "{}: refinement does not cover G0",
            self.name
        );
    }

    /// Class of a set of rows: sum of the selected weight rows.
    pub fn class_of(&self, rows: &[usize]) -> Vec<i64> {
        let mut acc = vec![0i64; self.r()];
        for &j in rows {
            for (i, a) in acc.iter_mut().enumerate() {
                *a += self.rows[j][i];
            }
        }
        acc
    }

    pub fn rho_group(&self, l: usize) -> Vec<i64> {
        self.class_of(&self.groups[l])
    }

    /// rho_01: class of the chart-1 part of G0.
    pub fn rho1(&self) -> Vec<i64> {
        self.class_of(&self.s1)
    }

    /// rho_02: class of the blow-up part of G0.
    pub fn rho2(&self) -> Vec<i64> {
        self.class_of(&self.s2)
    }

    /// <class, d> for a degree vector d.
    pub fn pair(class: &[i64], d: &[i32]) -> i64 {
        class.iter().zip(d.iter()).map(|(c, x)| c * (*x as i64)).sum()
    }

    /// Swap the refinement orientation (blow up the other chart).
    pub fn flip(&self) -> Self {
        let mut out = self.clone();
        out.name = format!("{}_flip", self.name);
        std::mem::swap(&mut out.s1, &mut out.s2);
        out
    }

    /// Laurent window making residue extraction exact at joint q-order
    /// `q_order` for the one-blow-up gluing in this model.
    pub fn window(&self, q_order: u32) -> (i32, i32) {
        let e_max = *self.rho2().iter().max().unwrap_or(&0) as i32;
        let s_max = *self.rho1().iter().max().unwrap_or(&0) as i32;
        let n = q_order as i32;
        (-n * e_max, n * e_max.max(s_max) + n)
    }

    /// Default truncation order per Picard class: min(unit-row count, 3),
    /// falling back to 3 for classes without unit rows.
    pub fn default_orders(&self) -> Vec<u16> {
        (0..self.r())
            .map(|i| {
                let cnt = self
                    .rows
                    .iter()
                    .filter(|row| {
                        row.iter()
                            .enumerate()
                            .all(|(k, &x)| if k == i { x == 1 } else { x == 0 })
                    })
                    .count();
                if cnt == 0 {
                    3
                } else {
                    (cnt as u16).min(3)
                }
            })
            .collect()
    }
}

impl fmt::Display for ToricModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: r = {}, m = {}", self.name, self.r(), self.m())?;
        for (j, row) in self.rows.iter().enumerate() {
            writeln!(f, "  D_{j} = {row:?}")?;
        }
        for (l, g) in self.groups.iter().enumerate() {
            writeln!(f, "  G_{l} = {g:?} (class {:?})", self.rho_group(l))?;
        }
        writeln!(f, "  S_1 = {:?} (class {:?})", self.s1, self.rho1())?;
        write!(f, "  S_2 = {:?} (class {:?})", self.s2, self.rho2())
    }
}

// ============================================================
// Registry
// ============================================================

/// Quintic threefold in P^4; refinement 5 = 1 + 4 (chart 1 keeps the linear
/// section, the quartic side is blown up).
pub fn quintic_p4() -> ToricModel {
    let m = ToricModel {
        name: "quintic_p4".into(),
        class_names: vec!["q1".into()],
        rows: vec![vec![1]; 5],
        groups: vec![vec![0, 1, 2, 3, 4]],
        s1: vec![3],
        s2: vec![0, 1, 2, 4],
    };
    m.validate();
    m
}

/// Complete intersection of bidegrees (4,1) and (1,1) in P^4 x P^1: the
/// blow-up family over the quintic. Refinement (4,1) = (4,0) + (0,1).
pub fn conifold_p4xp1() -> ToricModel {
    let mut rows = vec![vec![1, 0]; 5];
    rows.push(vec![0, 1]);
    rows.push(vec![0, 1]);
    let m = ToricModel {
        name: "conifold_p4xp1".into(),
        class_names: vec!["q1".into(), "q2".into()],
        rows,
        groups: vec![vec![0, 1, 2, 3, 5], vec![4, 6]],
        s1: vec![0, 1, 2, 3],
        s2: vec![5],
    };
    m.validate();
    m
}

/// Complete intersection of bidegrees (n1, 1) and (n2, 1) in P^n x P^1 with
/// n = n1 + n2 - 1. Refinement (n1, 1) = (n1, 0) + (0, 1).
pub fn pn_x_p1(n1: usize, n2: usize) -> ToricModel {
    assert!(n1 >= 1 && n2 >= 1, "pn_x_p1 needs positive degrees");
    let n = n1 + n2 - 1;
    let mut rows = vec![vec![1, 0]; n + 1];
    rows.push(vec![0, 1]);
    rows.push(vec![0, 1]);
    let g0: Vec<usize> = (0..n1).chain([n + 1]).collect();
    let g1: Vec<usize> = (n1..n + 1).chain([n + 2]).collect();
    let m = ToricModel {
        name: format!("pn_x_p1({n1},{n2})"),
        class_names: vec!["q1".into(), "q2".into()],
        rows,
        groups: vec![g0, g1],
        s1: (0..n1).collect(),
        s2: vec![n + 1],
    };
    m.validate();
    m
}

/// Complete intersection of two (1,...,1) divisors in (P^1)^{n+1}.
/// Refinement of the first divisor peels off the last factor's class.
pub fn p1_power(n: usize) -> ToricModel {
    assert!(n >= 1, "p1_power needs n >= 1");
    let r = n + 1;
    let mut rows = Vec::with_capacity(2 * r);
    for i in 0..r {
        let mut row = vec![0i64; r];
        row[i] = 1;
        rows.push(row.clone());
        rows.push(row);
    }
    // Row 2i and 2i+1 are the two divisors of factor i.
    let g0: Vec<usize> = (0..r).map(|i| 2 * i).collect();
    let g1: Vec<usize> = (0..r).map(|i| 2 * i + 1).collect();
    let m = ToricModel {
        name: format!("p1_power({n})"),
        class_names: (1..=r).map(|i| format!("q{i}")).collect(),
        rows,
        groups: vec![g0, g1],
        s1: (0..n).map(|i| 2 * i).collect(),
        s2: vec![2 * n],
    };
    m.validate();
    m
}

/// One-dimension-lower base for `p1_power(n)`: the complete intersection of
/// two (1,...,1) divisors in (P^1)^n presented as a single group of all 2n
/// rows (class (2,...,2)), refined into the two diagonal divisors. The
/// two-sided blow-up identity on this data is the product formula for the
/// degeneration of the `p1_power(n)` family.
pub fn p1_power_base(n: usize) -> ToricModel {
    assert!(n >= 1, "p1_power_base needs n >= 1");
    let mut rows = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut row = vec![0i64; n];
        row[i] = 1;
        rows.push(row.clone());
        rows.push(row);
    }
    let m = ToricModel {
        name: format!("p1_power_base({n})"),
        class_names: (1..=n).map(|i| format!("q{i}")).collect(),
        groups: vec![(0..2 * n).collect()],
        s1: (0..n).map(|i| 2 * i).collect(),
        s2: (0..n).map(|i| 2 * i + 1).collect(),
        rows,
    };
    m.validate();
    m
}

/// One-dimension-lower base for `pn_x_p1(n1, n2)`: a degree n+1 hypersurface
/// in P^n (n = n1 + n2 - 1), with the single group refined as n+1 = n2 + n1.
/// The two-sided blow-up identity on this data is the rational-base gluing
/// displayed for the P^n x P^1 family.
pub fn pn_x_p1_base(n1: usize, n2: usize) -> ToricModel {
    assert!(n1 >= 1 && n2 >= 1, "pn_x_p1_base needs positive degrees");
    let n = n1 + n2 - 1;
    let m = ToricModel {
        name: format!("pn_x_p1_base({n1},{n2})"),
        class_names: vec!["q1".into()],
        rows: vec![vec![1]; n + 1],
        groups: vec![(0..n + 1).collect()],
        s1: (0..n2).collect(),
        s2: (n2..n + 1).collect(),
    };
    m.validate();
    m
}

/// Parse a registry example name: `quintic_p4`, `conifold_p4xp1`,
/// `pn_x_p1(n1,n2)`, `p1_power(n)`, optionally with a `_flip` suffix for the
/// opposite degeneration orientation.
pub fn parse_example(name: &str) -> Option<ToricModel> {
    let name = name.trim();
    if let Some(base) = name.strip_suffix("_flip") {
        return parse_example(base).map(|m| m.flip());
    }
    match name {
        "quintic_p4" => return Some(quintic_p4()),
        "conifold_p4xp1" => return Some(conifold_p4xp1()),
        _ => {}
    }
    let (head, args) = name.strip_suffix(')')?.split_once('(')?;
    let parts: Vec<&str> = args.split(',').map(str::trim).collect();
    match (head, parts.as_slice()) {
        ("pn_x_p1", [a, b]) => {
            let n1 = a.parse().ok()?;
            let n2 = b.parse().ok()?;
            if n1 >= 1 && n2 >= 1 && n1 + n2 <= 24 {
                Some(pn_x_p1(n1, n2))
            } else {
                None
            }
        }
        ("p1_power", [a]) => {
            let n = a.parse().ok()?;
            if (1..=12).contains(&n) {
                Some(p1_power(n))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// The default example set exercised by reports and golden files.
pub fn default_examples() -> Vec<ToricModel> {
    vec![
        quintic_p4(),
        conifold_p4xp1(),
        pn_x_p1(2, 3),
        p1_power(2),
    ]
}

/// Enumerate degree vectors d in N^r with total degree <= cap.
pub fn degrees(r: usize, cap: u32) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    let mut cur = vec![0i32; r];
    fn rec(i: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, cap as i32, &mut cur, &mut out);
    out
}

// ============================================================
// Tests
// ============================================================

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quintic_refinement_classes() {
        let m = quintic_p4();
        assert_eq!(m.rho_group(0), vec![5]);
        assert_eq!(m.rho1(), vec![1]);
        assert_eq!(m.rho2(), vec![4]);
        assert_eq!(m.default_orders(), vec![3]);
    }

    #[test]
    fn conifold_refinement_classes() {
        let m = conifold_p4xp1();
        assert_eq!(m.rho_group(0), vec![4, 1]);
        assert_eq!(m.rho_group(1), vec![1, 1]);
        assert_eq!(m.rho1(), vec![4, 0]);
        assert_eq!(m.rho2(), vec![0, 1]);
        assert_eq!(m.default_orders(), vec![3, 2]);
    }

    #[test]
    fn pn_x_p1_classes() {
        let m = pn_x_p1(2, 3);
        assert_eq!(m.rho_group(0), vec![2, 1]);
        assert_eq!(m.rho_group(1), vec![3, 1]);
        assert_eq!(m.rho1(), vec![2, 0]);
        assert_eq!(m.rho2(), vec![0, 1]);
        assert_eq!(m.default_orders(), vec![3, 2]);
    }

    #[test]
    fn p1_power_classes() {
        let m = p1_power(2);
        assert_eq!(m.r(), 3);
        assert_eq!(m.rho_group(0), vec![1, 1, 1]);
        assert_eq!(m.rho_group(1), vec![1, 1, 1]);
        assert_eq!(m.rho1(), vec![1, 1, 0]);
        assert_eq!(m.rho2(), vec![0, 0, 1]);
        assert_eq!(m.default_orders(), vec![2, 2, 2]);
    }

    #[test]
    fn base_models_refine_a_single_group() {
        let b = p1_power_base(2);
        assert_eq!(b.rho_group(0), vec![2, 2]);
        assert_eq!(b.rho1(), vec![1, 1]);
        assert_eq!(b.rho2(), vec![1, 1]);
        let c = pn_x_p1_base(2, 3);
        assert_eq!(c.rho_group(0), vec![5]);
        assert_eq!(c.rho1(), vec![3]);
        assert_eq!(c.rho2(), vec![2]);
    }

    #[test]
    fn window_pinned_values() {
        // Quintic at q-order 4: e = 4 so lo = -16; hi covers 4*4 + 4.
        assert_eq!(quintic_p4().window(4), (-16, 20));
        // (P^1)^3 family at q-order 3: e = 1 so lo = -3.
        assert_eq!(p1_power(2).window(3).0, -3);
        // The flipped quintic pairs y^{+4d}, so hi still reaches 4N + N.
        assert_eq!(quintic_p4().flip().window(3), (-3, 15));
    }

    #[test]
    fn flip_swaps_refinement() {
        let m = quintic_p4();
        let f = m.flip();
        assert_eq!(f.rho1(), vec![4]);
        assert_eq!(f.rho2(), vec![1]);
        assert_eq!(f.flip().rho1(), m.rho1());
    }

    #[test]
    fn example_parsing() {
        assert_eq!(parse_example("quintic_p4").unwrap().name, "quintic_p4");
        assert_eq!(
            parse_example("pn_x_p1(2, 3)").unwrap().name,
            "pn_x_p1(2,3)"
        );
        assert_eq!(parse_example("p1_power(3)").unwrap().r(), 4);
        assert!(parse_example("pn_x_p1(0,3)").is_none());
        assert!(parse_example("mystery").is_none());
    }

    #[test]
    fn degree_enumeration() {
        let ds = degrees(2, 2);
        assert_eq!(ds.len(), 6);
        assert!(ds.contains(&vec![0, 0]));
        assert!(ds.contains(&vec![1, 1]));
        assert!(ds.contains(&vec![0, 2]));
        assert!(!ds.contains(&vec![2, 1]));
    }
}
