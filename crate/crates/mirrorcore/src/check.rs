//! Check registry: named verification tasks over the whole engine, a JSON
//! configuration for selecting and sizing them, and a parallel runner that
//! produces machine-readable results.
//!
//! Standard checks (all enabled by default):
//!
//!   period-glue     one-sided and two-sided Hadamard/residue gluing of the
//!                   holomorphic periods for each selected example; for the
//!                   quintic it also runs the iterated-residue route through
//!                   the quartic-surface pencil
//!   reconstruct     recovery of the smoothing period from the chart data
//!                   alone, one-sided and two-sided
//!   fi-product      exact product law for the generalized functional
//!                   invariants of the charts, one-sided and two-sided
//!   ifn-glue        cohomology-valued I-function gluing with log terms;
//!                   one-sided for each selected example, plus the two-sided
//!                   family and its H^1/H^2 component identities for the
//!                   quintic
//!   rel-i0          the two chart presentations of the relative I-function
//!                   of the blown-up quintic family agree
//!   pf-annihilate   Picard-Fuchs operators kill their period series and
//!                   I-functions: the weight-catalogue operators, the
//!                   quartic-surface operator, and the two-variable systems
//!                   of the blow-up family and its charts
//!   hurwitz         gluing of functional invariants for plane curve charts
//!                   with arbitrary cusp profiles, both normalizations, over
//!                   all profile pairs up to a total size bound, plus the
//!                   quintic chain with its explicit scale factors
//!   lg-normal-form  the Landau-Ginzburg potentials of a chart chain reduce
//!                   to the standard normal form
//!
//! Negative controls (never run by default; each plants one deliberate error
//! and must come out with status "fail", demonstrating the comparisons have
//! teeth):
//!
//!   neg-k3-coefficient   corrupts one coefficient of the quartic-surface
//!                        period before applying its annihilator
//!   neg-period-scale     drops the degree normalization of one chart factor
//!                        in the period gluing
//!   neg-substitution     substitutes the wrong hyperplane multiple for the
//!                        auxiliary generator in the I-function gluing
//!   neg-pf-operator      perturbs one integer coefficient of a catalogue
//!                        operator
//!   neg-product-misuse   replaces the Hadamard product by the ordinary
//!                        series product
//!   neg-hurwitz-swap     glues the plane-curve charts along an inverted
//!                        coordinate identification
//!
//! Results carry an optional maximal verified degree: `None` means the check
//! is an exact rational-function identity with no truncation; for sweeps
//! (hurwitz, lg-normal-form) the value is the sweep bound instead of a
//! series order. The runner honors the MIRROR_VERIFY_THREADS environment
//! variable for its worker count.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ifunc;
use crate::invariants;
use crate::periods::{self, Mismatch};
use crate::pf;
use crate::ratfun::{PolyRing, RationalFunc};
use crate::toric::{parse_example, ToricModel};

// ============================================================
// Check identifiers
// ============================================================

/// A named check in the registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckId {
    PeriodGlue,
    Reconstruct,
    FiProduct,
    IfnGlue,
    RelI0,
    PfAnnihilate,
    Hurwitz,
    LgNormalForm,
    NegK3Coefficient,
    NegPeriodScale,
    NegSubstitution,
    NegPfOperator,
    NegProductMisuse,
    NegHurwitzSwap,
}

/// The standard checks, in report order. These are the default selection.
pub const STANDARD_CHECKS: [CheckId; 8] = [
    CheckId::PeriodGlue,
    CheckId::Reconstruct,
    CheckId::FiProduct,
    CheckId::IfnGlue,
    CheckId::RelI0,
    CheckId::PfAnnihilate,
    CheckId::Hurwitz,
    CheckId::LgNormalForm,
];

/// The negative controls, in report order. Each must fail by design.
pub const NEGATIVE_CONTROLS: [CheckId; 6] = [
    CheckId::NegK3Coefficient,
    CheckId::NegPeriodScale,
    CheckId::NegSubstitution,
    CheckId::NegPfOperator,
    CheckId::NegProductMisuse,
    CheckId::NegHurwitzSwap,
];

impl CheckId {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::PeriodGlue => "period-glue",
            CheckId::Reconstruct => "reconstruct",
            CheckId::FiProduct => "fi-product",
            CheckId::IfnGlue => "ifn-glue",
            CheckId::RelI0 => "rel-i0",
            CheckId::PfAnnihilate => "pf-annihilate",
            CheckId::Hurwitz => "hurwitz",
            CheckId::LgNormalForm => "lg-normal-form",
            CheckId::NegK3Coefficient => "neg-k3-coefficient",
            CheckId::NegPeriodScale => "neg-period-scale",
            CheckId::NegSubstitution => "neg-substitution",
            CheckId::NegPfOperator => "neg-pf-operator",
            CheckId::NegProductMisuse => "neg-product-misuse",
            CheckId::NegHurwitzSwap => "neg-hurwitz-swap",
        }
    }

    pub fn parse(s: &str) -> Option<CheckId> {
        STANDARD_CHECKS
            .iter()
            .chain(NEGATIVE_CONTROLS.iter())
            .copied()
            .find(|c| c.as_str() == s.trim())
    }

    /// One-line description for catalog listings.
    pub fn description(self) -> &'static str {
        match self {
            CheckId::PeriodGlue => {
                "Hadamard/residue gluing of holomorphic periods, one- and two-sided"
            }
            CheckId::Reconstruct => "smoothing period reconstructed from chart data alone",
            CheckId::FiProduct => "exact product law for generalized functional invariants",
            CheckId::IfnGlue => "I-function gluing with logs, plus quintic component identities",
            CheckId::RelI0 => "two chart presentations of the relative I-function agree",
            CheckId::PfAnnihilate => "Picard-Fuchs operators annihilate periods and I-functions",
            CheckId::Hurwitz => "functional-invariant gluing over all small cusp profiles",
            CheckId::LgNormalForm => "Landau-Ginzburg chain potentials reduce to normal form",
            CheckId::NegK3Coefficient => "control: corrupted period coefficient is detected",
            CheckId::NegPeriodScale => "control: wrong chart normalization is detected",
            CheckId::NegSubstitution => "control: wrong generator substitution is detected",
            CheckId::NegPfOperator => "control: perturbed operator coefficient is detected",
            CheckId::NegProductMisuse => "control: ordinary product misuse is detected",
            CheckId::NegHurwitzSwap => "control: inverted chart identification is detected",
        }
    }

    /// Whether the check expands to one task per selected example.
    pub fn per_example(self) -> bool {
        matches!(
            self,
            CheckId::PeriodGlue | CheckId::Reconstruct | CheckId::FiProduct | CheckId::IfnGlue
        )
    }

    /// Whether the check is a negative control (expected to fail).
    pub fn is_negative(self) -> bool {
        NEGATIVE_CONTROLS.contains(&self)
    }
}

// ============================================================
// Configuration
// ============================================================

/// Runner configuration. Every field has a default, so `{}` is a valid JSON
/// config; unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields, default)]
pub struct CheckConfig {
    /// Check ids to run, in the order given.
    pub checks: Vec<String>,
    /// Example names for the per-example checks.
    pub examples: Vec<String>,
    /// Joint deformation order for one-sided series checks.
    pub q_order: u32,
    /// Joint order (class degrees plus exceptional degree) for two-sided
    /// series checks.
    pub joint_order: u32,
    /// Total log order carried through the I-function gluing checks.
    pub log_total: u32,
    /// Degree for the quartic-surface annihilation check.
    pub pf_k3_order: u32,
    /// Joint degree for the two-variable annihilation checks.
    pub pf_joint_order: u32,
    /// Degree for the weight-catalogue annihilation checks.
    pub pf_catalogue_order: u32,
    /// Bound on |a| + |b| for the cusp-profile sweep.
    pub hurwitz_max_total: u32,
    /// Largest chain length for the Landau-Ginzburg normal form check.
    pub lg_max_n: u32,
    /// Degree for the quintic iterated-residue period check.
    pub quintic_q_order: u32,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            checks: STANDARD_CHECKS.iter().map(|c| c.as_str().to_string()).collect(),
            examples: default_example_names(),
            q_order: 3,
            joint_order: 3,
            log_total: 2,
            pf_k3_order: 8,
            pf_joint_order: 4,
            pf_catalogue_order: 8,
            hurwitz_max_total: 6,
            lg_max_n: 3,
            quintic_q_order: 6,
        }
    }
}

impl CheckConfig {
    /// Parse a JSON configuration; missing fields take their defaults.
    pub fn from_json(src: &str) -> Result<CheckConfig, ConfigError> {
        serde_json::from_str(src).map_err(|e| ConfigError::Json(e.to_string()))
    }
}

/// Example names used when the configuration does not list any.
pub fn default_example_names() -> Vec<String> {
    ["quintic_p4", "quintic_p4_flip", "conifold_p4xp1", "pn_x_p1(2,3)", "p1_power(2)"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

/// Configuration or environment problems that prevent a run from starting.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("bad JSON configuration: {0}")]
    Json(String),
    #[error("unknown check id: {0}")]
    UnknownCheck(String),
    #[error("unknown example: {0}")]
    UnknownExample(String),
    #[error("{0} must be at least 1")]
    ZeroOrder(&'static str),
    #[error("hurwitzMaxTotal must be at least 2 to admit a profile pair")]
    HurwitzBound,
    #[error("MIRROR_VERIFY_THREADS must be a positive integer, got {0:?}")]
    BadThreads(String),
    #[error("could not build worker pool: {0}")]
    ThreadPool(String),
}

// ============================================================
// Results
// ============================================================

/// Outcome of a single task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// One row of a report: a check, the example it ran on if any, and what
/// happened.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub check_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<String>,
    pub status: CheckStatus,
    /// Largest series degree (or sweep bound) verified; absent for exact
    /// rational-function identities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree_checked: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<String>,
    pub wall_time_ms: u64,
}

/// A full run: the configuration, one result per task, and pass counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub version: String,
    pub config: CheckConfig,
    pub results: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
    pub all_passed: bool,
}

impl Report {
    fn new(config: CheckConfig, results: Vec<CheckResult>) -> Report {
        let passed = results.iter().filter(|r| r.status == CheckStatus::Pass).count();
        let failed = results.len() - passed;
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            results,
            passed,
            failed,
            all_passed: failed == 0,
        }
    }
}

// ============================================================
// Task expansion and the runner
// ============================================================

/// A single unit of work: one check, on one example if it is per-example.
#[derive(Debug, Clone)]
pub struct CheckTask {
    pub id: CheckId,
    pub example: Option<ToricModel>,
}

fn validate(cfg: &CheckConfig) -> Result<(), ConfigError> {
    let orders: [(&'static str, u32); 7] = [
        ("qOrder", cfg.q_order),
        ("jointOrder", cfg.joint_order),
        ("pfK3Order", cfg.pf_k3_order),
        ("pfJointOrder", cfg.pf_joint_order),
        ("pfCatalogueOrder", cfg.pf_catalogue_order),
        ("lgMaxN", cfg.lg_max_n),
        ("quinticQOrder", cfg.quintic_q_order),
    ];
    for (name, v) in orders {
        if v == 0 {
            return Err(ConfigError::ZeroOrder(name));
        }
    }
    if cfg.hurwitz_max_total < 2 {
        return Err(ConfigError::HurwitzBound);
    }
    Ok(())
}

/// Resolve a configuration into the ordered task list it describes.
pub fn expand_tasks(cfg: &CheckConfig) -> Result<Vec<CheckTask>, ConfigError> {
    validate(cfg)?;
    let mut ids = Vec::new();
    for name in &cfg.checks {
        let id = CheckId::parse(name).ok_or_else(|| ConfigError::UnknownCheck(name.clone()))?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    let mut models = Vec::new();
    for name in &cfg.examples {
        let m = parse_example(name).ok_or_else(|| ConfigError::UnknownExample(name.clone()))?;
        models.push(m);
    }
    let mut tasks = Vec::new();
    for id in ids {
        if id.per_example() {
            for m in &models {
                tasks.push(CheckTask { id, example: Some(m.clone()) });
            }
        } else {
            tasks.push(CheckTask { id, example: None });
        }
    }
    Ok(tasks)
}

fn build_pool() -> Result<rayon::ThreadPool, ConfigError> {
    pool_with_threads(std::env::var("MIRROR_VERIFY_THREADS").ok().as_deref())
}

fn pool_with_threads(threads: Option<&str>) -> Result<rayon::ThreadPool, ConfigError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(v) = threads {
        let n = v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| ConfigError::BadThreads(v.to_string()))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| ConfigError::ThreadPool(e.to_string()))
}

/// Run every task the configuration selects, in parallel, and collect a
/// report. Results keep the task order regardless of scheduling.
pub fn run_checks(cfg: &CheckConfig) -> Result<Report, ConfigError> {
    let tasks = expand_tasks(cfg)?;
    let pool = build_pool()?;
    let results: Vec<CheckResult> =
        pool.install(|| tasks.par_iter().map(|t| run_task(cfg, t)).collect());
    Ok(Report::new(cfg.clone(), results))
}

/// Run one task and record its outcome and wall time.
pub fn run_task(cfg: &CheckConfig, task: &CheckTask) -> CheckResult {
    let start = Instant::now();
    let outcome = dispatch(cfg, task.id, task.example.as_ref());
    let wall_time_ms = start.elapsed().as_millis() as u64;
    CheckResult {
        check_id: task.id.as_str().to_string(),
        example: task.example.as_ref().map(|m| m.name.clone()),
        status: if outcome.is_ok() { CheckStatus::Pass } else { CheckStatus::Fail },
        max_degree_checked: max_degree(cfg, task.id, task.example.as_ref()),
        first_mismatch: outcome.err().map(|m| m.describe()),
        wall_time_ms,
    }
}

/// The degree (or sweep bound) a passing task certifies. `None` marks exact
/// identities with no truncation anywhere.
fn max_degree(cfg: &CheckConfig, id: CheckId, example: Option<&ToricModel>) -> Option<u32> {
    let quintic = example.is_some_and(|m| m.name == "quintic_p4");
    match id {
        CheckId::PeriodGlue | CheckId::Reconstruct => Some(cfg.q_order.min(cfg.joint_order)),
        CheckId::FiProduct => None,
        CheckId::IfnGlue => {
            if quintic {
                Some(cfg.q_order.min(cfg.joint_order))
            } else {
                Some(cfg.q_order)
            }
        }
        CheckId::RelI0 => Some(cfg.joint_order),
        CheckId::PfAnnihilate => {
            Some(cfg.pf_k3_order.min(cfg.pf_joint_order).min(cfg.pf_catalogue_order))
        }
        CheckId::Hurwitz => Some(cfg.hurwitz_max_total),
        CheckId::LgNormalForm => Some(cfg.lg_max_n),
        CheckId::NegK3Coefficient => Some(NEG_K3_ORDER),
        CheckId::NegPeriodScale | CheckId::NegProductMisuse => Some(NEG_PERIOD_ORDER),
        CheckId::NegSubstitution => Some(NEG_IFN_ORDER),
        CheckId::NegPfOperator => Some(NEG_PF_ORDER),
        CheckId::NegHurwitzSwap => None,
    }
}

fn dispatch(cfg: &CheckConfig, id: CheckId, example: Option<&ToricModel>) -> Result<(), Mismatch> {
    match id {
        CheckId::PeriodGlue => {
            let m = example.expect("period-glue is per-example");
            periods::check_period_glue_one_sided(m, cfg.q_order)?;
            periods::check_period_glue_two_sided(m, cfg.joint_order)?;
            if m.name == "quintic_p4" {
                periods::check_quartic_pencil(cfg.quintic_q_order)?;
            }
            Ok(())
        }
        CheckId::Reconstruct => {
            let m = example.expect("reconstruct is per-example");
            periods::check_reconstruct_one_sided(m, cfg.q_order)?;
            periods::check_reconstruct_two_sided(m, cfg.joint_order)
        }
        CheckId::FiProduct => {
            let m = example.expect("fi-product is per-example");
            invariants::check_fi_product_one_sided(m)?;
            invariants::check_fi_product_two_sided(m)
        }
        CheckId::IfnGlue => {
            let m = example.expect("ifn-glue is per-example");
            ifunc::check_ifn_glue_one_sided(m, cfg.q_order, cfg.log_total)?;
            if m.name == "quintic_p4" {
                ifunc::check_ifn_glue_two_sided(m, cfg.joint_order, cfg.log_total, 2)?;
                ifunc::check_ifn_components_two_sided(m, cfg.joint_order, cfg.log_total)?;
            }
            Ok(())
        }
        CheckId::RelI0 => ifunc::check_rel_i0(cfg.joint_order, cfg.log_total),
        CheckId::PfAnnihilate => {
            pf::check_operator_identities()?;
            for n in 2..=4 {
                pf::check_pf_catalogue(n, cfg.pf_catalogue_order)?;
            }
            pf::check_pf_k3(cfg.pf_k3_order)?;
            pf::check_pf_smoothing_two(cfg.pf_joint_order)?;
            pf::check_pf_charts_two(cfg.pf_joint_order)
        }
        CheckId::Hurwitz => {
            for (a, b) in invariants::hurwitz_profile_pairs(cfg.hurwitz_max_total) {
                invariants::check_hurwitz_normalized(&a, &b)?;
                invariants::check_hurwitz_root_normalized(&a, &b)?;
            }
            invariants::check_hurwitz_quintic_chain()
        }
        CheckId::LgNormalForm => {
            for n in 1..=cfg.lg_max_n {
                invariants::check_lg_normal_form(n as usize)?;
            }
            Ok(())
        }
        CheckId::NegK3Coefficient => neg_k3_coefficient(),
        CheckId::NegPeriodScale => neg_period_scale(),
        CheckId::NegSubstitution => neg_substitution(),
        CheckId::NegPfOperator => neg_pf_operator(),
        CheckId::NegProductMisuse => neg_product_misuse(),
        CheckId::NegHurwitzSwap => neg_hurwitz_swap(),
    }
}

// ============================================================
// Negative controls
// ============================================================

// Orders the controls run at; kept small since each must merely exhibit the
// planted defect.
const NEG_K3_ORDER: u32 = 4;
const NEG_PERIOD_ORDER: u32 = 3;
const NEG_IFN_ORDER: u32 = 2;
const NEG_PF_ORDER: u32 = 6;

fn residue_mismatch(err: crate::series::SeriesError) -> Mismatch {
    Mismatch {
        location: "residue extraction".to_string(),
        lhs: err.to_string(),
        rhs: "a log-free constant term in y".to_string(),
    }
}

/// Corrupt the degree-3 coefficient of the quartic-surface period by +1 and
/// apply the annihilator; the residual must be nonzero.
fn neg_k3_coefficient() -> Result<(), Mismatch> {
    let m = crate::toric::quintic_p4();
    let ring = pf::OpRing::new(&["q1"]);
    let op = pf::parse_operator(pf::k3_operator_text(), &ring)
        .expect("built-in operator text parses");
    let (qv, qt) = periods::q_table(&m, NEG_K3_ORDER);
    let mut f0 = periods::f0_central(&m, &qv, &qt);
    f0.add_term(vec![3], crate::rat::qi(1));
    let r = op.apply(&f0).map_err(|e| Mismatch {
        location: "operator application".to_string(),
        lhs: e.to_string(),
        rhs: "a well-formed application".to_string(),
    })?;
    expect_nonzero(&r, "corrupted quartic-surface period under its annihilator")
}

/// Scale one chart factor by 1/5, as if the quintic degree normalization had
/// been dropped, and rerun the one-sided period gluing.
fn neg_period_scale() -> Result<(), Mismatch> {
    let m = crate::toric::quintic_p4();
    let (qv, qt) = periods::q_table(&m, NEG_PERIOD_ORDER);
    let (yv, yt) = periods::qy_table(&m, NEG_PERIOD_ORDER);
    let subset = periods::all_defo_indices(&qv, &m);
    let lhs = periods::f0_smoothing(&m, &qv, &qt)
        .hadamard(&periods::f0_central(&m, &qv, &qt), &subset);
    let subset_y = periods::all_defo_indices(&yv, &m);
    let rhs = periods::f0_lg1(&m, &yv, &yt)
        .scale(&crate::rat::qr(1, 5))
        .hadamard(&periods::f0_lg2(&m, &yv, &yt), &subset_y)
        .constant_term("y")
        .map_err(residue_mismatch)?;
    expect_unequal(&lhs, &rhs, "period gluing with a dropped chart normalization")
}

/// Substitute the auxiliary generator by the hyperplane class itself instead
/// of its correct multiple in the one-sided quintic I-function gluing.
fn neg_substitution() -> Result<(), Mismatch> {
    let m = crate::toric::quintic_p4();
    let alg = ifunc::model_algebra(&m);
    let alg_p = ifunc::model_algebra_with_p(&m, ifunc::presubstitution_p_order(&m));
    let (qv, qt, yv, yt) = ifunc::one_sided_tables(&m, NEG_IFN_ORDER, 2);
    let subset = periods::all_defo_indices(&qv, &m);
    let lhs = ifunc::i_smoothing(&m, &alg, &qv, &qt)
        .hadamard(&ifunc::i_central(&m, &alg, &qv, &qt), &subset);
    let wrong = ifunc::class_form(&alg, &m, &m.rho1());
    let c2 = ifunc::i_chart2_one_sided(&m, &alg_p, &yv, &yt).map_coeff(|c| {
        c.subst_generator("P", &alg, &wrong)
            .expect("P and the class generators exist")
    });
    let c1 = ifunc::i_chart1(&m, &alg, &yv, &yt);
    let subset_y = periods::all_defo_indices(&yv, &m);
    let rhs = c1
        .hadamard(&c2, &subset_y)
        .constant_term("y")
        .map_err(residue_mismatch)?;
    expect_unequal(&lhs, &rhs, "I-function gluing with the wrong substitution")
}

/// Perturb the level-2 catalogue operator (255 in place of 256) and apply it
/// to the true holomorphic solution.
fn neg_pf_operator() -> Result<(), Mismatch> {
    let ring = pf::OpRing::new(&["t"]);
    let op = pf::parse_operator(
        "T[t]^3 - 255*t*(T[t]+1/4)*(T[t]+1/2)*(T[t]+3/4)",
        &ring,
    )
    .expect("perturbed operator text parses");
    let vars = crate::series::VarTable::new(&["t"], &[], &[]);
    let trunc = crate::series::TruncSpec::new(NEG_PF_ORDER, vec![], 0);
    let mut hol: crate::series::Series<crate::rat::Q> = crate::series::Series::zero(&vars, &trunc);
    for d in 0..=NEG_PF_ORDER {
        hol.add_term(vec![d as i32], pf::catalogue_hol_coeff(2, d));
    }
    let r = op.apply(&hol).map_err(|e| Mismatch {
        location: "operator application".to_string(),
        lhs: e.to_string(),
        rhs: "a well-formed application".to_string(),
    })?;
    expect_nonzero(&r, "true solution under a perturbed operator")
}

/// Use the ordinary series product where the Hadamard product belongs.
fn neg_product_misuse() -> Result<(), Mismatch> {
    let m = crate::toric::quintic_p4();
    let (qv, qt) = periods::q_table(&m, NEG_PERIOD_ORDER);
    let (yv, yt) = periods::qy_table(&m, NEG_PERIOD_ORDER);
    let lhs = periods::f0_smoothing(&m, &qv, &qt).mul(&periods::f0_central(&m, &qv, &qt));
    let subset_y = periods::all_defo_indices(&yv, &m);
    let rhs = periods::f0_lg1(&m, &yv, &yt)
        .hadamard(&periods::f0_lg2(&m, &yv, &yt), &subset_y)
        .constant_term("y")
        .map_err(residue_mismatch)?;
    expect_unequal(&lhs, &rhs, "ordinary product in place of the Hadamard product")
}

/// Glue the two plane-curve charts along y2 -> y/q instead of y2 -> q/y for
/// the cusp profile ([1], [1]); the direct form must no longer match.
fn neg_hurwitz_swap() -> Result<(), Mismatch> {
    let ring = PolyRing::new(&["y", "q", "Q", "y1", "y2", "qq1", "qq2"]);
    let one = RationalFunc::one(&ring);
    let y = RationalFunc::var(&ring, "y");
    let q = RationalFunc::var(&ring, "q");
    let bigq = RationalFunc::var(&ring, "Q");
    let y1 = RationalFunc::var(&ring, "y1");
    let y2 = RationalFunc::var(&ring, "y2");
    let qq1 = RationalFunc::var(&ring, "qq1");
    let qq2 = RationalFunc::var(&ring, "qq2");
    let lam1 = bigq.div(&one.sub(&qq1.div(&y1)));
    let lam2 = bigq.div(&one.sub(&qq2.div(&y2)));
    // Inverted identification: y2 -> y/q in place of y2 -> q/y.
    let lam1 = lam1.subst_var("qq1", &q).subst_var("y1", &y);
    let lam2 = lam2.subst_var("qq2", &q).subst_var("y2", &y.div(&q));
    let glued = lam1.div(&bigq).mul(&lam2.div(&bigq));
    let direct = y.div(&y.sub(&q).mul(&one.sub(&y)));
    if glued.eq_exact(&direct) {
        return Ok(());
    }
    Err(Mismatch {
        location: "cusp profile a=[1], b=[1], inverted chart identification".to_string(),
        lhs: glued.to_string(),
        rhs: direct.to_string(),
    })
}

/// Report the first term of a series that was supposed to survive; `Ok` here
/// means the planted corruption went completely unnoticed.
fn expect_nonzero<C: crate::series::Coeff>(s: &crate::series::Series<C>, what: &str) -> Result<(), Mismatch> {
    match s.iter_terms().next() {
        None => Ok(()),
        Some((e, c)) => Err(Mismatch {
            location: format!("{what}, coefficient of {}", s.monomial_string(e)),
            lhs: c.show(),
            rhs: "0".to_string(),
        }),
    }
}

/// Compare two series that are supposed to disagree, reporting the first
/// differing coefficient; `Ok` means the corruption went unnoticed.
fn expect_unequal<C: crate::series::Coeff>(
    lhs: &crate::series::Series<C>,
    rhs: &crate::series::Series<C>,
    what: &str,
) -> Result<(), Mismatch> {
    match lhs.first_mismatch(rhs) {
        None => Ok(()),
        Some((e, a, b)) => Err(Mismatch {
            location: format!("{what}, coefficient of {}", lhs.monomial_string(&e)),
            lhs: a,
            rhs: b,
        }),
    }
}

// ============================================================
// Tests
// ============================================================
