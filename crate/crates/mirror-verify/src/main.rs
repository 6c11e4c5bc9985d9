//! Command-line verifier for mirror-symmetry gluing identities.
//!
//! Subcommands:
//!
//!   run            run a configurable selection of checks in parallel and
//!                  report pass/fail per check, with an optional JSON report
//!   list-checks    show every check id with a one-line description
//!   list-examples  show the built-in degeneration examples and the
//!                  example-name grammar
//!   series         print a period series or I-function to a given order
//!   operator       parse a theta-operator, print its normal-ordered form,
//!                  and optionally apply it to a built-in scalar series
//!
//! Exit codes: 0 when everything selected passed, 1 when at least one check
//! failed, 2 for configuration or usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mirrorcore::check::{
    run_checks, CheckConfig, CheckStatus, Report, NEGATIVE_CONTROLS, STANDARD_CHECKS,
};
use mirrorcore::ifunc;
use mirrorcore::periods;
use mirrorcore::pf;
use mirrorcore::series::Coeff;
use mirrorcore::toric::{parse_example, ToricModel};
use mirrorcore::{QSeries, Series};

#[derive(Parser)]
#[command(
    name = "mirror-verify",
    version,
    about = "Exact verifier for mirror-symmetry gluing identities",
    long_about = "Generates mirror period series, I-functions, and generalized functional \
                  invariants from toric degeneration data and verifies their gluing \
                  identities with exact rational arithmetic. The MIRROR_VERIFY_THREADS \
                  environment variable caps the number of worker threads."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification checks and report results
    Run(RunArgs),
    /// List every check id with its description
    ListChecks,
    /// List built-in examples and the example-name grammar
    ListExamples,
    /// Print a period series or I-function
    Series(SeriesArgs),
    /// Normal-order a theta-operator; optionally apply it to a series
    Operator(OperatorArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file; missing fields take their defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Check ids to run (comma-separated; overrides the config file)
    #[arg(long, value_delimiter = ',')]
    checks: Vec<String>,
    /// Example name (repeat the flag for several; names may contain commas,
    /// so no delimiter is applied; overrides the config file)
    #[arg(long)]
    examples: Vec<String>,
    /// Deformation order for one-sided series checks
    #[arg(long)]
    q_order: Option<u32>,
    /// Joint order for two-sided series checks
    #[arg(long)]
    joint_order: Option<u32>,
    /// Total log order carried through I-function gluing
    #[arg(long)]
    log_total: Option<u32>,
    /// Degree for the quartic-surface annihilation check
    #[arg(long)]
    pf_k3_order: Option<u32>,
    /// Joint degree for the two-variable annihilation checks
    #[arg(long)]
    pf_joint_order: Option<u32>,
    /// Degree for the weight-catalogue annihilation checks
    #[arg(long)]
    pf_catalogue_order: Option<u32>,
    /// Bound on |a| + |b| for the cusp-profile sweep
    #[arg(long)]
    hurwitz_max_total: Option<u32>,
    /// Largest chain length for the Landau-Ginzburg normal form check
    #[arg(long)]
    lg_max_n: Option<u32>,
    /// Degree for the quintic iterated-residue period check
    #[arg(long)]
    quintic_q_order: Option<u32>,
    /// Write the JSON report to this file
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print the JSON report to stdout instead of the human-readable lines
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SeriesArgs {
    /// Example name, e.g. quintic_p4 or pn_x_p1(2,3)
    #[arg(long)]
    example: String,
    /// Series kind: central, smoothing, lg1, lg2, smoothing-two, lg1-two,
    /// lg2-two, i-central, i-smoothing, i-chart1, i-chart2, i-smoothing-two,
    /// i-chart1-two, i-chart2-two
    #[arg(long)]
    kind: String,
    /// Deformation order (joint order for the *-two kinds)
    #[arg(long, default_value_t = 3)]
    q_order: u32,
    /// Total log order for the I-function kinds
    #[arg(long, default_value_t = 0)]
    log_total: u32,
}

#[derive(Args)]
struct OperatorArgs {
    /// Operator text, e.g. "T[q1]^3 - 4*q1*(4*T[q1]+1)*(4*T[q1]+2)*(4*T[q1]+3)"
    #[arg(long, conflicts_with = "builtin")]
    text: Option<String>,
    /// Built-in operator: k3, weight-one, catalogue-2, catalogue-3,
    /// catalogue-4, smoothing-two-1, smoothing-two-2, chart1-two-1,
    /// chart1-two-2, chart2-two-1, chart2-two-2
    #[arg(long)]
    builtin: Option<String>,
    /// Deformation variables of the operator ring (comma-separated); builtin
    /// operators set this themselves
    #[arg(long, value_delimiter = ',')]
    vars: Vec<String>,
    /// Apply the operator to a scalar series kind (central, smoothing,
    /// lg1, lg2, smoothing-two, lg1-two, lg2-two) of --example
    #[arg(long)]
    apply: Option<String>,
    /// Example for --apply
    #[arg(long)]
    example: Option<String>,
    /// Order of the series the operator is applied to
    #[arg(long, default_value_t = 6)]
    q_order: u32,
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Run(args) => cmd_run(args),
        Cmd::ListChecks => cmd_list_checks(),
        Cmd::ListExamples => cmd_list_examples(),
        Cmd::Series(args) => cmd_series(args),
        Cmd::Operator(args) => cmd_operator(args),
    }
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

// ============================================================
// run
// ============================================================

fn cmd_run(args: RunArgs) -> ExitCode {
    let mut cfg = match &args.config {
        Some(path) => {
            let src = match std::fs::read_to_string(path) {
                Ok(s) => s,
                Err(e) => return usage_error(&format!("cannot read {}: {e}", path.display())),
            };
            match CheckConfig::from_json(&src) {
                Ok(c) => c,
                Err(e) => return usage_error(&e.to_string()),
            }
        }
        None => CheckConfig::default(),
    };
    if !args.checks.is_empty() {
        cfg.checks = args.checks.clone();
    }
    if !args.examples.is_empty() {
        cfg.examples = args.examples.clone();
    }
    let overrides = [
        (&args.q_order, &mut cfg.q_order),
        (&args.joint_order, &mut cfg.joint_order),
        (&args.log_total, &mut cfg.log_total),
        (&args.pf_k3_order, &mut cfg.pf_k3_order),
        (&args.pf_joint_order, &mut cfg.pf_joint_order),
        (&args.pf_catalogue_order, &mut cfg.pf_catalogue_order),
        (&args.hurwitz_max_total, &mut cfg.hurwitz_max_total),
        (&args.lg_max_n, &mut cfg.lg_max_n),
        (&args.quintic_q_order, &mut cfg.quintic_q_order),
    ];
    for (src, dst) in overrides {
        if let Some(v) = src {
            *dst = *v;
        }
    }

    let report = match run_checks(&cfg) {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };

    if args.json {
        println!("{}", report_json(&report));
    } else {
        print_human(&report);
    }
    if let Some(path) = &args.report {
        if let Err(e) = std::fs::write(path, report_json(&report) + "\n") {
            return usage_error(&format!("cannot write {}: {e}", path.display()));
        }
    }
    if report.all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn report_json(report: &Report) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

fn print_human(report: &Report) {
    for r in &report.results {
        let example = r.example.as_deref().unwrap_or("-");
        let degree = match r.max_degree_checked {
            Some(d) => format!("degree {d}"),
            None => "exact".to_string(),
        };
        let status = match r.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
        };
        println!(
            "{status}  {:<20} {:<18} {:<10} {:>6} ms",
            r.check_id, example, degree, r.wall_time_ms
        );
        if let Some(msg) = &r.first_mismatch {
            println!("      {msg}");
        }
    }
    println!("summary: {} passed, {} failed", report.passed, report.failed);
}

// ============================================================
// list-checks / list-examples
// ============================================================

fn cmd_list_checks() -> ExitCode {
    println!("standard checks (run by default):");
    for id in STANDARD_CHECKS {
        let scope = if id.per_example() { "per-example" } else { "global" };
        println!("  {:<20} [{scope}] {}", id.as_str(), id.description());
    }
    println!();
    println!("negative controls (run only when selected; each must FAIL by design):");
    for id in NEGATIVE_CONTROLS {
        println!("  {:<20} {}", id.as_str(), id.description());
    }
    ExitCode::SUCCESS
}

fn cmd_list_examples() -> ExitCode {
    println!("built-in examples:");
    for name in mirrorcore::check::default_example_names() {
        let m = parse_example(&name).expect("default example parses");
        println!(
            "  {:<18} classes [{}], ambient rows {}, splitting {}+{}",
            name,
            m.class_names.join(", "),
            m.rows.len(),
            m.s1.len(),
            m.s2.len()
        );
    }
    println!();
    println!("name grammar:");
    println!("  quintic_p4          quintic threefold in P^4, refined 5 = 1 + 4");
    println!("  conifold_p4xp1      bidegrees (4,1) and (1,1) in P^4 x P^1, the blow-up");
    println!("                      family over the quintic");
    println!("  pn_x_p1(n1,n2)      bidegrees (n1,1) and (n2,1) in P^n x P^1, n = n1+n2-1");
    println!("  p1_power(n)         two divisors of multidegree (1,...,1) in (P^1)^(n+1)");
    println!("  <name>_flip         same degeneration with the two sides exchanged");
    ExitCode::SUCCESS
}

// ============================================================
// series
// ============================================================

fn print_series<C: Coeff>(s: &Series<C>) {
    if s.iter_terms().next().is_none() {
        println!("0");
        return;
    }
    for (e, c) in s.iter_terms() {
        println!("{} : {}", s.monomial_string(e), c.show());
    }
}

fn build_scalar(m: &ToricModel, kind: &str, order: u32) -> Option<QSeries> {
    Some(match kind {
        "central" => {
            let (v, t) = periods::q_table(m, order);
            periods::f0_central(m, &v, &t)
        }
        "smoothing" => {
            let (v, t) = periods::q_table(m, order);
            periods::f0_smoothing(m, &v, &t)
        }
        "lg1" => {
            let (v, t) = periods::qy_table(m, order);
            periods::f0_lg1(m, &v, &t)
        }
        "lg2" => {
            let (v, t) = periods::qy_table(m, order);
            periods::f0_lg2(m, &v, &t)
        }
        "smoothing-two" => {
            let (v, t) = periods::qq0_table(m, order);
            periods::f0_smoothing_two(m, &v, &t)
        }
        "lg1-two" => {
            let (v, t) = periods::qq0_table(m, order);
            periods::f0_lg1_two(m, &v, &t)
        }
        "lg2-two" => {
            let (v, t) = periods::qq0_table(m, order);
            periods::f0_lg2_two(m, &v, &t)
        }
        _ => return None,
    })
}

fn cmd_series(args: SeriesArgs) -> ExitCode {
    let m = match parse_example(&args.example) {
        Some(m) => m,
        None => return usage_error(&format!("unknown example: {}", args.example)),
    };
    if args.q_order == 0 {
        return usage_error("--q-order must be at least 1");
    }
    if let Some(s) = build_scalar(&m, &args.kind, args.q_order) {
        print_series(&s);
        return ExitCode::SUCCESS;
    }
    let (qv, qt, yv, yt) = ifunc::one_sided_tables(&m, args.q_order, args.log_total);
    match args.kind.as_str() {
        "i-central" => {
            let alg = ifunc::model_algebra(&m);
            print_series(&ifunc::i_central(&m, &alg, &qv, &qt));
        }
        "i-smoothing" => {
            let alg = ifunc::model_algebra(&m);
            print_series(&ifunc::i_smoothing(&m, &alg, &qv, &qt));
        }
        "i-chart1" => {
            let alg = ifunc::model_algebra(&m);
            print_series(&ifunc::i_chart1(&m, &alg, &yv, &yt));
        }
        "i-chart2" => {
            // Printed after the auxiliary generator is substituted away.
            let alg = ifunc::model_algebra(&m);
            let alg_p = ifunc::model_algebra_with_p(&m, ifunc::presubstitution_p_order(&m));
            let raw = ifunc::i_chart2_one_sided(&m, &alg_p, &yv, &yt);
            print_series(&ifunc::substitute_p(&raw, &m, &alg));
        }
        "i-smoothing-two" | "i-chart1-two" | "i-chart2-two" => {
            let alg = ifunc::model_algebra_with_p(&m, 2);
            let (qv2, qt2, _, _) = ifunc::two_sided_tables(&m, args.q_order, args.log_total);
            let s = match args.kind.as_str() {
                "i-smoothing-two" => ifunc::i_smoothing_two(&m, &alg, &qv2, &qt2),
                "i-chart1-two" => ifunc::i_chart1_two(&m, &alg, &qv2, &qt2),
                _ => ifunc::i_chart2_two(&m, &alg, &qv2, &qt2, "q0"),
            };
            print_series(&s);
        }
        other => return usage_error(&format!("unknown series kind: {other}")),
    }
    ExitCode::SUCCESS
}

// ============================================================
// operator
// ============================================================

fn builtin_operator(name: &str) -> Option<(&'static str, Vec<String>)> {
    let t = |s: &'static str| Some((s, vec!["t".to_string()]));
    let two = |s: &'static str| Some((s, vec!["q1".to_string(), "q0".to_string()]));
    match name {
        "k3" => Some((pf::k3_operator_text(), vec!["q1".to_string()])),
        "weight-one" => t(pf::weight_one_operator_text()),
        "catalogue-2" => t(pf::catalogue_operator_text(2)),
        "catalogue-3" => t(pf::catalogue_operator_text(3)),
        "catalogue-4" => t(pf::catalogue_operator_text(4)),
        "smoothing-two-1" => two(pf::smoothing_two_system_text()[0]),
        "smoothing-two-2" => two(pf::smoothing_two_system_text()[1]),
        "chart1-two-1" => two(pf::chart1_two_system_text()[0]),
        "chart1-two-2" => two(pf::chart1_two_system_text()[1]),
        "chart2-two-1" => two(pf::chart2_two_system_text()[0]),
        "chart2-two-2" => two(pf::chart2_two_system_text()[1]),
        _ => None,
    }
}

fn cmd_operator(args: OperatorArgs) -> ExitCode {
    let (text, vars): (String, Vec<String>) = match (&args.text, &args.builtin) {
        (Some(t), None) => {
            if args.vars.is_empty() {
                return usage_error("--text needs --vars with the operator ring variables");
            }
            (t.clone(), args.vars.clone())
        }
        (None, Some(b)) => match builtin_operator(b) {
            Some((t, v)) => (t.to_string(), v),
            None => return usage_error(&format!("unknown builtin operator: {b}")),
        },
        _ => return usage_error("exactly one of --text or --builtin is required"),
    };
    let names: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let ring = pf::OpRing::new(&names);
    let op = match pf::parse_operator(&text, &ring) {
        Ok(op) => op,
        Err(e) => return usage_error(&format!("cannot parse operator: {e}")),
    };
    println!("input:          {text}");
    println!("normal-ordered: {op}");

    let (apply, example) = match (&args.apply, &args.example) {
        (None, _) => return ExitCode::SUCCESS,
        (Some(a), Some(e)) => (a.clone(), e.clone()),
        (Some(_), None) => return usage_error("--apply needs --example"),
    };
    let m = match parse_example(&example) {
        Some(m) => m,
        None => return usage_error(&format!("unknown example: {example}")),
    };
    if args.q_order == 0 {
        return usage_error("--q-order must be at least 1");
    }
    let s = match build_scalar(&m, &apply, args.q_order) {
        Some(s) => s,
        None => return usage_error(&format!("unknown scalar series kind: {apply}")),
    };
    match op.apply(&s) {
        Ok(r) => {
            println!("applied to {apply} of {example} at order {}:", args.q_order);
            print_series(&r);
            ExitCode::SUCCESS
        }
        Err(e) => usage_error(&format!("cannot apply operator: {e}")),
    }
}
