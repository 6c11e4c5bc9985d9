//! Acceptance suite: every headline identity at its stated order, each as
//! one criterion with a printed pass/fail line (visible with --nocapture)
//! and, where stated, a wall-clock budget. All comparisons are exact; there
//! is no numerical tolerance anywhere.

use std::time::Instant;

use mirrorcore::check::{run_checks, CheckConfig, CheckStatus, NEGATIVE_CONTROLS};
use mirrorcore::periods::Mismatch;
use mirrorcore::toric::{conifold_p4xp1, quintic_p4};
use mirrorcore::{ifunc, invariants, periods, pf};

fn criterion<F>(name: &str, budget_ms: Option<u128>, f: F)
where
    F: FnOnce() -> Result<(), Mismatch>,
{
    let start = Instant::now();
    let result = f();
    let ms = start.elapsed().as_millis();
    match &result {
        Ok(()) => println!("acceptance: {name}: pass ({ms} ms)"),
        Err(_) => println!("acceptance: {name}: fail ({ms} ms)"),
    }
    if let Err(m) = result {
        panic!("{name}: {}", m.describe());
    }
    if let Some(budget) = budget_ms {
        assert!(
            ms <= budget,
            "{name}: exceeded its budget, {ms} ms > {budget} ms"
        );
    }
}

#[test]
fn quintic_iterated_residue_period_to_degree_6() {
    criterion("quintic period via iterated residues, degree <= 6", Some(5_000), || {
        periods::check_quartic_pencil(6)
    });
}

#[test]
fn blowup_family_period_gluing_to_joint_degree_4() {
    criterion("two-sided period gluing, d1 + d0 <= 4", Some(30_000), || {
        periods::check_period_glue_two_sided(&quintic_p4(), 4)?;
        periods::check_period_glue_one_sided(&conifold_p4xp1(), 4)
    });
}

#[test]
fn blowup_family_ifunction_gluing_and_components_to_joint_degree_3() {
    criterion(
        "two-sided I-function gluing and H^1/H^2 components, d1 + d0 <= 3",
        Some(60_000),
        || {
            ifunc::check_ifn_glue_two_sided(&quintic_p4(), 3, 2, 2)?;
            ifunc::check_ifn_components_two_sided(&quintic_p4(), 3, 2)
        },
    );
}

#[test]
fn quintic_one_sided_ifunction_gluing_both_orientations_to_degree_4() {
    criterion(
        "one-sided I-function gluing, both orientations, degree <= 4",
        None,
        || {
            ifunc::check_ifn_glue_one_sided(&quintic_p4(), 4, 2)?;
            ifunc::check_ifn_glue_one_sided(&quintic_p4().flip(), 4, 2)
        },
    );
}

#[test]
fn full_registry_default_configuration_passes() {
    let start = Instant::now();
    let report = run_checks(&CheckConfig::default()).expect("default config is valid");
    let ms = start.elapsed().as_millis();
    for r in &report.results {
        let example = r.example.as_deref().unwrap_or("-");
        let status = if r.status == CheckStatus::Pass { "pass" } else { "fail" };
        println!("acceptance: registry {} [{}]: {status}", r.check_id, example);
        assert_eq!(
            r.status,
            CheckStatus::Pass,
            "{} on {example}: {:?}",
            r.check_id,
            r.first_mismatch
        );
    }
    println!("acceptance: full registry at default orders: pass ({ms} ms)");
    assert!(report.all_passed);
    assert!(ms <= 300_000, "registry run exceeded 5 minutes: {ms} ms");
}

#[test]
fn functional_invariant_products_and_hurwitz_sweep() {
    criterion(
        "functional-invariant product laws and cusp-profile sweep to total 6",
        Some(5_000),
        || {
            for name in mirrorcore::check::default_example_names() {
                let m = mirrorcore::toric::parse_example(&name).expect("registry name parses");
                invariants::check_fi_product_one_sided(&m)?;
                invariants::check_fi_product_two_sided(&m)?;
            }
            let pairs = invariants::hurwitz_profile_pairs(6);
            assert_eq!(pairs.len(), 80, "sweep size is pinned");
            for (a, b) in pairs {
                invariants::check_hurwitz_normalized(&a, &b)?;
                invariants::check_hurwitz_root_normalized(&a, &b)?;
            }
            // Includes the explicit scale factors and their z1 -> 0 limits.
            invariants::check_hurwitz_quintic_chain()
        },
    );
}

#[test]
fn picard_fuchs_annihilation_suite() {
    criterion(
        "Picard-Fuchs suite: operator identities, catalogue to degree 8, \
         quartic surface to degree 8, two-variable systems to degree 4",
        None,
        || {
            pf::check_operator_identities()?;
            for n in 2..=4 {
                pf::check_pf_catalogue(n, 8)?;
            }
            pf::check_pf_k3(8)?;
            pf::check_pf_smoothing_two(4)?;
            pf::check_pf_charts_two(4)
        },
    );
}

#[test]
fn relative_ifunction_chart_equality_to_joint_degree_3() {
    criterion("relative I-function chart equality, d1 + d0 <= 3", None, || {
        ifunc::check_rel_i0(3, 2)
    });
}

#[test]
fn landau_ginzburg_normal_forms_n_1_to_3() {
    criterion("Landau-Ginzburg normal forms, chains of length 1 to 3", None, || {
        for n in 1..=3 {
            invariants::check_lg_normal_form(n)?;
        }
        Ok(())
    });
}

#[test]
fn negative_controls_detect_planted_errors() {
    let mut cfg = CheckConfig::default();
    cfg.checks = NEGATIVE_CONTROLS.iter().map(|c| c.as_str().to_string()).collect();
    cfg.examples = vec![];
    let report = run_checks(&cfg).expect("control config is valid");
    assert_eq!(report.results.len(), NEGATIVE_CONTROLS.len());
    for r in &report.results {
        let detected = r.status == CheckStatus::Fail;
        println!(
            "acceptance: control {}: {}",
            r.check_id,
            if detected { "pass (planted error detected)" } else { "fail (error went unnoticed)" }
        );
        assert!(detected, "{} did not detect its planted error", r.check_id);
        assert!(r.first_mismatch.is_some());
    }
}
