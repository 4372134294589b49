//! Acceptance gate: the ten top-level criteria, one pass/fail line
//! each. Results are collected and printed before any assertion so a
//! single failure still shows the whole table.

use akr8::verify::{self, CriterionResult};
use akr8_core::field::CubicField;

fn merge(number: u8, title: &str, parts: &[&CriterionResult]) -> (String, bool) {
    let passed = parts.iter().all(|r| r.passed);
    let detail = parts
        .iter()
        .map(|r| {
            if r.passed {
                format!("{} ok", r.name)
            } else {
                format!("{} FAILED: {}", r.name, r.detail)
            }
        })
        .collect::<Vec<_>>()
        .join("; ");
    (
        format!(
            "criterion {number:2} [{}] {title}: {detail}",
            if passed { "PASS" } else { "FAIL" }
        ),
        passed,
    )
}

#[test]
fn acceptance_criteria() {
    let field = CubicField::new(0, -1, -1).unwrap();
    let workers = 4;
    let report = verify::run(&field, false, workers).expect("verification suite must run");
    let by_name = |name: &str| -> &CriterionResult {
        report
            .results
            .iter()
            .find(|r| r.name == name)
            .unwrap_or_else(|| panic!("missing suite {name}"))
    };
    let end_to_end = verify::end_to_end(&field, workers).expect("end-to-end run must complete");

    let lines = [
        merge(1, "Jacobi formula vs lattice count", &[by_name("jacobi_vs_lattice")]),
        merge(2, "multiplicativity of g", &[by_name("g_multiplicative")]),
        merge(3, "coefficient identity", &[by_name("coefficient_identity")]),
        merge(
            4,
            "Hecke relation and ramified recursion",
            &[by_name("hecke_relation"), by_name("ramified_recursion")],
        ),
        merge(
            5,
            "divisor bounds and reconstruction",
            &[by_name("bounds_and_reconstruction")],
        ),
        merge(
            6,
            "local ratio bound and harmless-factor convergence",
            &[by_name("b2_a2_ratio_bound"), by_name("harmless_factor_cauchy")],
        ),
        merge(7, "residue cross-check", &[by_name("residue_cross_check")]),
        merge(
            8,
            "hybrid-sum oracle and determinism",
            &[by_name("hybrid_sum_oracle"), by_name("worker_determinism")],
        ),
        merge(9, "end-to-end main-term consistency", &[&end_to_end]),
        merge(
            10,
            "synthetic regression",
            &[by_name("synthetic_recovery"), by_name("planted_residual_slope")],
        ),
    ];

    let mut all_ok = true;
    let mut table = String::new();
    for (line, ok) in &lines {
        println!("{line}");
        table.push_str(line);
        table.push('\n');
        all_ok &= ok;
    }
    assert!(all_ok, "acceptance criteria failed:\n{table}");
}
