//! Runs acceptance criteria 1-12 and prints one block per criterion.
//!
//! Criterion 7 asks the brute-force pairwise error of simplex(2) and
//! rotation(2,3) to reach 1/sqrt(2). For m = 3 the complement of a pair of
//! blocks is the third block, so the pair channel equals a single-block
//! channel and the true worst case is 2/sqrt(14). Those two checks are
//! expected to fail; the run fails if any other check fails, or if one of
//! them starts passing.

use std::process::ExitCode;

use cstar::acceptance;

const EXPECTED_FAILURES: &[(usize, &str)] = &[
    (7, "simplex(2) brute force vs 1/sqrt(2)"),
    (7, "rotation(2,3) brute force vs 1/sqrt(2)"),
];

fn main() -> ExitCode {
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for outcome in acceptance::run_all() {
        println!("{outcome}");
        if outcome.passed() {
            passed += 1;
        }
        for c in &outcome.checks {
            let expected_fail = EXPECTED_FAILURES.contains(&(outcome.id, c.name.as_str()));
            if c.passed == expected_fail {
                let what = if c.passed { "unexpectedly passed" } else { "failed" };
                unexpected.push(format!("criterion {} check '{}' {what}", outcome.id, c.name));
            }
        }
    }
    println!("\n{passed}/{} criteria passed", acceptance::COUNT);
    for (id, name) in EXPECTED_FAILURES {
        println!("expected failure: criterion {id} '{name}' (true value 2/sqrt(14))");
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            eprintln!("{u}");
        }
        ExitCode::FAILURE
    }
}
