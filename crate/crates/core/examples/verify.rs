//! Run the fast bundled verification suites and print a summary.

use frhankel::verify::{run_suite, Suite, VerifyOptions};

fn main() {
    let options = VerifyOptions::default();
    for suite in [Suite::Lemma17, Suite::Leibniz, Suite::Ineq119, Suite::Sequences, Suite::Decay, Suite::Growth] {
        let r = run_suite(suite, &options);
        println!(
            "{suite}: {} ({} cases, max defect {:.2e}, {:.1} s)",
            if r.passed { "pass" } else { "FAIL" },
            r.cases.len(),
            r.max_defect,
            r.elapsed_seconds
        );
    }
}
