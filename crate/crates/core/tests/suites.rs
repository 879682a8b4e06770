//! The slower verification suites, run end to end.

use moyal_core::verify::{run_suite, Suite};
use moyal_core::SimConfig;

fn assert_suite(suite: Suite) {
    let cfg = SimConfig::default();
    for check in run_suite(suite, &cfg) {
        assert!(
            check.pass(),
            "{}: measured {} vs bound {} ({:?})",
            check.name,
            check.measured,
            check.bound,
            check.kind
        );
    }
}

#[test]
fn quartic_suite_passes() {
    assert_suite(Suite::Quartic);
}

#[test]
fn oracle_suite_passes() {
    assert_suite(Suite::Oracle);
}
