use qsverify::identity::convolutions::{check_all, convolution_theorems};
use qsverify::identity::{builtin_registry, run_suite, Expected, Status};

#[test]
fn expected_pass_records_hold_at_each_order() {
    let records = builtin_registry();
    for order in [50, 200, 500] {
        let report = run_suite(&records, order);
        let regressions: Vec<_> = report.entries.iter().filter(|e| e.is_regression()).map(|e| &e.name).collect();
        assert!(regressions.is_empty(), "order {order}: {regressions:?}");
    }
}

#[test]
fn audit_outcomes_are_stable_across_orders() {
    let records = builtin_registry();
    let (low, high) = (run_suite(&records, 50), run_suite(&records, 500));
    for (a, b) in low.entries.iter().zip(&high.entries) {
        assert_eq!(a.status, b.status, "{}", a.name);
        assert_eq!(a.first_failure, b.first_failure, "{}", a.name);
    }
}

#[test]
fn convolution_routes_agree() {
    // check_all reports a cross-check error if extraction and direct
    // convolution ever disagree.
    let entries = check_all(&convolution_theorems(), 500).unwrap();
    for e in &entries {
        if e.expected == Expected::Pass {
            assert_eq!(e.status, Status::Pass, "{}", e.name);
        }
    }
    let failing: Vec<_> = entries.iter().filter(|e| e.status == Status::Fail).map(|e| e.name.as_str()).collect();
    assert_eq!(failing, ["tt3-ht3", "tt2", "h2h2"]);
}
