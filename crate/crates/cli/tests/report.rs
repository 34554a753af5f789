use std::collections::BTreeMap;

use gl3_verify::report::{from_json, to_json, to_text};
use gl3_verify::{SuiteReport, VerificationReport};
use proptest::prelude::*;

fn report_strategy() -> impl Strategy<Value = VerificationReport> {
    (
        "[a-z-]{1,20}",
        proptest::collection::btree_map("[a-z_]{1,8}", "[ -~]{0,12}", 0..5),
        prop_oneof![0.0f64..1.0, 0.0f64..1e-300, Just(f64::MAX), Just(0.0)],
        prop_oneof![Just(1e-8), Just(0.0), 0.0f64..1.0],
        any::<u64>(),
    )
        .prop_map(|(name, params, residual, tol, ms)| VerificationReport::new(&name, params, residual, tol, ms))
}

proptest! {
    #[test]
    fn json_round_trip(seed in any::<u64>(), reports in proptest::collection::vec(report_strategy(), 0..6)) {
        let r = SuiteReport::new(seed, reports);
        prop_assert_eq!(from_json(&to_json(&r).unwrap()).unwrap(), r);
    }
}

#[test]
fn pass_follows_tolerance() {
    let r = VerificationReport::new("x", BTreeMap::new(), 1e-9, 1e-9, 0);
    assert!(r.pass);
    let r = VerificationReport::new("x", BTreeMap::new(), 2e-9, 1e-9, 0);
    assert!(!r.pass);
}

#[test]
fn empty_report_shape() {
    let r = SuiteReport::new(7, Vec::new());
    let v: serde_json::Value = serde_json::from_str(&to_json(&r).unwrap()).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["reports"], serde_json::json!([]));
    assert!(v["suite_version"].is_string());
    assert_eq!(to_text(&r).lines().count(), 1);
}
