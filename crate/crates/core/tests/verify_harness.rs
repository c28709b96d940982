use std::collections::BTreeSet;
use std::time::Duration;

use apnforge_core::upoly::DEFAULT_SEED;
use apnforge_core::verify::{check_names, check_theorem31, run_all, Status};
use apnforge_core::{FieldElement, FieldSpec, UPoly};

#[test]
fn names_are_unique_and_filterable() {
    let names = check_names();
    let set: BTreeSet<&String> = names.iter().collect();
    assert_eq!(set.len(), names.len());
    for name in &names {
        let only = run_all(Duration::ZERO, Some(name), DEFAULT_SEED).unwrap();
        assert!(only.iter().any(|r| r.params["name"] == name.as_str()));
    }
    assert!(run_all(Duration::ZERO, Some("nonexistent"), DEFAULT_SEED).is_err());
}

#[test]
fn default_run_is_clean_and_reproducible() {
    let a = run_all(Duration::from_secs(600), None, DEFAULT_SEED).unwrap();
    assert!(
        a.iter().all(|r| !r.is_fail()),
        "{:#?}",
        a.iter().filter(|r| r.is_fail()).collect::<Vec<_>>()
    );
    for r in &a {
        if let Status::Skipped(reason) = &r.status {
            assert!(!reason.is_empty());
        }
    }
    let b = run_all(Duration::from_secs(600), None, DEFAULT_SEED).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn serialized_shape() {
    let r = &run_all(Duration::from_secs(60), Some("gold_factorization/k=3"), DEFAULT_SEED).unwrap()[0];
    let v = serde_json::to_value(r).unwrap();
    assert_eq!(v["status"], "Pass");
    assert_eq!(v["check_id"], "gold_factorization");
    assert!(v.get("elapsed").is_none());
    assert!(v.get("reason").is_none());
    let skipped = serde_json::to_value(&run_all(Duration::ZERO, Some("remark_x12"), DEFAULT_SEED).unwrap()[0]).unwrap();
    assert_eq!(skipped["status"], "Skipped");
    assert!(skipped["reason"].as_str().is_some_and(|s| !s.is_empty()));
}

#[test]
fn gold_plus_g_without_hypothesis_needs_a_witness() {
    let f2 = FieldSpec::f2();
    let x5 = UPoly::monomial(f2, FieldElement::ONE, 5);
    let r = check_theorem31(4, &x5);
    assert_eq!(r.status, Status::Pass);
    assert!(r.evidence["hypothesis"].is_null());
    assert!(!r.evidence["verdict"]["factor_witness"].is_null());
}
