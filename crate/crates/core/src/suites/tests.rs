use super::*;

#[test]
fn aliases_resolve() {
    assert_eq!(canonical_suite("lemma-2-1-3"), Some("gm-rescaled"));
    assert_eq!(canonical_suite("prop-3-1-2"), Some("additive-type"));
    assert_eq!(canonical_suite("fontaine-valuations"), Some("fontaine"));
    assert_eq!(canonical_suite("all"), Some("all"));
    assert_eq!(canonical_suite("nope"), None);
    assert!(run_suite("nope", &FieldDescriptor::qp(3), &PrecisionProfile::default_for(3), false).is_err());
}

#[test]
fn digit_sums() {
    assert_eq!(digit_sum(10, 3), 2);
    assert_eq!(digit_sum(0, 5), 0);
    assert_eq!(digit_sum(31, 2), 5);
}

#[test]
fn exit_codes_follow_worst_status() {
    let mut r = run_suite("fontaine", &FieldDescriptor::qp(5), &PrecisionProfile::new(5, 16, 8).unwrap(), false).unwrap();
    assert_eq!(r.exit_code(), 0);
    r.results.push(Certificate::from_result("x", Err(Error::PrecisionExhausted("test".into()))));
    assert_eq!(r.exit_code(), 3);
    r.results.push(Certificate::fail("y", "T^1", "1", "0"));
    assert_eq!(r.exit_code(), 1);
    assert!(r.to_text().contains("FAIL  y"));
}
