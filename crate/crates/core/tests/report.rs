mod common;

use pfc_core::report::{build_report, check_consistency, to_csv, to_json, to_markdown, ClassificationReport, ReportConfig};

#[test]
fn json_round_trips_and_stays_consistent() {
    let report = build_report(&ReportConfig::default(), common::computation()).unwrap();
    let json = to_json(&report);
    let back: ClassificationReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
    check_consistency(&back).unwrap();
}

#[test]
fn reports_are_deterministic() {
    let comp = common::computation();
    let a = build_report(&ReportConfig::default(), comp).unwrap();
    let b = build_report(&ReportConfig::default(), comp).unwrap();
    assert_eq!(to_json(&a), to_json(&b));
    assert_eq!(to_markdown(&a), to_markdown(&b));
    assert_eq!(to_csv(&a), to_csv(&b));
}

#[test]
fn renderings_cover_every_class() {
    let report = build_report(&ReportConfig::default(), common::computation()).unwrap();
    let csv = to_csv(&report);
    assert_eq!(csv.lines().count(), 1 + 47);
    let md = to_markdown(&report);
    assert!(md.contains("38 Morita classes"));
    assert!(md.contains("18 commutative, 20 noncommutative"));
    assert_eq!(report.omega.len(), report.omega.iter().filter(|o| o.order == o.elements.len()).count());
}

#[test]
fn tampered_report_is_rejected() {
    let mut report = build_report(&ReportConfig::default(), common::computation()).unwrap();
    report.morita.classes[0].member_ids.push(1);
    assert!(check_consistency(&report).is_err());
}
