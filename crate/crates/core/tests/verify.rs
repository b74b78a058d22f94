use std::f64::consts::PI;

use coherence_bell::bell::FunctionalKind;
use coherence_bell::verify::*;

#[test]
fn saturating_construction_hits_every_bound() {
    let v = saturation_values();
    let b = BoundTable::default();
    for (k, kind) in FunctionalKind::ALL.into_iter().enumerate() {
        assert!((v[k] - b.get(kind)).abs() < 1e-9, "{kind}: {}", v[k]);
    }
}

#[test]
fn small_ensemble_passes() {
    let rows = criterion_8_sized(&BoundTable::default(), 20, 10);
    assert!(rows.iter().all(|r| r.passed), "{rows:#?}");
}

#[test]
fn corrupted_bound_is_caught() {
    let mut b = BoundTable::default();
    b.set(FunctionalKind::L1, 13.0);
    let rows = criterion_8_sized(&b, 5, 5);
    let l1 = rows
        .iter()
        .find(|r| r.name.starts_with("l1 product bound"))
        .unwrap();
    assert!(!l1.passed);
    assert!(criterion(10, &b).iter().any(|r| !r.passed));
}

#[test]
fn closed_form_helpers() {
    // Reference closed forms at the points where their values are quoted.
    assert!((ghz_werner_rel_ent_closed_form(0.5) - 6.4512).abs() < 1e-4);
    assert!((ghz_pure_skew_closed_form(PI / 4.0) - (10.0 + 2.0 * 3f64.sqrt())).abs() < 1e-12);
    let w0 = w_werner_rel_ent_closed_form(1e-15);
    assert!((w0 - 6.503).abs() < 1e-3);
}

#[test]
fn adjudication_reports_every_discrepancy() {
    let f = adjudication();
    assert_eq!(f.len(), 6);
    assert!(f.iter().all(|x| !x.direct.contains("NaN")), "{f:#?}");
}
