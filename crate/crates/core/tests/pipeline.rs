use fibermahler::alexander::ManifoldRecord;
use fibermahler::pipeline::{
    run_pipeline, PipelineConfig, PipelineError, PipelineReport, UNVERIFIED_WARNING,
};
use fibermahler::{LaurentPoly, MahlerMethod};

fn record(json: &str) -> ManifoldRecord {
    ManifoldRecord::from_json(json).unwrap()
}

const FIGURE_EIGHT: &str = r#"{"name": "figure-eight", "b1": 1, "closed": false,
    "delta_pi": [[[2], 1], [[1], -3], [[0], 1]],
    "fibered_classes": [{"a": [1], "monodromy": [[2, 1], [1, 1]]}]}"#;

const CYCLOTOMIC: &str = r#"{"name": "cyclotomic", "b1": 1, "closed": false,
    "delta_pi": [[[2], 1], [[1], -1], [[0], 1]],
    "fibered_classes": [{"a": [1], "monodromy": [[1, 1], [-1, 0]]}]}"#;

const TRI: &str = r#"{"name": "tri", "b1": 2, "closed": false,
    "delta_pi": [[[1, 0], 1], [[0, 1], 1], [[0, 0], 1]],
    "fibered_classes": [{"a": [1, 0], "monodromy": [[2, 1], [1, 1]]}]}"#;

fn check_consistency(r: &PipelineReport, tol: f64) {
    assert!(r.warnings.iter().any(|w| w == UNVERIFIED_WARNING));
    if let Some(s1) = &r.statement1 {
        for c in &s1.classes {
            assert_eq!(c.holds, c.spectral_radius > 1.0 + tol);
        }
        assert_eq!(s1.holds, s1.classes.iter().all(|c| c.holds));
    }
    let s2 = r.statement2.as_ref().unwrap();
    let big = s2.mahler.method != MahlerMethod::ExactOne
        && s2.mahler.value - s2.mahler.error_estimate > 1.0 + tol;
    assert_eq!(s2.holds, big && (r.b1 == 1 || s2.positive_slice.is_some()));
    let s3 = r.statement3.as_ref().unwrap();
    assert_eq!(s3.holds, s3.leading_unit && s3.mahler.exceeds_one(tol));
}

#[test]
fn figure_eight_all_statements_hold() {
    let cfg = PipelineConfig::default();
    let r = run_pipeline(&record(FIGURE_EIGHT), &cfg).unwrap();
    check_consistency(&r, cfg.threshold);
    let golden = (3.0 + 5f64.sqrt()) / 2.0;
    let s1 = r.statement1.as_ref().unwrap();
    assert!(s1.holds);
    assert!((s1.classes[0].spectral_radius - golden).abs() < 1e-9);
    assert!((s1.classes[0].mahler.value - golden).abs() < 1e-9);
    assert!(r.statement2.as_ref().unwrap().holds);
    assert!(r.statement3.as_ref().unwrap().holds);
}

#[test]
fn cyclotomic_record_fails_statement_two_exactly() {
    let cfg = PipelineConfig::default();
    let r = run_pipeline(&record(CYCLOTOMIC), &cfg).unwrap();
    check_consistency(&r, cfg.threshold);
    let s2 = r.statement2.as_ref().unwrap();
    assert!(!s2.holds);
    assert_eq!(s2.mahler.method, MahlerMethod::ExactOne);
    assert_eq!(s2.mahler.value, 1.0);
}

#[test]
fn two_variable_record_builds_the_quarter_slice_cover() {
    let cfg = PipelineConfig::default();
    let r = run_pipeline(&record(TRI), &cfg).unwrap();
    check_consistency(&r, cfg.threshold);
    let s2 = r.statement2.as_ref().unwrap();
    assert!(s2.holds);
    let slice = s2.positive_slice.as_ref().unwrap();
    assert_eq!(slice.point, "(1/4)");
    assert_eq!(slice.denominator, 4);
    let s3 = r.statement3.as_ref().unwrap();
    assert_eq!(s3.k, 4);
    assert_eq!(s3.pullback, LaurentPoly::from_coeffs(&[4, 6, 4, 1]));
    assert!((s3.mahler.value - 4.0).abs() < 1e-9);
    assert!((s3.character_product - s3.mahler.value).abs() < 1e-6);
    assert!(s3.holds);
    assert_eq!(s3.fiber_components, 1);
}

#[test]
fn nonstandard_class_is_adapted() {
    let json = r#"{"name": "tilted", "b1": 2, "closed": false,
        "delta_pi": [[[1, 0], 1], [[0, 1], 1], [[0, 0], 1]],
        "fibered_classes": [{"a": [2, 1], "monodromy": [[2, 1], [1, 1]]}]}"#;
    let cfg = PipelineConfig::default();
    let r = run_pipeline(&record(json), &cfg).unwrap();
    check_consistency(&r, cfg.threshold);
    let s2 = r.statement2.as_ref().unwrap();
    assert!((s2.mahler.value - 1.3813564445).abs() < 1e-3);
}

#[test]
fn zero_specialization_is_reported() {
    let json = r#"{"name": "degenerate", "b1": 2, "closed": false,
        "delta_pi": [[[1, 1], 1], [[1, 0], -1], [[0, 1], -1], [[0, 0], 1]],
        "fibered_classes": [{"a": [1, 0], "monodromy": [[2, 1], [1, 1]]}]}"#;
    let err = run_pipeline(&record(json), &PipelineConfig::default());
    match err {
        Err(PipelineError::ZeroSpecialization { class }) => assert_eq!(class, vec![1, 0]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn reports_are_deterministic() {
    let cfg = PipelineConfig::default();
    for json in [FIGURE_EIGHT, CYCLOTOMIC, TRI] {
        let a = run_pipeline(&record(json), &cfg).unwrap();
        let b = run_pipeline(&record(json), &cfg).unwrap();
        assert_eq!(a.to_machine(), b.to_machine());
        assert_eq!(a.to_text(), b.to_text());
    }
}
