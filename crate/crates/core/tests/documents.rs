use std::path::PathBuf;

use typeseq_core::{analyze, Error, Label, RingDocument};

fn rings() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../rings");
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

#[test]
fn shipped_documents_round_trip_and_analyze() {
    let all = rings();
    assert!(all.len() >= 5);
    for (name, text) in all {
        let doc = RingDocument::from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(RingDocument::from_json(&doc.to_json()).unwrap(), doc, "{name}");
        let report = analyze(&doc).unwrap_or_else(|e| panic!("{name}: {e}"));
        let ts = &report.ring.type_sequence;
        assert_eq!(ts.iter().sum::<usize>(), report.ring.lengths.closure_over_ring, "{name}");
        assert_eq!(report.duals.is_some(), doc.options.emit_duals, "{name}");
        assert_eq!(report.associated_gsr.is_some(), doc.options.emit_gsr, "{name}");
        if let Some(suite) = &report.suite {
            assert!(suite.iter().all(|c| c.passed), "{name}");
        }
    }
}

#[test]
fn inline_documents() {
    let doc = RingDocument::from_json(
        r#"{"base": {"prime": 5}, "ring": {"gsr": {"N": 4, "spaces": {"2": "full"}}}, "options": {"emit-gsr": true}}"#,
    )
    .unwrap();
    let report = analyze(&doc).unwrap();
    // k[[X^2, X^5]]: symmetric, hence Gorenstein, and a GSR already.
    assert_eq!(report.ring.type_sequence, vec![1, 1]);
    assert_eq!(report.ring.classification.label, Label::Gorenstein);
    let gsr = report.associated_gsr.unwrap();
    assert_eq!(gsr.ring.type_sequence, vec![1, 1]);

    let doc = RingDocument::from_json(r#"{"base": "Q", "ring": {"generators": ["X^3", "X^4", "X^5"]}}"#).unwrap();
    let report = analyze(&doc).unwrap();
    assert_eq!(report.ring.type_sequence, vec![2]);
    assert_eq!(report.ring.classification.label, Label::Kunz);
}

#[test]
fn rejected_documents() {
    assert!(RingDocument::from_json("{").is_err());
    let reals = RingDocument::from_json(r#"{"base": "R", "ring": {"generators": ["X^2", "X^3"]}}"#).unwrap();
    assert!(reals.base_field().is_err());
    assert!(analyze(&reals).is_err());
    let not_local = RingDocument::from_json(
        r#"{"base": "Q", "tower": [{"name": "i", "poly": "i^2 + 1"}], "ring": {"gsr": {"N": 2, "spaces": {"0": "full"}}}}"#,
    )
    .unwrap();
    assert!(analyze(&not_local).is_err());
    let unit = RingDocument::from_json(r#"{"base": "Q", "ring": {"generators": ["1 + X"]}}"#).unwrap();
    match analyze(&unit) {
        Err(Error::Stage { .. }) => {}
        other => panic!("expected a staged error, got {other:?}"),
    }
}
