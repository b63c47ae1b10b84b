use super::*;
use crate::bounds::Bounds;
use crate::fixtures::{self, bundled_spec};
use crate::ideal::{enumerate_k_ideals, IdealMode, KIdeal};

fn subject(id: &str, t: Tgs) -> Subject {
    Subject::new(id, t, IdealMode::PlusClosed, Bounds::default())
}

fn ideal(t: &Tgs, labels: &[&str]) -> KIdeal {
    KIdeal::new(t, t.set_of(labels).unwrap(), IdealMode::PlusClosed).unwrap()
}

fn code_subject(name: &str) -> CodeSubject {
    let spec = bundled_spec(&format!("{name}.json"), IdealMode::PlusClosed).unwrap();
    CodeSubject::new(name, spec, Bounds::default())
}

#[test]
fn dimension_examples() {
    let s = subject("M3", fixtures::m3());
    let t = &s.t;
    let r = verify_dimension(&s, &ideal(t, &["0", "a"]), 3);
    assert_eq!((r.status, r.scan_size), (ClaimStatus::Verified, 8));
    let r = verify_dimension(&s, &ideal(t, &["0"]), 4);
    assert_eq!((r.status, r.scan_size), (ClaimStatus::Verified, 1));
    let r = verify_dimension(&s, &ideal(t, &["0", "a", "1"]), 2);
    assert_eq!((r.status, r.scan_size), (ClaimStatus::Verified, 9));
    assert_eq!(r.instance, "I={0,a,1} n=2");
}

#[test]
fn min_distance_examples() {
    let s = subject("M3", fixtures::m3());
    let t = &s.t;
    let r = verify_min_distance(&s, &ideal(t, &["0", "a"]), 3);
    assert_eq!(
        (r.status, r.detail.as_str()),
        (ClaimStatus::Verified, "d = 1")
    );
    assert_eq!(
        verify_min_distance(&s, &ideal(t, &["0"]), 3).status,
        ClaimStatus::NotApplicable
    );
    assert_eq!(
        verify_min_distance(&s, &ideal(t, &["0", "a", "1"]), 2).status,
        ClaimStatus::Verified
    );
}

#[test]
fn monotonicity_examples() {
    let s = subject("M3", fixtures::m3());
    let t = &s.t;
    let (z, i, full) = (
        ideal(t, &["0"]),
        ideal(t, &["0", "a"]),
        ideal(t, &["0", "a", "1"]),
    );
    assert_eq!(
        verify_monotonicity(&s, &i, &full, 3).unwrap().status,
        ClaimStatus::Verified
    );
    assert_eq!(
        verify_monotonicity(&s, &i, &i, 3).unwrap().status,
        ClaimStatus::Verified
    );
    assert_eq!(
        verify_monotonicity(&s, &z, &i, 3).unwrap().status,
        ClaimStatus::NotApplicable
    );
    assert!(matches!(
        verify_monotonicity(&s, &full, &i, 3),
        Err(TgsError::Usage(_))
    ));
}

#[test]
fn invalid_structures_fail_the_hypothesis() {
    let s = subject("P3", fixtures::p3());
    let z = KIdeal::zero(&s.t, IdealMode::PlusClosed).unwrap();
    let r = verify_dimension(&s, &z, 1);
    assert_eq!(r.status, ClaimStatus::HypothesisNotMet);
    assert!(r.detail.contains("monotonicity"), "{}", r.detail);
    assert_eq!(
        verify_distributive_lattice(&s).status,
        ClaimStatus::HypothesisNotMet
    );
}

#[test]
fn localized_propagation_counts_disjoint_pairs() {
    // Σ over codewords c of 3^(3 − wt c) = 27 + 3·9 + 3·3 + 1
    let r = verify_localized_propagation(&code_subject("m3-power"));
    assert_eq!((r.status, r.scan_size), (ClaimStatus::Verified, 64));
}

#[test]
fn interaction_join_on_the_power_code() {
    let results = verify_interaction_join(&code_subject("m3-power"));
    let cells: Vec<(&str, ClaimStatus)> = results
        .iter()
        .map(|r| (r.instance.as_str(), r.status))
        .collect();
    let f = ClaimStatus::Falsified;
    let v = ClaimStatus::Verified;
    assert_eq!(
        cells,
        vec![
            ("ideal-power n=3 I={0,a} alpha=0+I beta=0+I", v),
            ("ideal-power n=3 I={0,a} alpha=0+I beta=1+I", f),
            ("ideal-power n=3 I={0,a} alpha=1+I beta=0+I", f),
            ("ideal-power n=3 I={0,a} alpha=1+I beta=1+I", v),
        ]
    );
    let cx = results[1].counterexample.as_ref().unwrap();
    match &cx.witness {
        Witness::InteractionJoin {
            product,
            syndrome,
            join,
            ..
        } => {
            assert_eq!(product, &["0", "0", "0"]);
            assert_eq!((syndrome.as_str(), join.as_str()), ("0+I", "1+I"));
        }
        w => panic!("unexpected witness {w:?}"),
    }
    assert!(cx.replay().unwrap());
}

#[test]
fn syndrome_invariance_scans() {
    let r = verify_syndrome_invariance(&code_subject("m3-power"));
    assert_eq!((r.status, r.scan_size), (ClaimStatus::Verified, 8 * 27));
    let r = verify_syndrome_invariance(&code_subject("m3-power-n1"));
    assert_eq!((r.status, r.scan_size), (ClaimStatus::Verified, 2 * 3));
    assert_eq!(
        verify_syndrome_invariance(&code_subject("repetition")).status,
        ClaimStatus::NotApplicable
    );
}

#[test]
fn decoder_correctness_cases() {
    let r = verify_decoder_correctness(&code_subject("m3-power"));
    assert_eq!(r.status, ClaimStatus::HypothesisNotMet);
    assert_eq!(
        verify_decoder_correctness(&code_subject("chain2-kernel")).status,
        ClaimStatus::Verified
    );

    // Unique leaders, yet a ⊕ 1 = 1 and 1 ⊖ 1 = 0.
    let r = verify_decoder_correctness(&code_subject("m3-power-n1"));
    assert_eq!(r.status, ClaimStatus::Falsified);
    let cx = r.counterexample.unwrap();
    assert_eq!(
        cx.witness,
        Witness::DecoderCorrectness {
            c: vec!["a".into()],
            e: vec!["1".into()],
            received: vec!["1".into()],
            output: vec!["0".into()],
        }
    );
    assert!(cx.replay().unwrap());
}

#[test]
fn span_and_constraint_equivalence() {
    let r = verify_span(&code_subject("repetition"));
    assert_eq!(r.status, ClaimStatus::Verified);
    assert!(r.detail.ends_with("equality false"), "{}", r.detail);
    assert_eq!(
        verify_span(&code_subject("m3-power")).status,
        ClaimStatus::NotApplicable
    );
    let r = verify_constraint_equivalence(&code_subject("m3-power"));
    assert_eq!((r.status, r.scan_size), (ClaimStatus::Verified, 27));
}

#[test]
fn distributivity_fails_on_the_diamond() {
    let s = subject("diamond", fixtures::diamond());
    assert!(s.is_valid());
    let r = verify_distributive_lattice(&s);
    assert_eq!(r.status, ClaimStatus::Falsified);
    assert!(r.counterexample.unwrap().replay().unwrap());
    assert_eq!(
        verify_distributive_lattice(&subject("M3xM3", fixtures::m3xm3())).status,
        ClaimStatus::Verified
    );
    // Without ⊕-closure every downset is an ideal and downsets always
    // form a distributive lattice.
    let literal = Subject::new(
        "diamond",
        fixtures::diamond(),
        IdealMode::Literal,
        Bounds::default(),
    );
    assert_eq!(
        verify_distributive_lattice(&literal).status,
        ClaimStatus::Verified
    );
}

#[test]
fn tampered_counterexamples_do_not_replay() {
    let r = verify_decoder_correctness(&code_subject("m3-power-n1"));
    let mut cx = r.counterexample.unwrap();
    if let Witness::DecoderCorrectness { output, .. } = &mut cx.witness {
        *output = vec!["a".into()];
    }
    assert!(!cx.replay().unwrap());
}

#[test]
fn counterexample_documents_round_trip() {
    let r = verify_decoder_correctness(&code_subject("m3-power-n1"));
    let cx = r.counterexample.unwrap();
    let back = Counterexample::from_json(&cx.to_json()).unwrap();
    assert_eq!(back, cx);
    assert!(back.replay().unwrap());
}

#[test]
fn bundled_suite_matrix() {
    let report = run_suite(&bundled_fixtures(), &SuiteOptions::default());
    assert!(report
        .fixtures
        .iter()
        .all(|f| f.kind != FixtureKind::LoadFailure));
    for claim in ClaimId::ALL {
        assert_eq!(
            report.cell(claim, "P3"),
            Some(ClaimStatus::HypothesisNotMet),
            "{claim}"
        );
    }
    for fixture in [
        "M3",
        "M3xM3",
        "chain2",
        "diamond",
        "m3-power",
        "m3-power-n1",
        "m3-power-n2",
    ] {
        assert_eq!(
            report.cell(ClaimId::Dimension, fixture),
            Some(ClaimStatus::Verified),
            "{fixture}"
        );
        assert_eq!(
            report.cell(ClaimId::MinDistance, fixture),
            Some(ClaimStatus::Verified),
            "{fixture}"
        );
        assert_eq!(
            report.cell(ClaimId::Monotonicity, fixture),
            Some(ClaimStatus::Verified),
            "{fixture}"
        );
        assert_eq!(
            report.cell(ClaimId::LocalizedPropagation, fixture),
            Some(ClaimStatus::Verified),
            "{fixture}"
        );
    }
    for fixture in ["chain2-kernel", "repetition"] {
        assert_eq!(
            report.cell(ClaimId::Monotonicity, fixture),
            Some(ClaimStatus::Verified),
            "{fixture}"
        );
        assert_eq!(
            report.cell(ClaimId::LocalizedPropagation, fixture),
            Some(ClaimStatus::Verified),
            "{fixture}"
        );
    }
    for fixture in ["m3-power", "m3-power-n1", "m3-power-n2", "chain2-kernel"] {
        assert_eq!(
            report.cell(ClaimId::SyndromeInvariance, fixture),
            Some(ClaimStatus::Verified),
            "{fixture}"
        );
    }
    assert_eq!(
        report.cell(ClaimId::InteractionJoin, "m3-power"),
        Some(ClaimStatus::Falsified)
    );
    assert_eq!(
        report.cell(ClaimId::DistributiveLattice, "diamond"),
        Some(ClaimStatus::Falsified)
    );
    assert_eq!(
        report.cell(ClaimId::DecoderCorrectness, "m3-power-n1"),
        Some(ClaimStatus::Falsified)
    );
    let mut n = 0;
    for (id, cx) in report.counterexamples() {
        assert!(cx.replay().unwrap(), "{id}");
        n += 1;
    }
    assert!(n >= 4);
    for r in &report.results {
        assert_eq!(
            r.status == ClaimStatus::Falsified,
            r.counterexample.is_some()
        );
    }
}

#[test]
fn suite_is_deterministic() {
    let a = run_suite(&bundled_fixtures(), &SuiteOptions::default());
    let b = run_suite(&bundled_fixtures(), &SuiteOptions::default());
    assert_eq!(a.to_json(false), b.to_json(false));
    assert_eq!(a.to_text(), b.to_text());
}

#[test]
fn empty_and_broken_fixture_sets() {
    let report = run_suite(&[], &SuiteOptions::default());
    assert!(report.results.is_empty() && report.fixtures.is_empty());
    let broken = FixtureEntry {
        id: "broken".into(),
        base: None,
        content: FixtureContent::Text("{\"elements\": 3}".into()),
    };
    let report = run_suite(&[broken], &SuiteOptions::default());
    assert_eq!(report.fixtures[0].kind, FixtureKind::LoadFailure);
    assert!(report.results.is_empty());
}

#[test]
fn searched_structures_join_the_suite() {
    let opts = SuiteOptions {
        search: Some(search::SearchConfig {
            candidates: 5_000,
            keep: 2,
            ..search::SearchConfig::new(5)
        }),
        ..SuiteOptions::default()
    };
    let report = run_suite(&[], &opts);
    let summary = report.search.clone().unwrap();
    assert_eq!(report.fixtures.len(), summary.found);
    assert!(report
        .fixtures
        .iter()
        .all(|f| f.valid == Some(true) && f.id.starts_with("search-5-")));
}

#[test]
fn ideal_powers_of_every_ideal_pass_on_the_grid() {
    let s = subject("M3xM3", fixtures::m3xm3());
    for i in enumerate_k_ideals(&s.t, IdealMode::PlusClosed, 12).unwrap() {
        for n in 1..=2 {
            assert_eq!(verify_dimension(&s, &i, n).status, ClaimStatus::Verified);
        }
    }
}
