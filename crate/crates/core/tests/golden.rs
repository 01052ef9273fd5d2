mod common;

use igkit::corpus::{self, Corpus};
use igkit::notation::{plain_text, write_document};
use igkit::transform::{decompose_combinations, normalize_negation, NegationMode};
use igkit::validate::Validator;
use igkit::{
    classify, is_atomic, parse_document, ComponentCode, DiagnosticCode, LogicalOperator, Severity, StatementKind,
    StatementNode,
};

#[test]
fn golden_corpus_parses_cleanly() {
    let recs = common::records("golden.ig");
    assert!(recs.len() >= 12);
    for r in &recs {
        assert!(!r.has_errors(), "{}: {:?}", r.id, r.diagnostics);
    }
}

#[test]
fn canonical_text_is_a_fixed_point() {
    let once = write_document(&common::golden("golden.ig"));
    let again = write_document(
        &parse_document(&once).into_iter().map(|r| (r.id, r.parsed.expect("canonical text parses"))).collect::<Vec<_>>(),
    );
    assert_eq!(once, again);
}

#[test]
fn source_forms_survive_verbatim() {
    let text = common::read("golden.ig");
    let canon = write_document(&common::golden("golden.ig"));
    for id in ["reg-stylized", "con-stylized", "nested-cac", "committee-group", "advisory-board", "or-else-two-level"] {
        let line = |doc: &str| {
            let at = doc.find(&format!("ID: {id}\n")).unwrap();
            doc[at..].lines().nth(1).unwrap().to_string()
        };
        assert_eq!(line(&canon), line(&text), "{id}");
    }
}

#[test]
fn golden_kinds() {
    let kinds: Vec<_> = common::golden("golden.ig").iter().map(|(id, s)| (id.clone(), classify(s))).collect();
    let kind = |id: &str| kinds.iter().find(|(i, _)| i == id).unwrap().1;
    assert_eq!(kind("reg-stylized"), StatementKind::Regulative);
    assert_eq!(kind("con-stylized"), StatementKind::Constitutive);
    assert_eq!(kind("polymorph-board"), StatementKind::Polymorphic);
    assert_eq!(kind("council-right-regulative"), StatementKind::Regulative);
}

#[test]
fn producer_decomposes_into_the_two_printed_sentences() {
    let (_, s) = common::golden("producer.ig").remove(0);
    let d = decompose_combinations(&s).unwrap();
    let StatementNode::Combination { operator, operands } = &d.node else { panic!("{d:?}") };
    assert_eq!(*operator, LogicalOperator::And);
    let sentences: Vec<_> = operands.iter().map(plain_text).collect();
    assert_eq!(
        sentences,
        [
            "The producer of an organic livestock operation must establish year-round livestock living conditions which accommodate the health and natural behavior of animals.",
            "The producer of an organic livestock operation must maintain year-round livestock living conditions which accommodate the health and natural behavior of animals.",
        ]
    );
    assert!(operands.iter().all(is_atomic));
    let expected = common::golden("producer_decomposed.ig").remove(0).1;
    assert_eq!(d, expected);
}

#[test]
fn decomposed_producer_counts() {
    let (_, s) = common::golden("producer.ig").remove(0);
    let d = decompose_combinations(&s).unwrap();
    let t = corpus::stats(d.leaves().into_iter().map(|a| igkit::InstitutionalStatement::from(StatementNode::Atomic(a.clone()))).collect::<Vec<_>>().iter());
    for code in ["A", "D", "I", "Bdir"] {
        assert_eq!(t.count(code), 2, "{code}");
    }
    assert_eq!(t.explicit_total(), 8);
}

#[test]
fn both_negation_forms_meet() {
    let g = common::golden("golden.ig");
    let get = |id: &str| g.iter().find(|(i, _)| i == id).unwrap().1.clone();
    let inline = normalize_negation(&get("xor-not-inline"), NegationMode::Hoist).unwrap();
    let prefix = normalize_negation(&get("xor-not-prefix"), NegationMode::Hoist).unwrap();
    assert_eq!(inline, prefix);
    let inline = normalize_negation(&get("xor-not-inline"), NegationMode::Push).unwrap();
    let prefix = normalize_negation(&get("xor-not-prefix"), NegationMode::Push).unwrap();
    assert_eq!(inline, prefix);
}

fn without(s: &igkit::InstitutionalStatement, code: ComponentCode) -> igkit::InstitutionalStatement {
    let mut s = s.clone();
    if let StatementNode::Atomic(a) = &mut s.node {
        a.components.retain(|c| c.code != code);
        a.fill_implied_context();
    }
    s
}

#[test]
fn dropping_attributes_is_one_error() {
    let v = Validator::default();
    let mut checked = 0;
    for (id, s) in common::golden("golden.ig") {
        if classify(&s) != StatementKind::Regulative || s.as_atomic().is_none() {
            continue;
        }
        let report = v.validate(&id, &without(&s, ComponentCode::A));
        let errors: Vec<_> = report.diagnostics.iter().filter(|d| d.is_error()).collect();
        assert_eq!(errors.len(), 1, "{id}: {errors:?}");
        assert_eq!(errors[0].code, DiagnosticCode::MissingAttributes);
        checked += 1;
    }
    assert!(checked >= 5);
}

#[test]
fn dropping_activation_condition_is_implied() {
    let v = Validator::default();
    let mut checked = 0;
    for (id, s) in common::golden("golden.ig") {
        if !s.as_atomic().is_some_and(|a| a.has_explicit(ComponentCode::Cac)) {
            continue;
        }
        let report = v.validate(&id, &without(&s, ComponentCode::Cac));
        assert!(!report.has_errors(), "{id}: {:?}", report.diagnostics);
        let infos = report.diagnostics.iter().filter(|d| d.code == DiagnosticCode::ImpliedContext).count();
        assert_eq!(infos, 1, "{id}");
        checked += 1;
    }
    assert!(checked >= 3);
}

#[test]
fn core_corpus_conforms() {
    let v = Validator::new(igkit::TaxonomyRegistry::builtin(), Some(igkit::Profile::parse("IG Core+C_Ext").unwrap()));
    for (id, s) in common::golden("core_corpus.ig") {
        let r = v.validate(&id, &s);
        assert!(!r.has_errors(), "{id}: {:?}", r.diagnostics);
        assert!(r.diagnostics.iter().all(|d| d.severity != Severity::Warning), "{id}: {:?}", r.diagnostics);
    }
}

#[test]
fn livestock_excerpt_preprocesses_to_three_sentences() {
    let got = corpus::preprocess(&common::read("livestock.txt"));
    let want: Vec<String> = common::read("livestock.expected").lines().map(|l| l.trim_end().to_string()).collect();
    assert_eq!(want.len(), 3);
    assert_eq!(got, want);
}

#[test]
fn vertical_histogram_for_two_level_chain() {
    let g = common::golden("golden.ig");
    let s = &g.iter().find(|(i, _)| i == "or-else-two-level").unwrap().1;
    let t = corpus::stats([s]);
    assert_eq!(t.vertical_depth.into_iter().collect::<Vec<_>>(), [(1, 1), (2, 1)]);
}

#[test]
fn empty_corpus_stats() {
    let t = corpus::stats(std::iter::empty());
    assert_eq!(t.statements, 0);
    assert_eq!(t.explicit_total(), 0);
    assert!(t.labels.is_empty() && t.nesting_depth.is_empty());
}

#[test]
fn interchange_round_trip_of_golden_corpus() {
    let c = Corpus::load_files(&[common::data("golden.ig")]).unwrap();
    let json = corpus::export(&c);
    assert!(json.contains("\"schema\": \"igkit-1\""));
    assert_eq!(corpus::import(&json).unwrap(), c);
    assert_eq!(corpus::export(&corpus::import(&json).unwrap()), json);
}

#[test]
fn decomposition_never_loses_occurrences() {
    let g = common::golden("golden.ig");
    let before = corpus::stats(g.iter().map(|(_, s)| s));
    let decomposed: Vec<_> = g.iter().map(|(_, s)| decompose_combinations(s).unwrap_or_else(|_| s.clone())).collect();
    let after = corpus::stats(decomposed.iter());
    assert!(after.explicit_total() >= before.explicit_total());
    for (code, n) in &before.explicit {
        assert!(after.explicit.get(code).copied().unwrap_or(0) >= *n, "{code}");
    }
}

#[test]
fn manifest_loads_relative_paths() {
    let dir = tempdir();
    std::fs::copy(common::data("core_corpus.ig"), dir.join("rules.ig")).unwrap();
    std::fs::write(dir.join("local.toml"), "[[node]]\nprefix = \"ctx\"\ncode = \"harvest\"\nparent = \"tim\"\n").unwrap();
    std::fs::write(
        dir.join("igkit.toml"),
        "name = \"organic\"\nprofile = \"IG Core+C_Ext\"\ntaxonomies = [\"local.toml\"]\ndocuments = [\"rules.ig\"]\nnotes = \"objects without properties\"\n",
    )
    .unwrap();
    let m = corpus::CorpusManifest::load(&dir.join("igkit.toml")).unwrap();
    assert!(m.registry().unwrap().resolve("ctx", "harvest").is_ok());
    let c = m.load_corpus().unwrap();
    assert_eq!(c.statements().count(), 10);
    assert_eq!(c.profile.as_deref(), Some("IG Core+C_Ext"));

    std::fs::write(dir.join("bad.toml"), "name = \"x\"\nprofile = \"IG Core\"\ndocuments = [\"missing.ig\"]\n").unwrap();
    assert!(matches!(corpus::CorpusManifest::load(&dir.join("bad.toml")), Err(corpus::ManifestError::MissingPath(_))));
    std::fs::write(dir.join("bad.toml"), "name = \"x\"\nprofile = \"IG Basic\"\ndocuments = []\n").unwrap();
    assert!(matches!(corpus::CorpusManifest::load(&dir.join("bad.toml")), Err(corpus::ManifestError::Profile(_))));
    std::fs::remove_dir_all(dir).ok();
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("igkit-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
