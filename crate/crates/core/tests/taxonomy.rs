mod common;

use igkit::taxonomy::TaxonomyError;
use igkit::TaxonomyRegistry;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

#[test]
fn builtin_label_counts() {
    let reg = TaxonomyRegistry::builtin();
    let count = |p: &str| reg.nodes().filter(|n| n.prefix == p && n.annotatable).count();
    assert_eq!([count("ctx"), count("role"), count("anim"), count("metatype")], [14, 6, 2, 2]);
}

#[test]
fn ancestors_end_at_the_node_and_terminate() {
    let reg = TaxonomyRegistry::builtin();
    for n in reg.nodes() {
        let chain = reg.ancestors(n);
        assert!(chain.len() <= reg.len());
        assert_eq!(chain.last().map(|x| (&x.prefix, &x.code)), Some((&n.prefix, &n.code)));
        assert!(!chain[0].has_parent());
    }
}

#[test]
fn unknown_labels_get_suggestions() {
    let reg = TaxonomyRegistry::builtin();
    match reg.resolve("regfunc", "sanctoin") {
        Err(TaxonomyError::UnknownLabel { suggestion, .. }) => assert_eq!(suggestion.as_deref(), Some("sanction")),
        other => panic!("{other:?}"),
    }
    assert!(matches!(reg.resolve("zzz", "a"), Err(TaxonomyError::UnknownPrefix(_))));
}

#[test]
fn user_file_extends_builtin() {
    let reg = TaxonomyRegistry::builtin()
        .merge_user_taxonomy(
            "[[node]]\nprefix = \"ctx\"\ncode = \"harvest\"\nname = \"Harvest season\"\nparent = \"tim\"\naliases = [\"season\"]\n",
        )
        .unwrap();
    let n = reg.resolve("ctx", "season").unwrap();
    assert_eq!(n.code, "harvest");
    let chain: Vec<_> = reg.ancestors(n).iter().map(|x| x.code.as_str()).collect();
    assert_eq!(chain, ["substantive", "tmp", "tim", "harvest"]);
    assert!(reg.merge_user_taxonomy("[[node]]\nprefix = \"ctx\"\ncode = \"a\"\ncolour = \"red\"\n").is_err());
}

/// Every node, its parent and ancestor chain as codes.
fn snapshot(reg: &TaxonomyRegistry) -> Vec<(String, String, Option<String>, Vec<String>)> {
    reg.nodes()
        .map(|n| {
            (
                n.prefix.clone(),
                n.code.clone(),
                reg.parent(n).map(|p| p.code.clone()),
                reg.ancestors(n).iter().map(|a| a.code.clone()).collect(),
            )
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn additive_merges_are_monotone(seed in any::<u64>(), rounds in 1usize..4) {
        let mut reg = TaxonomyRegistry::builtin();
        let mut bytes = [0u8; 32];
        bytes[..8].copy_from_slice(&seed.to_le_bytes());
        let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::from_seed(RngAlgorithm::ChaCha, &bytes));
        for round in 0..rounds {
            let defs = common::additive_defs(&reg, round).new_tree(&mut runner).unwrap().current();
            let merged = reg.merge_nodes(&defs).unwrap();
            prop_assert_eq!(merged.len(), reg.len() + defs.len());
            prop_assert_eq!(merged.edge_count(), reg.edge_count() + defs.iter().filter(|d| d.parent.is_some()).count());
            let before = snapshot(&reg);
            let after = snapshot(&merged);
            for entry in &before {
                prop_assert!(after.contains(entry), "{entry:?} changed");
            }
            for d in &defs {
                let n = merged.resolve(&d.prefix, &d.code).unwrap();
                prop_assert_eq!(merged.parent(n).map(|p| p.code.clone()), d.parent.clone());
            }
            reg = merged;
        }
    }
}
