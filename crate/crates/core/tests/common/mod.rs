//! Generators for statement trees in the form the parser produces, so that
//! `parse(serialize(t)) == t` is expected to hold exactly.
#![allow(dead_code)]

use std::path::PathBuf;

use igkit::model::{
    AnnotationPrefix, Component, ComponentCode, Governance, InstitutionalStatement, LogicalOperator, Placement,
    PropertyNode, SemanticAnnotation, StatementNode,
};
use igkit::notation::{parse_document, SourceRecord};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use ComponentCode::*;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn records(name: &str) -> Vec<SourceRecord> {
    parse_document(&read(name))
}

pub fn golden(name: &str) -> Vec<(String, InstitutionalStatement)> {
    records(name)
        .into_iter()
        .map(|r| (r.id.clone(), r.parsed.unwrap_or_else(|| panic!("{} did not parse", r.id))))
        .collect()
}

/// Draws `n` values from a strategy with a fixed seed.
pub fn sample<T: std::fmt::Debug>(strategy: impl Strategy<Value = T>, n: usize, seed: u8) -> Vec<T> {
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]);
    let mut runner = TestRunner::new_with_rng(Config::default(), rng);
    (0..n).map(|_| strategy.new_tree(&mut runner).expect("strategy").current()).collect()
}

const NOUNS: &[&str] = &[
    "farmers",
    "inspectors",
    "the board",
    "certifiers",
    "the council",
    "members",
    "organic produce",
    "annual reports",
    "the committee",
    "handlers",
];
const VERBS: &[&str] = &["comply", "submit", "inspect", "revoke", "report", "sell", "apply", "review"];
const DEONTICS: &[&str] = &["must", "may", "shall", "should"];
const FUNCTIONS: &[&str] = &["is", "consists of", "means", "is established as", "includes"];
const CONTEXTS: &[&str] = &["upon request", "within thirty days", "in the state", "after review", "annually"];
const MODIFIERS: &[&str] = &["certified", "organic", "relevant", "public", "accredited", "standing"];

fn pick(pool: &'static [&'static str]) -> impl Strategy<Value = String> {
    proptest::sample::select(pool).prop_map(str::to_string)
}

fn operator() -> impl Strategy<Value = LogicalOperator> {
    prop_oneof![Just(LogicalOperator::And), Just(LogicalOperator::Or), Just(LogicalOperator::Xor)]
}

fn text_for(code: ComponentCode) -> BoxedStrategy<String> {
    match code {
        D | M => pick(DEONTICS).boxed(),
        I => pick(VERBS).boxed(),
        F => pick(FUNCTIONS).boxed(),
        Cac | Cex => pick(CONTEXTS).boxed(),
        _ => pick(NOUNS).boxed(),
    }
}

fn annotation_for(code: ComponentCode) -> BoxedStrategy<Option<SemanticAnnotation>> {
    let ann = |prefix: AnnotationPrefix, labels: &'static [&'static str]| {
        proptest::sample::select(labels).prop_map(move |l| Some(SemanticAnnotation::new(prefix.clone(), l)))
    };
    let some = match code {
        Cac | Cex => ann(AnnotationPrefix::Ctx, &["tim", "loc", "evt", "cnd", "frq", "prc", "met"]).boxed(),
        I => ann(AnnotationPrefix::Regfunc, &["sanction", "reward", "appeal", "authorization"]).boxed(),
        F => ann(AnnotationPrefix::Confunc, &["intent", "definition", "composition", "organization"]).boxed(),
        A | E => ann(AnnotationPrefix::Role, &["originator", "possessor", "recipient"]).boxed(),
        Bdir | Bind | P => prop_oneof![
            ann(AnnotationPrefix::Anim, &["animate", "inanimate"]),
            "[A-Z][a-z]{2,6}/[0-9]{1,3}".prop_map(|v| Some(SemanticAnnotation::polref(v))),
        ]
        .boxed(),
        _ => return Just(None).boxed(),
    };
    prop_oneof![4 => Just(None), 1 => some].boxed()
}

fn property() -> impl Strategy<Value = (String, Placement, u32)> {
    (pick(MODIFIERS), prop_oneof![Just(Placement::Before), Just(Placement::After)], 0u32..3)
}

/// A component of the given code. Properties and nesting only where the
/// notation allows them.
fn component(code: ComponentCode, nest: u32) -> BoxedStrategy<Component> {
    let can_describe = matches!(code, A | Bdir | Bind | E | P);
    let can_nest = nest > 0 && matches!(code, A | Bdir | Bind | Cac | Cex | E | P);
    let props = if can_describe { proptest::option::weighted(0.25, property()).boxed() } else { Just(None).boxed() };
    let nested = if can_nest {
        proptest::option::weighted(0.2, statement(2, nest - 1)).boxed()
    } else {
        Just(None).boxed()
    };
    let negated = if code.is_modal() { proptest::bool::weighted(0.2).boxed() } else { Just(false).boxed() };
    (text_for(code), annotation_for(code), props, nested, negated)
        .prop_map(move |(text, ann, prop, nested, negated)| {
            let mut c = Component::new(code, text);
            c.annotations.extend(ann);
            c.negated = negated;
            if let Some((ptext, placement, index)) = prop {
                if nested.is_none() {
                    let path = if index == 0 { vec![] } else { vec![index] };
                    c.properties.push(PropertyNode::dependent(ptext, path, placement));
                }
            }
            if let Some(n) = nested {
                c.text = "that".into();
                c.nested = Some(Box::new(n));
            }
            c
        })
        .boxed()
}

/// Atomic statement with at most six explicit components, possibly with
/// same-code alternatives joined by one operator per code.
pub fn atomic(nest: u32) -> BoxedStrategy<InstitutionalStatement> {
    let regulative = (
        proptest::bool::ANY,
        proptest::option::of(Just(Bdir)),
        proptest::option::of(Just(Bind)),
        proptest::option::of(prop_oneof![Just(Cac), Just(Cex)]),
    )
        .prop_map(|(deontic, bdir, bind, ctx)| {
            let mut codes = vec![A];
            if deontic {
                codes.push(D);
            }
            codes.push(I);
            codes.extend(bdir);
            codes.extend(bind);
            codes.extend(ctx);
            codes
        });
    let constitutive = (proptest::bool::ANY, proptest::option::of(Just(P)), proptest::option::of(Just(Cac)))
        .prop_map(|(modal, p, ctx)| {
            let mut codes = ctx.into_iter().collect::<Vec<_>>();
            codes.push(E);
            if modal {
                codes.push(M);
            }
            codes.push(F);
            codes.extend(p);
            codes
        });
    let codes = prop_oneof![3 => regulative, 2 => constitutive];
    (codes, proptest::option::weighted(0.3, (0usize..6, operator())), proptest::bool::ANY)
        .prop_flat_map(move |(codes, alt, full_stop)| {
            let mut codes = codes;
            let mut ops = vec![None; codes.len()];
            if let Some((which, op)) = alt {
                let at = which % codes.len();
                if codes.len() < 6 && !codes[at].is_modal() {
                    codes.insert(at + 1, codes[at]);
                    ops.insert(at + 1, Some(op));
                }
            }
            let comps: Vec<_> = codes.iter().map(|&c| component(c, nest)).collect();
            (comps, Just(ops), Just(full_stop))
        })
        .prop_map(|(mut comps, ops, full_stop)| {
            for (c, op) in comps.iter_mut().zip(ops) {
                c.operator = op;
            }
            let mut s = InstitutionalStatement::atomic(comps);
            if full_stop {
                if let StatementNode::Atomic(a) = &mut s.node {
                    a.trailing = ".".into();
                }
            }
            s
        })
        .boxed()
}

/// Statement trees of at most `depth` statement levels and `nest` levels of
/// component nesting.
pub fn statement(depth: u32, nest: u32) -> BoxedStrategy<InstitutionalStatement> {
    let leaf = atomic(nest);
    if depth <= 1 {
        return leaf;
    }
    let inner = statement(depth - 1, nest);
    let governance = proptest::option::weighted(
        0.1,
        prop_oneof![Just(Governance::Monitored), Just(Governance::Consequential), Just(Governance::Monitoring)],
    );
    prop_oneof![
        3 => leaf,
        2 => (operator(), proptest::collection::vec(inner.clone(), 2..=3))
            .prop_map(|(op, xs)| InstitutionalStatement::combination(op, xs)),
        1 => inner.clone().prop_map(InstitutionalStatement::negation),
        2 => (inner.clone(), inner).prop_map(|(m, c)| InstitutionalStatement::or_else(m, c)),
    ]
    .prop_flat_map(move |s| (Just(s), governance.clone()))
    .prop_map(|(mut s, g)| {
        s.governance = g;
        s
    })
    .boxed()
}

/// Atomic statement whose components carry alternatives, each code joined by
/// a single operator: the input domain of decomposition.
pub fn single_operator() -> BoxedStrategy<InstitutionalStatement> {
    let counts = (1usize..=3, 1usize..=3, 0usize..=3, 0usize..=2);
    (counts, operator(), operator(), operator(), operator())
        .prop_flat_map(|((na, ni, nb, nc), oa, oi, ob, oc)| {
            let group = |code: ComponentCode, n: usize, op: LogicalOperator| {
                proptest::collection::vec(text_for(code), n).prop_map(move |texts| {
                    texts
                        .into_iter()
                        .enumerate()
                        .map(|(i, t)| Component { operator: (i > 0).then_some(op), ..Component::new(code, t) })
                        .collect::<Vec<_>>()
                })
            };
            (group(A, na, oa), group(I, ni, oi), group(Bdir, nb, ob), group(Cex, nc, oc), pick(DEONTICS))
        })
        .prop_map(|(a, i, b, c, d)| {
            let mut comps = a;
            comps.push(Component::new(D, d));
            comps.extend(i);
            comps.extend(b);
            comps.extend(c);
            InstitutionalStatement::atomic(comps)
        })
        .boxed()
}

/// Deontic-bearing atomic statement, optionally negated in the modal.
pub fn negatable() -> BoxedStrategy<InstitutionalStatement> {
    (statement(3, 0), proptest::bool::ANY).prop_map(|(s, wrap)| if wrap { InstitutionalStatement::negation(s) } else { s }).boxed()
}

/// Kind of a statement once component-level nesting is ignored.
pub fn kind_without_nesting(s: &InstitutionalStatement) -> igkit::StatementKind {
    let mut flat = s.clone();
    flat.map_atomics(&mut |a| {
        for c in &mut a.components {
            c.nested = None;
            igkit::model::walk_properties_mut(&mut c.properties, &mut |p| p.nested = None);
        }
    });
    igkit::classify(&flat)
}

/// Brute-force expansion of component alternatives: one leaf per choice of
/// one component for every code.
pub fn cross_product(a: &igkit::model::AtomicStatement) -> Vec<igkit::model::AtomicStatement> {
    let mut codes: Vec<ComponentCode> = Vec::new();
    for c in a.explicit() {
        if !codes.contains(&c.code) {
            codes.push(c.code);
        }
    }
    let positions: Vec<Vec<usize>> = codes
        .iter()
        .map(|code| a.components.iter().enumerate().filter(|(_, c)| !c.implied && c.code == *code).map(|(i, _)| i).collect())
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; codes.len()];
    loop {
        let picked: Vec<usize> = positions.iter().zip(&choice).map(|(p, &k)| p[k]).collect();
        let mut leaf = igkit::model::AtomicStatement {
            components: a
                .components
                .iter()
                .enumerate()
                .filter(|(i, _)| picked.contains(i))
                .map(|(_, c)| Component { operator: None, ..c.clone() })
                .collect(),
            trailing: a.trailing.clone(),
        };
        leaf.fill_implied_context();
        out.push(leaf);
        // odometer
        let mut d = 0;
        loop {
            if d == choice.len() {
                return out;
            }
            choice[d] += 1;
            if choice[d] < positions[d].len() {
                break;
            }
            choice[d] = 0;
            d += 1;
        }
    }
}

/// Independent additions to a registry: new children under existing nodes
/// and a fresh local taxonomy, with codes unique to `round`.
pub fn additive_defs(
    reg: &igkit::TaxonomyRegistry,
    round: usize,
) -> impl Strategy<Value = Vec<igkit::taxonomy::NodeDef>> {
    let anchors: Vec<(String, String)> = reg.nodes().map(|n| (n.prefix.clone(), n.code.clone())).collect();
    let n = anchors.len();
    proptest::collection::vec((0..n, 0u8..3), 1..6).prop_map(move |picks| {
        let mut defs: Vec<igkit::taxonomy::NodeDef> = Vec::new();
        for (i, (at, how)) in picks.into_iter().enumerate() {
            let code = format!("r{round}-n{i}");
            let (prefix, parent) = match how {
                0 => (anchors[at].0.clone(), Some(anchors[at].1.clone())),
                1 => (format!("local{round}"), None),
                _ => match defs.iter().rev().find(|d| d.prefix == format!("local{round}")) {
                    Some(d) => (d.prefix.clone(), Some(d.code.clone())),
                    None => (format!("local{round}"), None),
                },
            };
            defs.push(igkit::taxonomy::NodeDef {
                prefix,
                code,
                name: None,
                parent,
                description: None,
                aliases: Vec::new(),
            });
        }
        defs
    })
}
