//! Completeness, annotation and profile checks.
//!
//! Every check returns diagnostics; nothing here fails. Necessary components
//! are checked per atomic statement, so a statement nested inside a component
//! has to be complete on its own.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::classify::{classify, classify_atomic, StatementKind};
use crate::diagnostic::{Diagnostic, DiagnosticCode};
use crate::model::{
    walk_properties, AnnotationPrefix, AtomicStatement, Component, ComponentCode, Dependence,
    Governance, InstitutionalStatement, PropertyNode, SemanticAnnotation, StatementNode,
};
use crate::profile::{Feature, Profile};
use crate::taxonomy::TaxonomyRegistry;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationReport {
    pub statement_id: String,
    pub kind: StatementKind,
    pub diagnostics: Vec<Diagnostic>,
    pub feature_usage: BTreeSet<Feature>,
}

impl ValidationReport {
    pub fn has_errors(&self) -> bool {
        crate::diagnostic::has_errors(&self.diagnostics)
    }
}

/// Shared configuration for validating many statements.
#[derive(Debug, Clone)]
pub struct Validator {
    pub registry: TaxonomyRegistry,
    pub profile: Option<Profile>,
    /// Warn about labels that have a more specific child.
    pub strict: bool,
}

impl Default for Validator {
    fn default() -> Self {
        Validator { registry: TaxonomyRegistry::builtin(), profile: None, strict: false }
    }
}

impl Validator {
    pub fn new(registry: TaxonomyRegistry, profile: Option<Profile>) -> Self {
        Validator { registry, profile, strict: false }
    }

    pub fn validate(&self, id: &str, statement: &InstitutionalStatement) -> ValidationReport {
        let mut diagnostics = check_completeness_with(statement, self.profile.as_ref());
        diagnostics.extend(validate_annotations(statement, &self.registry, self.strict));
        diagnostics.extend(check_governance(statement));
        if let Some(p) = &self.profile {
            diagnostics.extend(check_profile_conformance(statement, p));
        }
        let diagnostics = diagnostics.into_iter().map(|d| d.with_id(id)).collect();
        ValidationReport {
            statement_id: id.to_string(),
            kind: classify(statement),
            diagnostics,
            feature_usage: feature_usage(statement),
        }
    }
}

// -------------------------------------------------------------------------
// completeness

pub fn check_completeness(statement: &InstitutionalStatement) -> Vec<Diagnostic> {
    check_completeness_with(statement, None)
}

const REGULATIVE_NEEDS: [(ComponentCode, DiagnosticCode, &str); 2] = [
    (ComponentCode::A, DiagnosticCode::MissingAttributes, "Attributes"),
    (ComponentCode::I, DiagnosticCode::MissingAim, "Aim"),
];

const CONSTITUTIVE_NEEDS: [(ComponentCode, DiagnosticCode, &str); 2] = [
    (ComponentCode::E, DiagnosticCode::MissingConstitutedEntity, "Constituted Entity"),
    (ComponentCode::F, DiagnosticCode::MissingConstitutiveFunction, "Constitutive Function"),
];

/// Like [`check_completeness`], but components the profile removed are not
/// required.
pub fn check_completeness_with(statement: &InstitutionalStatement, profile: Option<&Profile>) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut implied = 0usize;
    let mut atomics = Vec::new();
    with_host_actor(statement, false, &mut atomics);
    let many = atomics.len() > 1;
    for (n, (a, host_actor)) in atomics.iter().enumerate() {
        let label = if many { format!("atomic statement {}: ", n + 1) } else { String::new() };
        let own: BTreeSet<ComponentCode> = a.explicit().flat_map(Component::codes).collect();
        let kind = classify_atomic(a);
        let (reg, con) = match kind {
            StatementKind::Regulative => (true, false),
            StatementKind::Constitutive => (false, true),
            StatementKind::Hybrid => (
                own.iter().any(|c| matches!(c, ComponentCode::A | ComponentCode::D | ComponentCode::I)),
                own.iter().any(|c| matches!(c, ComponentCode::E | ComponentCode::M | ComponentCode::F)),
            ),
            StatementKind::Polymorphic => (true, true),
        };
        let mut available = if kind == StatementKind::Polymorphic { polymorphic_codes(a) } else { own };
        if *host_actor {
            available.insert(ComponentCode::A);
        }
        let mut need = Vec::new();
        if reg {
            need.extend(REGULATIVE_NEEDS.iter().map(|n| (n, "regulative")));
        }
        if con {
            need.extend(CONSTITUTIVE_NEEDS.iter().map(|n| (n, "constitutive")));
        }
        for ((code, diag, name), family) in need {
            if available.contains(code) {
                continue;
            }
            if profile.is_some_and(|p| !p.includes(feature_of(*code))) {
                continue;
            }
            let mut msg = format!("{label}{family} statement has no {name} ({code})");
            if kind == StatementKind::Polymorphic {
                msg.push_str(" in either reading");
            }
            out.push(Diagnostic::error(*diag, msg));
        }
        if !a.has_explicit(ComponentCode::Cac) || !a.has_explicit(ComponentCode::Cex) {
            implied += 1;
        }
    }
    if implied > 0 {
        let msg = if implied == 1 && !many {
            "context not coded; implied default applies".to_string()
        } else {
            format!("context not coded in {implied} atomic statement(s); implied defaults apply")
        };
        out.push(Diagnostic::info(DiagnosticCode::ImpliedContext, msg));
    }
    out
}

/// Atomics in visiting order, each flagged if a statement it is nested in
/// names an actor. A nested statement without Attributes is read as being
/// about that actor ("the functions of the Board shall be: give effect ...").
fn with_host_actor<'a>(s: &'a InstitutionalStatement, inherited: bool, out: &mut Vec<(&'a AtomicStatement, bool)>) {
    match &s.node {
        StatementNode::Atomic(a) => {
            out.push((a, inherited));
            let actor = inherited || a.has_explicit(ComponentCode::A);
            for c in &a.components {
                if let Some(n) = &c.nested {
                    with_host_actor(n, actor, out);
                }
                let mut nested = Vec::new();
                walk_properties(&c.properties, &mut |p| nested.extend(p.nested.as_deref()));
                for n in nested {
                    with_host_actor(n, actor, out);
                }
            }
        }
        StatementNode::Combination { operands, .. } => operands.iter().for_each(|o| with_host_actor(o, inherited, out)),
        StatementNode::Negation { operand } => with_host_actor(operand, inherited, out),
        StatementNode::OrElse { monitored, consequential } => {
            with_host_actor(monitored, inherited, out);
            with_host_actor(consequential, inherited, out);
        }
    }
}

/// Codes a dual-coded statement can draw on: its own, the alternative
/// readings, and those of statements nested in its components.
fn polymorphic_codes(a: &AtomicStatement) -> BTreeSet<ComponentCode> {
    let mut set: BTreeSet<ComponentCode> = a.explicit().flat_map(Component::codes).collect();
    for c in a.explicit() {
        if let Some(n) = &c.nested {
            n.visit_atomics(&mut |inner| set.extend(inner.explicit().flat_map(Component::codes)));
        }
    }
    set
}

fn feature_of(code: ComponentCode) -> Feature {
    match code {
        ComponentCode::A => Feature::A,
        ComponentCode::B => Feature::B,
        ComponentCode::Bdir => Feature::Bdir,
        ComponentCode::Bind => Feature::Bind,
        ComponentCode::D => Feature::D,
        ComponentCode::I => Feature::I,
        ComponentCode::Cac => Feature::Cac,
        ComponentCode::Cex => Feature::Cex,
        ComponentCode::E => Feature::E,
        ComponentCode::F => Feature::F,
        ComponentCode::M => Feature::M,
        ComponentCode::P => Feature::P,
    }
}

// -------------------------------------------------------------------------
// annotations

/// Which component codes a taxonomy prefix may annotate.
pub fn annotation_allowed(prefix: &AnnotationPrefix, code: ComponentCode) -> bool {
    match prefix {
        AnnotationPrefix::Ctx => code.is_context(),
        AnnotationPrefix::Regfunc => code == ComponentCode::I,
        AnnotationPrefix::Confunc => code == ComponentCode::F,
        AnnotationPrefix::Anim | AnnotationPrefix::Role | AnnotationPrefix::Metatype => code.is_actor_like(),
        AnnotationPrefix::Polref => true,
        AnnotationPrefix::Custom(p) => !matches!(p.as_str(), "governance" | "consequence"),
    }
}

pub fn validate_annotations(
    statement: &InstitutionalStatement,
    registry: &TaxonomyRegistry,
    strict: bool,
) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    statement.visit_atomics(&mut |a| {
        for c in a.explicit() {
            for ann in &c.annotations {
                check_annotation(ann, c, "component", registry, strict, &mut out);
            }
            walk_properties(&c.properties, &mut |p: &PropertyNode| {
                let what = if p.dependence == Dependence::Dependent { "property" } else { "group member" };
                for ann in &p.annotations {
                    check_annotation(ann, c, what, registry, strict, &mut out);
                }
            });
        }
    });
    out
}

fn check_annotation(
    ann: &SemanticAnnotation,
    c: &Component,
    what: &str,
    registry: &TaxonomyRegistry,
    strict: bool,
    out: &mut Vec<Diagnostic>,
) {
    let code = c.code;
    if ann.prefix == AnnotationPrefix::Polref {
        if ann.value.as_deref().is_none_or(|v| v.trim().is_empty()) {
            out.push(Diagnostic::error(
                DiagnosticCode::MissingReferenceValue,
                format!("polref on {code} {what} has no reference value"),
            ));
        }
        return;
    }
    if !c.codes().any(|k| annotation_allowed(&ann.prefix, k)) {
        out.push(Diagnostic::error(
            DiagnosticCode::MisplacedAnnotation,
            format!("`{ann}` cannot annotate a {code} {what}"),
        ));
        return;
    }
    if ann.value.is_some() {
        out.push(Diagnostic::warning(
            DiagnosticCode::UnexpectedAnnotationValue,
            format!("`{ann}` carries a value; only polref takes one"),
        ));
    }
    let prefix = ann.prefix.as_str();
    if matches!(ann.prefix, AnnotationPrefix::Custom(_)) && !registry.has_prefix(prefix) {
        // Unregistered project-specific prefixes are carried through unchecked.
        return;
    }
    match registry.resolve(prefix, &ann.label) {
        Ok(node) => {
            if strict && registry.has_specific_children(node) {
                out.push(Diagnostic::warning(
                    DiagnosticCode::NonLeafLabel,
                    format!("`{ann}` on {code} {what} has more specific labels below it"),
                ));
            }
        }
        Err(e) => out.push(Diagnostic::error(DiagnosticCode::UnknownTaxonomyLabel, e.to_string())),
    }
}

/// Governance tags that contradict the statement's side of an `OR ELSE`.
pub fn check_governance(statement: &InstitutionalStatement) -> Vec<Diagnostic> {
    fn walk(s: &InstitutionalStatement, side: Option<Governance>, out: &mut Vec<Diagnostic>) {
        if let (Some(tag), Some(side)) = (s.governance, side) {
            let clash = matches!(
                (tag, side),
                (Governance::Monitored, Governance::Consequential) | (Governance::Consequential, Governance::Monitored)
            );
            if clash {
                out.push(Diagnostic::warning(
                    DiagnosticCode::GovernanceMismatch,
                    format!("statement tagged {} sits on the {} side of OR ELSE", tag.as_str(), side.as_str()),
                ));
            }
        }
        if s.consequence_type.is_some() && side == Some(Governance::Monitored) {
            out.push(Diagnostic::warning(
                DiagnosticCode::GovernanceMismatch,
                "consequence type on a monitored statement",
            ));
        }
        match &s.node {
            StatementNode::Atomic(_) => {}
            StatementNode::Combination { operands, .. } => {
                for o in operands {
                    walk(o, side, out);
                }
            }
            StatementNode::Negation { operand } => walk(operand, side, out),
            StatementNode::OrElse { monitored, consequential } => {
                walk(monitored, Some(Governance::Monitored), out);
                walk(consequential, Some(Governance::Consequential), out);
            }
        }
    }
    let mut out = Vec::new();
    walk(statement, None, &mut out);
    out
}

// -------------------------------------------------------------------------
// profiles

/// Profile features a statement makes use of.
pub fn feature_usage(statement: &InstitutionalStatement) -> BTreeSet<Feature> {
    let mut set = BTreeSet::new();
    usage_node(statement, &mut set);
    set
}

fn usage_node(s: &InstitutionalStatement, set: &mut BTreeSet<Feature>) {
    match &s.node {
        StatementNode::Atomic(a) => {
            for c in a.explicit() {
                usage_component(c, set);
            }
        }
        StatementNode::Combination { operands, .. } => operands.iter().for_each(|o| usage_node(o, set)),
        StatementNode::Negation { operand } => usage_node(operand, set),
        StatementNode::OrElse { monitored, consequential } => {
            set.insert(Feature::O);
            usage_node(monitored, set);
            usage_node(consequential, set);
        }
    }
}

fn usage_component(c: &Component, set: &mut BTreeSet<Feature>) {
    for code in c.codes() {
        set.insert(feature_of(code));
        if !c.properties.is_empty() || c.nested.is_some() {
            if let Some(ext) = feature_of(code).extended() {
                set.insert(ext);
            }
        }
    }
    let mut anns: Vec<&SemanticAnnotation> = c.annotations.iter().collect();
    walk_properties(&c.properties, &mut |p| anns.extend(&p.annotations));
    for ann in anns {
        match &ann.prefix {
            AnnotationPrefix::Ctx => {
                for code in c.codes().filter(|k| k.is_context()) {
                    set.extend(feature_of(code).extended());
                }
            }
            AnnotationPrefix::Regfunc => {
                set.insert(Feature::U_reg);
            }
            AnnotationPrefix::Confunc => {
                set.insert(Feature::U_con);
            }
            AnnotationPrefix::Polref => {
                set.insert(Feature::R);
            }
            _ => {
                set.insert(Feature::S);
            }
        }
    }
    if let Some(n) = &c.nested {
        usage_node(n, set);
    }
    walk_properties(&c.properties, &mut |p| {
        if let Some(n) = &p.nested {
            usage_node(n, set);
        }
    });
}

pub fn check_profile_conformance(statement: &InstitutionalStatement, profile: &Profile) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let name = profile.expression.format();
    for f in feature_usage(statement) {
        if !profile.includes(f) {
            out.push(Diagnostic::error(
                DiagnosticCode::FeatureNotInProfile,
                format!("statement uses {f}, which {name} does not include"),
            ));
        }
    }
    let kind = classify(statement);
    let mut necessary: Vec<Feature> = Vec::new();
    if kind != StatementKind::Constitutive {
        necessary.extend([Feature::A, Feature::I]);
    }
    if kind != StatementKind::Regulative {
        necessary.extend([Feature::E, Feature::F]);
    }
    necessary.extend([Feature::Cac, Feature::Cex]);
    for f in necessary {
        if profile.expression.baseline.features().contains(&f) && !profile.includes(f) {
            out.push(Diagnostic::info(
                DiagnosticCode::FeatureRemovedByProfile,
                format!("{name} omits the necessary feature {f}"),
            ));
        }
    }
    out
}
