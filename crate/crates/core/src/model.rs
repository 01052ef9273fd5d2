//! Statement tree for IG 2.0 shorthand.
//!
//! An [`InstitutionalStatement`] is either a single atomic statement or a
//! statement-level combination, negation or vertical `OR ELSE` link. Component
//! level structure (properties, compound groups, nested statements) lives on
//! [`Component`] and [`PropertyNode`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentCode {
    A,
    B,
    Bdir,
    Bind,
    D,
    I,
    Cac,
    Cex,
    E,
    F,
    M,
    P,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Regulative,
    Constitutive,
    Shared,
}

impl ComponentCode {
    pub const ALL: [ComponentCode; 12] = [
        ComponentCode::A,
        ComponentCode::B,
        ComponentCode::Bdir,
        ComponentCode::Bind,
        ComponentCode::D,
        ComponentCode::I,
        ComponentCode::Cac,
        ComponentCode::Cex,
        ComponentCode::E,
        ComponentCode::F,
        ComponentCode::M,
        ComponentCode::P,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ComponentCode::A => "A",
            ComponentCode::B => "B",
            ComponentCode::Bdir => "Bdir",
            ComponentCode::Bind => "Bind",
            ComponentCode::D => "D",
            ComponentCode::I => "I",
            ComponentCode::Cac => "Cac",
            ComponentCode::Cex => "Cex",
            ComponentCode::E => "E",
            ComponentCode::F => "F",
            ComponentCode::M => "M",
            ComponentCode::P => "P",
        }
    }

    pub fn family(self) -> Family {
        use ComponentCode::*;
        match self {
            A | B | Bdir | Bind | D | I => Family::Regulative,
            E | F | M | P => Family::Constitutive,
            Cac | Cex => Family::Shared,
        }
    }

    pub fn is_context(self) -> bool {
        matches!(self, ComponentCode::Cac | ComponentCode::Cex)
    }

    /// Deontic or Modal: the components that carry leaf-level negation.
    pub fn is_modal(self) -> bool {
        matches!(self, ComponentCode::D | ComponentCode::M)
    }

    /// Codes that may be described by animacy, role or metatype annotations.
    pub fn is_actor_like(self) -> bool {
        use ComponentCode::*;
        matches!(self, A | B | Bdir | Bind | E | P)
    }
}

impl fmt::Display for ComponentCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComponentCode {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ComponentCode::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum LogicalOperator {
    And,
    Or,
    Xor,
}

impl LogicalOperator {
    pub fn as_str(self) -> &'static str {
        match self {
            LogicalOperator::And => "AND",
            LogicalOperator::Or => "OR",
            LogicalOperator::Xor => "XOR",
        }
    }

    /// Connective used when structure is dissolved into running text.
    pub fn as_prose(self) -> &'static str {
        match self {
            LogicalOperator::And => "and",
            LogicalOperator::Or => "and/or",
            LogicalOperator::Xor => "or",
        }
    }
}

impl fmt::Display for LogicalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dependence {
    Dependent,
    Independent,
}

/// Side of the parent element a property was written on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    Before,
    After,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum AnnotationPrefix {
    Ctx,
    Anim,
    Metatype,
    Role,
    Regfunc,
    Confunc,
    Polref,
    Custom(String),
}

impl AnnotationPrefix {
    pub fn as_str(&self) -> &str {
        match self {
            AnnotationPrefix::Ctx => "ctx",
            AnnotationPrefix::Anim => "anim",
            AnnotationPrefix::Metatype => "metatype",
            AnnotationPrefix::Role => "role",
            AnnotationPrefix::Regfunc => "regfunc",
            AnnotationPrefix::Confunc => "confunc",
            AnnotationPrefix::Polref => "polref",
            AnnotationPrefix::Custom(s) => s,
        }
    }

    pub fn parse(s: &str) -> Option<AnnotationPrefix> {
        let valid = !s.is_empty()
            && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        if !valid {
            return None;
        }
        Some(match s {
            "ctx" => AnnotationPrefix::Ctx,
            "anim" => AnnotationPrefix::Anim,
            "metatype" => AnnotationPrefix::Metatype,
            "role" => AnnotationPrefix::Role,
            "regfunc" => AnnotationPrefix::Regfunc,
            "confunc" => AnnotationPrefix::Confunc,
            "polref" => AnnotationPrefix::Polref,
            other => AnnotationPrefix::Custom(other.to_string()),
        })
    }
}

impl From<AnnotationPrefix> for String {
    fn from(p: AnnotationPrefix) -> String {
        p.as_str().to_string()
    }
}

impl TryFrom<String> for AnnotationPrefix {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        AnnotationPrefix::parse(&s).ok_or_else(|| format!("invalid annotation prefix `{s}`"))
    }
}

impl fmt::Display for AnnotationPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A `prefix:label` tag, or `polref=value` for policy references.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemanticAnnotation {
    pub prefix: AnnotationPrefix,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

impl SemanticAnnotation {
    pub fn new(prefix: AnnotationPrefix, label: impl Into<String>) -> Self {
        SemanticAnnotation { prefix, label: label.into(), value: None }
    }

    pub fn polref(value: impl Into<String>) -> Self {
        SemanticAnnotation {
            prefix: AnnotationPrefix::Polref,
            label: String::new(),
            value: Some(value.into()),
        }
    }
}

impl fmt::Display for SemanticAnnotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.prefix, &self.value) {
            (AnnotationPrefix::Polref, Some(v)) => write!(f, "polref={v}"),
            (p, Some(v)) if self.label.is_empty() => write!(f, "{p}={v}"),
            (p, _) => write!(f, "{p}:{}", self.label),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Governance {
    Monitored,
    Consequential,
    Monitoring,
}

impl Governance {
    pub fn as_str(self) -> &'static str {
        match self {
            Governance::Monitored => "monitored",
            Governance::Consequential => "consequential",
            Governance::Monitoring => "monitoring",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "monitored" => Some(Governance::Monitored),
            "consequential" => Some(Governance::Consequential),
            "monitoring" => Some(Governance::Monitoring),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConsequenceType {
    #[serde(rename = "existential")]
    Existential,
    #[serde(rename = "non-existential")]
    NonExistential,
}

impl ConsequenceType {
    pub fn as_str(self) -> &'static str {
        match self {
            ConsequenceType::Existential => "existential",
            ConsequenceType::NonExistential => "non-existential",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "existential" => Some(ConsequenceType::Existential),
            "non-existential" => Some(ConsequenceType::NonExistential),
            _ => None,
        }
    }
}

/// Descriptor of a component: a functionally dependent property, or a member
/// of a compound group (independent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PropertyNode {
    pub text: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub filler: String,
    pub dependence: Dependence,
    #[serde(default)]
    pub index_path: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_id: Option<char>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sibling_operator: Option<LogicalOperator>,
    pub placement: Placement,
    #[serde(default, skip_serializing_if = "is_false")]
    pub inferred: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nested: Option<Box<InstitutionalStatement>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<SemanticAnnotation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<PropertyNode>,
}

impl PropertyNode {
    pub fn dependent(text: impl Into<String>, index_path: Vec<u32>, placement: Placement) -> Self {
        PropertyNode {
            text: text.into(),
            filler: String::new(),
            dependence: Dependence::Dependent,
            index_path,
            group_id: None,
            sibling_operator: None,
            placement,
            inferred: false,
            nested: None,
            annotations: Vec::new(),
            children: Vec::new(),
        }
    }

    pub fn member(text: impl Into<String>, group_id: Option<char>) -> Self {
        PropertyNode {
            dependence: Dependence::Independent,
            group_id,
            ..PropertyNode::dependent(text, Vec::new(), Placement::Before)
        }
    }

    /// A group member written as bare text between operators.
    pub fn is_plain_member(&self) -> bool {
        self.dependence == Dependence::Independent
            && self.group_id.is_none()
            && self.children.is_empty()
            && self.annotations.is_empty()
            && self.nested.is_none()
            && !self.inferred
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Component {
    pub code: ComponentCode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alt_code: Option<ComponentCode>,
    pub text: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub filler: String,
    #[serde(default)]
    pub implied: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub inferred: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub negated: bool,
    /// Operator joining this component to the previous one with the same code.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<LogicalOperator>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<PropertyNode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nested: Option<Box<InstitutionalStatement>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<SemanticAnnotation>,
}

pub const DEFAULT_CAC_TEXT: &str = "under all conditions";
pub const DEFAULT_CEX_TEXT: &str = "no constraints";

impl Component {
    pub fn new(code: ComponentCode, text: impl Into<String>) -> Self {
        Component {
            code,
            alt_code: None,
            text: text.into(),
            filler: String::new(),
            implied: false,
            inferred: false,
            negated: false,
            operator: None,
            properties: Vec::new(),
            nested: None,
            annotations: Vec::new(),
        }
    }

    /// Default context synthesized when the coder wrote none.
    pub fn implied_context(code: ComponentCode) -> Self {
        let text = match code {
            ComponentCode::Cex => DEFAULT_CEX_TEXT,
            _ => DEFAULT_CAC_TEXT,
        };
        Component { implied: true, ..Component::new(code, text) }
    }

    pub fn codes(&self) -> impl Iterator<Item = ComponentCode> {
        std::iter::once(self.code).chain(self.alt_code)
    }

    pub fn is_compound(&self) -> bool {
        self.properties.iter().any(|p| p.dependence == Dependence::Independent)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AtomicStatement {
    pub components: Vec<Component>,
    /// Unannotated text after the last component (usually a full stop).
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub trailing: String,
}

impl AtomicStatement {
    pub fn explicit(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| !c.implied)
    }

    pub fn has(&self, code: ComponentCode) -> bool {
        self.components.iter().any(|c| c.code == code)
    }

    pub fn has_explicit(&self, code: ComponentCode) -> bool {
        self.explicit().any(|c| c.code == code)
    }

    /// Adds default context for missing Cac/Cex, removing stale defaults first.
    pub fn fill_implied_context(&mut self) {
        self.components.retain(|c| !c.implied);
        for code in [ComponentCode::Cac, ComponentCode::Cex] {
            if !self.has(code) {
                self.components.push(Component::implied_context(code));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum StatementNode {
    Atomic(AtomicStatement),
    Combination {
        operator: LogicalOperator,
        operands: Vec<InstitutionalStatement>,
    },
    Negation {
        operand: Box<InstitutionalStatement>,
    },
    OrElse {
        monitored: Box<InstitutionalStatement>,
        consequential: Box<InstitutionalStatement>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InstitutionalStatement {
    #[serde(flatten)]
    pub node: StatementNode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub governance: Option<Governance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consequence_type: Option<ConsequenceType>,
}

impl From<StatementNode> for InstitutionalStatement {
    fn from(node: StatementNode) -> Self {
        InstitutionalStatement { node, governance: None, consequence_type: None }
    }
}

impl InstitutionalStatement {
    pub fn atomic(components: Vec<Component>) -> Self {
        let mut a = AtomicStatement { components, trailing: String::new() };
        a.fill_implied_context();
        StatementNode::Atomic(a).into()
    }

    pub fn combination(operator: LogicalOperator, operands: Vec<InstitutionalStatement>) -> Self {
        StatementNode::Combination { operator, operands }.into()
    }

    pub fn negation(operand: InstitutionalStatement) -> Self {
        StatementNode::Negation { operand: Box::new(operand) }.into()
    }

    pub fn or_else(monitored: InstitutionalStatement, consequential: InstitutionalStatement) -> Self {
        StatementNode::OrElse {
            monitored: Box::new(monitored),
            consequential: Box::new(consequential),
        }
        .into()
    }

    pub fn as_atomic(&self) -> Option<&AtomicStatement> {
        match &self.node {
            StatementNode::Atomic(a) => Some(a),
            _ => None,
        }
    }

    pub fn has_meta(&self) -> bool {
        self.governance.is_some() || self.consequence_type.is_some()
    }

    /// Statement-level atomic leaves in document order (does not enter
    /// component-level nesting).
    pub fn leaves(&self) -> Vec<&AtomicStatement> {
        let mut out = Vec::new();
        collect_leaves(self, &mut out);
        out
    }

    /// Every atomic statement, including those nested inside components, in
    /// document order.
    pub fn all_atomics(&self) -> Vec<&AtomicStatement> {
        let mut out = Vec::new();
        self.visit_atomics(&mut |a| out.push(a));
        out
    }

    pub fn visit_atomics<'a>(&'a self, f: &mut dyn FnMut(&'a AtomicStatement)) {
        match &self.node {
            StatementNode::Atomic(a) => {
                f(a);
                for c in &a.components {
                    if let Some(n) = &c.nested {
                        n.visit_atomics(f);
                    }
                    for p in &c.properties {
                        visit_property_nested(p, f);
                    }
                }
            }
            StatementNode::Combination { operands, .. } => {
                for o in operands {
                    o.visit_atomics(f);
                }
            }
            StatementNode::Negation { operand } => operand.visit_atomics(f),
            StatementNode::OrElse { monitored, consequential } => {
                monitored.visit_atomics(f);
                consequential.visit_atomics(f);
            }
        }
    }

    /// Applies `f` to every atomic statement bottom-up, nested ones first.
    pub fn map_atomics(&mut self, f: &mut dyn FnMut(&mut AtomicStatement)) {
        match &mut self.node {
            StatementNode::Atomic(a) => {
                for c in &mut a.components {
                    if let Some(n) = &mut c.nested {
                        n.map_atomics(f);
                    }
                    for p in &mut c.properties {
                        map_property_nested(p, f);
                    }
                }
                f(a);
            }
            StatementNode::Combination { operands, .. } => {
                for o in operands {
                    o.map_atomics(f);
                }
            }
            StatementNode::Negation { operand } => operand.map_atomics(f),
            StatementNode::OrElse { monitored, consequential } => {
                monitored.map_atomics(f);
                consequential.map_atomics(f);
            }
        }
    }
}

fn collect_leaves<'a>(s: &'a InstitutionalStatement, out: &mut Vec<&'a AtomicStatement>) {
    match &s.node {
        StatementNode::Atomic(a) => out.push(a),
        StatementNode::Combination { operands, .. } => {
            for o in operands {
                collect_leaves(o, out);
            }
        }
        StatementNode::Negation { operand } => collect_leaves(operand, out),
        StatementNode::OrElse { monitored, consequential } => {
            collect_leaves(monitored, out);
            collect_leaves(consequential, out);
        }
    }
}

fn visit_property_nested<'a>(p: &'a PropertyNode, f: &mut dyn FnMut(&'a AtomicStatement)) {
    if let Some(n) = &p.nested {
        n.visit_atomics(f);
    }
    for c in &p.children {
        visit_property_nested(c, f);
    }
}

fn map_property_nested(p: &mut PropertyNode, f: &mut dyn FnMut(&mut AtomicStatement)) {
    if let Some(n) = &mut p.nested {
        n.map_atomics(f);
    }
    for c in &mut p.children {
        map_property_nested(c, f);
    }
}

/// Calls `f` for every property in the tree rooted at `props`, depth first.
pub fn walk_properties<'a>(props: &'a [PropertyNode], f: &mut dyn FnMut(&'a PropertyNode)) {
    for p in props {
        f(p);
        walk_properties(&p.children, f);
    }
}

pub fn walk_properties_mut(props: &mut [PropertyNode], f: &mut dyn FnMut(&mut PropertyNode)) {
    for p in props {
        f(p);
        walk_properties_mut(&mut p.children, f);
    }
}
