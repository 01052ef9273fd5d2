//! Canonical shorthand output and plain-text rendering.

use crate::model::{
    AtomicStatement, Component, ComponentCode, Dependence, InstitutionalStatement,
    LogicalOperator, Placement, PropertyNode, SemanticAnnotation, StatementNode,
};

use super::parser::is_punct;

/// Canonical shorthand. Statement operands are always parenthesized so the
/// output re-parses without relying on completeness heuristics.
pub fn serialize(statement: &InstitutionalStatement) -> String {
    let mut out = Out::default();
    write_statement(&mut out, statement);
    out.buf
}

/// The statement as running prose: codes, brackets and markup removed,
/// operators spelled as connectives.
pub fn plain_text(statement: &InstitutionalStatement) -> String {
    let mut out = Out::default();
    plain_statement(&mut out, statement);
    out.buf
}

pub fn plain_atomic(a: &AtomicStatement) -> String {
    let mut out = Out::default();
    plain_atomic_into(&mut out, a);
    out.buf
}

/// Prose for one component with its properties, group and nesting.
pub fn plain_component(c: &Component) -> String {
    let mut out = Out::default();
    plain_component_into(&mut out, c);
    out.buf
}

#[derive(Default)]
struct Out {
    buf: String,
}

impl Out {
    /// Appends a space-separated word; punctuation-only words attach to the
    /// previous word.
    fn word(&mut self, w: &str) {
        if w.is_empty() {
            return;
        }
        let attach = w.chars().all(is_punct);
        if !self.buf.is_empty() && !attach {
            self.buf.push(' ');
        }
        self.buf.push_str(w);
    }
}

fn write_statement(out: &mut Out, s: &InstitutionalStatement) {
    if let Some(g) = s.governance {
        out.word(&format!("@governance:{}", g.as_str()));
    }
    if let Some(c) = s.consequence_type {
        out.word(&format!("@consequence:{}", c.as_str()));
    }
    let wrap = s.has_meta() && matches!(s.node, StatementNode::Combination { .. } | StatementNode::OrElse { .. });
    if wrap {
        out.word("(");
    }
    match &s.node {
        StatementNode::Atomic(a) => write_atomic(out, a),
        StatementNode::Combination { operator, operands } => {
            for (i, o) in operands.iter().enumerate() {
                if i > 0 {
                    out.word(&format!("[{operator}]"));
                }
                paren(out, o);
            }
        }
        StatementNode::Negation { operand } => {
            out.word("[NOT]");
            paren(out, operand);
        }
        StatementNode::OrElse { monitored, consequential } => {
            match monitored.node {
                StatementNode::Atomic(_) => write_statement(out, monitored),
                _ => paren(out, monitored),
            }
            out.word("OR ELSE");
            match consequential.node {
                StatementNode::Atomic(_) | StatementNode::OrElse { .. } => write_statement(out, consequential),
                _ => paren(out, consequential),
            }
        }
    }
    if wrap {
        out.word(")");
    }
}

fn paren(out: &mut Out, s: &InstitutionalStatement) {
    out.word("(");
    write_statement(out, s);
    out.word(")");
}

fn write_atomic(out: &mut Out, a: &AtomicStatement) {
    for c in a.explicit() {
        write_component(out, c);
    }
    out.word(&a.trailing);
}

fn write_component(out: &mut Out, c: &Component) {
    out.word(&c.filler);
    if let Some(op) = c.operator {
        out.word(&format!("[{op}]"));
    }
    for p in c.properties.iter().filter(|p| is_shared(p, Placement::Before)) {
        write_property(out, p, c.code, None);
    }
    write_body(out, &c.text, c.inferred, c.nested.as_deref());
    if c.is_compound() {
        out.word("(");
        for m in c.properties.iter().filter(|p| p.dependence == Dependence::Independent) {
            write_member(out, m, c.code);
        }
        out.word(")");
    }
    out.word(&annotation(c.code, c.alt_code, None, None, c.negated, &c.annotations));
    for p in c.properties.iter().filter(|p| is_shared(p, Placement::After)) {
        write_property(out, p, c.code, None);
    }
}

fn is_shared(p: &PropertyNode, side: Placement) -> bool {
    p.dependence == Dependence::Dependent && p.placement == side
}

fn write_body(out: &mut Out, text: &str, inferred: bool, nested: Option<&InstitutionalStatement>) {
    if inferred {
        out.word(&format!("[{text}]"));
    } else {
        out.word(text);
    }
    if let Some(n) = nested {
        out.word("{");
        write_statement(out, n);
        out.word("}");
    }
}

fn write_member(out: &mut Out, m: &PropertyNode, code: ComponentCode) {
    if m.is_plain_member() {
        out.word(&m.filler);
        if let Some(op) = m.sibling_operator {
            out.word(&format!("[{op}]"));
        }
        out.word(&m.text);
        return;
    }
    write_node(out, m, code, m.group_id, None);
}

fn write_property(out: &mut Out, p: &PropertyNode, code: ComponentCode, group: Option<char>) {
    write_node(out, p, code, group, Some(&p.index_path));
}

fn write_node(out: &mut Out, p: &PropertyNode, code: ComponentCode, group: Option<char>, chain: Option<&[u32]>) {
    out.word(&p.filler);
    if let Some(op) = p.sibling_operator {
        out.word(&format!("[{op}]"));
    }
    for c in p.children.iter().filter(|c| c.placement == Placement::Before) {
        write_property(out, c, code, group);
    }
    write_body(out, &p.text, p.inferred, p.nested.as_deref());
    out.word(&annotation(code, None, group, chain, false, &p.annotations));
    for c in p.children.iter().filter(|c| c.placement == Placement::After) {
        write_property(out, c, code, group);
    }
}

pub(crate) fn annotation(
    code: ComponentCode,
    alt: Option<ComponentCode>,
    group: Option<char>,
    chain: Option<&[u32]>,
    negated: bool,
    annots: &[SemanticAnnotation],
) -> String {
    let mut s = format!("({code}");
    if let Some(g) = group {
        s.push_str(&format!("({g})"));
    }
    if let Some(a) = alt {
        s.push_str(&format!("/{a}"));
    }
    match chain {
        Some([]) => s.push_str(",prop"),
        Some(path) => {
            for i in path {
                s.push_str(&format!(",prop{i}"));
            }
        }
        None => {}
    }
    if negated {
        s.push_str(",NOT");
    }
    for a in annots {
        s.push_str(&format!(";{a}"));
    }
    s.push(')');
    s
}

// -------------------------------------------------------------------------
// plain text

fn plain_statement(out: &mut Out, s: &InstitutionalStatement) {
    match &s.node {
        StatementNode::Atomic(a) => plain_atomic_into(out, a),
        StatementNode::Combination { operator, operands } => {
            for (i, o) in operands.iter().enumerate() {
                if i > 0 {
                    out.word(operator.as_prose());
                }
                plain_statement(out, o);
            }
        }
        StatementNode::Negation { operand } => {
            out.word("not");
            plain_statement(out, operand);
        }
        StatementNode::OrElse { monitored, consequential } => {
            plain_statement(out, monitored);
            out.word("or else");
            plain_statement(out, consequential);
        }
    }
}

fn plain_atomic_into(out: &mut Out, a: &AtomicStatement) {
    for c in a.explicit() {
        out.word(&c.filler);
        if c.operator.is_some() && c.filler.is_empty() {
            out.word(c.operator.map_or("", LogicalOperator::as_prose));
        }
        plain_component_into(out, c);
    }
    out.word(&a.trailing);
}

fn plain_component_into(out: &mut Out, c: &Component) {
    for p in c.properties.iter().filter(|p| is_shared(p, Placement::Before)) {
        plain_node(out, p);
    }
    out.word(&c.text);
    if let Some(n) = &c.nested {
        plain_statement(out, n);
    }
    for (i, m) in c.properties.iter().filter(|p| p.dependence == Dependence::Independent).enumerate() {
        if i > 0 {
            out.word(m.sibling_operator.unwrap_or(LogicalOperator::And).as_prose());
        }
        plain_node(out, m);
    }
    for p in c.properties.iter().filter(|p| is_shared(p, Placement::After)) {
        plain_node(out, p);
    }
}

fn plain_node(out: &mut Out, p: &PropertyNode) {
    out.word(&p.filler);
    if p.dependence == Dependence::Dependent {
        if let Some(op) = p.sibling_operator {
            out.word(op.as_prose());
        }
    }
    for c in p.children.iter().filter(|c| c.placement == Placement::Before) {
        plain_node(out, c);
    }
    out.word(&p.text);
    if let Some(n) = &p.nested {
        plain_statement(out, n);
    }
    for c in p.children.iter().filter(|c| c.placement == Placement::After) {
        plain_node(out, c);
    }
}
