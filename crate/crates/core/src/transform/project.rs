use crate::model::{
    walk_properties_mut, AnnotationPrefix, AtomicStatement, Component, InstitutionalStatement, StatementNode,
};
use crate::notation::{plain_component, split_lead};
use crate::profile::IgLevel;

/// Projects a statement down to a coding level. Statement-level structure is
/// kept at every level; projecting upward is the identity.
///
/// Extended drops semantic annotations other than context taxonomy labels,
/// and policy references. Core additionally folds properties, compound
/// groups and component-level nested statements into the component text and
/// drops context labels.
pub fn project(statement: &InstitutionalStatement, target: IgLevel) -> InstitutionalStatement {
    let mut s = statement.clone();
    if target == IgLevel::Logico {
        return s;
    }
    s.map_atomics(&mut |a| {
        for c in &mut a.components {
            c.annotations.retain(|x| x.prefix == AnnotationPrefix::Ctx);
            walk_properties_mut(&mut c.properties, &mut |p| p.annotations.retain(|x| x.prefix == AnnotationPrefix::Ctx));
        }
    });
    if target == IgLevel::Core {
        to_core(&mut s);
    }
    s
}

fn to_core(s: &mut InstitutionalStatement) {
    match &mut s.node {
        StatementNode::Atomic(a) => collapse(a),
        StatementNode::Combination { operands, .. } => operands.iter_mut().for_each(to_core),
        StatementNode::Negation { operand } => to_core(operand),
        StatementNode::OrElse { monitored, consequential } => {
            to_core(monitored);
            to_core(consequential);
        }
    }
}

fn collapse(a: &mut AtomicStatement) {
    for c in &mut a.components {
        c.annotations.clear();
        if c.properties.is_empty() && c.nested.is_none() {
            continue;
        }
        let merged = plain_component(&Component { annotations: Vec::new(), ..c.clone() });
        let (lead, text) = split_lead(&merged);
        if !lead.is_empty() {
            c.filler = if c.filler.is_empty() { lead } else { format!("{} {lead}", c.filler) };
        }
        c.text = text;
        c.properties.clear();
        c.nested = None;
    }
}
