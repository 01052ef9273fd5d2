use serde::{Deserialize, Serialize};

use crate::model::{AtomicStatement, InstitutionalStatement, StatementNode};

use super::TransformError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NegationMode {
    /// Negated Deontic/Modal becomes a statement-level `[NOT]`.
    Hoist,
    /// Statement-level `[NOT]` over an atomic statement moves into its
    /// Deontic/Modal text ("must" -> "must not").
    Push,
}

/// Brings statement negation into one canonical form. Double negations are
/// removed in both modes; nested statements are normalized too.
pub fn normalize_negation(statement: &InstitutionalStatement, mode: NegationMode) -> Result<InstitutionalStatement, TransformError> {
    let meta = |mut s: InstitutionalStatement| {
        s.governance = s.governance.or(statement.governance);
        s.consequence_type = s.consequence_type.or(statement.consequence_type);
        s
    };
    let node = match &statement.node {
        StatementNode::Atomic(a) => {
            let mut a = a.clone();
            normalize_nested(&mut a, mode)?;
            let leaf = InstitutionalStatement { node: StatementNode::Atomic(a.clone()), ..statement.clone() };
            if mode == NegationMode::Hoist && modal_negated(&a) {
                set_modal_negation(&mut a, false);
                let inner: InstitutionalStatement = StatementNode::Atomic(a).into();
                return Ok(InstitutionalStatement { governance: leaf.governance, consequence_type: leaf.consequence_type, ..InstitutionalStatement::negation(inner) });
            }
            if mode == NegationMode::Push {
                canonical_text(&mut a);
                return Ok(InstitutionalStatement { node: StatementNode::Atomic(a), ..statement.clone() });
            }
            return Ok(leaf);
        }
        StatementNode::Combination { operator, operands } => StatementNode::Combination {
            operator: *operator,
            operands: operands.iter().map(|o| normalize_negation(o, mode)).collect::<Result<_, _>>()?,
        },
        StatementNode::OrElse { monitored, consequential } => StatementNode::OrElse {
            monitored: Box::new(normalize_negation(monitored, mode)?),
            consequential: Box::new(normalize_negation(consequential, mode)?),
        },
        StatementNode::Negation { operand } => {
            let inner = normalize_negation(operand, mode)?;
            return Ok(meta(negate(inner, mode)?));
        }
    };
    Ok(InstitutionalStatement { node, ..statement.clone() })
}

/// Negates an already normalized statement.
fn negate(inner: InstitutionalStatement, mode: NegationMode) -> Result<InstitutionalStatement, TransformError> {
    if let StatementNode::Negation { operand } = inner.node {
        let mut s = *operand;
        s.governance = s.governance.or(inner.governance);
        s.consequence_type = s.consequence_type.or(inner.consequence_type);
        return Ok(s);
    }
    match (mode, inner.node) {
        (NegationMode::Push, StatementNode::Atomic(mut a)) => {
            if !a.explicit().any(|c| c.code.is_modal()) {
                return Err(TransformError::NoModalToNegate);
            }
            let now = modal_negated(&a);
            set_modal_negation(&mut a, !now);
            Ok(InstitutionalStatement { node: StatementNode::Atomic(a), ..inner })
        }
        (_, node) => Ok(InstitutionalStatement::negation(InstitutionalStatement { node, ..inner })),
    }
}

fn normalize_nested(a: &mut AtomicStatement, mode: NegationMode) -> Result<(), TransformError> {
    for c in &mut a.components {
        if let Some(n) = &c.nested {
            c.nested = Some(Box::new(normalize_negation(n, mode)?));
        }
        normalize_properties(&mut c.properties, mode)?;
    }
    Ok(())
}

fn normalize_properties(props: &mut [crate::model::PropertyNode], mode: NegationMode) -> Result<(), TransformError> {
    for p in props {
        if let Some(n) = &p.nested {
            p.nested = Some(Box::new(normalize_negation(n, mode)?));
        }
        normalize_properties(&mut p.children, mode)?;
    }
    Ok(())
}

/// True when every Deontic/Modal of the statement is negated, by flag or by a
/// trailing "not".
fn modal_negated(a: &AtomicStatement) -> bool {
    let mut modals = a.explicit().filter(|c| c.code.is_modal()).peekable();
    modals.peek().is_some() && modals.all(|c| c.negated || ends_with_not(&c.text))
}

fn ends_with_not(text: &str) -> bool {
    strip_not(text).is_some()
}

fn strip_not(text: &str) -> Option<&str> {
    let t = text.trim_end();
    let cut = t.len().checked_sub(3)?;
    if !t.is_char_boundary(cut) || !t[cut..].eq_ignore_ascii_case("not") {
        return None;
    }
    let head = t[..cut].trim_end();
    (!head.is_empty() && t[..cut].ends_with(char::is_whitespace)).then_some(head)
}

fn set_modal_negation(a: &mut AtomicStatement, negated: bool) {
    for c in a.components.iter_mut().filter(|c| c.code.is_modal() && !c.implied) {
        let base = strip_not(&c.text).map(str::to_string).unwrap_or_else(|| c.text.clone());
        c.text = if negated { format!("{base} not") } else { base };
        c.negated = false;
    }
}

/// Push mode keeps leaf negation as text only.
fn canonical_text(a: &mut AtomicStatement) {
    if a.explicit().any(|c| c.code.is_modal() && c.negated) {
        for c in a.components.iter_mut().filter(|c| c.code.is_modal() && c.negated) {
            c.negated = false;
            if !ends_with_not(&c.text) {
                c.text = format!("{} not", c.text);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_expression;

    fn parse(s: &str) -> InstitutionalStatement {
        parse_expression(s).into_result().unwrap()
    }

    #[test]
    fn both_forms_meet() {
        let leaf = parse("farmers (A) must not (D) sell (I) produce (Bdir)");
        let wrapped = parse("[NOT] ( farmers (A) must (D) sell (I) produce (Bdir) )");
        for mode in [NegationMode::Hoist, NegationMode::Push] {
            let a = normalize_negation(&leaf, mode).unwrap();
            let b = normalize_negation(&wrapped, mode).unwrap();
            assert_eq!(a, b, "{mode:?}");
            assert_eq!(normalize_negation(&a, mode).unwrap(), a);
        }
        assert!(matches!(normalize_negation(&leaf, NegationMode::Hoist).unwrap().node, StatementNode::Negation { .. }));
    }

    #[test]
    fn flag_and_double_negation() {
        let flagged = parse("farmers (A) must (D,NOT) sell (I)");
        let plain = parse("[NOT] ( farmers (A) must (D) sell (I) )");
        assert_eq!(normalize_negation(&flagged, NegationMode::Hoist).unwrap(), plain);
        let double = parse("[NOT] ( farmers (A) must not (D) sell (I) )");
        let pos = parse("farmers (A) must (D) sell (I)");
        assert_eq!(normalize_negation(&double, NegationMode::Hoist).unwrap(), pos);
        assert_eq!(normalize_negation(&double, NegationMode::Push).unwrap(), pos);
    }

    #[test]
    fn push_needs_a_modal() {
        let s = parse("[NOT] ( farmers (A) sell (I) )");
        assert_eq!(normalize_negation(&s, NegationMode::Push), Err(TransformError::NoModalToNegate));
        assert_eq!(normalize_negation(&s, NegationMode::Hoist).unwrap(), s);
        assert!(strip_not("cannot").is_none());
    }
}
