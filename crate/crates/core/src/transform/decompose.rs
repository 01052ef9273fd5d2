use crate::model::{AtomicStatement, ComponentCode, InstitutionalStatement, LogicalOperator, StatementNode};

use super::TransformError;

/// Expands component-level combinations into statement-level combinations
/// of atomic statements.
///
/// Codes are expanded in order of first appearance, the first being the
/// outermost combination; alternatives keep source order. Component-level
/// nesting, compound groups and property alternatives stay inside the leaves,
/// and `OR ELSE` links are kept where they are.
pub fn decompose_combinations(statement: &InstitutionalStatement) -> Result<InstitutionalStatement, TransformError> {
    let mut out = match &statement.node {
        StatementNode::Atomic(a) => expand(a)?,
        StatementNode::Combination { operator, operands } => InstitutionalStatement::combination(
            *operator,
            operands.iter().map(decompose_combinations).collect::<Result<_, _>>()?,
        ),
        StatementNode::Negation { operand } => InstitutionalStatement::negation(decompose_combinations(operand)?),
        StatementNode::OrElse { monitored, consequential } => InstitutionalStatement::or_else(
            decompose_combinations(monitored)?,
            decompose_combinations(consequential)?,
        ),
    };
    out.governance = statement.governance;
    out.consequence_type = statement.consequence_type;
    Ok(out)
}

/// Explicit components grouped by code: `(code, operator, indices)`.
pub fn alternatives(a: &AtomicStatement) -> Result<Vec<(ComponentCode, LogicalOperator, Vec<usize>)>, TransformError> {
    let mut dims: Vec<(ComponentCode, Option<LogicalOperator>, Vec<usize>)> = Vec::new();
    for (i, c) in a.components.iter().enumerate() {
        if c.implied {
            continue;
        }
        match dims.iter_mut().find(|d| d.0 == c.code) {
            None => dims.push((c.code, None, vec![i])),
            Some(d) => {
                let op = c.operator.unwrap_or(LogicalOperator::And);
                match d.1 {
                    Some(prev) if prev != op => {
                        return Err(TransformError::MixedOperatorsWithoutGrouping {
                            code: c.code,
                            first: prev.to_string(),
                            second: op.to_string(),
                        })
                    }
                    _ => d.1 = Some(op),
                }
                d.2.push(i);
            }
        }
    }
    Ok(dims.into_iter().map(|(c, op, idx)| (c, op.unwrap_or(LogicalOperator::And), idx)).collect())
}

fn expand(a: &AtomicStatement) -> Result<InstitutionalStatement, TransformError> {
    let dims = alternatives(a)?;
    if dims.iter().all(|d| d.2.len() == 1) {
        return Ok(StatementNode::Atomic(a.clone()).into());
    }
    let mut choice = Vec::with_capacity(dims.len());
    Ok(build(a, &dims, &mut choice))
}

fn build(
    a: &AtomicStatement,
    dims: &[(ComponentCode, LogicalOperator, Vec<usize>)],
    choice: &mut Vec<usize>,
) -> InstitutionalStatement {
    let d = choice.len();
    if d == dims.len() {
        return leaf(a, dims, choice);
    }
    let (_, op, idx) = &dims[d];
    if idx.len() == 1 {
        choice.push(idx[0]);
        let s = build(a, dims, choice);
        choice.pop();
        return s;
    }
    let mut operands = Vec::new();
    for &i in idx {
        choice.push(i);
        let sub = build(a, dims, choice);
        choice.pop();
        let flatten = matches!(&sub.node, StatementNode::Combination { operator, .. } if operator == op) && !sub.has_meta();
        match sub.node {
            StatementNode::Combination { operands: inner, .. } if flatten => operands.extend(inner),
            _ => operands.push(sub),
        }
    }
    InstitutionalStatement::combination(*op, operands)
}

fn leaf(a: &AtomicStatement, dims: &[(ComponentCode, LogicalOperator, Vec<usize>)], choice: &[usize]) -> InstitutionalStatement {
    let mut components = Vec::new();
    for (i, c) in a.components.iter().enumerate() {
        if c.implied {
            continue;
        }
        let (d, _) = dims.iter().enumerate().find(|(_, d)| d.0 == c.code).expect("every explicit code has a dimension");
        if choice[d] != i {
            continue;
        }
        let mut c = c.clone();
        c.operator = None;
        c.filler = a.components[dims[d].2[0]].filler.clone();
        components.push(c);
    }
    let mut atomic = AtomicStatement { components, trailing: a.trailing.clone() };
    atomic.fill_implied_context();
    StatementNode::Atomic(atomic).into()
}
