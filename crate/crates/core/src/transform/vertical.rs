use serde::{Deserialize, Serialize};

use crate::model::{InstitutionalStatement, StatementNode};

/// One `OR ELSE` link. `depth` is 1 for a top-level link and grows by one
/// for each link whose consequential side contains this one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitoredPair {
    pub monitored: InstitutionalStatement,
    pub consequential: InstitutionalStatement,
    pub depth: usize,
}

/// Every statement-level `OR ELSE` link in pre-order.
pub fn flatten_vertical(statement: &InstitutionalStatement) -> Vec<MonitoredPair> {
    let mut out = Vec::new();
    walk(statement, 0, &mut out);
    out
}

fn walk(s: &InstitutionalStatement, level: usize, out: &mut Vec<MonitoredPair>) {
    match &s.node {
        StatementNode::Atomic(_) => {}
        StatementNode::Combination { operands, .. } => operands.iter().for_each(|o| walk(o, level, out)),
        StatementNode::Negation { operand } => walk(operand, level, out),
        StatementNode::OrElse { monitored, consequential } => {
            out.push(MonitoredPair {
                monitored: (**monitored).clone(),
                consequential: (**consequential).clone(),
                depth: level + 1,
            });
            walk(monitored, level, out);
            walk(consequential, level + 1, out);
        }
    }
}
