use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{walk_properties, AtomicStatement, InstitutionalStatement, StatementNode};
use crate::transform::flatten_vertical;

/// Component and annotation counts over a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FrequencyTable {
    pub statements: usize,
    /// Coded components by code.
    pub explicit: BTreeMap<String, usize>,
    /// Default context components the coder left out.
    pub implied: BTreeMap<String, usize>,
    /// Semantic annotations by `prefix:label` (`polref` counted as one key).
    pub labels: BTreeMap<String, usize>,
    /// `OR ELSE` links by depth.
    pub vertical_depth: BTreeMap<usize, usize>,
    /// Atomic statements by component-nesting depth (0 = statement level).
    pub nesting_depth: BTreeMap<usize, usize>,
}

pub fn stats<'a>(statements: impl IntoIterator<Item = &'a InstitutionalStatement>) -> FrequencyTable {
    let mut t = FrequencyTable::default();
    for s in statements {
        t.add(s);
    }
    t
}

impl FrequencyTable {
    pub fn add(&mut self, s: &InstitutionalStatement) {
        self.statements += 1;
        for pair in flatten_vertical(s) {
            *self.vertical_depth.entry(pair.depth).or_default() += 1;
        }
        self.add_node(s, 0);
    }

    fn add_node(&mut self, s: &InstitutionalStatement, depth: usize) {
        match &s.node {
            StatementNode::Atomic(a) => self.add_atomic(a, depth),
            StatementNode::Combination { operands, .. } => operands.iter().for_each(|o| self.add_node(o, depth)),
            StatementNode::Negation { operand } => self.add_node(operand, depth),
            StatementNode::OrElse { monitored, consequential } => {
                self.add_node(monitored, depth);
                self.add_node(consequential, depth);
            }
        }
    }

    fn add_atomic(&mut self, a: &AtomicStatement, depth: usize) {
        *self.nesting_depth.entry(depth).or_default() += 1;
        for c in &a.components {
            let map = if c.implied { &mut self.implied } else { &mut self.explicit };
            *map.entry(c.code.to_string()).or_default() += 1;
            let mut nested = Vec::new();
            for ann in &c.annotations {
                *self.labels.entry(label_key(ann)).or_default() += 1;
            }
            if let Some(n) = &c.nested {
                nested.push(&**n);
            }
            walk_properties(&c.properties, &mut |p| {
                for ann in &p.annotations {
                    *self.labels.entry(label_key(ann)).or_default() += 1;
                }
                if let Some(n) = &p.nested {
                    nested.push(&**n);
                }
            });
            for n in nested {
                self.add_node(n, depth + 1);
            }
        }
    }

    pub fn merge(&mut self, other: &FrequencyTable) {
        self.statements += other.statements;
        for (dst, src) in [(&mut self.explicit, &other.explicit), (&mut self.implied, &other.implied), (&mut self.labels, &other.labels)] {
            for (k, v) in src {
                *dst.entry(k.clone()).or_default() += v;
            }
        }
        for (dst, src) in [(&mut self.vertical_depth, &other.vertical_depth), (&mut self.nesting_depth, &other.nesting_depth)] {
            for (k, v) in src {
                *dst.entry(*k).or_default() += v;
            }
        }
    }

    pub fn explicit_total(&self) -> usize {
        self.explicit.values().sum()
    }

    pub fn count(&self, code: &str) -> usize {
        self.explicit.get(code).copied().unwrap_or(0)
    }
}

fn label_key(ann: &crate::model::SemanticAnnotation) -> String {
    match ann.prefix {
        crate::model::AnnotationPrefix::Polref => "polref".to_string(),
        _ => format!("{}:{}", ann.prefix, ann.label),
    }
}

impl fmt::Display for FrequencyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "statements: {}", self.statements)?;
        writeln!(f, "components:")?;
        for (k, v) in &self.explicit {
            let implied = self.implied.get(k).copied().unwrap_or(0);
            if implied > 0 {
                writeln!(f, "  {k:<5} {v} (+{implied} implied)")?;
            } else {
                writeln!(f, "  {k:<5} {v}")?;
            }
        }
        for (k, v) in self.implied.iter().filter(|(k, _)| !self.explicit.contains_key(*k)) {
            writeln!(f, "  {k:<5} 0 (+{v} implied)")?;
        }
        if !self.labels.is_empty() {
            writeln!(f, "labels:")?;
            for (k, v) in &self.labels {
                writeln!(f, "  {k} {v}")?;
            }
        }
        if !self.vertical_depth.is_empty() {
            writeln!(f, "or-else depth:")?;
            for (k, v) in &self.vertical_depth {
                writeln!(f, "  {k}: {v}")?;
            }
        }
        writeln!(f, "nesting depth:")?;
        for (k, v) in &self.nesting_depth {
            writeln!(f, "  {k}: {v}")?;
        }
        Ok(())
    }
}
