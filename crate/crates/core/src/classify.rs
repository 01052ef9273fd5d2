use serde::{Deserialize, Serialize};

use crate::model::{
    walk_properties, AtomicStatement, Family, InstitutionalStatement, StatementNode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StatementKind {
    Regulative,
    Constitutive,
    Hybrid,
    Polymorphic,
}

impl std::fmt::Display for StatementKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StatementKind::Regulative => "regulative",
            StatementKind::Constitutive => "constitutive",
            StatementKind::Hybrid => "hybrid",
            StatementKind::Polymorphic => "polymorphic",
        })
    }
}

/// Kind of a whole statement tree, nested statements included.
///
/// Any dual-coded component makes the statement polymorphic. Otherwise both
/// families occurring anywhere make it hybrid. A statement with nothing but
/// context components counts as regulative.
pub fn classify(statement: &InstitutionalStatement) -> StatementKind {
    let mut reg = false;
    let mut con = false;
    let mut alt = false;
    statement.visit_atomics(&mut |a| {
        let (r, c, x) = families(a);
        reg |= r;
        con |= c;
        alt |= x;
    });
    kind_of(reg, con, alt)
}

/// Kind of a single atomic statement, ignoring anything nested in it.
pub fn classify_atomic(a: &AtomicStatement) -> StatementKind {
    let (r, c, x) = families(a);
    kind_of(r, c, x)
}

fn kind_of(reg: bool, con: bool, alt: bool) -> StatementKind {
    match (alt, reg, con) {
        (true, _, _) => StatementKind::Polymorphic,
        (false, true, true) => StatementKind::Hybrid,
        (false, false, true) => StatementKind::Constitutive,
        _ => StatementKind::Regulative,
    }
}

fn families(a: &AtomicStatement) -> (bool, bool, bool) {
    let mut reg = false;
    let mut con = false;
    let mut alt = false;
    for c in a.explicit() {
        alt |= c.alt_code.is_some();
        for code in c.codes() {
            match code.family() {
                Family::Regulative => reg = true,
                Family::Constitutive => con = true,
                Family::Shared => {}
            }
        }
    }
    (reg, con, alt)
}

/// True for a single atomic statement: no vertical link, no operator-joined
/// components with the same code, and no nested statements.
pub fn is_atomic(statement: &InstitutionalStatement) -> bool {
    let StatementNode::Atomic(a) = &statement.node else {
        return false;
    };
    let mut seen = Vec::new();
    for c in &a.components {
        if seen.contains(&c.code) || c.operator.is_some() || c.nested.is_some() {
            return false;
        }
        seen.push(c.code);
        let mut nested = false;
        walk_properties(&c.properties, &mut |p| nested |= p.nested.is_some());
        if nested {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Component, ComponentCode::*, InstitutionalStatement as S};

    #[test]
    fn families_decide_kind() {
        let reg = S::atomic(vec![Component::new(A, "farmers"), Component::new(I, "comply")]);
        assert_eq!(classify(&reg), StatementKind::Regulative);
        let con = S::atomic(vec![Component::new(E, "the Board"), Component::new(F, "is")]);
        assert_eq!(classify(&con), StatementKind::Constitutive);
        let mut dual = Component::new(D, "shall");
        dual.alt_code = Some(M);
        let poly = S::atomic(vec![Component::new(E, "functions"), dual]);
        assert_eq!(classify(&poly), StatementKind::Polymorphic);
        let ctx_only = S::atomic(vec![Component::new(Cac, "always")]);
        assert_eq!(classify(&ctx_only), StatementKind::Regulative);
    }

    #[test]
    fn nesting_of_other_family_is_hybrid() {
        let inner = S::atomic(vec![Component::new(E, "x"), Component::new(F, "is")]);
        let mut obj = Component::new(Bdir, "");
        obj.nested = Some(Box::new(inner));
        let host = S::atomic(vec![Component::new(A, "farmers"), Component::new(I, "ensure"), obj]);
        assert_eq!(classify(&host), StatementKind::Hybrid);
        assert!(!is_atomic(&host));
    }

    #[test]
    fn duplicate_codes_are_not_atomic() {
        let mut second = Component::new(I, "accommodate");
        second.operator = Some(crate::model::LogicalOperator::And);
        let s = S::atomic(vec![Component::new(A, "farmers"), Component::new(I, "commit to"), second]);
        assert!(!is_atomic(&s));
        let single = S::atomic(vec![Component::new(A, "farmers"), Component::new(I, "comply")]);
        assert!(is_atomic(&single));
    }
}
