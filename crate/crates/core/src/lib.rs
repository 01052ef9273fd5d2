//! Toolkit for Institutional Grammar 2.0 shorthand.
//!
//! Parses coded institutional statements into a typed tree, checks them
//! against a semantic taxonomy and an IG profile, and offers the structural
//! transforms used for analysis (decomposition, level projection, vertical
//! flattening, negation normalization).

pub mod classify;
pub mod corpus;
pub mod diagnostic;
pub mod model;
pub mod notation;
pub mod profile;
pub mod taxonomy;
pub mod transform;
pub mod validate;

pub use classify::{classify, is_atomic, StatementKind};
pub use diagnostic::{Diagnostic, DiagnosticCode, Severity, Span};
pub use model::*;
pub use notation::{parse_document, parse_expression, parse_statement, serialize};
pub use profile::{Feature, IgLevel, Profile, ProfileExpression};
pub use taxonomy::TaxonomyRegistry;
