//! Structural transforms over statement trees.

mod decompose;
mod negation;
mod project;
mod vertical;

use thiserror::Error;

use crate::diagnostic::{Diagnostic, DiagnosticCode};
use crate::model::ComponentCode;

pub use decompose::{alternatives, decompose_combinations};
pub use negation::{normalize_negation, NegationMode};
pub use project::project;
pub use vertical::{flatten_vertical, MonitoredPair};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("{code} alternatives mix [{first}] and [{second}]; group them in separate statements first")]
    MixedOperatorsWithoutGrouping { code: ComponentCode, first: String, second: String },
    #[error("negation cannot be pushed into a statement without Deontic or Modal")]
    NoModalToNegate,
}

impl TransformError {
    pub fn to_diagnostic(&self) -> Diagnostic {
        let code = match self {
            TransformError::MixedOperatorsWithoutGrouping { .. } => DiagnosticCode::MixedOperatorsWithoutGrouping,
            TransformError::NoModalToNegate => DiagnosticCode::NoModalToNegate,
        };
        Diagnostic::error(code, self.to_string())
    }
}
