use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// Byte range in the raw record text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub offset: usize,
    pub length: usize,
}

impl Span {
    pub fn new(offset: usize, length: usize) -> Self {
        Span { offset, length }
    }

    pub fn between(start: usize, end: usize) -> Self {
        Span { offset: start, length: end.saturating_sub(start) }
    }

    pub fn end(&self) -> usize {
        self.offset + self.length
    }
}

macro_rules! codes {
    ($($name:ident),* $(,)?) => {
        /// Stable diagnostic identifiers.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        pub enum DiagnosticCode { $($name),* }

        impl DiagnosticCode {
            pub fn as_str(self) -> &'static str {
                match self { $(DiagnosticCode::$name => stringify!($name)),* }
            }
        }
    };
}

codes! {
    // parser
    UnbalancedDelimiter,
    UnknownCode,
    EmptyAnnotation,
    MixedOperatorsWithoutParens,
    DanglingOrElse,
    DanglingOperator,
    InvalidPropertyChain,
    OrphanProperty,
    MisplacedGroupId,
    GroupCodeMismatch,
    UnexpectedToken,
    EmptyStatement,
    DuplicateRecordId,
    // validator
    MissingAttributes,
    MissingAim,
    MissingConstitutedEntity,
    MissingConstitutiveFunction,
    ImpliedContext,
    UnknownTaxonomyLabel,
    NonLeafLabel,
    MisplacedAnnotation,
    MissingReferenceValue,
    UnexpectedAnnotationValue,
    FeatureNotInProfile,
    FeatureRemovedByProfile,
    GovernanceMismatch,
    // transforms
    MixedOperatorsWithoutGrouping,
    NoModalToNegate,
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statement_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<Span>,
}

impl Diagnostic {
    pub fn new(severity: Severity, code: DiagnosticCode, message: impl Into<String>) -> Self {
        Diagnostic { severity, code, message: message.into(), statement_id: None, span: None }
    }

    pub fn error(code: DiagnosticCode, message: impl Into<String>) -> Self {
        Diagnostic::new(Severity::Error, code, message)
    }

    pub fn warning(code: DiagnosticCode, message: impl Into<String>) -> Self {
        Diagnostic::new(Severity::Warning, code, message)
    }

    pub fn info(code: DiagnosticCode, message: impl Into<String>) -> Self {
        Diagnostic::new(Severity::Info, code, message)
    }

    pub fn at(mut self, span: Span) -> Self {
        self.span = Some(span);
        self
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.statement_id = Some(id.into());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(id) = &self.statement_id {
            write!(f, "{id}: ")?;
        }
        write!(f, "{}[{}]: {}", self.severity, self.code, self.message)?;
        if let Some(span) = self.span {
            write!(f, " (at {}..{})", span.offset, span.end())?;
        }
        Ok(())
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}
