//! Shorthand documents: blank-line separated records, each with an optional
//! `ID: x` header line. Lines starting with `#` are comments.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::diagnostic::{Diagnostic, DiagnosticCode};
use crate::model::InstitutionalStatement;

use super::parser::parse_expression;
use super::serialize::serialize;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceRecord {
    pub id: String,
    pub raw: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parsed: Option<InstitutionalStatement>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}

impl SourceRecord {
    pub fn has_errors(&self) -> bool {
        crate::diagnostic::has_errors(&self.diagnostics)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub path: String,
    pub records: Vec<SourceRecord>,
}

/// Splits a document into `(id, raw)` pairs without parsing them.
pub fn split_records(text: &str) -> Vec<(Option<String>, String)> {
    let text = text.replace("\r\n", "\n");
    let mut out = Vec::new();
    let mut id: Option<String> = None;
    let mut lines: Vec<&str> = Vec::new();
    let mut flush = |id: &mut Option<String>, lines: &mut Vec<&str>| {
        if !lines.is_empty() || id.is_some() {
            out.push((id.take(), lines.join("\n")));
        }
        lines.clear();
    };
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            flush(&mut id, &mut lines);
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        if lines.is_empty() && id.is_none() {
            if let Some(rest) = trimmed.strip_prefix("ID:") {
                id = Some(rest.trim().to_string());
                continue;
            }
        }
        lines.push(line.trim_end());
    }
    flush(&mut id, &mut lines);
    out
}

/// Parses every record. Missing ids become `stmt-N` (1-based position).
pub fn parse_document(text: &str) -> Vec<SourceRecord> {
    let mut seen = HashSet::new();
    split_records(text)
        .into_iter()
        .enumerate()
        .map(|(i, (id, raw))| {
            let id = id.unwrap_or_else(|| format!("stmt-{}", i + 1));
            let outcome = parse_expression(&raw);
            let mut diagnostics: Vec<Diagnostic> =
                outcome.diagnostics.into_iter().map(|d| d.with_id(id.clone())).collect();
            if !seen.insert(id.clone()) {
                diagnostics.push(
                    Diagnostic::error(DiagnosticCode::DuplicateRecordId, format!("record id `{id}` is used twice"))
                        .with_id(id.clone()),
                );
            }
            SourceRecord { id, raw, parsed: outcome.statement, diagnostics }
        })
        .collect()
}

/// Writes records back as a shorthand document in canonical form.
pub fn write_document(records: &[(String, InstitutionalStatement)]) -> String {
    let mut out = String::new();
    for (i, (id, s)) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("ID: {id}\n{}\n", serialize(s)));
    }
    out
}
