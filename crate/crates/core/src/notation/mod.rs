//! IG 2.0 shorthand: lexer, parser, canonical serializer and documents.

mod document;
mod lexer;
mod parser;
mod serialize;

pub use document::{parse_document, split_records, write_document, Document, SourceRecord};
pub use parser::{parse_expression, parse_statement, ParseOutcome};
pub use serialize::{plain_atomic, plain_component, plain_text, serialize};

pub(crate) use parser::split_lead;
