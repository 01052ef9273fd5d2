use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Corpus;

pub const SCHEMA: &str = "igkit-1";

#[derive(Debug, Error)]
pub enum InterchangeError {
    #[error("not an igkit interchange document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema `{0}` (expected `{SCHEMA}`)")]
    Schema(String),
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    schema: String,
    #[serde(flatten)]
    corpus: Corpus,
}

/// Pretty-printed JSON with a schema tag. Key order follows the model types.
pub fn export(corpus: &Corpus) -> String {
    let env = Envelope { schema: SCHEMA.to_string(), corpus: corpus.clone() };
    serde_json::to_string_pretty(&env).expect("corpus serializes")
}

pub fn import(text: &str) -> Result<Corpus, InterchangeError> {
    let env: Envelope = serde_json::from_str(text)?;
    if env.schema != SCHEMA {
        return Err(InterchangeError::Schema(env.schema));
    }
    Ok(env.corpus)
}
