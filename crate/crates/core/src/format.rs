//! JSON graph files.
//!
//! ```json
//! {"vertices": [{"name": "a", "order": "inf"}, {"name": "s", "order": 2}],
//!  "edges": [["a", "s"]]}
//! ```

use thiserror::Error;

use crate::presentation::{validate, GraphPresentation, PresentationError, RawPresentation};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed graph file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid graph: {0}")]
    Invalid(#[from] PresentationError),
}

pub fn parse_graph(text: &str) -> Result<GraphPresentation, FormatError> {
    let raw: RawPresentation = serde_json::from_str(text)?;
    Ok(validate(&raw)?)
}

pub fn emit_graph(graph: &GraphPresentation) -> String {
    serde_json::to_string(&graph.to_raw()).expect("presentations always serialize")
}
