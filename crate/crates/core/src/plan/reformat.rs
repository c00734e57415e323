//! Turns generator text into a structured plan.
//!
//! Extraction is deterministic: fenced code blocks are tried first, then every
//! `[` or `{` in the text, and the first JSON value that looks like a plan wins.
//! Only when no JSON can be found may a generator be asked to rewrite the text.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::generator::{GeneratorError, PlanGenerator};
use crate::plan::itinerary::{DayPlan, Itinerary};
use crate::plan::schema::{day_array, validate_schema, SchemaViolation, ITINERARY_SCHEMA};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReformatFailure {
    NoJsonFound,
    InvalidJson { message: String },
    SchemaViolations { violations: Vec<SchemaViolation> },
}

impl ReformatFailure {
    /// Human-readable problems, one per entry.
    pub fn diagnostics(&self) -> Vec<String> {
        match self {
            ReformatFailure::NoJsonFound => vec!["no JSON plan was found in the response".into()],
            ReformatFailure::InvalidJson { message } => vec![format!("the JSON plan could not be parsed: {message}")],
            ReformatFailure::SchemaViolations { violations } => violations.iter().map(|v| v.message.clone()).collect(),
        }
    }

    fn is_syntactic(&self) -> bool {
        !matches!(self, ReformatFailure::SchemaViolations { .. })
    }
}

impl fmt::Display for ReformatFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.diagnostics().join("; "))
    }
}

fn fenced_blocks(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = text;
    while let Some(start) = rest.find("```") {
        let after = &rest[start + 3..];
        // skip an info string such as `json`
        let body_start = after.find('\n').map_or(after.len(), |i| i + 1);
        let body = &after[body_start..];
        match body.find("```") {
            Some(end) => {
                out.push(&body[..end]);
                rest = &body[end + 3..];
            }
            None => break,
        }
    }
    out
}

fn first_value(s: &str) -> Result<Value, serde_json::Error> {
    let mut stream = serde_json::Deserializer::from_str(s).into_iter::<Value>();
    match stream.next() {
        Some(r) => r,
        None => serde_json::from_str::<Value>(""),
    }
}

/// Finds the JSON plan document embedded in `text`.
pub fn extract_json(text: &str) -> Result<Value, ReformatFailure> {
    let mut first_error: Option<String> = None;
    let mut fallback: Option<Value> = None;
    let mut consider = |candidate: &str, first_error: &mut Option<String>| -> Option<Value> {
        match first_value(candidate) {
            Ok(v) if day_array(&v).is_some() => Some(v),
            Ok(v) => {
                if fallback.is_none() && (v.is_array() || v.is_object()) {
                    fallback = Some(v);
                }
                None
            }
            Err(e) => {
                first_error.get_or_insert_with(|| e.to_string());
                None
            }
        }
    };

    for block in fenced_blocks(text) {
        let trimmed = block.trim_start();
        if trimmed.starts_with('[') || trimmed.starts_with('{') {
            if let Some(v) = consider(trimmed, &mut first_error) {
                return Ok(v);
            }
        }
    }
    for (i, c) in text.char_indices() {
        if c == '[' || c == '{' {
            if let Some(v) = consider(&text[i..], &mut first_error) {
                return Ok(v);
            }
        }
    }
    if let Some(v) = fallback {
        return Ok(v);
    }
    match first_error {
        Some(message) => Err(ReformatFailure::InvalidJson { message }),
        None => Err(ReformatFailure::NoJsonFound),
    }
}

/// Extracts, schema-checks and decodes a plan from generator output.
pub fn parse_plan_text(text: &str) -> Result<Itinerary, ReformatFailure> {
    let doc = extract_json(text)?;
    let violations = validate_schema(&doc);
    if !violations.is_empty() {
        return Err(ReformatFailure::SchemaViolations { violations });
    }
    let days = day_array(&doc).expect("schema-valid document has a day array");
    let days = days
        .iter()
        .map(|d| serde_json::from_value::<DayPlan>(d.clone()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| ReformatFailure::InvalidJson { message: e.to_string() })?;
    Ok(Itinerary::new(days))
}

/// Prompt asking a generator to restate a free-form plan as JSON.
pub fn rewrite_prompt(text: &str) -> String {
    format!(
        "Rewrite the travel plan below as a JSON array that conforms to this JSON Schema. \
         Copy every city, transportation detail, restaurant, attraction and accommodation exactly as written. \
         Use \"-\" for any slot the plan leaves empty. Reply with the JSON only.\n\n\
         JSON Schema:\n{ITINERARY_SCHEMA}\n\nTravel plan:\n{text}\n"
    )
}

/// Outcome of [`reformat`], including the rewrite reply when one was requested.
#[derive(Debug, Clone)]
pub struct Reformatted {
    pub outcome: Result<Itinerary, ReformatFailure>,
    pub rewrite_reply: Option<String>,
}

/// Deterministic extraction, falling back to a generator rewrite when the text
/// contains no parseable JSON and a rewriter is supplied.
pub fn reformat(text: &str, rewriter: Option<&dyn PlanGenerator>) -> Result<Reformatted, GeneratorError> {
    let outcome = parse_plan_text(text);
    match (outcome, rewriter) {
        (Err(e), Some(g)) if e.is_syntactic() => {
            let reply = g.generate(&rewrite_prompt(text))?;
            Ok(Reformatted { outcome: parse_plan_text(&reply.text), rewrite_reply: Some(reply.text) })
        }
        (outcome, _) => Ok(Reformatted { outcome, rewrite_reply: None }),
    }
}
