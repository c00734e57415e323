use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::plan::itinerary::DAY_KEYS;

/// Published JSON-Schema for the plan document.
pub const ITINERARY_SCHEMA: &str = include_str!("../../../../schemas/itinerary.schema.json");

/// Wrapper keys accepted around the day array.
pub const WRAPPER_KEYS: [&str; 3] = ["llm_response", "plan", "itinerary"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    MissingKey,
    WrongType,
    MalformedValue,
    BadDaySequence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaViolation {
    /// 1-based position of the offending day record, when there is one.
    pub day: Option<u32>,
    pub field: String,
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for SchemaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn violation(day: Option<u32>, field: &str, kind: ViolationKind, message: String) -> SchemaViolation {
    SchemaViolation { day, field: field.to_string(), kind, message }
}

fn positive_int(v: &Value) -> Option<Option<u64>> {
    // Some(Some(n)) for n >= 1, Some(None) for integers < 1, None for non-integers.
    match v {
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                Some((u >= 1 && u <= u64::from(u32::MAX)).then_some(u))
            } else if n.as_i64().is_some() {
                Some(None)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Returns the day array inside `doc`, unwrapping a known wrapper object.
pub fn day_array(doc: &Value) -> Option<&Vec<Value>> {
    match doc {
        Value::Array(a) => Some(a),
        Value::Object(o) => WRAPPER_KEYS.iter().find_map(|k| o.get(*k)).and_then(Value::as_array),
        _ => None,
    }
}

/// Checks a parsed document against the day-record schema.
///
/// The document passes iff it is an array (optionally wrapped) of objects that
/// each carry all nine keys, `day` and `people_number` are positive integers,
/// the other seven are non-empty strings, days run 1..n in order, and every
/// day has the same `people_number`.
pub fn validate_schema(doc: &Value) -> Vec<SchemaViolation> {
    let Some(days) = day_array(doc) else {
        return vec![violation(
            None,
            "llm_response",
            ViolationKind::WrongType,
            "the plan must be a JSON array of day objects".into(),
        )];
    };
    let mut out = Vec::new();
    let mut day_numbers: Vec<Option<u64>> = Vec::with_capacity(days.len());
    let mut first_people: Option<u64> = None;

    for (i, entry) in days.iter().enumerate() {
        let pos = i as u32 + 1;
        let Some(obj) = entry.as_object() else {
            out.push(violation(
                Some(pos),
                "day",
                ViolationKind::WrongType,
                format!("day {pos}: entry must be a JSON object"),
            ));
            day_numbers.push(None);
            continue;
        };
        let mut day_number = None;
        for key in DAY_KEYS {
            let Some(value) = obj.get(key) else {
                out.push(violation(
                    Some(pos),
                    key,
                    ViolationKind::MissingKey,
                    format!("day {pos}: missing key `{key}`"),
                ));
                continue;
            };
            match key {
                "day" | "people_number" => match positive_int(value) {
                    Some(Some(n)) => {
                        if key == "day" {
                            day_number = Some(n);
                        } else if let Some(p) = first_people {
                            if p != n {
                                out.push(violation(
                                    Some(pos),
                                    key,
                                    ViolationKind::MalformedValue,
                                    format!("day {pos}: people_number {n} differs from {p} on day 1"),
                                ));
                            }
                        } else {
                            first_people = Some(n);
                        }
                    }
                    Some(None) => out.push(violation(
                        Some(pos),
                        key,
                        ViolationKind::MalformedValue,
                        format!("day {pos}: `{key}` must be at least 1, got {value}"),
                    )),
                    None => out.push(violation(
                        Some(pos),
                        key,
                        ViolationKind::WrongType,
                        format!("day {pos}: `{key}` must be an integer, got {value}"),
                    )),
                },
                _ => match value {
                    Value::String(s) if s.trim().is_empty() => out.push(violation(
                        Some(pos),
                        key,
                        ViolationKind::MalformedValue,
                        format!("day {pos}: `{key}` is empty; use \"-\" for no activity"),
                    )),
                    Value::String(_) => {}
                    other => out.push(violation(
                        Some(pos),
                        key,
                        ViolationKind::WrongType,
                        format!("day {pos}: `{key}` must be a string, got {other}"),
                    )),
                },
            }
        }
        day_numbers.push(day_number);
    }

    let numbered: Vec<u64> = day_numbers.iter().flatten().copied().collect();
    if numbered.len() == day_numbers.len() && numbered.iter().enumerate().any(|(i, &d)| d != i as u64 + 1) {
        let seen = numbered.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        out.push(violation(
            None,
            "day",
            ViolationKind::BadDaySequence,
            format!("days must be numbered 1..{} in order, got [{seen}]", numbered.len()),
        ));
    }
    out
}
