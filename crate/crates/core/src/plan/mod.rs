//! Query and itinerary data model, schema validation and the reformatter.

mod grammar;
mod itinerary;
mod query;
mod query_text;
mod reformat;
mod schema;

pub use grammar::{attraction_entries, parse_entity, parse_transportation, CurrentCity, EntityRef, TransportLeg};
pub use itinerary::{is_empty_marker, serialize_plan, DayPlan, Itinerary, Meal, DAY_KEYS, EMPTY_MARKER};
pub use query::{LocalConstraint, Query, QueryError};
pub use query_text::{
    extract_query_fields, extraction_prompt, parse_query, resolve_query, ExtractError, QueryParseError,
};
pub use reformat::{extract_json, parse_plan_text, reformat, rewrite_prompt, ReformatFailure, Reformatted};
pub use schema::{validate_schema, SchemaViolation, ViolationKind, ITINERARY_SCHEMA};
