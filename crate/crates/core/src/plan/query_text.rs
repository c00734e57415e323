//! Deterministic parsing of templated natural-language travel requests, with a
//! generator-backed extraction path for text the templates do not cover.

use std::collections::BTreeSet;
use std::sync::LazyLock;

use chrono::NaiveDate;
use regex::Regex;
use serde::Deserialize;

use crate::generator::{GeneratorError, PlanGenerator};
use crate::money::Money;
use crate::plan::query::{LocalConstraint, Query};
use crate::plan::reformat::extract_json;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryParseError {
    #[error("empty query text")]
    Empty,
    #[error("could not find the {clause} clause in the query")]
    MissingClause { clause: &'static str },
    #[error("{clause} clause is inconsistent: {message}")]
    Inconsistent { clause: &'static str, message: String },
}

#[derive(Debug, thiserror::Error)]
pub enum ExtractError {
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("query extraction failed after {attempts} attempts: {last}")]
    Rejected { attempts: u32, last: String },
}

const MONTHS: &str = "january|february|march|april|may|june|july|august|september|october|november|december|jan|feb|mar|apr|jun|jul|aug|sep|sept|oct|nov|dec";

static ROUTE: LazyLock<Regex> = LazyLock::new(|| {
    let city = r"[A-Z][\w.'-]*(?:\s+[A-Z][\w.'-]*)*";
    Regex::new(&format!(
        r"\b(?:from|departing from|leaving from)\s+({city})\s+(?:to|for|towards|heading to)\s+({city})"
    ))
    .unwrap()
});

static DAYS: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b(\d+|one|two|three|four|five|six|seven|eight|nine|ten)[\s-]+days?\b").unwrap());

static BUDGET: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\$\s?(\d[\d,]*(?:\.\d{1,2})?)").unwrap());

static DATES: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(&format!(
        r"(?i)\b({MONTHS})\.?\s+(\d{{1,2}})(?:st|nd|rd|th)?(?:,?\s+(\d{{4}}))?\s*(?:to|through|until|till|and|-|–)\s*(?:({MONTHS})\.?\s+)?(\d{{1,2}})(?:st|nd|rd|th)?,?\s+(\d{{4}})"
    ))
    .unwrap()
});

static PEOPLE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?i)\b(?:for\s+)?(?:a\s+group\s+of\s+)?(\d+|one|two|three|four|five|six|seven|eight|nine|ten|a\s+single|a|an)\s+(?:people|persons?|travell?ers?|individuals?|adults?|guests?)\b",
    )
    .unwrap()
});

static CITIES: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\b(\d+|one|two|three|four|five)\s+(?:different\s+|distinct\s+)?cit(?:y|ies)\b").unwrap()
});

static CUISINE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"\b([A-Z][a-z]+(?:(?:\s*,\s*|\s*,?\s+and\s+|\s+or\s+)[A-Z][a-z]+)*)\s+(?:cuisines?|food)\b").unwrap()
});

static ROOM: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b(not[\s-]+shared|entire|private|shared)\s+rooms?\b").unwrap());

static HOUSE_RULE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\b(?:allows?|permits?|accepts?|allowing|permitting|friendly\s+to|suitable\s+for)\s+(parties|smoking|pets|visitors|children\s+under\s+10)\b|\b(pet|smoking|party)[\s-]friendly\b").unwrap()
});

static NO_TRANSPORT: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\b(?:no|not|avoid|without|don't\s+want|do\s+not\s+want)\s+(?:any\s+|taking\s+|using\s+|to\s+take\s+)?(flights?|fly|flying|self[\s-]driving|driving|taxis?)\b").unwrap()
});

fn word_number(s: &str) -> Option<u32> {
    let s = s.trim().to_lowercase();
    let n = match s.as_str() {
        "a" | "an" | "one" | "a single" => 1,
        "two" => 2,
        "three" => 3,
        "four" => 4,
        "five" => 5,
        "six" => 6,
        "seven" => 7,
        "eight" => 8,
        "nine" => 9,
        "ten" => 10,
        _ => return s.split_whitespace().last()?.parse().ok(),
    };
    Some(n)
}

fn month_number(s: &str) -> Option<u32> {
    let s = s.to_lowercase();
    let all = ["jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"];
    all.iter().position(|m| s.starts_with(m)).map(|i| i as u32 + 1)
}

fn is_month(s: &str) -> bool {
    month_number(s).is_some() && MONTHS.split('|').any(|m| m.eq_ignore_ascii_case(s))
}

fn parse_dates(text: &str) -> Result<Vec<NaiveDate>, QueryParseError> {
    let c = DATES.captures(text).ok_or(QueryParseError::MissingClause { clause: "date range" })?;
    let bad = |message: String| QueryParseError::Inconsistent { clause: "date range", message };
    let start_month = month_number(&c[1]).ok_or_else(|| bad(format!("unknown month `{}`", &c[1])))?;
    let end_month = match c.get(4) {
        Some(m) => month_number(m.as_str()).ok_or_else(|| bad(format!("unknown month `{}`", m.as_str())))?,
        None => start_month,
    };
    let end_year: i32 = c[6].parse().map_err(|_| bad("bad year".into()))?;
    let start_year: i32 = match c.get(3) {
        Some(y) => y.as_str().parse().map_err(|_| bad("bad year".into()))?,
        None if start_month > end_month => end_year - 1,
        None => end_year,
    };
    let start_day: u32 = c[2].parse().map_err(|_| bad("bad day".into()))?;
    let end_day: u32 = c[5].parse().map_err(|_| bad("bad day".into()))?;
    let start = NaiveDate::from_ymd_opt(start_year, start_month, start_day)
        .ok_or_else(|| bad(format!("invalid start date {start_year}-{start_month}-{start_day}")))?;
    let end = NaiveDate::from_ymd_opt(end_year, end_month, end_day)
        .ok_or_else(|| bad(format!("invalid end date {end_year}-{end_month}-{end_day}")))?;
    if end < start {
        return Err(bad(format!("end {end} precedes start {start}")));
    }
    Ok(start.iter_days().take_while(|d| *d <= end).collect())
}

fn parse_constraints(text: &str) -> Option<LocalConstraint> {
    let lc = LocalConstraint {
        house_rule: HOUSE_RULE.captures(text).map(|c| match c.get(1).map(|m| m.as_str().to_lowercase()) {
            Some(rule) => rule.split_whitespace().collect::<Vec<_>>().join(" "),
            None => match c[2].to_lowercase().as_str() {
                "pet" => "pets".to_string(),
                "party" => "parties".to_string(),
                other => other.to_string(),
            },
        }),
        cuisine: {
            let set: BTreeSet<String> = CUISINE
                .captures_iter(text)
                .flat_map(|c| {
                    c[1].replace(" and ", ",")
                        .replace(" or ", ",")
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect::<Vec<_>>()
                })
                .collect();
            (!set.is_empty()).then_some(set)
        },
        room_type: ROOM.captures(text).map(|c| {
            let kind = c[1].to_lowercase();
            if kind.starts_with("not") {
                "not shared room".to_string()
            } else {
                format!("{kind} room")
            }
        }),
        transportation: NO_TRANSPORT.captures(text).map(|c| {
            let m = c[1].to_lowercase();
            if m.starts_with("fl") {
                "no flight".to_string()
            } else if m.starts_with("taxi") {
                "no taxi".to_string()
            } else {
                "no self-driving".to_string()
            }
        }),
    };
    (!lc.is_empty()).then_some(lc)
}

/// Parses a templated request such as "a 3-day trip from Washington to
/// Myrtle Beach for one traveler with a $1,400 budget, from March 13th to
/// 15th, 2022".
///
/// `visiting_city_number` defaults to 1 and `people_number` defaults to 1
/// when the text does not state them.
pub fn parse_query(text: &str) -> Result<Query, QueryParseError> {
    if text.trim().is_empty() {
        return Err(QueryParseError::Empty);
    }
    let (org, dest) = ROUTE
        .captures_iter(text)
        .map(|c| (c[1].trim().to_string(), c[2].trim().to_string()))
        .find(|(o, d)| !is_month(o) && !is_month(d))
        .ok_or(QueryParseError::MissingClause { clause: "route (from <origin> to <destination>)" })?;
    let days = DAYS
        .captures(text)
        .and_then(|c| word_number(&c[1]))
        .ok_or(QueryParseError::MissingClause { clause: "trip length (<n> days)" })?;
    let date_range = parse_dates(text)?;
    let budget: Money = BUDGET
        .captures(text)
        .and_then(|c| c[1].parse().ok())
        .ok_or(QueryParseError::MissingClause { clause: "budget ($<amount>)" })?;
    let people_number = match PEOPLE.captures(text) {
        Some(c) => word_number(&c[1]).ok_or(QueryParseError::MissingClause { clause: "party size" })?,
        None => 1,
    };
    let visiting_city_number = CITIES.captures(text).and_then(|c| word_number(&c[1])).unwrap_or(1);

    if date_range.len() != days as usize {
        return Err(QueryParseError::Inconsistent {
            clause: "date range",
            message: format!(
                "{} days stated but {} to {} spans {}",
                days,
                date_range[0],
                date_range[date_range.len() - 1],
                date_range.len()
            ),
        });
    }
    let q = Query {
        org,
        dest,
        days,
        visiting_city_number,
        people_number,
        local_constraint: parse_constraints(text),
        budget,
        date_range,
    };
    q.validated().map_err(|e| QueryParseError::Inconsistent { clause: "query", message: e.to_string() })
}

/// Prompt asking a generator for the structured query fields.
pub fn extraction_prompt(text: &str, previous_error: Option<&str>) -> String {
    let mut p = String::from(
        "Extract the structured fields of the travel request below. Reply with a single JSON object with keys:\n\
         - org: origin city (string)\n\
         - dest: destination city or region (string)\n\
         - days: trip length in days (integer >= 1)\n\
         - visiting_city_number: number of cities to visit (integer >= 1)\n\
         - people_number: number of travellers (integer >= 1)\n\
         - local_constraint: null, or an object with keys house_rule (string or null), cuisine (list of strings or null), \
           room_type (string or null), transportation (string or null, e.g. \"no flight\")\n\
         - budget: total budget in dollars (number > 0)\n\
         - date_range: list of dates \"YYYY-MM-DD\", one per trip day\n\n",
    );
    if let Some(err) = previous_error {
        p.push_str(&format!("Your previous reply was rejected: {err}\n\n"));
    }
    p.push_str("Travel request:\n");
    p.push_str(text.trim());
    p.push('\n');
    p
}

/// Builds a [`Query`] from a generator's structured reply, retrying while the
/// reply fails to decode or violates the query invariants.
pub fn extract_query_fields(text: &str, gen: &dyn PlanGenerator, max_retries: u32) -> Result<Query, ExtractError> {
    let mut last_error: Option<String> = None;
    let attempts = max_retries + 1;
    for _ in 0..attempts {
        let reply = gen.generate(&extraction_prompt(text, last_error.as_deref()))?;
        let decoded = extract_json(&reply.text)
            .map_err(|e| e.to_string())
            .and_then(|v| Query::deserialize(v).map_err(|e| e.to_string()))
            .and_then(|q| q.validated().map_err(|e| e.to_string()));
        match decoded {
            Ok(q) => return Ok(q),
            Err(e) => last_error = Some(e),
        }
    }
    Err(ExtractError::Rejected { attempts, last: last_error.unwrap_or_default() })
}

/// Deterministic parse first, generator extraction only when that fails.
pub fn resolve_query(text: &str, gen: Option<&dyn PlanGenerator>, max_retries: u32) -> Result<Query, ExtractError> {
    match (parse_query(text), gen) {
        (Ok(q), _) => Ok(q),
        (Err(_), Some(g)) => extract_query_fields(text, g, max_retries),
        (Err(e), None) => Err(ExtractError::Rejected { attempts: 0, last: e.to_string() }),
    }
}
