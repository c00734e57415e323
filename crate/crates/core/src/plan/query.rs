use std::collections::BTreeSet;
use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Deserializer, Serialize};

use crate::money::Money;

/// Optional per-query preferences. Every field `None` means "no preference".
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalConstraint {
    #[serde(default, alias = "house rule")]
    pub house_rule: Option<String>,
    #[serde(default, deserialize_with = "cuisine_set")]
    pub cuisine: Option<BTreeSet<String>>,
    #[serde(default, alias = "room type")]
    pub room_type: Option<String>,
    #[serde(default)]
    pub transportation: Option<String>,
}

impl LocalConstraint {
    pub fn is_empty(&self) -> bool {
        self.house_rule.is_none()
            && self.cuisine.as_ref().is_none_or(BTreeSet::is_empty)
            && self.room_type.is_none()
            && self.transportation.is_none()
    }
}

/// Accepts `null`, a comma-separated string or a list of strings.
fn cuisine_set<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BTreeSet<String>>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        One(String),
        Many(Vec<String>),
    }
    let raw: Option<Raw> = Option::deserialize(d)?;
    let items: Vec<String> = match raw {
        None => return Ok(None),
        Some(Raw::One(s)) => s.split(',').map(str::to_string).collect(),
        Some(Raw::Many(v)) => v,
    };
    let set: BTreeSet<String> = items.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    Ok(if set.is_empty() { None } else { Some(set) })
}

/// A structured travel request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub org: String,
    pub dest: String,
    pub days: u32,
    pub visiting_city_number: u32,
    pub people_number: u32,
    #[serde(default)]
    pub local_constraint: Option<LocalConstraint>,
    pub budget: Money,
    #[serde(alias = "date")]
    pub date_range: Vec<NaiveDate>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("invalid query JSON: {0}")]
    Json(String),
    #[error("query invariant violated: {0}")]
    Invariant(String),
}

impl Query {
    /// Checks field invariants and folds an all-empty constraint to `None`.
    pub fn validated(mut self) -> Result<Query, QueryError> {
        let bad = |m: String| Err(QueryError::Invariant(m));
        if self.org.trim().is_empty() {
            return bad("org is empty".into());
        }
        if self.dest.trim().is_empty() {
            return bad("dest is empty".into());
        }
        if self.days < 1 {
            return bad(format!("days must be >= 1, got {}", self.days));
        }
        if self.visiting_city_number < 1 {
            return bad(format!("visiting_city_number must be >= 1, got {}", self.visiting_city_number));
        }
        if self.people_number < 1 {
            return bad(format!("people_number must be >= 1, got {}", self.people_number));
        }
        if self.budget <= Money::ZERO {
            return bad(format!("budget must be positive, got {}", self.budget));
        }
        if self.date_range.len() != self.days as usize {
            return bad(format!("date_range has {} dates but days = {}", self.date_range.len(), self.days));
        }
        if self.local_constraint.as_ref().is_some_and(LocalConstraint::is_empty) {
            self.local_constraint = None;
        }
        Ok(self)
    }

    pub fn from_json(text: &str) -> Result<Query, QueryError> {
        let q: Query = serde_json::from_str(text).map_err(|e| QueryError::Json(e.to_string()))?;
        q.validated()
    }

    /// Reads a corpus given either as a JSON array or as JSON lines.
    pub fn parse_corpus(text: &str) -> Result<Vec<Query>, QueryError> {
        if text.trim_start().starts_with('[') {
            let qs: Vec<Query> = serde_json::from_str(text).map_err(|e| QueryError::Json(e.to_string()))?;
            return qs.into_iter().map(Query::validated).collect();
        }
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                Query::from_json(l).map_err(|e| match e {
                    QueryError::Json(m) => QueryError::Json(format!("line {}: {m}", i + 1)),
                    QueryError::Invariant(m) => QueryError::Invariant(format!("line {}: {m}", i + 1)),
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("query serializes")
    }

    pub fn constraint(&self) -> Option<&LocalConstraint> {
        self.local_constraint.as_ref()
    }

    pub fn room_type(&self) -> Option<&str> {
        self.constraint().and_then(|c| c.room_type.as_deref())
    }

    pub fn house_rule(&self) -> Option<&str> {
        self.constraint().and_then(|c| c.house_rule.as_deref())
    }

    pub fn cuisines(&self) -> Option<&BTreeSet<String>> {
        self.constraint().and_then(|c| c.cuisine.as_ref()).filter(|s| !s.is_empty())
    }

    pub fn transportation(&self) -> Option<&str> {
        self.constraint().and_then(|c| c.transportation.as_deref())
    }

    /// Date of the 1-based `day`, if the range covers it.
    pub fn date_of(&self, day: u32) -> Option<NaiveDate> {
        day.checked_sub(1).and_then(|i| self.date_range.get(i as usize)).copied()
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} ({} days, {} city, {} people, budget {})",
            self.org, self.dest, self.days, self.visiting_city_number, self.people_number, self.budget
        )
    }
}
