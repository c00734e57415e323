//! Machine-checkable grammars for the free-text fields of a day record.
//!
//! `current_city` is either a city or `from <A> to <B>`. `transportation` is
//! `<mode>, from <A> to <B>` with optional `Flight Number`, `Departure Time`
//! and `Arrival Time` clauses. Meals, attractions and accommodations name an
//! entity, optionally suffixed with `, <city>`.

use std::fmt;
use std::sync::LazyLock;

use chrono::NaiveTime;
use regex::Regex;

use crate::plan::itinerary::is_empty_marker;
use crate::sandbox::{normalize_key, TransportMode};

static TRAVEL: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"(?i)^\s*from\s+(.+?)\s+to\s+(.+?)\s*$").unwrap());

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurrentCity {
    Stay(String),
    Travel { from: String, to: String },
}

impl CurrentCity {
    pub fn parse(s: &str) -> CurrentCity {
        match TRAVEL.captures(s) {
            Some(c) => CurrentCity::Travel { from: c[1].trim().to_string(), to: c[2].trim().to_string() },
            None => CurrentCity::Stay(s.trim().to_string()),
        }
    }

    /// The cities where activities on this day may take place.
    pub fn cities(&self) -> Vec<&str> {
        match self {
            CurrentCity::Stay(c) => vec![c.as_str()],
            CurrentCity::Travel { from, to } => vec![from.as_str(), to.as_str()],
        }
    }

    /// Where the traveller sleeps (or would sleep) at the end of the day.
    pub fn end_city(&self) -> &str {
        match self {
            CurrentCity::Stay(c) => c,
            CurrentCity::Travel { to, .. } => to,
        }
    }

    pub fn is_travel(&self) -> bool {
        matches!(self, CurrentCity::Travel { .. })
    }
}

impl fmt::Display for CurrentCity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurrentCity::Stay(c) => f.write_str(c),
            CurrentCity::Travel { from, to } => write!(f, "from {from} to {to}"),
        }
    }
}

/// A parsed `transportation` field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportLeg {
    pub mode: TransportMode,
    pub from: String,
    pub to: String,
    pub flight_number: Option<String>,
    pub departure: Option<NaiveTime>,
    pub arrival: Option<NaiveTime>,
}

impl TransportLeg {
    pub fn ground(mode: TransportMode, from: impl Into<String>, to: impl Into<String>) -> Self {
        TransportLeg { mode, from: from.into(), to: to.into(), flight_number: None, departure: None, arrival: None }
    }

    pub fn render(&self) -> String {
        let mut s = format!("{}, from {} to {}", self.mode, self.from, self.to);
        if let Some(n) = &self.flight_number {
            s.push_str(&format!(", Flight Number: {n}"));
        }
        if let Some(t) = self.departure {
            s.push_str(&format!(", Departure Time: {}", t.format("%H:%M")));
        }
        if let Some(t) = self.arrival {
            s.push_str(&format!(", Arrival Time: {}", t.format("%H:%M")));
        }
        s
    }
}

fn clause_value<'a>(clause: &'a str, key: &str) -> Option<&'a str> {
    let (k, v) = clause.split_once(':')?;
    (normalize_key(k) == key).then(|| v.trim())
}

/// Parses a transportation string. `Ok(None)` for the empty marker.
pub fn parse_transportation(s: &str) -> Result<Option<TransportLeg>, String> {
    if is_empty_marker(s) {
        return Ok(None);
    }
    let mut mode: Option<TransportMode> = None;
    let mut route: Option<(String, String)> = None;
    let mut flight_number = None;
    let mut departure = None;
    let mut arrival = None;
    let time = |v: &str| NaiveTime::parse_from_str(v, "%H:%M").map_err(|_| format!("invalid time `{v}` in `{s}`"));

    for clause in s.split(',').map(str::trim).filter(|c| !c.is_empty()) {
        if let Some(c) = TRAVEL.captures(clause) {
            if route.is_some() {
                return Err(format!("more than one route in `{s}`"));
            }
            route = Some((c[1].trim().to_string(), c[2].trim().to_string()));
        } else if let Some(v) = clause_value(clause, "flight number") {
            if v.is_empty() {
                return Err(format!("empty flight number in `{s}`"));
            }
            flight_number = Some(v.to_string());
        } else if let Some(v) = clause_value(clause, "departure time") {
            departure = Some(time(v)?);
        } else if let Some(v) = clause_value(clause, "arrival time") {
            arrival = Some(time(v)?);
        } else if ["duration", "distance", "cost"].iter().any(|k| clause_value(clause, k).is_some()) {
            // informational clauses some generators append
        } else if let Ok(m) = clause.parse::<TransportMode>() {
            if mode.is_some_and(|prev| prev != m) {
                return Err(format!("conflicting modes in `{s}`"));
            }
            mode = Some(m);
        } else {
            return Err(format!("unrecognized clause `{clause}` in `{s}`"));
        }
    }

    let (from, to) = route.ok_or_else(|| format!("no `from <A> to <B>` clause in `{s}`"))?;
    let mode = match (mode, &flight_number) {
        (Some(m), None) => m,
        (Some(TransportMode::Flight), Some(_)) | (None, Some(_)) => TransportMode::Flight,
        (Some(m), Some(_)) => return Err(format!("{m} leg carries a flight number in `{s}`")),
        (None, None) => return Err(format!("no transport mode in `{s}`")),
    };
    Ok(Some(TransportLeg { mode, from, to, flight_number, departure, arrival }))
}

/// A named entity in a plan slot, with the city it was attributed to if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityRef {
    pub name: String,
    pub city: Option<String>,
}

/// Splits `"<name>, <city>"` when `<city>` is one of `cities`.
pub fn parse_entity(entry: &str, cities: &[&str]) -> EntityRef {
    let entry = entry.trim();
    if let Some((name, suffix)) = entry.rsplit_once(',') {
        let suffix_key = normalize_key(suffix);
        if !name.trim().is_empty() && cities.iter().any(|c| normalize_key(c) == suffix_key) {
            return EntityRef { name: name.trim().to_string(), city: Some(suffix.trim().to_string()) };
        }
    }
    EntityRef { name: entry.to_string(), city: None }
}

/// Non-empty attraction entries from a `;`-separated field.
pub fn attraction_entries(field: &str) -> Vec<&str> {
    if is_empty_marker(field) {
        return Vec::new();
    }
    field.split(';').map(str::trim).filter(|s| !s.is_empty() && !is_empty_marker(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn current_city_forms() {
        assert_eq!(
            CurrentCity::parse("from St. Petersburg to Myrtle Beach"),
            CurrentCity::Travel { from: "St. Petersburg".into(), to: "Myrtle Beach".into() }
        );
        assert_eq!(CurrentCity::parse("FROM a TO b"), CurrentCity::Travel { from: "a".into(), to: "b".into() });
        assert_eq!(CurrentCity::parse(" Toledo "), CurrentCity::Stay("Toledo".into()));
    }

    #[test]
    fn transportation_grammar() {
        let leg =
            parse_transportation("Flight, from A to B, Flight Number: F1, Departure Time: 08:00, Arrival Time: 10:05")
                .unwrap()
                .unwrap();
        assert_eq!(leg.mode, TransportMode::Flight);
        assert_eq!(leg.flight_number.as_deref(), Some("F1"));
        assert_eq!(leg.arrival, NaiveTime::from_hms_opt(10, 5, 0));
        assert_eq!(parse_transportation(&leg.render()).unwrap().unwrap(), leg);

        // benchmark style: flight number first, mode implied
        let leg = parse_transportation("Flight Number: F9, from A to B, Departure Time: 11:03, Arrival Time: 13:31")
            .unwrap()
            .unwrap();
        assert_eq!(leg.mode, TransportMode::Flight);

        let leg = parse_transportation("Self-driving, from A to B, duration: 5 hours, distance: 300 mi, cost: 15")
            .unwrap()
            .unwrap();
        assert_eq!(leg.mode, TransportMode::SelfDriving);
        assert_eq!(parse_transportation(" - ").unwrap(), None);
    }

    #[test]
    fn transportation_rejects_garbage() {
        assert!(parse_transportation("by boat").is_err());
        assert!(parse_transportation("Taxi").is_err());
        assert!(parse_transportation("Taxi, from A to B, Flight Number: F1").is_err());
        assert!(parse_transportation("Taxi, Flight, from A to B").is_err());
        assert!(parse_transportation("Flight, from A to B, Departure Time: 25:00").is_err());
    }

    #[test]
    fn entity_city_suffix() {
        assert_eq!(
            parse_entity("Blue Taco, CityB", &["CityA", "CityB"]),
            EntityRef { name: "Blue Taco".into(), city: Some("CityB".into()) }
        );
        // suffix that is not a day city stays part of the name
        assert_eq!(parse_entity("Pizza, Pasta", &["CityB"]), EntityRef { name: "Pizza, Pasta".into(), city: None });
        assert_eq!(attraction_entries("A, X;B, X;"), vec!["A, X", "B, X"]);
        assert!(attraction_entries("-").is_empty());
    }
}
