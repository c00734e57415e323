//! Prompt assembly: instruction, sandbox context, format rules, an example
//! plan and the critics' feedback from the previous iteration.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::critics::CriticVerdict;
use crate::plan::{Query, ITINERARY_SCHEMA};
use crate::sandbox::{normalize_key, Sandbox};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptBundle {
    pub instruction: String,
    pub context: String,
    pub format_instructions: String,
    pub examples: String,
    /// Empty on the first iteration.
    pub backprompts: String,
}

impl PromptBundle {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (title, body) in [
            ("TASK", &self.instruction),
            ("REFERENCE INFORMATION", &self.context),
            ("OUTPUT FORMAT", &self.format_instructions),
            ("EXAMPLE", &self.examples),
            ("FEEDBACK ON YOUR PREVIOUS PLAN", &self.backprompts),
        ] {
            if body.is_empty() {
                continue;
            }
            let _ = write!(out, "### {title}\n{}\n\n", body.trim_end());
        }
        out.truncate(out.trim_end().len());
        out.push('\n');
        out
    }
}

const FORMAT_RULES: &str = "\
Reply with a JSON array containing one object per day and nothing else of substance.
- current_city: the city for the day, or \"from <A> to <B>\" on travel days.
- transportation: \"Flight, from <A> to <B>, Flight Number: <number>, Departure Time: <hh:mm>, Arrival Time: <hh:mm>\",
  \"Self-driving, from <A> to <B>\" or \"Taxi, from <A> to <B>\"; \"-\" on days without travel.
- breakfast, lunch, dinner: \"<restaurant name>, <city>\" or \"-\".
- attraction: one or more \"<attraction name>, <city>\" separated by \";\", or \"-\".
- accommodation: \"<accommodation name>, <city>\" for the night, or \"-\" on the last day.
Use only flights, restaurants, attractions and accommodations listed in the reference information.";

const EXAMPLE: &str = r#"Query: a 3-day trip from Springfield to Shelbyville for 2 people from 2022-04-01 to 2022-04-03 with a budget of $1,200.
[
  {"day": 1, "people_number": 2, "current_city": "from Springfield to Shelbyville",
   "transportation": "Flight, from Springfield to Shelbyville, Flight Number: F1234, Departure Time: 07:10, Arrival Time: 08:40",
   "breakfast": "-", "attraction": "Lard Lad Statue, Shelbyville", "lunch": "Krusty Burger, Shelbyville",
   "dinner": "Luigi's, Shelbyville", "accommodation": "Shelbyville Inn, Shelbyville"},
  {"day": 2, "people_number": 2, "current_city": "Shelbyville", "transportation": "-",
   "breakfast": "Lard Lad Donuts, Shelbyville", "attraction": "Shelbyville Museum, Shelbyville;Lemon Tree Park, Shelbyville",
   "lunch": "Moe's Tavern, Shelbyville", "dinner": "Pimento Grove, Shelbyville", "accommodation": "Shelbyville Inn, Shelbyville"},
  {"day": 3, "people_number": 2, "current_city": "from Shelbyville to Springfield",
   "transportation": "Flight, from Shelbyville to Springfield, Flight Number: F4321, Departure Time: 18:05, Arrival Time: 19:35",
   "breakfast": "Frying Dutchman, Shelbyville", "attraction": "Shelbyville Zoo, Shelbyville", "lunch": "Thai Palace, Shelbyville",
   "dinner": "-", "accommodation": "-"}
]"#;

fn describe_constraints(q: &Query) -> String {
    let mut parts = Vec::new();
    if let Some(r) = q.room_type() {
        parts.push(format!("room type: {r}"));
    }
    if let Some(r) = q.house_rule() {
        parts.push(format!("the accommodation must allow {r}"));
    }
    if let Some(c) = q.cuisines() {
        parts.push(format!("cuisines to try: {}", c.iter().cloned().collect::<Vec<_>>().join(", ")));
    }
    if let Some(t) = q.transportation() {
        parts.push(format!("transportation: {t}"));
    }
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join("; ")
    }
}

fn instruction(q: &Query) -> String {
    let dates: Vec<String> = q.date_range.iter().map(|d| d.to_string()).collect();
    format!(
        "Plan a {days}-day trip from {org} to {dest} for {people} {who}, visiting {n} {cities}, on {dates}. \
         The total cost must not exceed ${budget}. Additional preferences: {prefs}.\n\
         The trip starts by leaving {org} on day 1 and ends by returning to {org} on day {days}. \
         Plan breakfast, lunch and dinner (breakfast may be skipped on day 1 and dinner on the last day), \
         at least one attraction every day, an accommodation for every night, and never visit the same \
         restaurant or attraction twice.",
        days = q.days,
        org = q.org,
        dest = q.dest,
        people = q.people_number,
        who = if q.people_number == 1 { "person" } else { "people" },
        n = q.visiting_city_number,
        cities = if q.visiting_city_number == 1 { "city" } else { "cities" },
        dates = dates.join(", "),
        budget = q.budget,
        prefs = describe_constraints(q),
    )
}

/// Cities a plan for `q` may stay in, in sorted order.
pub(crate) fn destination_cities(q: &Query, sb: &Sandbox) -> Vec<String> {
    let org = normalize_key(&q.org);
    let dest = normalize_key(&q.dest);
    let mut keys: BTreeSet<String> = BTreeSet::new();
    let mut out: Vec<String> = Vec::new();
    let mut add = |c: &str, out: &mut Vec<String>| {
        let k = normalize_key(c);
        if k != org && keys.insert(k) {
            out.push(c.trim().to_string());
        }
    };
    add(&q.dest, &mut out);
    if q.visiting_city_number > 1 {
        for d in sb.distances() {
            if normalize_key(&d.origin_city) == dest {
                add(&d.dest_city, &mut out);
            }
        }
        for f in sb.flights() {
            if normalize_key(&f.origin_city) == dest {
                add(&f.dest_city, &mut out);
            }
        }
    }
    out.sort_by_key(|c| normalize_key(c));
    out
}

fn context(q: &Query, sb: &Sandbox) -> String {
    let stays = destination_cities(q, sb);
    let mut all = vec![q.org.clone()];
    all.extend(stays.iter().cloned());
    let in_all = |c: &str| all.iter().any(|a| normalize_key(a) == normalize_key(c));
    let mut out = String::new();

    out.push_str("Flights (Flight Number, Price, DepTime, ArrTime, FlightDate, OriginCityName, DestCityName):\n");
    let mut n = 0;
    for f in sb.flights() {
        if in_all(&f.origin_city) && in_all(&f.dest_city) && q.date_range.contains(&f.flight_date) {
            let _ = writeln!(
                out,
                "{}, {}, {}, {}, {}, {}, {}",
                f.flight_number,
                f.price,
                f.dep_time.format("%H:%M"),
                f.arr_time.format("%H:%M"),
                f.flight_date,
                f.origin_city,
                f.dest_city
            );
            n += 1;
        }
    }
    if n == 0 {
        out.push_str("(none)\n");
    }

    out.push_str("\nGround travel (origin, destination, distance in miles, duration in minutes, modes):\n");
    let mut n = 0;
    for d in sb.distances() {
        if in_all(&d.origin_city) && in_all(&d.dest_city) {
            let modes: Vec<&str> = d.available_modes.iter().map(|m| m.label()).collect();
            let _ = writeln!(
                out,
                "{}, {}, {}, {}, {}",
                d.origin_city,
                d.dest_city,
                d.distance,
                d.duration_minutes,
                modes.join(";")
            );
            n += 1;
        }
    }
    if n == 0 {
        out.push_str("(none)\n");
    }

    for city in &stays {
        let _ = writeln!(
            out,
            "\nAccommodations in {city} (NAME, price, room type, house_rules, minimum nights, maximum occupancy):"
        );
        for a in sb.find_accommodations(city) {
            let rules = if a.house_rules.is_empty() { "-" } else { a.house_rules.as_str() };
            let _ = writeln!(
                out,
                "{}, {}, {}, {}, {}, {}",
                a.name, a.price, a.room_type, rules, a.minimum_nights, a.maximum_occupancy
            );
        }
    }
    for city in &all {
        let _ = writeln!(out, "\nRestaurants in {city} (Name, Average Cost, Cuisines, Aggregate Rating):");
        for r in sb.find_restaurants(city) {
            let _ = writeln!(out, "{}, {}, {}, {}", r.name, r.average_cost, r.cuisines.join("/"), r.rating);
        }
        let _ = writeln!(out, "\nAttractions in {city} (Name, Address):");
        for a in sb.find_attractions(city) {
            let _ = writeln!(out, "{}, {}", a.name, a.address);
        }
    }
    out
}

fn feedback(backprompts: &[String]) -> String {
    if backprompts.is_empty() {
        return String::new();
    }
    let mut out = String::from("Your previous plan was checked and has these problems:\n");
    for b in backprompts {
        let _ = writeln!(out, "- {b}");
    }
    out.push_str("Return a complete revised plan that fixes all of them.");
    out
}

/// Prompt for `q` carrying the given feedback, in the order given.
pub fn build_prompt(q: &Query, sb: &Sandbox, backprompts: &[String]) -> PromptBundle {
    PromptBundle {
        instruction: instruction(q),
        context: context(q, sb),
        format_instructions: format!("{FORMAT_RULES}\n\nJSON Schema:\n{}", ITINERARY_SCHEMA.trim_end()),
        examples: EXAMPLE.to_string(),
        backprompts: feedback(backprompts),
    }
}

/// Backprompts of the failing verdicts, in order, with exact duplicates removed.
pub fn consolidate_backprompts(verdicts: &[CriticVerdict]) -> Vec<String> {
    let mut seen = BTreeSet::new();
    verdicts.iter().filter(|v| !v.passed && seen.insert(v.backprompt.as_str())).map(|v| v.backprompt.clone()).collect()
}
