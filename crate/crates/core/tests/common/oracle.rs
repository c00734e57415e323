//! Reference checks computed straight from the raw CSV rows.
//!
//! Nothing here calls into the library's sandbox, grammar or critic code:
//! rows are read as strings, plans as raw JSON, and every rule is restated.

use std::collections::HashMap;
use std::path::Path;

use serde_json::Value;

type Row = HashMap<String, String>;

pub struct RawTables {
    pub flights: Vec<Row>,
    pub accommodations: Vec<Row>,
    pub restaurants: Vec<Row>,
    pub attractions: Vec<Row>,
    pub distances: Vec<Row>,
}

fn read(path: &Path) -> Vec<Row> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(|h| h.trim().to_string()).collect();
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            headers.iter().cloned().zip(r.iter().map(|v| v.trim().to_string())).collect()
        })
        .collect()
}

impl RawTables {
    pub fn load(dir: &Path) -> Self {
        RawTables {
            flights: read(&dir.join("flights.csv")),
            accommodations: read(&dir.join("accommodations.csv")),
            restaurants: read(&dir.join("restaurants.csv")),
            attractions: read(&dir.join("attractions.csv")),
            distances: read(&dir.join("distances.csv")),
        }
    }
}

fn same(a: &str, b: &str) -> bool {
    a.trim().to_lowercase() == b.trim().to_lowercase()
}

/// "12.5" -> 1250 hundredths. Fixture values have at most two decimals.
pub fn hundredths(s: &str) -> i64 {
    let s = s.trim();
    let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
    let mut frac = frac.to_string();
    while frac.len() < 2 {
        frac.push('0');
    }
    assert!(frac.len() == 2, "unexpected precision in {s}");
    whole.parse::<i64>().unwrap() * 100 + frac.parse::<i64>().unwrap()
}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1) / b
}

/// Cities of a `current_city` value.
pub fn day_cities(current: &str) -> Vec<String> {
    let lower = current.to_lowercase();
    if lower.starts_with("from ") {
        if let Some(pos) = lower.find(" to ") {
            return vec![current[5..pos].trim().to_string(), current[pos + 4..].trim().to_string()];
        }
    }
    vec![current.trim().to_string()]
}

fn split_entity(entry: &str) -> Option<(String, String)> {
    let (name, city) = entry.rsplit_once(", ")?;
    Some((name.trim().to_string(), city.trim().to_string()))
}

pub struct Leg {
    pub mode: String,
    pub from: String,
    pub to: String,
    pub number: Option<String>,
    pub dep: Option<String>,
    pub arr: Option<String>,
}

pub fn parse_leg(t: &str) -> Option<Leg> {
    if t.trim() == "-" {
        return None;
    }
    let parts: Vec<&str> = t.split(", ").collect();
    let mut leg =
        Leg { mode: String::new(), from: String::new(), to: String::new(), number: None, dep: None, arr: None };
    for p in parts {
        let lp = p.to_lowercase();
        if lp.starts_with("from ") {
            let c = day_cities(p);
            leg.from = c[0].clone();
            leg.to = c.get(1).cloned().unwrap_or_default();
        } else if let Some(v) = p.strip_prefix("Flight Number: ") {
            leg.number = Some(v.to_string());
        } else if let Some(v) = p.strip_prefix("Departure Time: ") {
            leg.dep = Some(v.to_string());
        } else if let Some(v) = p.strip_prefix("Arrival Time: ") {
            leg.arr = Some(v.to_string());
        } else {
            leg.mode = lp;
        }
    }
    if leg.number.is_some() {
        leg.mode = "flight".into();
    }
    Some(leg)
}

impl RawTables {
    fn flight(&self, number: &str, from: &str, to: &str) -> Option<&Row> {
        self.flights.iter().find(|r| {
            same(&r["Flight Number"], number) && same(&r["OriginCityName"], from) && same(&r["DestCityName"], to)
        })
    }

    fn distance(&self, from: &str, to: &str, mode: &str) -> Option<&Row> {
        self.distances.iter().find(|r| {
            same(&r["origin_city"], from)
                && same(&r["dest_city"], to)
                && r["available_modes"].split(';').any(|m| same(m, mode))
        })
    }

    fn restaurant(&self, name: &str, city: &str) -> Option<&Row> {
        self.restaurants.iter().find(|r| same(&r["Name"], name) && same(&r["City"], city))
    }

    fn attraction(&self, name: &str, city: &str) -> Option<&Row> {
        self.attractions.iter().find(|r| same(&r["Name"], name) && same(&r["City"], city))
    }

    fn hotel(&self, name: &str, city: &str) -> Option<&Row> {
        self.accommodations.iter().find(|r| same(&r["NAME"], name) && same(&r["city"], city))
    }

    fn leg_cost(&self, leg: &Leg, people: i64) -> i64 {
        match leg.mode.as_str() {
            "flight" => self
                .flight(leg.number.as_deref().unwrap_or(""), &leg.from, &leg.to)
                .map_or(0, |r| hundredths(&r["Price"]) * people),
            "taxi" => self
                .distance(&leg.from, &leg.to, "taxi")
                .map_or(0, |r| hundredths(&r["distance"]) * ceil_div(people, 4)),
            "self-driving" => self.distance(&leg.from, &leg.to, "self-driving").map_or(0, |r| {
                // 5 cents a mile, rounded half up to the cent
                (hundredths(&r["distance"]) * 5 + 50) / 100 * ceil_div(people, 5)
            }),
            _ => 0,
        }
    }

    /// Trip cost in cents for a plan whose entities are written `Name, City`.
    pub fn cost(&self, plan: &Value, people: u32) -> i64 {
        let people = people as i64;
        let mut total = 0;
        for day in plan.as_array().unwrap() {
            let cities = day_cities(day["current_city"].as_str().unwrap());
            if let Some(leg) = parse_leg(day["transportation"].as_str().unwrap()) {
                total += self.leg_cost(&leg, people);
            }
            for meal in ["breakfast", "lunch", "dinner"] {
                if let Some((name, city)) = split_entity(day[meal].as_str().unwrap()) {
                    if cities.iter().any(|c| same(c, &city)) {
                        if let Some(r) = self.restaurant(&name, &city) {
                            total += hundredths(&r["Average Cost"]) * people;
                        }
                    }
                }
            }
            if let Some((name, city)) = split_entity(day["accommodation"].as_str().unwrap()) {
                if same(cities.last().unwrap(), &city) {
                    if let Some(r) = self.hotel(&name, &city) {
                        let occ: i64 = r["maximum occupancy"].parse().unwrap();
                        total += hundredths(&r["price"]) * ceil_div(people, occ);
                    }
                }
            }
        }
        total
    }
}

/// The query fields the validity check needs.
pub struct OracleQuery<'a> {
    pub org: &'a str,
    pub dest: &'a str,
    pub days: usize,
    pub cities: usize,
    pub people: u32,
    pub budget_cents: i64,
    pub dates: Vec<String>,
    pub room_type: Option<&'a str>,
    pub house_rule: Option<&'a str>,
    pub cuisines: Vec<&'a str>,
    pub transportation: Option<&'a str>,
}

impl RawTables {
    /// Every violated rule, re-derived from the rows. Empty means valid.
    pub fn violations(&self, plan: &Value, q: &OracleQuery<'_>) -> Vec<String> {
        let mut out = Vec::new();
        let days = plan.as_array().unwrap();
        let n = days.len();
        if n != q.days {
            out.push("day count".to_string());
        }
        let mut here = q.org.to_string();
        let mut visited: Vec<String> = Vec::new();
        let mut meals_seen: Vec<String> = Vec::new();
        let mut sights_seen: Vec<String> = Vec::new();
        let mut modes: Vec<String> = Vec::new();
        let mut served: Vec<String> = Vec::new();
        let mut stays: Vec<(String, usize)> = Vec::new();
        for (i, day) in days.iter().enumerate() {
            let s = |k: &str| day[k].as_str().unwrap().to_string();
            if day["people_number"].as_u64() != Some(q.people as u64) {
                out.push(format!("day {} people", i + 1));
            }
            let current = s("current_city");
            let cities = day_cities(&current);
            let travel = cities.len() == 2;
            if i == 0 && !(travel && same(&cities[0], q.org)) {
                out.push("does not leave origin".into());
            }
            if i + 1 == n && !(travel && same(&cities[1], q.org)) {
                out.push("does not return".into());
            }
            if !same(&cities[0], &here) {
                out.push(format!("day {} discontinuous", i + 1));
            }
            here = cities.last().unwrap().clone();
            if !same(&here, q.org) && !visited.iter().any(|v| same(v, &here)) {
                visited.push(here.clone());
            }

            match parse_leg(&s("transportation")) {
                None if travel => out.push(format!("day {} no transport", i + 1)),
                None => {}
                Some(_) if !travel => out.push(format!("day {} transport on stay day", i + 1)),
                Some(leg) => {
                    if !same(&leg.from, &cities[0]) || !same(&leg.to, &cities[1]) {
                        out.push(format!("day {} leg mismatch", i + 1));
                    }
                    match leg.mode.as_str() {
                        "flight" => match self.flight(leg.number.as_deref().unwrap_or(""), &leg.from, &leg.to) {
                            None => out.push(format!("day {} unknown flight", i + 1)),
                            Some(r) => {
                                if q.dates.get(i).map(String::as_str) != Some(r["FlightDate"].as_str()) {
                                    out.push(format!("day {} flight date", i + 1));
                                }
                                if leg.dep.as_deref().is_some_and(|d| d != r["DepTime"])
                                    || leg.arr.as_deref().is_some_and(|a| a != r["ArrTime"])
                                {
                                    out.push(format!("day {} flight times", i + 1));
                                }
                            }
                        },
                        "taxi" | "self-driving" => {
                            if self.distance(&leg.from, &leg.to, &leg.mode).is_none() {
                                out.push(format!("day {} no ground route", i + 1));
                            }
                        }
                        other => out.push(format!("day {} mode {other}", i + 1)),
                    }
                    modes.push(leg.mode.clone());
                }
            }

            for meal in ["breakfast", "lunch", "dinner"] {
                let v = s(meal);
                if v == "-" {
                    let optional = (meal == "breakfast" && i == 0) || (meal == "dinner" && i + 1 == n);
                    if !optional {
                        out.push(format!("day {} missing {meal}", i + 1));
                    }
                    continue;
                }
                match split_entity(&v).filter(|(_, c)| cities.iter().any(|x| same(x, c))) {
                    Some((name, city)) => match self.restaurant(&name, &city) {
                        Some(r) => {
                            served.extend(r["Cuisines"].split(',').map(|c| c.trim().to_lowercase()));
                            let key = name.to_lowercase();
                            if meals_seen.contains(&key) {
                                out.push(format!("repeated restaurant {name}"));
                            }
                            meals_seen.push(key);
                        }
                        None => out.push(format!("unknown restaurant {v}")),
                    },
                    None => out.push(format!("unresolvable restaurant {v}")),
                }
            }

            let sights: Vec<String> = s("attraction")
                .split(';')
                .map(|x| x.trim().to_string())
                .filter(|x| !x.is_empty() && x != "-")
                .collect();
            if sights.is_empty() {
                out.push(format!("day {} no attraction", i + 1));
            }
            for a in sights {
                match split_entity(&a).filter(|(_, c)| cities.iter().any(|x| same(x, c))) {
                    Some((name, city)) if self.attraction(&name, &city).is_some() => {
                        let key = name.to_lowercase();
                        if sights_seen.contains(&key) {
                            out.push(format!("repeated attraction {name}"));
                        }
                        sights_seen.push(key);
                    }
                    _ => out.push(format!("unknown attraction {a}")),
                }
            }

            let acc = s("accommodation");
            if acc == "-" {
                if i + 1 != n {
                    out.push(format!("day {} no accommodation", i + 1));
                }
            } else {
                match split_entity(&acc).filter(|(_, c)| same(c, &here)).and_then(|(nm, c)| self.hotel(&nm, &c)) {
                    None => out.push(format!("unknown accommodation {acc}")),
                    Some(r) => {
                        if let Some(want) = q.room_type {
                            let rt = r["room type"].to_lowercase();
                            let ok = match want {
                                "entire room" => rt == "entire home/apt",
                                "private room" => rt == "private room",
                                "shared room" => rt == "shared room",
                                "not shared room" => rt != "shared room",
                                _ => false,
                            };
                            if !ok {
                                out.push(format!("room type {rt}"));
                            }
                        }
                        if let Some(rule) = q.house_rule {
                            let banned = format!("no {rule}");
                            if r["house_rules"].split('&').any(|x| x.trim().to_lowercase() == banned) {
                                out.push(format!("house rule {rule}"));
                            }
                        }
                        let key = format!("{}|{}", r["NAME"].to_lowercase(), r["city"].to_lowercase());
                        match stays.last_mut() {
                            Some((k, nights)) if *k == key && days[i - 1]["accommodation"] == day["accommodation"] => {
                                *nights += 1
                            }
                            _ => stays.push((key, 1)),
                        }
                    }
                }
            }
        }
        for (key, nights) in &stays {
            let (name, city) = key.split_once('|').unwrap();
            let r = self.hotel(name, city).unwrap();
            let min: usize = r["minimum nights"].parse().unwrap();
            if *nights < min {
                out.push(format!("minimum nights at {name}"));
            }
        }
        if visited.len() != q.cities {
            out.push("visited city count".into());
        }
        if q.cities == 1 && visited.len() == 1 && !same(&visited[0], q.dest) {
            out.push("wrong destination".into());
        }
        for c in &q.cuisines {
            if !served.contains(&c.to_lowercase()) {
                out.push(format!("cuisine {c}"));
            }
        }
        if let Some(t) = q.transportation {
            let banned = t.to_lowercase().trim_start_matches("no ").trim_end_matches('s').to_string();
            if modes.contains(&banned) {
                out.push(format!("forbidden {banned}"));
            }
        }
        if modes.iter().any(|m| m == "self-driving") && modes.iter().any(|m| m == "flight" || m == "taxi") {
            out.push("mixed self-driving".into());
        }
        if self.cost(plan, q.people) > q.budget_cents {
            out.push("over budget".into());
        }
        out
    }
}
