//! The static datasets every critic is grounded in.
//!
//! A [`Sandbox`] is loaded once from five CSV files and is immutable afterwards.
//! City and entity names are matched after trimming, collapsing inner
//! whitespace and lower-casing; there is no fuzzy matching.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{NaiveDate, NaiveTime};
use serde::{Deserialize, Serialize};

use crate::money::{Miles, Money};

pub const FLIGHTS_FILE: &str = "flights.csv";
pub const ACCOMMODATIONS_FILE: &str = "accommodations.csv";
pub const RESTAURANTS_FILE: &str = "restaurants.csv";
pub const ATTRACTIONS_FILE: &str = "attractions.csv";
pub const DISTANCES_FILE: &str = "distances.csv";
pub const CONFIG_FILE: &str = "sandbox.toml";

const FLIGHT_HEADERS: [&str; 9] = [
    "Flight Number",
    "Price",
    "DepTime",
    "ArrTime",
    "ActualElapsedTime",
    "FlightDate",
    "OriginCityName",
    "DestCityName",
    "Distance",
];
const ACCOMMODATION_HEADERS: [&str; 8] =
    ["NAME", "price", "room type", "house_rules", "minimum nights", "maximum occupancy", "review rate number", "city"];
const RESTAURANT_HEADERS: [&str; 5] = ["Name", "Average Cost", "Cuisines", "Aggregate Rating", "City"];
const ATTRACTION_HEADERS: [&str; 7] = ["Name", "Latitude", "Longitude", "Address", "Phone", "Website", "City"];
const DISTANCE_HEADERS: [&str; 5] = ["origin_city", "dest_city", "distance", "duration", "available_modes"];

/// Canonical key for city and entity names: trimmed, single-spaced, lower-case.
pub fn normalize_key(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

#[derive(Debug, thiserror::Error)]
pub enum SandboxError {
    #[error("missing dataset file {0}")]
    MissingFile(PathBuf),
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: missing required column `{column}`")]
    MissingColumn { file: String, column: String },
    #[error("{file}: no valid rows")]
    Empty { file: String },
    #[error("invalid sandbox config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("no flight {flight_number} from {origin} to {dest}")]
    UnknownFlight { flight_number: String, origin: String, dest: String },
    #[error("flight cost requested without a flight number ({origin} to {dest})")]
    MissingFlightNumber { origin: String, dest: String },
    #[error("no {mode} route from {origin} to {dest}")]
    NoGroundRoute { mode: TransportMode, origin: String, dest: String },
    #[error("party size must be at least 1")]
    NoTravelers,
}

/// One rejected CSV row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoadDiagnostic {
    pub file: String,
    /// 1-based line number in the file, the header being line 1.
    pub line: u64,
    pub message: String,
}

impl fmt::Display for LoadDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.file, self.line, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub flights: usize,
    pub accommodations: usize,
    pub restaurants: usize,
    pub attractions: usize,
    pub distances: usize,
    pub diagnostics: Vec<LoadDiagnostic>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TransportMode {
    #[serde(rename = "flight")]
    Flight,
    #[serde(rename = "self-driving")]
    SelfDriving,
    #[serde(rename = "taxi")]
    Taxi,
}

impl TransportMode {
    pub const ALL: [TransportMode; 3] = [TransportMode::Flight, TransportMode::SelfDriving, TransportMode::Taxi];

    pub fn label(self) -> &'static str {
        match self {
            TransportMode::Flight => "Flight",
            TransportMode::SelfDriving => "Self-driving",
            TransportMode::Taxi => "Taxi",
        }
    }
}

impl fmt::Display for TransportMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TransportMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match normalize_key(s).as_str() {
            "flight" | "flights" => Ok(TransportMode::Flight),
            "self-driving" | "self driving" | "selfdriving" | "drive" | "driving" => Ok(TransportMode::SelfDriving),
            "taxi" | "taxis" => Ok(TransportMode::Taxi),
            other => Err(format!("unknown transport mode `{other}`")),
        }
    }
}

/// Per-mile rates and vehicle capacities for ground legs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransportRates {
    pub taxi_rate: Money,
    pub drive_rate: Money,
    pub taxi_capacity: u32,
    pub car_capacity: u32,
}

impl Default for TransportRates {
    fn default() -> Self {
        TransportRates {
            taxi_rate: Money::from_cents(100),
            drive_rate: Money::from_cents(5),
            taxi_capacity: 4,
            car_capacity: 5,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SandboxConfigFile {
    #[serde(default)]
    transport: TransportRates,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlightRecord {
    pub flight_number: String,
    pub price: Money,
    pub dep_time: NaiveTime,
    pub arr_time: NaiveTime,
    /// Elapsed time in minutes.
    pub elapsed_minutes: u32,
    pub flight_date: NaiveDate,
    pub origin_city: String,
    pub dest_city: String,
    pub distance: Miles,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccommodationRecord {
    pub name: String,
    pub price: Money,
    pub room_type: String,
    pub house_rules: String,
    pub minimum_nights: u32,
    pub maximum_occupancy: u32,
    pub review_rate: Option<f64>,
    pub city: String,
}

impl AccommodationRecord {
    /// Rooms needed to house `people`.
    pub fn rooms_for(&self, people: u32) -> u32 {
        people.div_ceil(self.maximum_occupancy.max(1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestaurantRecord {
    pub name: String,
    pub average_cost: Money,
    pub cuisines: Vec<String>,
    pub rating: f64,
    pub city: String,
}

impl RestaurantRecord {
    pub fn serves(&self, cuisine: &str) -> bool {
        let want = normalize_key(cuisine);
        self.cuisines.iter().any(|c| normalize_key(c) == want)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractionRecord {
    pub name: String,
    pub latitude: f64,
    pub longitude: f64,
    pub address: String,
    pub phone: String,
    pub website: String,
    pub city: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceRecord {
    pub origin_city: String,
    pub dest_city: String,
    pub distance: Miles,
    pub duration_minutes: u32,
    pub available_modes: Vec<TransportMode>,
}

impl DistanceRecord {
    pub fn allows(&self, mode: TransportMode) -> bool {
        self.available_modes.contains(&mode)
    }
}

/// Indexed, immutable datasets.
#[derive(Debug, Clone, Default)]
pub struct Sandbox {
    flights: Vec<FlightRecord>,
    accommodations: Vec<AccommodationRecord>,
    restaurants: Vec<RestaurantRecord>,
    attractions: Vec<AttractionRecord>,
    distances: Vec<DistanceRecord>,
    rates: TransportRates,
    flights_by_route: HashMap<(String, String), Vec<usize>>,
    accommodations_by_city: HashMap<String, Vec<usize>>,
    restaurants_by_city: HashMap<String, Vec<usize>>,
    attractions_by_city: HashMap<String, Vec<usize>>,
    distances_by_route: HashMap<(String, String), Vec<usize>>,
}

fn index_by<T>(items: &[T], key: impl Fn(&T) -> String) -> HashMap<String, Vec<usize>> {
    let mut map: HashMap<String, Vec<usize>> = HashMap::new();
    for (i, item) in items.iter().enumerate() {
        map.entry(key(item)).or_default().push(i);
    }
    map
}

fn index_by_route<T>(items: &[T], key: impl Fn(&T) -> (&str, &str)) -> HashMap<(String, String), Vec<usize>> {
    let mut map: HashMap<(String, String), Vec<usize>> = HashMap::new();
    for (i, item) in items.iter().enumerate() {
        let (o, d) = key(item);
        map.entry((normalize_key(o), normalize_key(d))).or_default().push(i);
    }
    map
}

fn pick<'a, T>(items: &'a [T], idx: Option<&Vec<usize>>) -> Vec<&'a T> {
    idx.map(|v| v.iter().map(|&i| &items[i]).collect()).unwrap_or_default()
}

impl Sandbox {
    pub fn from_records(
        flights: Vec<FlightRecord>,
        accommodations: Vec<AccommodationRecord>,
        restaurants: Vec<RestaurantRecord>,
        attractions: Vec<AttractionRecord>,
        distances: Vec<DistanceRecord>,
    ) -> Self {
        Sandbox {
            flights_by_route: index_by_route(&flights, |f| (&f.origin_city, &f.dest_city)),
            accommodations_by_city: index_by(&accommodations, |a| normalize_key(&a.city)),
            restaurants_by_city: index_by(&restaurants, |r| normalize_key(&r.city)),
            attractions_by_city: index_by(&attractions, |a| normalize_key(&a.city)),
            distances_by_route: index_by_route(&distances, |d| (&d.origin_city, &d.dest_city)),
            flights,
            accommodations,
            restaurants,
            attractions,
            distances,
            rates: TransportRates::default(),
        }
    }

    pub fn with_rates(mut self, rates: TransportRates) -> Self {
        self.rates = rates;
        self
    }

    pub fn rates(&self) -> &TransportRates {
        &self.rates
    }

    pub fn flights(&self) -> &[FlightRecord] {
        &self.flights
    }

    pub fn accommodations(&self) -> &[AccommodationRecord] {
        &self.accommodations
    }

    pub fn restaurants(&self) -> &[RestaurantRecord] {
        &self.restaurants
    }

    pub fn attractions(&self) -> &[AttractionRecord] {
        &self.attractions
    }

    pub fn distances(&self) -> &[DistanceRecord] {
        &self.distances
    }

    /// Flights on `(origin, dest)` departing on `date`, in file order.
    pub fn find_flights(&self, origin: &str, dest: &str, date: NaiveDate) -> Vec<&FlightRecord> {
        self.flights_between(origin, dest).into_iter().filter(|f| f.flight_date == date).collect()
    }

    /// Every flight on `(origin, dest)` regardless of date.
    pub fn flights_between(&self, origin: &str, dest: &str) -> Vec<&FlightRecord> {
        let key = (normalize_key(origin), normalize_key(dest));
        pick(&self.flights, self.flights_by_route.get(&key))
    }

    pub fn find_flight(&self, flight_number: &str, origin: &str, dest: &str) -> Option<&FlightRecord> {
        let number = normalize_key(flight_number);
        self.flights_between(origin, dest).into_iter().find(|f| normalize_key(&f.flight_number) == number)
    }

    pub fn find_accommodations(&self, city: &str) -> Vec<&AccommodationRecord> {
        pick(&self.accommodations, self.accommodations_by_city.get(&normalize_key(city)))
    }

    pub fn find_restaurants(&self, city: &str) -> Vec<&RestaurantRecord> {
        pick(&self.restaurants, self.restaurants_by_city.get(&normalize_key(city)))
    }

    pub fn find_attractions(&self, city: &str) -> Vec<&AttractionRecord> {
        pick(&self.attractions, self.attractions_by_city.get(&normalize_key(city)))
    }

    pub fn find_distances(&self, origin: &str, dest: &str) -> Vec<&DistanceRecord> {
        let key = (normalize_key(origin), normalize_key(dest));
        pick(&self.distances, self.distances_by_route.get(&key))
    }

    pub fn accommodation(&self, name: &str, city: &str) -> Option<&AccommodationRecord> {
        let name = normalize_key(name);
        self.find_accommodations(city).into_iter().find(|a| normalize_key(&a.name) == name)
    }

    pub fn restaurant(&self, name: &str, city: &str) -> Option<&RestaurantRecord> {
        let name = normalize_key(name);
        self.find_restaurants(city).into_iter().find(|r| normalize_key(&r.name) == name)
    }

    pub fn attraction(&self, name: &str, city: &str) -> Option<&AttractionRecord> {
        let name = normalize_key(name);
        self.find_attractions(city).into_iter().find(|a| normalize_key(&a.name) == name)
    }

    /// Distinct city names in first-seen order across all datasets.
    pub fn cities(&self) -> Vec<String> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        let names = self
            .flights
            .iter()
            .flat_map(|f| [f.origin_city.as_str(), f.dest_city.as_str()])
            .chain(self.accommodations.iter().map(|a| a.city.as_str()))
            .chain(self.restaurants.iter().map(|r| r.city.as_str()))
            .chain(self.attractions.iter().map(|a| a.city.as_str()))
            .chain(self.distances.iter().flat_map(|d| [d.origin_city.as_str(), d.dest_city.as_str()]));
        for name in names {
            if seen.insert(normalize_key(name)) {
                out.push(name.trim().to_string());
            }
        }
        out
    }

    /// Cost of moving `people` travellers from `origin` to `dest`.
    ///
    /// Flights cost price × people. Ground legs cost distance × rate per
    /// vehicle, with ⌈people / capacity⌉ vehicles.
    pub fn get_cost_of_transport(
        &self,
        origin: &str,
        dest: &str,
        mode: TransportMode,
        people: u32,
        flight_number: Option<&str>,
    ) -> Result<Money, SandboxError> {
        if people == 0 {
            return Err(SandboxError::NoTravelers);
        }
        let ground = |rate: Money, capacity: u32| {
            let record = self.find_distances(origin, dest).into_iter().find(|d| d.allows(mode)).ok_or_else(|| {
                SandboxError::NoGroundRoute { mode, origin: origin.to_string(), dest: dest.to_string() }
            })?;
            Ok(rate.per_mile(record.distance).times(people.div_ceil(capacity.max(1))))
        };
        match mode {
            TransportMode::Flight => {
                let number = flight_number.ok_or_else(|| SandboxError::MissingFlightNumber {
                    origin: origin.to_string(),
                    dest: dest.to_string(),
                })?;
                let flight = self.find_flight(number, origin, dest).ok_or_else(|| SandboxError::UnknownFlight {
                    flight_number: number.to_string(),
                    origin: origin.to_string(),
                    dest: dest.to_string(),
                })?;
                Ok(flight.price.times(people))
            }
            TransportMode::Taxi => ground(self.rates.taxi_rate, self.rates.taxi_capacity),
            TransportMode::SelfDriving => ground(self.rates.drive_rate, self.rates.car_capacity),
        }
    }
}

// ---------------------------------------------------------------------------
// CSV loading
// ---------------------------------------------------------------------------

struct Columns {
    idx: Vec<usize>,
}

impl Columns {
    fn resolve(file: &str, headers: &csv::StringRecord, wanted: &[&str]) -> Result<Self, SandboxError> {
        let idx = wanted
            .iter()
            .map(|w| {
                headers
                    .iter()
                    .position(|h| h.trim() == *w)
                    .ok_or_else(|| SandboxError::MissingColumn { file: file.to_string(), column: w.to_string() })
            })
            .collect::<Result<_, _>>()?;
        Ok(Columns { idx })
    }

    fn get<'r>(&self, row: &'r csv::StringRecord, i: usize) -> &'r str {
        row.get(self.idx[i]).unwrap_or("").trim()
    }
}

fn required<'a>(value: &'a str, column: &str) -> Result<&'a str, String> {
    if value.is_empty() {
        Err(format!("empty `{column}`"))
    } else {
        Ok(value)
    }
}

fn money_field(value: &str, column: &str) -> Result<Money, String> {
    let m: Money = required(value, column)?.parse().map_err(|e| format!("`{column}`: {e}"))?;
    if m.is_negative() {
        return Err(format!("`{column}` must be non-negative, got {m}"));
    }
    Ok(m)
}

fn miles_field(value: &str, column: &str) -> Result<Miles, String> {
    let m: Miles = required(value, column)?.parse().map_err(|e| format!("`{column}`: {e}"))?;
    if m.is_negative() {
        return Err(format!("`{column}` must be non-negative, got {m}"));
    }
    Ok(m)
}

fn f64_field(value: &str, column: &str) -> Result<f64, String> {
    let v: f64 = required(value, column)?.parse().map_err(|_| format!("`{column}`: not a number: `{value}`"))?;
    if !v.is_finite() {
        return Err(format!("`{column}` must be finite"));
    }
    Ok(v)
}

fn positive_count(value: &str, column: &str) -> Result<u32, String> {
    // Benchmark files store these as floats ("2.0").
    let v = f64_field(value, column)?;
    if v < 1.0 || v.fract() != 0.0 || v > f64::from(u32::MAX) {
        return Err(format!("`{column}` must be a positive integer, got `{value}`"));
    }
    Ok(v as u32)
}

fn time_field(value: &str, column: &str) -> Result<NaiveTime, String> {
    let v = required(value, column)?;
    NaiveTime::parse_from_str(v, "%H:%M")
        .or_else(|_| NaiveTime::parse_from_str(v, "%H:%M:%S"))
        .map_err(|_| format!("`{column}`: invalid time of day `{v}`"))
}

fn date_field(value: &str, column: &str) -> Result<NaiveDate, String> {
    let v = required(value, column)?;
    NaiveDate::parse_from_str(v, "%Y-%m-%d").map_err(|_| format!("`{column}`: invalid date `{v}`"))
}

/// Parses "2 hours 5 minutes", "1 day 3 hours", "2:05" or a bare minute count.
pub fn parse_duration_minutes(raw: &str) -> Option<u32> {
    let s = raw.trim().to_lowercase();
    if s.is_empty() {
        return None;
    }
    if let Ok(m) = s.parse::<u32>() {
        return Some(m);
    }
    if let Some((h, m)) = s.split_once(':') {
        let h: u32 = h.trim().parse().ok()?;
        let m: u32 = m.trim().parse().ok()?;
        return (m < 60).then_some(h * 60 + m);
    }
    let tokens: Vec<&str> = s.split_whitespace().collect();
    if !tokens.len().is_multiple_of(2) {
        return None;
    }
    let mut total = 0u32;
    for pair in tokens.chunks(2) {
        let n: u32 = pair[0].parse().ok()?;
        let unit = pair[1].trim_end_matches(',');
        let factor = match unit {
            "day" | "days" => 24 * 60,
            "hour" | "hours" | "hr" | "hrs" => 60,
            "minute" | "minutes" | "min" | "mins" => 1,
            _ => return None,
        };
        total = total.checked_add(n.checked_mul(factor)?)?;
    }
    Some(total)
}

fn duration_field(value: &str, column: &str) -> Result<u32, String> {
    let v = required(value, column)?;
    parse_duration_minutes(v).ok_or_else(|| format!("`{column}`: invalid duration `{v}`"))
}

fn parse_flight(c: &Columns, row: &csv::StringRecord) -> Result<FlightRecord, String> {
    let h = &FLIGHT_HEADERS;
    let origin_city = required(c.get(row, 6), h[6])?.to_string();
    let dest_city = required(c.get(row, 7), h[7])?.to_string();
    if normalize_key(&origin_city) == normalize_key(&dest_city) {
        return Err(format!("origin and destination are both `{origin_city}`"));
    }
    Ok(FlightRecord {
        flight_number: required(c.get(row, 0), h[0])?.to_string(),
        price: money_field(c.get(row, 1), h[1])?,
        dep_time: time_field(c.get(row, 2), h[2])?,
        arr_time: time_field(c.get(row, 3), h[3])?,
        elapsed_minutes: duration_field(c.get(row, 4), h[4])?,
        flight_date: date_field(c.get(row, 5), h[5])?,
        origin_city,
        dest_city,
        distance: miles_field(c.get(row, 8), h[8])?,
    })
}

fn parse_accommodation(c: &Columns, row: &csv::StringRecord) -> Result<AccommodationRecord, String> {
    let h = &ACCOMMODATION_HEADERS;
    let review = c.get(row, 6);
    Ok(AccommodationRecord {
        name: required(c.get(row, 0), h[0])?.to_string(),
        price: money_field(c.get(row, 1), h[1])?,
        room_type: required(c.get(row, 2), h[2])?.to_string(),
        house_rules: c.get(row, 3).to_string(),
        minimum_nights: positive_count(c.get(row, 4), h[4])?,
        maximum_occupancy: positive_count(c.get(row, 5), h[5])?,
        review_rate: if review.is_empty() { None } else { Some(f64_field(review, h[6])?) },
        city: required(c.get(row, 7), h[7])?.to_string(),
    })
}

fn parse_restaurant(c: &Columns, row: &csv::StringRecord) -> Result<RestaurantRecord, String> {
    let h = &RESTAURANT_HEADERS;
    let cuisines = c.get(row, 2).split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect();
    Ok(RestaurantRecord {
        name: required(c.get(row, 0), h[0])?.to_string(),
        average_cost: money_field(c.get(row, 1), h[1])?,
        cuisines,
        rating: f64_field(c.get(row, 3), h[3])?,
        city: required(c.get(row, 4), h[4])?.to_string(),
    })
}

fn parse_attraction(c: &Columns, row: &csv::StringRecord) -> Result<AttractionRecord, String> {
    let h = &ATTRACTION_HEADERS;
    let latitude = f64_field(c.get(row, 1), h[1])?;
    let longitude = f64_field(c.get(row, 2), h[2])?;
    if !(-90.0..=90.0).contains(&latitude) {
        return Err(format!("latitude {latitude} outside [-90, 90]"));
    }
    if !(-180.0..=180.0).contains(&longitude) {
        return Err(format!("longitude {longitude} outside [-180, 180]"));
    }
    Ok(AttractionRecord {
        name: required(c.get(row, 0), h[0])?.to_string(),
        latitude,
        longitude,
        address: c.get(row, 3).to_string(),
        phone: c.get(row, 4).to_string(),
        website: c.get(row, 5).to_string(),
        city: required(c.get(row, 6), h[6])?.to_string(),
    })
}

fn parse_distance(c: &Columns, row: &csv::StringRecord) -> Result<DistanceRecord, String> {
    let h = &DISTANCE_HEADERS;
    let modes = c
        .get(row, 4)
        .split([';', ',', '|'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|m| match m.parse::<TransportMode>() {
            Ok(TransportMode::Flight) => Err("flight is not a ground mode".to_string()),
            other => other,
        })
        .collect::<Result<Vec<_>, _>>()?;
    if modes.is_empty() {
        return Err(format!("empty `{}`", h[4]));
    }
    Ok(DistanceRecord {
        origin_city: required(c.get(row, 0), h[0])?.to_string(),
        dest_city: required(c.get(row, 1), h[1])?.to_string(),
        distance: miles_field(c.get(row, 2), h[2])?,
        duration_minutes: duration_field(c.get(row, 3), h[3])?,
        available_modes: modes,
    })
}

fn load_file<T>(
    root: &Path,
    file: &str,
    headers: &[&str],
    parse: fn(&Columns, &csv::StringRecord) -> Result<T, String>,
    diagnostics: &mut Vec<LoadDiagnostic>,
) -> Result<Vec<T>, SandboxError> {
    let path = root.join(file);
    if !path.is_file() {
        return Err(SandboxError::MissingFile(path));
    }
    let data = fs::read(&path).map_err(|source| SandboxError::Io { path: path.clone(), source })?;
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(data.as_slice());
    let header_row = reader.headers().map_err(|e| SandboxError::Io {
        path: path.clone(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()),
    })?;
    let columns = Columns::resolve(file, header_row, headers)?;
    let mut out = Vec::new();
    for result in reader.records() {
        match result {
            Ok(row) => {
                let line = row.position().map_or(0, |p| p.line());
                match parse(&columns, &row) {
                    Ok(rec) => out.push(rec),
                    Err(message) => diagnostics.push(LoadDiagnostic { file: file.to_string(), line, message }),
                }
            }
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                diagnostics.push(LoadDiagnostic { file: file.to_string(), line, message: e.to_string() });
            }
        }
    }
    if out.is_empty() {
        return Err(SandboxError::Empty { file: file.to_string() });
    }
    Ok(out)
}

/// Reads `[transport]` overrides from `path`.
pub fn load_rates(path: &Path) -> Result<TransportRates, SandboxError> {
    let text = fs::read_to_string(path).map_err(|source| SandboxError::Io { path: path.to_path_buf(), source })?;
    let cfg: SandboxConfigFile =
        toml::from_str(&text).map_err(|e| SandboxError::Config { path: path.to_path_buf(), message: e.to_string() })?;
    let rates = cfg.transport;
    if rates.taxi_capacity == 0 || rates.car_capacity == 0 {
        return Err(SandboxError::Config { path: path.to_path_buf(), message: "capacities must be at least 1".into() });
    }
    if rates.taxi_rate.is_negative() || rates.drive_rate.is_negative() {
        return Err(SandboxError::Config { path: path.to_path_buf(), message: "rates must be non-negative".into() });
    }
    Ok(rates)
}

/// Loads the five datasets under `root`, plus `sandbox.toml` when present.
///
/// Malformed rows are skipped and reported; a missing file or a file with no
/// valid rows is fatal.
pub fn load_sandbox(root: impl AsRef<Path>) -> Result<(Sandbox, LoadReport), SandboxError> {
    let root = root.as_ref();
    let mut diagnostics = Vec::new();
    let flights = load_file(root, FLIGHTS_FILE, &FLIGHT_HEADERS, parse_flight, &mut diagnostics)?;
    let accommodations =
        load_file(root, ACCOMMODATIONS_FILE, &ACCOMMODATION_HEADERS, parse_accommodation, &mut diagnostics)?;
    let restaurants = load_file(root, RESTAURANTS_FILE, &RESTAURANT_HEADERS, parse_restaurant, &mut diagnostics)?;
    let attractions = load_file(root, ATTRACTIONS_FILE, &ATTRACTION_HEADERS, parse_attraction, &mut diagnostics)?;
    let distances = load_file(root, DISTANCES_FILE, &DISTANCE_HEADERS, parse_distance, &mut diagnostics)?;

    let config_path = root.join(CONFIG_FILE);
    let rates = if config_path.is_file() { load_rates(&config_path)? } else { TransportRates::default() };

    let report = LoadReport {
        flights: flights.len(),
        accommodations: accommodations.len(),
        restaurants: restaurants.len(),
        attractions: attractions.len(),
        distances: distances.len(),
        diagnostics,
    };
    let sandbox = Sandbox::from_records(flights, accommodations, restaurants, attractions, distances).with_rates(rates);
    Ok((sandbox, report))
}
