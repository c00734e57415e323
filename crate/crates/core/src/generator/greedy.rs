//! Deterministic greedy planner used as a feasibility witness and baseline.
//!
//! Ties are always broken by price, then by case-insensitive name.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::critics::{house_rule_violated, matches_room_type, parse_transport_constraint, CriticConfig};
use crate::metacontroller::destination_cities;
use crate::money::Money;
use crate::plan::{serialize_plan, CurrentCity, DayPlan, Itinerary, Meal, Query, TransportLeg};
use crate::sandbox::{normalize_key, AccommodationRecord, RestaurantRecord, Sandbox, TransportMode};

use super::{GeneratorError, PlanGenerator, Reply};

/// Ignores the prompt and answers with [`greedy_plan`] for a fixed query.
pub struct GreedyGenerator {
    query: Query,
    sandbox: Arc<Sandbox>,
    config: CriticConfig,
}

impl GreedyGenerator {
    pub fn new(query: Query, sandbox: Arc<Sandbox>) -> Self {
        GreedyGenerator { query, sandbox, config: CriticConfig::default() }
    }

    pub fn with_config(mut self, config: CriticConfig) -> Self {
        self.config = config;
        self
    }
}

impl PlanGenerator for GreedyGenerator {
    fn generate(&self, _prompt: &str) -> Result<Reply, GeneratorError> {
        Ok(Reply::text(serialize_plan(&greedy_plan(&self.query, &self.sandbox, &self.config))))
    }

    fn description(&self) -> String {
        "greedy".into()
    }
}

fn entity(name: &str, city: &str) -> String {
    format!("{name}, {city}")
}

/// Cities to visit, in order: the destination first, then its neighbours.
fn pick_cities(q: &Query, sb: &Sandbox) -> Vec<String> {
    let n = q.visiting_city_number.max(1) as usize;
    if n == 1 {
        return vec![q.dest.clone()];
    }
    let dest = normalize_key(&q.dest);
    let mut out: Vec<String> =
        destination_cities(q, sb).into_iter().filter(|c| !sb.find_accommodations(c).is_empty()).collect();
    out.sort_by_key(|c| (normalize_key(c) != dest, normalize_key(c)));
    out.truncate(n);
    out
}

/// City slept in on each of the `days - 1` nights.
fn night_cities(days: u32, cities: &[String]) -> Vec<String> {
    let nights = days.saturating_sub(1) as usize;
    if cities.is_empty() || nights == 0 {
        return Vec::new();
    }
    let used = cities.len().min(nights);
    let (base, extra) = (nights / used, nights % used);
    cities[..used]
        .iter()
        .enumerate()
        .flat_map(|(i, c)| std::iter::repeat_n(c.clone(), base + usize::from(i < extra)))
        .collect()
}

fn leg(q: &Query, sb: &Sandbox, day: u32, from: &str, to: &str, mode: TransportMode) -> Option<TransportLeg> {
    match mode {
        TransportMode::Flight => {
            let date = q.date_of(day)?;
            let mut flights = sb.find_flights(from, to, date);
            flights.sort_by(|a, b| {
                (a.price, a.dep_time, normalize_key(&a.flight_number)).cmp(&(
                    b.price,
                    b.dep_time,
                    normalize_key(&b.flight_number),
                ))
            });
            flights.first().map(|f| TransportLeg {
                mode,
                from: from.to_string(),
                to: to.to_string(),
                flight_number: Some(f.flight_number.clone()),
                departure: Some(f.dep_time),
                arrival: Some(f.arr_time),
            })
        }
        _ => sb.find_distances(from, to).iter().any(|d| d.allows(mode)).then(|| TransportLeg::ground(mode, from, to)),
    }
}

/// Transportation for each travel leg, or `None` where no allowed mode exists.
fn plan_transport(q: &Query, sb: &Sandbox, legs: &[(u32, String, String)]) -> Vec<Option<TransportLeg>> {
    let forbidden = q.transportation().and_then(parse_transport_constraint);
    let allowed = |m: TransportMode| Some(m) != forbidden;
    let public = |day: u32, from: &str, to: &str| {
        [TransportMode::Flight, TransportMode::Taxi]
            .into_iter()
            .filter(|m| allowed(*m))
            .find_map(|m| leg(q, sb, day, from, to, m))
    };
    let strategies: Vec<Vec<Option<TransportLeg>>> = [
        legs.iter().map(|(d, f, t)| public(*d, f, t)).collect(),
        legs.iter()
            .map(|(d, f, t)| {
                allowed(TransportMode::SelfDriving).then(|| leg(q, sb, *d, f, t, TransportMode::SelfDriving)).flatten()
            })
            .collect(),
    ]
    .into();
    strategies.iter().find(|s| s.iter().all(Option::is_some)).unwrap_or(&strategies[0]).clone()
}

fn hotel_ok(q: &Query, a: &AccommodationRecord, nights: u32) -> bool {
    a.minimum_nights <= nights
        && q.room_type().is_none_or(|want| matches_room_type(want, &a.room_type))
        && q.house_rule().is_none_or(|rule| !house_rule_violated(rule, &a.house_rules))
}

fn cheapest_hotel<'s>(q: &Query, sb: &'s Sandbox, city: &str, nights: u32) -> Option<&'s AccommodationRecord> {
    let people = q.people_number.max(1);
    sb.find_accommodations(city)
        .into_iter()
        .filter(|a| hotel_ok(q, a, nights))
        .min_by_key(|a| (a.price.times(a.rooms_for(people)), normalize_key(&a.name)))
}

fn restaurant_key(r: &RestaurantRecord) -> (Money, String) {
    (r.average_cost, normalize_key(&r.name))
}

fn restaurant_id(r: &RestaurantRecord) -> (String, String) {
    (normalize_key(&r.name), normalize_key(&r.city))
}

/// Greedy plan for `q`. Slots that cannot be filled are left as "-".
pub fn greedy_plan(q: &Query, sb: &Sandbox, config: &CriticConfig) -> Itinerary {
    let d = q.days;
    let people = q.people_number;
    if d == 0 {
        return Itinerary::default();
    }
    let nights = night_cities(d, &pick_cities(q, sb));
    let night_of = |day: u32| nights.get(day as usize - 1).cloned();
    let mut days: Vec<DayPlan> = Vec::with_capacity(d as usize);
    let mut legs: Vec<(u32, String, String)> = Vec::new();
    let mut here = q.org.clone();
    for day in 1..=d {
        let next = if day == d { q.org.clone() } else { night_of(day).unwrap_or_else(|| q.dest.clone()) };
        let city = if normalize_key(&next) == normalize_key(&here) {
            next.clone()
        } else {
            legs.push((day, here.clone(), next.clone()));
            format!("from {here} to {next}")
        };
        days.push(DayPlan::blank(day, people, city));
        here = next;
    }

    for ((day, _, _), chosen) in legs.iter().zip(plan_transport(q, sb, &legs)) {
        if let Some(l) = chosen {
            days[*day as usize - 1].transportation = l.render();
        }
    }

    // accommodations per run of nights in the same city
    let mut start = 0usize;
    while start < nights.len() {
        let city = &nights[start];
        let end = (start..nights.len()).find(|i| nights[*i] != *city).unwrap_or(nights.len());
        if let Some(h) = cheapest_hotel(q, sb, city, (end - start) as u32) {
            for plan in &mut days[start..end] {
                plan.accommodation = entity(&h.name, &h.city);
            }
        }
        start = end;
    }

    // meal slots in chronological order with the cities they may use
    let cities_of = |p: &DayPlan| -> Vec<String> {
        CurrentCity::parse(&p.current_city).cities().into_iter().map(String::from).collect()
    };
    let mut slots: Vec<(usize, Meal, Vec<String>)> = Vec::new();
    for (i, plan) in days.iter().enumerate() {
        for meal in Meal::ALL {
            if !config.meals.is_optional(meal, i == 0, i + 1 == days.len()) {
                slots.push((i, meal, cities_of(plan)));
            }
        }
    }
    let candidates = |cities: &[String]| -> Vec<&RestaurantRecord> {
        let mut rs: Vec<&RestaurantRecord> = cities.iter().flat_map(|c| sb.find_restaurants(c)).collect();
        rs.sort_by_key(|r| restaurant_key(r));
        rs
    };
    let mut used: BTreeSet<(String, String)> = BTreeSet::new();
    let mut filled = vec![false; slots.len()];
    if let Some(wanted) = q.cuisines() {
        for cuisine in wanted {
            let already = days.iter().any(|p| {
                Meal::ALL.iter().any(|m| {
                    let e = p.meal(*m);
                    sb.restaurants().iter().any(|r| entity(&r.name, &r.city) == e && r.serves(cuisine))
                })
            });
            if already {
                continue;
            }
            let pick = slots.iter().enumerate().filter(|(k, _)| !filled[*k]).find_map(|(k, (_, _, cities))| {
                candidates(cities)
                    .into_iter()
                    .find(|r| r.serves(cuisine) && !used.contains(&restaurant_id(r)))
                    .map(|r| (k, r))
            });
            if let Some((k, r)) = pick {
                let (i, meal, _) = &slots[k];
                *days[*i].meal_mut(*meal) = entity(&r.name, &r.city);
                used.insert(restaurant_id(r));
                filled[k] = true;
            }
        }
    }
    for (k, (i, meal, cities)) in slots.iter().enumerate() {
        if filled[k] {
            continue;
        }
        if let Some(r) = candidates(cities).into_iter().find(|r| !used.contains(&restaurant_id(r))) {
            *days[*i].meal_mut(*meal) = entity(&r.name, &r.city);
            used.insert(restaurant_id(r));
        }
    }

    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    for plan in &mut days {
        let mut options: Vec<_> = cities_of(plan).iter().flat_map(|c| sb.find_attractions(c)).collect();
        options.sort_by_key(|a| normalize_key(&a.name));
        if let Some(a) = options.into_iter().find(|a| !seen.contains(&(normalize_key(&a.name), normalize_key(&a.city))))
        {
            seen.insert((normalize_key(&a.name), normalize_key(&a.city)));
            plan.attraction = entity(&a.name, &a.city);
        }
    }

    Itinerary::new(days)
}
