//! Random itineraries over a sandbox, and single-defect mutations of good plans.

use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::Rng;

use modulo_core::plan::{DayPlan, Itinerary, Meal, Query};
use modulo_core::sandbox::Sandbox;
use modulo_core::Money;

fn pick<'a, T>(rng: &mut StdRng, items: &'a [T]) -> Option<&'a T> {
    items.choose(rng)
}

fn restaurant(rng: &mut StdRng, sb: &Sandbox, cities: &[String]) -> String {
    let roll: f64 = rng.random();
    if roll < 0.15 {
        return "-".into();
    }
    if roll < 0.22 {
        return format!("Phantom Cafe, {}", cities[0]);
    }
    let city = pick(rng, cities).unwrap();
    match pick(rng, &sb.find_restaurants(city)) {
        Some(r) => format!("{}, {}", r.name, r.city),
        None => "-".into(),
    }
}

/// A trip whose named entities always sit in the day's own cities.
pub fn itinerary(rng: &mut StdRng, sb: &Sandbox, org: &str) -> (Query, Itinerary) {
    let cities = sb.cities();
    let others: Vec<String> = cities.iter().filter(|c| c.as_str() != org).cloned().collect();
    let days = rng.random_range(1..=4u32);
    let people = rng.random_range(1..=7u32);
    let mut here = org.to_string();
    let mut plan = Vec::new();
    for day in 1..=days {
        let last = day == days;
        let travel = day == 1 || (last && here != org) || rng.random_bool(0.3);
        let next = if !travel {
            here.clone()
        } else if last {
            org.to_string()
        } else {
            pick(rng, &others).unwrap().clone()
        };
        let mut d = if travel && next != here {
            DayPlan::blank(day, people, format!("from {here} to {next}"))
        } else {
            DayPlan::blank(day, people, here.clone())
        };
        let day_cities: Vec<String> = if next != here { vec![here.clone(), next.clone()] } else { vec![here.clone()] };
        if next != here {
            let roll: f64 = rng.random();
            let flights = sb.flights_between(&here, &next);
            d.transportation = if roll < 0.4 && !flights.is_empty() {
                let f = pick(rng, &flights).unwrap();
                format!(
                    "Flight, from {here} to {next}, Flight Number: {}, Departure Time: {}, Arrival Time: {}",
                    f.flight_number,
                    f.dep_time.format("%H:%M"),
                    f.arr_time.format("%H:%M")
                )
            } else if roll < 0.6 {
                format!("Taxi, from {here} to {next}")
            } else if roll < 0.8 {
                format!("Self-driving, from {here} to {next}")
            } else if roll < 0.9 {
                format!(
                    "Flight, from {here} to {next}, Flight Number: F9999, Departure Time: 01:00, Arrival Time: 02:00"
                )
            } else {
                "-".into()
            };
        }
        d.breakfast = restaurant(rng, sb, &day_cities);
        d.lunch = restaurant(rng, sb, &day_cities);
        d.dinner = restaurant(rng, sb, &day_cities);
        let roll: f64 = rng.random();
        d.accommodation = if roll < 0.2 {
            "-".into()
        } else if roll < 0.28 {
            format!("Nowhere Hotel, {next}")
        } else {
            match pick(rng, &sb.find_accommodations(&next)) {
                Some(a) => format!("{}, {}", a.name, a.city),
                None => "-".into(),
            }
        };
        plan.push(d);
        here = next;
    }
    let dest = plan
        .iter()
        .find_map(|d| d.current_city.strip_prefix(&format!("from {org} to ")).map(String::from))
        .unwrap_or_else(|| others[0].clone());
    let start: chrono::NaiveDate = "2022-03-13".parse().unwrap();
    let q = Query {
        org: org.into(),
        dest,
        days,
        visiting_city_number: 1,
        people_number: people,
        local_constraint: None,
        budget: Money::from_units(100_000),
        date_range: (0..days).map(|i| start + chrono::Days::new(i as u64)).collect(),
    };
    (q, Itinerary::new(plan))
}

pub const MUTATIONS: usize = 12;

/// Applies mutation `kind` to a copy of `plan`. Some kinds may leave the plan
/// unchanged when the trip is too short for them.
pub fn mutate(plan: &Itinerary, q: &mut Query, sb: &Sandbox, kind: usize, rng: &mut StdRng) -> Itinerary {
    let mut p = plan.clone();
    let n = p.days.len();
    let i = rng.random_range(0..n);
    match kind {
        0 => {
            let meal = *Meal::ALL.choose(rng).unwrap();
            *p.days[i].meal_mut(meal) = "-".into();
        }
        1 => {
            let d = &mut p.days[i];
            if d.lunch != "-" {
                d.dinner = d.lunch.clone();
            }
        }
        2 => {
            let a = p.days[0].attraction.clone();
            p.days[n - 1].attraction = format!("{};{}", p.days[n - 1].attraction, a);
        }
        3 => p.days[i].lunch = format!("Phantom Cafe, {}", q.dest),
        4 => {
            if let Some(d) = p.days.iter_mut().find(|d| d.accommodation != "-") {
                let city = d.accommodation.rsplit_once(", ").map(|(_, c)| c.to_string()).unwrap_or_default();
                if let Some(a) = pick(rng, &sb.find_accommodations(&city)) {
                    d.accommodation = format!("{}, {}", a.name, a.city);
                }
            }
        }
        5 => {
            let d = &mut p.days[0];
            if let Some((from, to)) = d.current_city.strip_prefix("from ").and_then(|s| s.split_once(" to ")) {
                if let Some(f) = pick(rng, &sb.flights_between(from, to)) {
                    d.transportation = format!(
                        "Flight, from {from} to {to}, Flight Number: {}, Departure Time: {}, Arrival Time: {}",
                        f.flight_number,
                        f.dep_time.format("%H:%M"),
                        f.arr_time.format("%H:%M")
                    );
                }
            }
        }
        6 => {
            let d = &mut p.days[0];
            if let Some(rest) = d.current_city.strip_prefix("from ") {
                d.transportation = format!("Self-driving, from {rest}");
            }
        }
        7 => {
            let d = &mut p.days[n - 1];
            if let Some(rest) = d.current_city.strip_prefix("from ") {
                d.transportation = format!("Taxi, from {rest}");
            }
        }
        8 => {
            if n > 1 {
                p.days.remove(i);
                for (k, d) in p.days.iter_mut().enumerate() {
                    d.day = k as u32 + 1;
                }
            }
        }
        9 => {
            for d in &mut p.days {
                d.people_number += 1;
            }
        }
        10 => {
            q.budget = Money::from_cents(rng.random_range(1..=q.budget.cents()));
        }
        _ => {
            let meal = *Meal::ALL.choose(rng).unwrap();
            let used = p.days.iter().flat_map(|x| Meal::ALL.map(|m| x.meal(m).to_string())).find(|m| m != "-");
            if let Some(m) = used {
                *p.days[i].meal_mut(meal) = m;
            }
        }
    }
    p
}
