use std::collections::BTreeMap;

use crate::plan::{attraction_entries, is_empty_marker, parse_entity, parse_transportation, CurrentCity, Meal};
use crate::sandbox::{normalize_key, TransportMode};

use super::resolve::{day_views, resolve_accommodation, resolve_attraction, resolve_restaurant};
use super::{CriticId, CriticVerdict, PlanContext};

pub(crate) fn complete_information_critic(ctx: &PlanContext<'_>) -> CriticVerdict {
    let allowance = &ctx.config.meals;
    let mut problems = Vec::new();
    if ctx.plan.is_empty() {
        problems.push("the plan has no days.".into());
    }
    for day in day_views(&ctx.plan.days) {
        let n = day.number;
        let mut missing: Vec<&str> = Vec::new();
        if is_empty_marker(&day.plan.current_city) {
            missing.push("current_city");
        }
        if day.position.is_travel() && is_empty_marker(&day.plan.transportation) {
            missing.push("transportation");
        }
        for meal in Meal::ALL {
            if is_empty_marker(day.plan.meal(meal)) && !allowance.is_optional(meal, day.is_first, day.is_last) {
                missing.push(meal.key());
            }
        }
        if attraction_entries(&day.plan.attraction).is_empty() {
            missing.push("attraction");
        }
        if !day.is_last && is_empty_marker(&day.plan.accommodation) {
            missing.push("accommodation");
        }
        if !missing.is_empty() {
            problems.push(format!("day {n} leaves {} empty.", missing.join(", ")));
        }
    }
    if !problems.is_empty() {
        problems.push("Fill every required slot with an option from the provided information.".into());
    }
    CriticVerdict::from_problems(CriticId::CompleteInformation, problems)
}

/// Names that occur more than once, with the days they occur on.
fn repeats(entries: Vec<(u32, String, String)>) -> Vec<String> {
    let mut seen: BTreeMap<String, (String, Vec<u32>)> = BTreeMap::new();
    let mut order = Vec::new();
    for (day, key, name) in entries {
        let slot = seen.entry(key.clone()).or_insert_with(|| {
            order.push(key.clone());
            (name, Vec::new())
        });
        slot.1.push(day);
    }
    order
        .into_iter()
        .filter_map(|k| {
            let (name, days) = &seen[&k];
            (days.len() > 1).then(|| {
                let days: Vec<String> = days.iter().map(u32::to_string).collect();
                format!("{name} appears {} times (days {}).", days.len(), days.join(", "))
            })
        })
        .collect()
}

pub(crate) fn diverse_restaurants_critic(ctx: &PlanContext<'_>) -> CriticVerdict {
    let mut entries = Vec::new();
    for day in day_views(&ctx.plan.days) {
        let cities = day.cities();
        for meal in Meal::ALL {
            let entry = day.plan.meal(meal);
            if is_empty_marker(entry) {
                continue;
            }
            let name = parse_entity(entry, &cities).name;
            entries.push((day.number, normalize_key(&name), name));
        }
    }
    let mut problems = repeats(entries);
    if !problems.is_empty() {
        problems.push("Visit a different restaurant for every meal.".into());
    }
    CriticVerdict::from_problems(CriticId::DiverseRestaurants, problems)
}

pub(crate) fn diverse_attractions_critic(ctx: &PlanContext<'_>) -> CriticVerdict {
    let mut entries = Vec::new();
    for day in day_views(&ctx.plan.days) {
        let cities = day.cities();
        for entry in attraction_entries(&day.plan.attraction) {
            let name = parse_entity(entry, &cities).name;
            entries.push((day.number, normalize_key(&name), name));
        }
    }
    let mut problems = repeats(entries);
    if !problems.is_empty() {
        problems.push("Visit each attraction at most once.".into());
    }
    CriticVerdict::from_problems(CriticId::DiverseAttractions, problems)
}

pub(crate) fn validate_itinerary_critic(ctx: &PlanContext<'_>) -> CriticVerdict {
    let (q, sb) = (ctx.query, ctx.sandbox);
    let views = day_views(&ctx.plan.days);
    let mut problems = Vec::new();

    if views.len() != q.days as usize {
        problems.push(format!("the plan covers {} days but the trip lasts {} days.", views.len(), q.days));
    }
    let org = normalize_key(&q.org);
    match views.first().map(|d| &d.position) {
        Some(CurrentCity::Travel { from, .. }) if normalize_key(from) == org => {}
        Some(_) => problems.push(format!("day 1 must start by travelling from {}.", q.org)),
        None => {}
    }
    match views.last().map(|d| &d.position) {
        Some(CurrentCity::Travel { to, .. }) if normalize_key(to) == org => {}
        Some(_) => problems.push(format!("the last day must end by returning to {}.", q.org)),
        None => {}
    }

    let mut here = q.org.clone();
    let mut visited: Vec<String> = Vec::new();
    for day in &views {
        let n = day.number;
        if day.plan.people_number != q.people_number {
            problems.push(format!(
                "day {n} is planned for {} people but {} are travelling.",
                day.plan.people_number, q.people_number
            ));
        }
        match &day.position {
            CurrentCity::Travel { from, to } => {
                if normalize_key(from) != normalize_key(&here) {
                    problems.push(format!("day {n} departs from {from} but the traveller is in {here}."));
                }
                here = to.clone();
            }
            CurrentCity::Stay(c) => {
                if normalize_key(c) != normalize_key(&here) {
                    problems.push(format!("day {n} is spent in {c} but the traveller is in {here}."));
                }
            }
        }
        let end = normalize_key(day.night_city());
        if end != org && !visited.contains(&end) {
            visited.push(end);
        }

        match (parse_transportation(&day.plan.transportation), &day.position) {
            // unparseable entries are the transportation critic's concern
            (Err(_), _) | (Ok(None), CurrentCity::Stay(_)) => {}
            (Ok(None), CurrentCity::Travel { from, to }) => {
                problems.push(format!("day {n} has no transportation from {from} to {to}."));
            }
            (Ok(Some(leg)), CurrentCity::Stay(c)) => {
                problems.push(format!("day {n} stays in {c} but lists travel from {} to {}.", leg.from, leg.to));
            }
            (Ok(Some(leg)), CurrentCity::Travel { from, to }) => {
                if normalize_key(&leg.from) != normalize_key(from) || normalize_key(&leg.to) != normalize_key(to) {
                    problems.push(format!(
                        "day {n} travels from {from} to {to} but the transportation goes from {} to {}.",
                        leg.from, leg.to
                    ));
                } else if leg.mode == TransportMode::Flight {
                    let number = leg.flight_number.as_deref().unwrap_or("");
                    match sb.find_flight(number, from, to) {
                        None => problems.push(format!("day {n}: there is no flight {number} from {from} to {to}.")),
                        Some(f) => {
                            if q.date_of(n).is_some_and(|d| d != f.flight_date) {
                                problems.push(format!(
                                    "day {n}: flight {number} departs on {}, not on day {n} of the trip.",
                                    f.flight_date
                                ));
                            }
                            if leg.departure.is_some_and(|t| t != f.dep_time)
                                || leg.arrival.is_some_and(|t| t != f.arr_time)
                            {
                                problems.push(format!(
                                    "day {n}: flight {number} departs at {} and arrives at {}.",
                                    f.dep_time.format("%H:%M"),
                                    f.arr_time.format("%H:%M")
                                ));
                            }
                        }
                    }
                } else if !sb.find_distances(from, to).iter().any(|d| d.allows(leg.mode)) {
                    problems.push(format!(
                        "day {n}: {} is not available from {from} to {to}.",
                        leg.mode.label().to_lowercase()
                    ));
                }
            }
        }

        let cities = day.cities();
        for meal in Meal::ALL {
            let entry = day.plan.meal(meal);
            if !is_empty_marker(entry) && resolve_restaurant(sb, entry, &cities).is_none() {
                problems.push(format!(
                    "day {n}: {} `{entry}` is not a restaurant in {}.",
                    meal.key(),
                    cities.join(" or ")
                ));
            }
        }
        for entry in attraction_entries(&day.plan.attraction) {
            if resolve_attraction(sb, entry, &cities).is_none() {
                problems.push(format!("day {n}: `{entry}` is not an attraction in {}.", cities.join(" or ")));
            }
        }
        let acc = &day.plan.accommodation;
        if !is_empty_marker(acc) && resolve_accommodation(sb, acc, day.night_city()).is_none() {
            problems.push(format!("day {n}: `{acc}` is not an accommodation in {}.", day.night_city()));
        }
    }

    let expected = q.visiting_city_number as usize;
    if !views.is_empty() && visited.len() != expected {
        problems.push(format!("the plan visits {} cities but the trip should visit {expected}.", visited.len()));
    }
    if expected == 1 && visited.len() == 1 && visited[0] != normalize_key(&q.dest) {
        problems.push(format!("the trip should go to {}, not {}.", q.dest, visited[0]));
    }

    if !problems.is_empty() {
        problems.push(
            "Only use cities, flights, restaurants, attractions and accommodations from the provided information."
                .into(),
        );
    }
    CriticVerdict::from_problems(CriticId::ValidateItinerary, problems)
}
