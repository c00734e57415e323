use std::collections::BTreeSet;

use crate::plan::{is_empty_marker, parse_transportation, Meal};
use crate::sandbox::{normalize_key, TransportMode};

use super::resolve::{day_views, resolve_accommodation, resolve_restaurant};
use super::{CriticId, CriticVerdict, PlanContext};

/// Whether a listing's room type satisfies a requested one.
///
/// Requests use `entire room`, `private room`, `shared room` or
/// `not shared room`; listings use `Entire home/apt`, `Private room` and
/// `Shared room`.
pub fn matches_room_type(wanted: &str, listing: &str) -> bool {
    let wanted = normalize_key(wanted);
    let listing = normalize_key(listing);
    match wanted.as_str() {
        "entire room" | "entire home" | "entire home/apt" => listing.starts_with("entire"),
        "not shared room" => listing != "shared room",
        _ => wanted == listing,
    }
}

/// True when `house_rules` forbids `rule` (e.g. "No pets" forbids "pets").
pub fn house_rule_violated(rule: &str, house_rules: &str) -> bool {
    let forbidden = format!("no {}", normalize_key(rule));
    house_rules.split(['&', ',', ';']).any(|r| normalize_key(r) == forbidden)
}

/// The mode a transportation preference rules out, e.g. "no flight".
pub fn parse_transport_constraint(s: &str) -> Option<TransportMode> {
    let key = normalize_key(s);
    let rest = key.strip_prefix("no ")?;
    let rest = rest.trim_end_matches('s');
    rest.parse().ok()
}

pub(crate) fn room_type_critic(ctx: &PlanContext<'_>) -> CriticVerdict {
    let q = ctx.query;
    let mut problems = Vec::new();
    // (accommodation key, first day, nights, minimum nights)
    let mut runs: Vec<(String, u32, u32, u32, String)> = Vec::new();

    for day in day_views(&ctx.plan.days) {
        let entry = &day.plan.accommodation;
        if is_empty_marker(entry) {
            continue;
        }
        let city = day.night_city();
        let Some(rec) = resolve_accommodation(ctx.sandbox, entry, city) else {
            problems.push(format!("day {}: `{entry}` is not an accommodation in {city}.", day.number));
            continue;
        };
        if let Some(want) = q.room_type() {
            if !matches_room_type(want, &rec.room_type) {
                problems.push(format!(
                    "day {}: {} offers a {} but the traveller wants {want}.",
                    day.number, rec.name, rec.room_type
                ));
            }
        }
        if let Some(rule) = q.house_rule() {
            if house_rule_violated(rule, &rec.house_rules) {
                problems.push(format!(
                    "day {}: {} does not allow {rule} (house rules: {}).",
                    day.number, rec.name, rec.house_rules
                ));
            }
        }
        let key = format!("{}|{}", normalize_key(&rec.name), normalize_key(&rec.city));
        match runs.last_mut() {
            Some(run) if run.0 == key && run.1 + run.2 == day.number => run.2 += 1,
            _ => runs.push((key, day.number, 1, rec.minimum_nights, rec.name.clone())),
        }
    }
    for (_, first, nights, minimum, name) in runs {
        if nights < minimum {
            problems.push(format!(
                "{name} requires at least {minimum} consecutive nights but is booked for {nights} from day {first}."
            ));
        }
    }
    if !problems.is_empty() {
        problems.push("Choose accommodations that satisfy these requirements.".into());
    }
    CriticVerdict::from_problems(CriticId::RoomType, problems)
}

pub(crate) fn cuisine_critic(ctx: &PlanContext<'_>) -> CriticVerdict {
    let Some(wanted) = ctx.query.cuisines() else {
        return CriticVerdict::pass(CriticId::Cuisine);
    };
    let mut served: BTreeSet<String> = BTreeSet::new();
    for day in day_views(&ctx.plan.days) {
        let cities = day.cities();
        for meal in Meal::ALL {
            let entry = day.plan.meal(meal);
            if is_empty_marker(entry) {
                continue;
            }
            if let Some(r) = resolve_restaurant(ctx.sandbox, entry, &cities) {
                served.extend(r.cuisines.iter().map(|c| normalize_key(c)));
            }
        }
    }
    let missing: Vec<&str> =
        wanted.iter().filter(|c| !served.contains(&normalize_key(c))).map(String::as_str).collect();
    let problems = if missing.is_empty() {
        Vec::new()
    } else {
        vec![format!(
            "no chosen restaurant serves {} cuisine. Swap some meals for restaurants that do.",
            missing.join(" or ")
        )]
    };
    CriticVerdict::from_problems(CriticId::Cuisine, problems)
}

pub(crate) fn transportation_critic(ctx: &PlanContext<'_>) -> CriticVerdict {
    let forbidden = ctx.query.transportation().and_then(parse_transport_constraint);
    let mut problems = Vec::new();
    let mut used: BTreeSet<TransportMode> = BTreeSet::new();
    for day in day_views(&ctx.plan.days) {
        match parse_transportation(&day.plan.transportation) {
            Err(e) => problems.push(format!(
                "day {}: {e}; write it as `<Flight|Self-driving|Taxi>, from <city> to <city>`.",
                day.number
            )),
            Ok(None) => {}
            Ok(Some(leg)) => {
                if Some(leg.mode) == forbidden {
                    problems.push(format!(
                        "day {}: the traveller does not want {} but the plan uses it from {} to {}.",
                        day.number,
                        leg.mode.label().to_lowercase(),
                        leg.from,
                        leg.to
                    ));
                }
                used.insert(leg.mode);
            }
        }
    }
    if ctx.config.transport_conflicts
        && used.contains(&TransportMode::SelfDriving)
        && (used.contains(&TransportMode::Flight) || used.contains(&TransportMode::Taxi))
    {
        problems.push(
            "the plan mixes self-driving with flights or taxis; a self-driving trip needs the car for every leg."
                .into(),
        );
    }
    CriticVerdict::from_problems(CriticId::Transportation, problems)
}
