//! Maps plan entries back to sandbox records.

use crate::plan::{parse_entity, CurrentCity, DayPlan};
use crate::sandbox::{AccommodationRecord, AttractionRecord, RestaurantRecord, Sandbox};

fn lookup<'s, T>(entry: &str, cities: &[&str], find: impl Fn(&str, &str) -> Option<&'s T>) -> Option<&'s T> {
    let e = parse_entity(entry, cities);
    match &e.city {
        Some(city) => find(&e.name, city),
        None => cities.iter().find_map(|c| find(&e.name, c)),
    }
}

/// Restaurant named by `entry` in one of `cities`.
pub fn resolve_restaurant<'s>(sb: &'s Sandbox, entry: &str, cities: &[&str]) -> Option<&'s RestaurantRecord> {
    lookup(entry, cities, |n, c| sb.restaurant(n, c))
}

pub fn resolve_attraction<'s>(sb: &'s Sandbox, entry: &str, cities: &[&str]) -> Option<&'s AttractionRecord> {
    lookup(entry, cities, |n, c| sb.attraction(n, c))
}

/// Accommodation named by `entry` in the night's `city`.
pub fn resolve_accommodation<'s>(sb: &'s Sandbox, entry: &str, city: &str) -> Option<&'s AccommodationRecord> {
    lookup(entry, &[city], |n, c| sb.accommodation(n, c))
}

/// One day of a plan with its parsed position.
pub(crate) struct DayView<'a> {
    pub plan: &'a DayPlan,
    pub number: u32,
    pub position: CurrentCity,
    pub is_first: bool,
    pub is_last: bool,
}

impl<'a> DayView<'a> {
    pub fn cities(&self) -> Vec<&str> {
        self.position.cities()
    }

    pub fn night_city(&self) -> &str {
        self.position.end_city()
    }
}

pub(crate) fn day_views(days: &[DayPlan]) -> Vec<DayView<'_>> {
    let n = days.len();
    days.iter()
        .enumerate()
        .map(|(i, d)| DayView {
            plan: d,
            number: i as u32 + 1,
            position: CurrentCity::parse(&d.current_city),
            is_first: i == 0,
            is_last: i + 1 == n,
        })
        .collect()
}
