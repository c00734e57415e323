use crate::money::Money;
use crate::plan::{is_empty_marker, parse_transportation, Itinerary, Meal, Query};
use crate::sandbox::Sandbox;

use super::resolve::{day_views, resolve_accommodation, resolve_restaurant};
use super::{CriticId, CriticVerdict, PlanContext};

/// Total trip cost in sandbox prices.
///
/// Transport legs use the sandbox cost model, each non-empty meal costs the
/// restaurant's average cost per traveller, and each non-empty accommodation
/// entry is one night at price × rooms needed. Entries that cannot be
/// resolved contribute nothing; other critics report them.
pub fn get_total_cost(it: &Itinerary, q: &Query, sb: &Sandbox) -> Money {
    let people = q.people_number.max(1);
    let mut total = Money::ZERO;
    for day in day_views(&it.days) {
        if let Ok(Some(leg)) = parse_transportation(&day.plan.transportation) {
            total += sb
                .get_cost_of_transport(&leg.from, &leg.to, leg.mode, people, leg.flight_number.as_deref())
                .unwrap_or(Money::ZERO);
        }
        let cities = day.cities();
        for meal in Meal::ALL {
            let entry = day.plan.meal(meal);
            if is_empty_marker(entry) {
                continue;
            }
            if let Some(r) = resolve_restaurant(sb, entry, &cities) {
                total += r.average_cost.times(people);
            }
        }
        if !is_empty_marker(&day.plan.accommodation) {
            if let Some(a) = resolve_accommodation(sb, &day.plan.accommodation, day.night_city()) {
                total += a.price.times(a.rooms_for(people));
            }
        }
    }
    total
}

pub(crate) fn budget_critic(ctx: &PlanContext<'_>) -> CriticVerdict {
    let total = get_total_cost(ctx.plan, ctx.query, ctx.sandbox);
    let budget = ctx.query.budget;
    let problems = if total > budget {
        vec![format!(
            "the plan costs ${total} in total, which exceeds the budget of ${budget} by ${}. \
             Replace expensive flights, accommodations or restaurants with cheaper ones.",
            total - budget
        )]
    } else {
        Vec::new()
    };
    CriticVerdict::from_problems(CriticId::Budget, problems)
}
