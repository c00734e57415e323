//! Hand-labelled critic fixtures over the mini sandbox.

use modulo_core::critics::{format_critic, run_critic, CriticConfig, CriticId, CriticVerdict};
use modulo_core::plan::{parse_plan_text, serialize_plan, DayPlan, Itinerary, Query};
use modulo_core::sandbox::Sandbox;

use super::{base_plan, constraint, mini_query};

pub enum Input {
    Plan(Itinerary),
    Text(String),
}

pub struct Case {
    pub name: String,
    pub critic: CriticId,
    pub query: Query,
    pub input: Input,
    pub expect_pass: bool,
}

impl Case {
    pub fn verdict(&self, sb: &Sandbox) -> CriticVerdict {
        match (&self.input, self.critic) {
            (Input::Text(t), _) => format_critic(parse_plan_text(t).as_ref()),
            (Input::Plan(p), CriticId::Format) => {
                let text = serialize_plan(p);
                format_critic(parse_plan_text(&text).as_ref())
            }
            (Input::Plan(p), id) => run_critic(id, p, &self.query, sb, &CriticConfig::default()),
        }
    }
}

fn edit(f: impl FnOnce(&mut Itinerary)) -> Itinerary {
    let mut p = base_plan(1);
    f(&mut p);
    p
}

fn day(plan: &mut Itinerary, n: usize) -> &mut DayPlan {
    &mut plan.days[n - 1]
}

fn q1() -> Query {
    mini_query(1, 1000, None)
}

fn three_day_query() -> Query {
    let mut q = q1();
    q.days = 3;
    q.date_range.push("2022-03-15".parse().unwrap());
    q
}

/// Restaurants repeat here; only the completeness and itinerary critics use it.
fn three_day_plan() -> Itinerary {
    let mut p = base_plan(1);
    let mut mid = DayPlan::blank(2, 1, "CityB");
    mid.breakfast = "Bella Pasta, CityB".into();
    mid.attraction = "Bay Aquarium, CityB".into();
    mid.lunch = "Blue Taco, CityB".into();
    mid.dinner = "Beta Bistro, CityB".into();
    mid.accommodation = "Harbor Inn, CityB".into();
    p.days[1].day = 3;
    p.days[1].transportation = "Taxi, from CityB to CityA".into();
    p.days.insert(1, mid);
    p
}

fn taxi_plan(mode: &str) -> Itinerary {
    edit(|p| {
        day(p, 1).transportation = format!("{mode}, from CityA to CityB");
        day(p, 2).transportation = format!("{mode}, from CityB to CityA");
    })
}

fn hill_house() -> (Query, Itinerary) {
    let mut q = q1();
    q.dest = "CityC".into();
    let mut d1 = DayPlan::blank(1, 1, "from CityA to CityC");
    d1.transportation = "Taxi, from CityA to CityC".into();
    d1.attraction = "Cedar Falls, CityC".into();
    d1.lunch = "Cedar Kitchen, CityC".into();
    d1.dinner = "Aurora Grill, CityA".into();
    d1.accommodation = "Hill House, CityC".into();
    let mut d2 = DayPlan::blank(2, 1, "from CityC to CityA");
    d2.transportation = "Taxi, from CityC to CityA".into();
    d2.breakfast = "Alpha Diner, CityA".into();
    d2.attraction = "Alpha Museum, CityA".into();
    d2.lunch = "-".into();
    (q, Itinerary::new(vec![d1, d2]))
}

fn case(name: &str, critic: CriticId, query: Query, input: Input, expect_pass: bool) -> Case {
    Case { name: name.into(), critic, query, input, expect_pass }
}

fn plan(name: &str, critic: CriticId, query: Query, p: Itinerary, expect_pass: bool) -> Case {
    case(name, critic, query, Input::Plan(p), expect_pass)
}

fn text(name: &str, t: &str, expect_pass: bool) -> Case {
    case(name, CriticId::Format, q1(), Input::Text(t.into()), expect_pass)
}

pub fn all_cases() -> Vec<Case> {
    use CriticId::*;
    let mut v = Vec::new();

    // format
    v.push(plan("base plan", Format, q1(), base_plan(1), true));
    v.push(text(
        "fenced with prose",
        &format!("Here it is:\n```json\n{}\n```\nEnjoy.", serialize_plan(&base_plan(2))),
        true,
    ));
    v.push(plan("all slots empty", Format, q1(), Itinerary::new(vec![DayPlan::blank(1, 1, "CityB")]), true));
    v.push(text("no json at all", "Day 1: fly to CityB and relax.", false));
    v.push(text("truncated json", "[{\"day\": 1, \"people_number\": 1,", false));
    let mut missing = serde_json::to_value(base_plan(1)).unwrap();
    missing[0].as_object_mut().unwrap().remove("dinner");
    v.push(text("day 1 without dinner", &missing.to_string(), false));
    let mut skipped = serde_json::to_value(base_plan(1)).unwrap();
    skipped[1]["day"] = 3.into();
    v.push(text("day numbers skip", &skipped.to_string(), false));
    let mut nobody = serde_json::to_value(base_plan(1)).unwrap();
    nobody[0]["people_number"] = 0.into();
    v.push(text("zero travellers", &nobody.to_string(), false));
    let mut typed = serde_json::to_value(base_plan(1)).unwrap();
    typed[0]["lunch"] = 7.into();
    v.push(text("lunch is a number", &typed.to_string(), false));

    // complete information
    v.push(plan("base plan", CompleteInformation, q1(), base_plan(1), true));
    v.push(plan("three day plan", CompleteInformation, three_day_query(), three_day_plan(), true));
    v.push(plan(
        "optional dinner filled",
        CompleteInformation,
        q1(),
        edit(|p| day(p, 2).dinner = "Aurora Grill, CityA".into()),
        true,
    ));
    v.push(plan("lunch missing", CompleteInformation, q1(), edit(|p| day(p, 1).lunch = "-".into()), false));
    v.push(plan("attraction missing", CompleteInformation, q1(), edit(|p| day(p, 2).attraction = "-".into()), false));
    v.push(plan(
        "first night unbooked",
        CompleteInformation,
        q1(),
        edit(|p| day(p, 1).accommodation = "-".into()),
        false,
    ));
    v.push(plan(
        "travel day without transport",
        CompleteInformation,
        q1(),
        edit(|p| day(p, 1).transportation = "-".into()),
        false,
    ));
    let mut mid_dinner = three_day_plan();
    mid_dinner.days[1].dinner = "-".into();
    v.push(plan("middle day dinner missing", CompleteInformation, three_day_query(), mid_dinner, false));

    // diverse restaurants
    v.push(plan("base plan", DiverseRestaurants, q1(), base_plan(1), true));
    v.push(plan(
        "only empty markers",
        DiverseRestaurants,
        q1(),
        Itinerary::new(vec![DayPlan::blank(1, 1, "CityB"), DayPlan::blank(2, 1, "CityB")]),
        true,
    ));
    v.push(plan(
        "both cities",
        DiverseRestaurants,
        q1(),
        edit(|p| day(p, 2).dinner = "Aurora Grill, CityA".into()),
        true,
    ));
    v.push(plan(
        "repeat across days",
        DiverseRestaurants,
        q1(),
        edit(|p| day(p, 2).breakfast = "Beta Bistro, CityB".into()),
        false,
    ));
    v.push(plan(
        "repeat differing in case",
        DiverseRestaurants,
        q1(),
        edit(|p| day(p, 2).breakfast = "beta bistro, CityB".into()),
        false,
    ));
    v.push(plan(
        "repeat on the same day",
        DiverseRestaurants,
        q1(),
        edit(|p| day(p, 1).dinner = "Beta Bistro, CityB".into()),
        false,
    ));

    // diverse attractions
    v.push(plan("base plan", DiverseAttractions, q1(), base_plan(1), true));
    v.push(plan(
        "two on one day",
        DiverseAttractions,
        q1(),
        edit(|p| day(p, 1).attraction = "Beach Park, CityB;Bay Aquarium, CityB".into()),
        true,
    ));
    v.push(plan(
        "origin attraction",
        DiverseAttractions,
        q1(),
        edit(|p| day(p, 2).attraction = "Alpha Museum, CityA".into()),
        true,
    ));
    v.push(plan(
        "repeat across days",
        DiverseAttractions,
        q1(),
        edit(|p| day(p, 2).attraction = "Beach Park, CityB".into()),
        false,
    ));
    v.push(plan(
        "repeat within a day",
        DiverseAttractions,
        q1(),
        edit(|p| day(p, 1).attraction = "Beach Park, CityB;Beach Park, CityB".into()),
        false,
    ));
    v.push(plan(
        "repeat inside a list",
        DiverseAttractions,
        q1(),
        edit(|p| day(p, 2).attraction = "Boardwalk, CityB;Beach Park, CityB".into()),
        false,
    ));

    // validate itinerary
    v.push(plan("base plan", ValidateItinerary, q1(), base_plan(1), true));
    v.push(plan(
        "afternoon flight",
        ValidateItinerary,
        q1(),
        edit(|p| {
            day(p, 1).transportation =
                "Flight, from CityA to CityB, Flight Number: F0002, Departure Time: 13:30, Arrival Time: 15:30".into()
        }),
        true,
    ));
    v.push(plan("taxi both ways", ValidateItinerary, q1(), taxi_plan("Taxi"), true));
    v.push(plan("three day plan", ValidateItinerary, three_day_query(), three_day_plan(), true));
    v.push(plan("too few days", ValidateItinerary, three_day_query(), base_plan(1), false));
    v.push(plan(
        "unknown flight",
        ValidateItinerary,
        q1(),
        edit(|p| {
            day(p, 1).transportation =
                "Flight, from CityA to CityB, Flight Number: F9999, Departure Time: 08:00, Arrival Time: 10:00".into()
        }),
        false,
    ));
    v.push(plan(
        "flight on another date",
        ValidateItinerary,
        q1(),
        edit(|p| {
            day(p, 1).transportation =
                "Flight, from CityA to CityB, Flight Number: F0005, Departure Time: 07:00, Arrival Time: 09:00".into()
        }),
        false,
    ));
    v.push(plan(
        "unknown restaurant",
        ValidateItinerary,
        q1(),
        edit(|p| day(p, 1).lunch = "Phantom Cafe, CityB".into()),
        false,
    ));
    v.push(plan(
        "broken route",
        ValidateItinerary,
        q1(),
        edit(|p| day(p, 1).current_city = "from CityA to CityC".into()),
        false,
    ));
    v.push(plan("traveller count differs", ValidateItinerary, q1(), base_plan(2), false));

    // room type and house rules
    v.push(plan("no preference", RoomType, q1(), base_plan(1), true));
    v.push(plan(
        "private room wanted",
        RoomType,
        mini_query(1, 1000, constraint(None, &[], Some("private room"), None)),
        base_plan(1),
        true,
    ));
    v.push(plan(
        "not shared wanted",
        RoomType,
        mini_query(1, 1000, constraint(None, &[], Some("not shared room"), None)),
        base_plan(1),
        true,
    ));
    v.push(plan(
        "entire home allowing parties",
        RoomType,
        mini_query(1, 1000, constraint(Some("parties"), &[], Some("entire room"), None)),
        edit(|p| day(p, 1).accommodation = "Bay Suites, CityB".into()),
        true,
    ));
    v.push(plan(
        "entire room wanted",
        RoomType,
        mini_query(1, 1000, constraint(None, &[], Some("entire room"), None)),
        base_plan(1),
        false,
    ));
    v.push(plan(
        "parties banned",
        RoomType,
        mini_query(1, 1000, constraint(Some("parties"), &[], None, None)),
        base_plan(1),
        false,
    ));
    v.push(plan(
        "hotel in another city",
        RoomType,
        q1(),
        edit(|p| day(p, 1).accommodation = "Origin Lodge, CityB".into()),
        false,
    ));
    let (hq, hp) = hill_house();
    v.push(plan("minimum nights unmet", RoomType, hq, hp, false));

    // cuisine
    let cuisine = |c: &[&str]| mini_query(1, 1000, constraint(None, c, None, None));
    v.push(plan("mexican and italian", Cuisine, cuisine(&["Mexican", "Italian"]), base_plan(1), true));
    v.push(plan("french", Cuisine, cuisine(&["French"]), base_plan(1), true));
    v.push(plan("american", Cuisine, cuisine(&["american"]), base_plan(1), true));
    v.push(plan("no preference", Cuisine, q1(), base_plan(1), true));
    v.push(plan("indian never served", Cuisine, cuisine(&["Indian"]), base_plan(1), false));
    v.push(plan("thai never served", Cuisine, cuisine(&["French", "Thai"]), base_plan(1), false));
    v.push(plan("mexican dropped", Cuisine, cuisine(&["Mexican"]), edit(|p| day(p, 1).dinner = "-".into()), false));

    // budget
    v.push(plan("well under", Budget, q1(), base_plan(1), true));
    v.push(plan("exactly at budget", Budget, mini_query(1, 387, None), base_plan(1), true));
    v.push(plan("one over the cost", Budget, mini_query(1, 388, None), base_plan(1), true));
    v.push(plan(
        "nothing booked",
        Budget,
        mini_query(1, 1, None),
        Itinerary::new(vec![DayPlan::blank(1, 1, "CityA")]),
        true,
    ));
    v.push(plan("one under the cost", Budget, mini_query(1, 386, None), base_plan(1), false));
    v.push(plan("far under the cost", Budget, mini_query(1, 300, None), base_plan(1), false));
    v.push(plan("three travellers", Budget, mini_query(3, 1000, None), base_plan(3), false));

    // transportation
    let transport = |t: &str| mini_query(1, 1000, constraint(None, &[], None, Some(t)));
    v.push(plan("no preference", Transportation, q1(), base_plan(1), true));
    v.push(plan("flights without driving", Transportation, transport("no self-driving"), base_plan(1), true));
    v.push(plan("taxis without flights", Transportation, transport("no flight"), taxi_plan("Taxi"), true));
    v.push(plan("driving only", Transportation, q1(), taxi_plan("Self-driving"), true));
    v.push(plan("flights forbidden", Transportation, transport("no flight"), base_plan(1), false));
    v.push(plan(
        "driving then flying",
        Transportation,
        q1(),
        edit(|p| day(p, 1).transportation = "Self-driving, from CityA to CityB".into()),
        false,
    ));
    v.push(plan("taxis forbidden", Transportation, transport("no taxi"), taxi_plan("Taxi"), false));
    v.push(plan(
        "unknown mode",
        Transportation,
        q1(),
        edit(|p| day(p, 1).transportation = "By boat, from CityA to CityB".into()),
        false,
    ));

    v
}
