//! Prompts that ask a language model to write a critic as code.
//!
//! The prompt describes the plan document, the sandbox tables and lookup
//! functions the code may call, and the function to be written.

use crate::plan::ITINERARY_SCHEMA;

use super::{CriticId, UnknownCritic};

const TABLES: &str = "\
Sandbox tables (pandas DataFrames) and their columns:
- flights: Flight Number, Price, DepTime, ArrTime, ActualElapsedTime, FlightDate, OriginCityName, DestCityName, Distance
- accommodations: NAME, price, room type, house_rules, minimum nights, maximum occupancy, review rate number, city
- restaurants: Name, Average Cost, Cuisines, Aggregate Rating, City
- attractions: Name, Latitude, Longitude, Address, Phone, Website, City
- distances: origin_city, dest_city, distance, duration, available_modes

Lookup functions you may call:
- find_flights(origin, dest, date) -> DataFrame of flights on that date
- find_accommodations(city) -> DataFrame
- find_restaurants(city) -> DataFrame
- find_attractions(city) -> DataFrame
- find_distances(origin, dest) -> DataFrame
- get_cost_of_transport(origin, dest, mode, people_number, flight_number=None) -> float
";

const QUERY: &str = "\
The query is a dict with keys org, dest, days, visiting_city_number, people_number, budget, date (list of
YYYY-MM-DD strings) and local_constraint (dict with house rule, cuisine, room type and transportation, each
possibly None).
";

fn task(id: CriticId) -> &'static str {
    match id {
        CriticId::Format => {
            "Write `is_valid_format(plan) -> (bool, str)`. Return True when the plan is a list of day dicts that each \
             carry all nine keys, `day` and `people_number` are positive integers, the remaining fields are non-empty \
             strings and days are numbered 1..n. Otherwise return False and a message naming the offending days and keys."
        }
        CriticId::CompleteInformation => {
            "Write `is_complete_information(plan) -> (bool, str)`. Return False when a required slot holds \"-\": \
             lunch on every day, breakfast on every day but the first, dinner on every day but the last, at least one \
             attraction per day, an accommodation on every day but the last, and transportation on travel days."
        }
        CriticId::DiverseRestaurants => {
            "Write `is_valid_restaurants(plan) -> (bool, str)`. Return False when any restaurant is used for more than \
             one meal across the whole trip, naming the repeated restaurants."
        }
        CriticId::DiverseAttractions => {
            "Write `is_valid_attractions(plan) -> (bool, str)`. Attractions are separated by `;`. Return False when any \
             attraction appears more than once across the whole trip."
        }
        CriticId::ValidateItinerary => {
            "Write `is_valid_information(plan, query) -> (bool, str)`. Check that the plan has query['days'] days, \
             starts by leaving query['org'], ends by returning there, that consecutive days agree on where the \
             traveller is, that it visits query['visiting_city_number'] cities, and that every flight, restaurant, \
             attraction and accommodation exists in the sandbox for the city and date it is used."
        }
        CriticId::RoomType => {
            "Write `is_valid_accommodation(plan, query) -> (bool, str)`. Every accommodation must exist in the city \
             where the traveller spends the night, match the requested room type (\"not shared room\" accepts any room \
             that is not shared), must not forbid the requested house rule (a rule `No pets` forbids `pets`), and must \
             be booked for at least its minimum nights in a row."
        }
        CriticId::Cuisine => {
            "Write `valid_cuisine(plan, query) -> (bool, str)`. Every cuisine in the query's cuisine constraint must be \
             served by at least one restaurant chosen for breakfast, lunch or dinner."
        }
        CriticId::Budget => {
            "Write `get_total_cost(plan, query) -> float`, which parses the plan and adds up the cost of \
             transportation (via get_cost_of_transport), every breakfast, lunch and dinner (Average Cost times \
             people_number) and every night of accommodation (price times the rooms needed, where a room holds \
             `maximum occupancy` people). Then write `valid_cost(plan, query) -> (bool, str)` returning False, with \
             the total and the budget in the message, when get_total_cost exceeds query['budget']."
        }
        CriticId::Transportation => {
            "Write `valid_transportation(plan, query) -> (bool, str)`. Every transportation entry must read \
             `<Flight|Self-driving|Taxi>, from <city> to <city>`, must not use the mode the query rules out (for \
             example \"no flight\"), and a trip that self-drives on any leg must not also fly or take a taxi."
        }
    }
}

/// Code-generation prompt for the critic named `critic_id`.
pub fn emit_extraction_prompt(critic_id: &str) -> Result<String, UnknownCritic> {
    let id: CriticId = critic_id.parse()?;
    Ok(format!(
        "You are writing a Python function that checks a travel plan.\n\n\
         The plan is a JSON document matching this JSON Schema:\n{schema}\n\n\
         {QUERY}\n{TABLES}\n\
         Task:\n{task}\n\n\
         Reply with the Python code only. The message returned on failure is shown to the planner, so make it \
         say precisely what is wrong and how to fix it.\n",
        schema = ITINERARY_SCHEMA.trim_end(),
        task = task(id),
    ))
}
