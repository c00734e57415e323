#![allow(dead_code)]

pub mod cases;
pub mod oracle;
pub mod random;

use std::path::PathBuf;
use std::sync::{Mutex, OnceLock};

use modulo_core::critics::{CriticId, CriticVerdict};
use modulo_core::generator::{GeneratorError, PlanGenerator, Reply};
use modulo_core::metacontroller::{IterationTrace, ReformatOutcome, SessionConfig, SessionHeader, SessionResult};
use modulo_core::plan::{serialize_plan, DayPlan, Itinerary, LocalConstraint, Query, ReformatFailure};
use modulo_core::sandbox::{load_sandbox, Sandbox};
use modulo_core::Money;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn mini_dir() -> PathBuf {
    fixtures().join("mini-sandbox")
}

pub fn synthetic_dir() -> PathBuf {
    fixtures().join("synthetic")
}

pub fn mini() -> &'static Sandbox {
    static SB: OnceLock<Sandbox> = OnceLock::new();
    SB.get_or_init(|| load_sandbox(mini_dir()).unwrap().0)
}

pub fn synthetic() -> &'static Sandbox {
    static SB: OnceLock<Sandbox> = OnceLock::new();
    SB.get_or_init(|| load_sandbox(synthetic_dir()).unwrap().0)
}

pub fn mini_raw() -> &'static oracle::RawTables {
    static T: OnceLock<oracle::RawTables> = OnceLock::new();
    T.get_or_init(|| oracle::RawTables::load(&mini_dir()))
}

pub fn synthetic_raw() -> &'static oracle::RawTables {
    static T: OnceLock<oracle::RawTables> = OnceLock::new();
    T.get_or_init(|| oracle::RawTables::load(&synthetic_dir()))
}

pub fn mini_queries() -> Vec<Query> {
    Query::parse_corpus(&std::fs::read_to_string(fixtures().join("queries/mini.jsonl")).unwrap()).unwrap()
}

pub fn synthetic_queries() -> Vec<Query> {
    Query::parse_corpus(&std::fs::read_to_string(synthetic_dir().join("queries.jsonl")).unwrap()).unwrap()
}

/// CityA -> CityB over 2022-03-13/14.
pub fn mini_query(people: u32, budget: i64, constraint: Option<LocalConstraint>) -> Query {
    Query {
        org: "CityA".into(),
        dest: "CityB".into(),
        days: 2,
        visiting_city_number: 1,
        people_number: people,
        local_constraint: constraint,
        budget: Money::from_units(budget),
        date_range: vec!["2022-03-13".parse().unwrap(), "2022-03-14".parse().unwrap()],
    }
}

pub fn constraint(
    house_rule: Option<&str>,
    cuisine: &[&str],
    room_type: Option<&str>,
    transportation: Option<&str>,
) -> Option<LocalConstraint> {
    Some(LocalConstraint {
        house_rule: house_rule.map(String::from),
        cuisine: (!cuisine.is_empty()).then(|| cuisine.iter().map(|c| c.to_string()).collect()),
        room_type: room_type.map(String::from),
        transportation: transportation.map(String::from),
    })
}

/// A hand-built two-day plan for the mini route that satisfies every rule.
/// Its cost for one traveller is 387.
pub fn base_plan(people: u32) -> Itinerary {
    Itinerary::new(vec![
        DayPlan {
            day: 1,
            people_number: people,
            current_city: "from CityA to CityB".into(),
            transportation:
                "Flight, from CityA to CityB, Flight Number: F0001, Departure Time: 08:00, Arrival Time: 10:00".into(),
            breakfast: "-".into(),
            attraction: "Beach Park, CityB".into(),
            lunch: "Beta Bistro, CityB".into(),
            dinner: "Blue Taco, CityB".into(),
            accommodation: "Harbor Inn, CityB".into(),
        },
        DayPlan {
            day: 2,
            people_number: people,
            current_city: "from CityB to CityA".into(),
            transportation:
                "Flight, from CityB to CityA, Flight Number: F0003, Departure Time: 18:00, Arrival Time: 20:00".into(),
            breakfast: "Bella Pasta, CityB".into(),
            attraction: "Boardwalk, CityB".into(),
            lunch: "Alpha Diner, CityA".into(),
            dinner: "-".into(),
            accommodation: "-".into(),
        },
    ])
}

pub fn to_value(it: &Itinerary) -> serde_json::Value {
    serde_json::to_value(it).unwrap()
}

pub fn oracle_query(q: &Query) -> oracle::OracleQuery<'_> {
    oracle::OracleQuery {
        org: &q.org,
        dest: &q.dest,
        days: q.days as usize,
        cities: q.visiting_city_number as usize,
        people: q.people_number,
        budget_cents: q.budget.cents(),
        dates: q.date_range.iter().map(|d| d.to_string()).collect(),
        room_type: q.room_type(),
        house_rule: q.house_rule(),
        cuisines: q.cuisines().map(|c| c.iter().map(String::as_str).collect()).unwrap_or_default(),
        transportation: q.transportation(),
    }
}

pub fn failing(verdicts: &[CriticVerdict]) -> Vec<CriticId> {
    verdicts.iter().filter(|v| !v.passed).map(|v| v.critic_id).collect()
}

/// A plan defect the repair generator will fix once the matching critic complains.
pub struct Fault {
    pub label: &'static str,
    pub apply: Box<dyn Fn(&mut Itinerary) + Send + Sync>,
}

impl Fault {
    pub fn new(label: &'static str, apply: impl Fn(&mut Itinerary) + Send + Sync + 'static) -> Self {
        Fault { label, apply: Box::new(apply) }
    }
}

/// Emits a correct plan spoiled by its remaining faults. Each call first drops
/// the earliest fault whose critic label shows up in the prompt's feedback.
/// A fault labelled "Format" turns the reply into prose.
pub struct RepairGenerator {
    good: Itinerary,
    faults: Mutex<Vec<Fault>>,
}

impl RepairGenerator {
    pub fn new(good: Itinerary, faults: Vec<Fault>) -> Self {
        RepairGenerator { good, faults: Mutex::new(faults) }
    }

    pub fn remaining(&self) -> usize {
        self.faults.lock().unwrap().len()
    }
}

impl PlanGenerator for RepairGenerator {
    fn generate(&self, prompt: &str) -> Result<Reply, GeneratorError> {
        let mut faults = self.faults.lock().unwrap();
        if let Some(pos) = faults.iter().position(|f| prompt.contains(&format!("- {}:", f.label))) {
            faults.remove(pos);
        }
        if faults.iter().any(|f| f.label == "Format") {
            return Ok(Reply::text("I would fly out on the first morning and come back on the last evening."));
        }
        let mut plan = self.good.clone();
        for f in faults.iter() {
            (f.apply)(&mut plan);
        }
        Ok(Reply::text(serialize_plan(&plan)))
    }

    fn description(&self) -> String {
        "repair".into()
    }
}

fn trace(iteration: u32, fired: &[CriticId]) -> IterationTrace {
    let verdicts: Vec<CriticVerdict> = if fired == [CriticId::Format] {
        vec![CriticVerdict::from_problems(CriticId::Format, vec!["no JSON".into()])]
    } else {
        CriticId::ALL
            .iter()
            .map(|id| {
                if fired.contains(id) {
                    CriticVerdict::from_problems(*id, vec![format!("problem {iteration}")])
                } else {
                    CriticVerdict::pass(*id)
                }
            })
            .collect()
    };
    let reformat = if fired == [CriticId::Format] {
        ReformatOutcome::Failed { failure: ReformatFailure::NoJsonFound }
    } else {
        ReformatOutcome::Parsed { plan: base_plan(1) }
    };
    IterationTrace {
        iteration,
        prompt: format!("prompt {iteration}"),
        reply: format!("reply {iteration}"),
        rewrite_reply: None,
        reformat,
        verdicts,
        telemetry: None,
    }
}

fn session_of(budget: i64, traces: Vec<IterationTrace>) -> SessionResult {
    let all_passed = traces.last().is_some_and(|t| t.all_passed());
    let final_plan = traces.iter().rev().find_map(|t| t.reformat.plan().cloned());
    SessionResult {
        header: SessionHeader { generator: "fixture".into(), config: SessionConfig::default() },
        query: mini_query(1, budget, None),
        delivered: final_plan.is_some(),
        final_plan,
        all_passed,
        iterations_used: traces.len() as u32,
        error: None,
        traces,
    }
}

/// Two sessions whose failing critics per iteration are:
/// A: {valid_cost, is_valid_information}, {valid_cost}, {}
/// B: {is_valid_format}, {valid_cost, is_valid_accommodation, is_valid_information}, {is_valid_accommodation}
pub fn two_session_fixture() -> Vec<SessionResult> {
    use CriticId::*;
    vec![
        session_of(1000, vec![trace(1, &[Budget, ValidateItinerary]), trace(2, &[Budget]), trace(3, &[])]),
        session_of(
            1000,
            vec![trace(1, &[Format]), trace(2, &[Budget, RoomType, ValidateItinerary]), trace(3, &[RoomType])],
        ),
    ]
}

/// Hand tallies for [`two_session_fixture`].
pub const FREQUENCY: &str = "critic_id,group,count
is_valid_format,format,1
is_complete_information,commonsense,0
is_valid_restaurants,commonsense,0
is_valid_attractions,commonsense,0
is_valid_information,commonsense,2
is_valid_accommodation,hard,2
valid_cuisine,hard,0
valid_cost,hard,3
valid_transportation,hard,0
";

pub const COOCCURRENCE: &str = "critic_id,is_valid_format,is_complete_information,is_valid_restaurants,is_valid_attractions,is_valid_information,is_valid_accommodation,valid_cuisine,valid_cost,valid_transportation
is_valid_format,1,0,0,0,0,0,0,0,0
is_complete_information,0,0,0,0,0,0,0,0,0
is_valid_restaurants,0,0,0,0,0,0,0,0,0
is_valid_attractions,0,0,0,0,0,0,0,0,0
is_valid_information,0,0,0,0,2,1,0,2,0
is_valid_accommodation,0,0,0,0,1,2,0,1,0
valid_cuisine,0,0,0,0,0,0,0,0,0
valid_cost,0,0,0,0,2,1,0,3,0
valid_transportation,0,0,0,0,0,0,0,0,0
";
