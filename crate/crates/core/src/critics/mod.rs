//! Binary plan critics, each pairing a verdict with a corrective backprompt.
//!
//! Critics are grouped into format, commonsense and hard constraints. The
//! format critic always runs first and, when it fails, is the only verdict
//! produced. Every critic is a pure function of plan, query and sandbox.

mod commonsense;
mod cost;
mod format;
mod hard;
mod prompt;
mod resolve;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::plan::{Itinerary, Meal, Query, ReformatFailure};
use crate::sandbox::Sandbox;

pub use cost::get_total_cost;
pub use hard::{house_rule_violated, matches_room_type, parse_transport_constraint};
pub use prompt::emit_extraction_prompt;
pub use resolve::{resolve_accommodation, resolve_attraction, resolve_restaurant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    Format,
    Commonsense,
    Hard,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Format => "format",
            Group::Commonsense => "commonsense",
            Group::Hard => "hard",
        })
    }
}

/// The registered critics, in registry (evaluation) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CriticId {
    #[serde(rename = "is_valid_format")]
    Format,
    #[serde(rename = "is_complete_information")]
    CompleteInformation,
    #[serde(rename = "is_valid_restaurants")]
    DiverseRestaurants,
    #[serde(rename = "is_valid_attractions")]
    DiverseAttractions,
    #[serde(rename = "is_valid_information")]
    ValidateItinerary,
    #[serde(rename = "is_valid_accommodation")]
    RoomType,
    #[serde(rename = "valid_cuisine")]
    Cuisine,
    #[serde(rename = "valid_cost")]
    Budget,
    #[serde(rename = "valid_transportation")]
    Transportation,
}

impl CriticId {
    pub const ALL: [CriticId; 9] = [
        CriticId::Format,
        CriticId::CompleteInformation,
        CriticId::DiverseRestaurants,
        CriticId::DiverseAttractions,
        CriticId::ValidateItinerary,
        CriticId::RoomType,
        CriticId::Cuisine,
        CriticId::Budget,
        CriticId::Transportation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CriticId::Format => "is_valid_format",
            CriticId::CompleteInformation => "is_complete_information",
            CriticId::DiverseRestaurants => "is_valid_restaurants",
            CriticId::DiverseAttractions => "is_valid_attractions",
            CriticId::ValidateItinerary => "is_valid_information",
            CriticId::RoomType => "is_valid_accommodation",
            CriticId::Cuisine => "valid_cuisine",
            CriticId::Budget => "valid_cost",
            CriticId::Transportation => "valid_transportation",
        }
    }

    /// Short label that opens every backprompt of this critic.
    pub fn label(self) -> &'static str {
        match self {
            CriticId::Format => "Format",
            CriticId::CompleteInformation => "Complete information",
            CriticId::DiverseRestaurants => "Diverse restaurants",
            CriticId::DiverseAttractions => "Diverse attractions",
            CriticId::ValidateItinerary => "Itinerary",
            CriticId::RoomType => "Accommodation",
            CriticId::Cuisine => "Cuisine",
            CriticId::Budget => "Budget",
            CriticId::Transportation => "Transportation",
        }
    }

    pub fn group(self) -> Group {
        match self {
            CriticId::Format => Group::Format,
            CriticId::CompleteInformation
            | CriticId::DiverseRestaurants
            | CriticId::DiverseAttractions
            | CriticId::ValidateItinerary => Group::Commonsense,
            CriticId::RoomType | CriticId::Cuisine | CriticId::Budget | CriticId::Transportation => Group::Hard,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CriticId::Format => "The plan is a JSON array of day objects carrying all nine keys with well-typed values.",
            CriticId::CompleteInformation => "No required slot is left as \"-\" (meals per the allowance mask, daily attraction, nightly accommodation, travel-day transport).",
            CriticId::DiverseRestaurants => "No restaurant is visited more than once across the trip.",
            CriticId::DiverseAttractions => "No attraction is visited more than once across the trip.",
            CriticId::ValidateItinerary => "The route, day count, city count and every named flight, restaurant, attraction and accommodation are consistent with the query and the sandbox.",
            CriticId::RoomType => "Every accommodation exists in the night's city, matches the room-type and house-rule preferences and respects its minimum stay.",
            CriticId::Cuisine => "Every requested cuisine is served by at least one chosen restaurant.",
            CriticId::Budget => "The total trip cost does not exceed the budget.",
            CriticId::Transportation => "Transportation entries parse, avoid any forbidden mode and do not mix self-driving with flights or taxis.",
        }
    }

    /// Whether this critic counts toward the evaluation metrics for `q`.
    ///
    /// Commonsense critics always apply; budget always applies; the other
    /// hard critics apply only when the query states the matching preference.
    pub fn applies_to(self, q: &Query) -> bool {
        match self {
            CriticId::Format => false,
            CriticId::CompleteInformation
            | CriticId::DiverseRestaurants
            | CriticId::DiverseAttractions
            | CriticId::ValidateItinerary
            | CriticId::Budget => true,
            CriticId::RoomType => q.room_type().is_some() || q.house_rule().is_some(),
            CriticId::Cuisine => q.cuisines().is_some(),
            CriticId::Transportation => q.transportation().is_some(),
        }
    }
}

impl fmt::Display for CriticId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown critic `{given}`; valid ids: {}", valid_ids().join(", "))]
pub struct UnknownCritic {
    pub given: String,
}

pub fn valid_ids() -> Vec<&'static str> {
    CriticId::ALL.iter().map(|c| c.as_str()).collect()
}

impl FromStr for CriticId {
    type Err = UnknownCritic;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CriticId::ALL.into_iter().find(|c| c.as_str() == s.trim()).ok_or_else(|| UnknownCritic { given: s.to_string() })
    }
}

/// One critic's judgement of one plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticVerdict {
    pub critic_id: CriticId,
    pub group: Group,
    pub passed: bool,
    /// Empty iff `passed`.
    pub backprompt: String,
}

impl CriticVerdict {
    pub fn pass(id: CriticId) -> Self {
        CriticVerdict { critic_id: id, group: id.group(), passed: true, backprompt: String::new() }
    }

    /// Passes when `problems` is empty, otherwise fails with a labelled backprompt.
    pub fn from_problems(id: CriticId, problems: Vec<String>) -> Self {
        if problems.is_empty() {
            return Self::pass(id);
        }
        CriticVerdict {
            critic_id: id,
            group: id.group(),
            passed: false,
            backprompt: format!("{}: {}", id.label(), problems.join(" ")),
        }
    }
}

/// Named critic subsets used for ablations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    All,
    Common,
    Hard,
    Json,
}

impl Selector {
    pub fn includes(self, id: CriticId) -> bool {
        matches!(
            (self, id.group()),
            (_, Group::Format)
                | (Selector::All, _)
                | (Selector::Common, Group::Commonsense)
                | (Selector::Hard, Group::Hard)
        )
    }
}

impl FromStr for Selector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_lowercase().as_str() {
            "all" => Ok(Selector::All),
            "common" | "commonsense" => Ok(Selector::Common),
            "hard" => Ok(Selector::Hard),
            "json" | "format" => Ok(Selector::Json),
            other => Err(format!("unknown critic selector `{other}` (expected all, common, hard or json)")),
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Selector::All => "all",
            Selector::Common => "common",
            Selector::Hard => "hard",
            Selector::Json => "json",
        })
    }
}

/// A selector resolved to its ordered critic list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticSet {
    pub selector: Selector,
    pub critics: Vec<CriticId>,
}

impl CriticSet {
    pub fn new(selector: Selector) -> Self {
        CriticSet { selector, critics: CriticId::ALL.into_iter().filter(|c| selector.includes(*c)).collect() }
    }

    pub fn contains(&self, id: CriticId) -> bool {
        self.critics.contains(&id)
    }
}

/// Which meals may be left as "-" on which days.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MealAllowance {
    pub first_day: Vec<Meal>,
    pub last_day: Vec<Meal>,
    pub every_day: Vec<Meal>,
}

impl Default for MealAllowance {
    fn default() -> Self {
        MealAllowance { first_day: vec![Meal::Breakfast], last_day: vec![Meal::Dinner], every_day: Vec::new() }
    }
}

impl MealAllowance {
    pub fn is_optional(&self, meal: Meal, is_first: bool, is_last: bool) -> bool {
        self.every_day.contains(&meal)
            || (is_first && self.first_day.contains(&meal))
            || (is_last && self.last_day.contains(&meal))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CriticConfig {
    pub meals: MealAllowance,
    /// Flag trips that mix self-driving with flights or taxis.
    pub transport_conflicts: bool,
}

impl Default for CriticConfig {
    fn default() -> Self {
        CriticConfig { meals: MealAllowance::default(), transport_conflicts: true }
    }
}

/// What the reformatter produced for one generator reply.
pub type PlanInput<'a> = Result<&'a Itinerary, &'a ReformatFailure>;

/// Inputs shared by every critic of one evaluation.
pub struct PlanContext<'a> {
    pub plan: &'a Itinerary,
    pub query: &'a Query,
    pub sandbox: &'a Sandbox,
    pub config: &'a CriticConfig,
}

fn check(id: CriticId, ctx: &PlanContext<'_>) -> CriticVerdict {
    match id {
        CriticId::Format => format::format_critic(Ok(ctx.plan)),
        CriticId::CompleteInformation => commonsense::complete_information_critic(ctx),
        CriticId::DiverseRestaurants => commonsense::diverse_restaurants_critic(ctx),
        CriticId::DiverseAttractions => commonsense::diverse_attractions_critic(ctx),
        CriticId::ValidateItinerary => commonsense::validate_itinerary_critic(ctx),
        CriticId::RoomType => hard::room_type_critic(ctx),
        CriticId::Cuisine => hard::cuisine_critic(ctx),
        CriticId::Budget => cost::budget_critic(ctx),
        CriticId::Transportation => hard::transportation_critic(ctx),
    }
}

/// Runs one critic by id. Format failures are reported by the format critic only.
pub fn run_critic(id: CriticId, plan: &Itinerary, q: &Query, sb: &Sandbox, config: &CriticConfig) -> CriticVerdict {
    check(id, &PlanContext { plan, query: q, sandbox: sb, config })
}

pub use format::format_critic;

/// A critic set together with its configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticSuite {
    pub set: CriticSet,
    pub config: CriticConfig,
}

impl CriticSuite {
    pub fn new(selector: Selector) -> Self {
        CriticSuite { set: CriticSet::new(selector), config: CriticConfig::default() }
    }

    pub fn with_config(mut self, config: CriticConfig) -> Self {
        self.config = config;
        self
    }

    /// Verdicts in registry order; only the format verdict when formatting fails.
    pub fn run(&self, input: PlanInput<'_>, q: &Query, sb: &Sandbox) -> Vec<CriticVerdict> {
        let format = format::format_critic(input);
        if !format.passed {
            return vec![format];
        }
        let plan = input.expect("format passed");
        let ctx = PlanContext { plan, query: q, sandbox: sb, config: &self.config };
        let mut out = vec![format];
        out.extend(self.set.critics.iter().filter(|c| **c != CriticId::Format).map(|c| check(*c, &ctx)));
        out
    }
}

/// [`CriticSuite::run`] with the default configuration.
pub fn run_critics(set: &CriticSet, input: PlanInput<'_>, q: &Query, sb: &Sandbox) -> Vec<CriticVerdict> {
    CriticSuite { set: set.clone(), config: CriticConfig::default() }.run(input, q, sb)
}

/// Catalog entry as dumped by `critics list --json`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    pub group: Group,
    pub description: String,
}

pub fn catalog() -> Vec<CatalogEntry> {
    CriticId::ALL
        .iter()
        .map(|c| CatalogEntry { id: c.as_str().into(), group: c.group(), description: c.description().into() })
        .collect()
}
