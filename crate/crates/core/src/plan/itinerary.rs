use serde::{Deserialize, Serialize};

/// Placeholder for a slot with no activity. It is a value, not an absent key.
pub const EMPTY_MARKER: &str = "-";

/// The nine keys of a day record, in canonical order.
pub const DAY_KEYS: [&str; 9] = [
    "day",
    "people_number",
    "current_city",
    "transportation",
    "breakfast",
    "attraction",
    "lunch",
    "dinner",
    "accommodation",
];

pub fn is_empty_marker(s: &str) -> bool {
    s.trim() == EMPTY_MARKER
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Meal {
    Breakfast,
    Lunch,
    Dinner,
}

impl Meal {
    pub const ALL: [Meal; 3] = [Meal::Breakfast, Meal::Lunch, Meal::Dinner];

    pub fn key(self) -> &'static str {
        match self {
            Meal::Breakfast => "breakfast",
            Meal::Lunch => "lunch",
            Meal::Dinner => "dinner",
        }
    }
}

/// One day of a plan. Field order here is the serialization order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayPlan {
    pub day: u32,
    pub people_number: u32,
    pub current_city: String,
    pub transportation: String,
    pub breakfast: String,
    pub attraction: String,
    pub lunch: String,
    pub dinner: String,
    pub accommodation: String,
}

impl DayPlan {
    /// A day with every activity slot set to the empty marker.
    pub fn blank(day: u32, people_number: u32, current_city: impl Into<String>) -> Self {
        DayPlan {
            day,
            people_number,
            current_city: current_city.into(),
            transportation: EMPTY_MARKER.into(),
            breakfast: EMPTY_MARKER.into(),
            attraction: EMPTY_MARKER.into(),
            lunch: EMPTY_MARKER.into(),
            dinner: EMPTY_MARKER.into(),
            accommodation: EMPTY_MARKER.into(),
        }
    }

    pub fn meal(&self, meal: Meal) -> &str {
        match meal {
            Meal::Breakfast => &self.breakfast,
            Meal::Lunch => &self.lunch,
            Meal::Dinner => &self.dinner,
        }
    }

    pub fn meal_mut(&mut self, meal: Meal) -> &mut String {
        match meal {
            Meal::Breakfast => &mut self.breakfast,
            Meal::Lunch => &mut self.lunch,
            Meal::Dinner => &mut self.dinner,
        }
    }
}

/// An ordered list of day records, serialized as a bare JSON array.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Itinerary {
    pub days: Vec<DayPlan>,
}

impl Itinerary {
    pub fn new(days: Vec<DayPlan>) -> Self {
        Itinerary { days }
    }

    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }
}

/// Canonical JSON text: fixed key order, two-space indentation.
pub fn serialize_plan(it: &Itinerary) -> String {
    serde_json::to_string_pretty(it).expect("itinerary serializes")
}
