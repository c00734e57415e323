//! Generate-and-test travel planning: a language model proposes itineraries,
//! a bank of sound critics checks them against a tabular sandbox, and a
//! metacontroller feeds the critics' complaints back until a plan passes.

pub mod critics;
pub mod evaluator;
pub mod generator;
pub mod metacontroller;
pub mod money;
pub mod plan;
pub mod sandbox;

pub use money::{Miles, Money};
