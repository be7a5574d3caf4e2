//! Surveys over enumerated fields: per-field invariants, a resumable cache,
//! aggregation and reports.

pub mod cache;
pub mod invariants;
pub mod survey;

pub use survey::{run_survey, SurveyConfig, SurveyReport};
