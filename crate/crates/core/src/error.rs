//! Error type shared by every refinement stage.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::rules::{Diagnostic, ParseError};

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Rule source text failed to parse.
    Parse(ParseError),
    /// Ruleset validation produced diagnostics (cycles, undefined symbols).
    Validation(Vec<Diagnostic>),
    /// Flattening a ruleset would exceed the configured rule budget.
    RuleBlowup { limit: usize },
    /// A schema could not be constructed (duplicate names, tiny domains, ...).
    InvalidSchema(String),
    /// A rule references features or values outside the dataset schema.
    SchemaMismatch(String),
    /// More correctly classified instances than matched ones.
    CountMismatch { correct: usize, matched: usize },
    /// More matched instances than the dataset holds.
    MatchOverflow { matched: usize, dataset_size: usize },
    /// An operation that needs at least one instance got none.
    EmptyDataset,
    /// A rule carries more literals than the schema has features.
    LiteralOverflow { literals: usize, features: usize },
    /// A quantity expected to lie in [0, 1] fell outside it.
    RatioOutOfRange { name: &'static str, value: f64 },
    /// Virtual samples were requested but every rule has zero utility.
    NoUtility,
    /// A rule excludes every value of some feature, so no instance can
    /// satisfy it.
    UnsatisfiableTemplate { rule_id: usize, feature: String },
    /// Rules and their scores do not line up one-to-one.
    ScoreMisalignment { rules: usize, scores: usize },
    /// A stratified split left some class with no training instances.
    EmptyStratum { label: String },
    /// Nearest-neighbour classification was asked to run without any
    /// training instances.
    EmptyTrainingSet,
    /// Mutually exclusive sweep axes were both requested.
    SweepConflict,
    /// A configuration value failed validation.
    InvalidConfig(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(e) => write!(f, "parse error: {e}"),
            Error::Validation(diags) => {
                write!(f, "invalid ruleset ({} problem(s)):", diags.len())?;
                for d in diags {
                    write!(f, "\n  {d}")?;
                }
                Ok(())
            }
            Error::RuleBlowup { limit } => write!(
                f,
                "flattened rule count exceeds the limit of {limit}; \
                 raise the limit or simplify the ruleset"
            ),
            Error::InvalidSchema(msg) => write!(f, "invalid schema: {msg}"),
            Error::SchemaMismatch(msg) => write!(f, "schema mismatch: {msg}"),
            Error::CountMismatch { correct, matched } => write!(
                f,
                "corrupt counts: {correct} correct classifications out of \
                 only {matched} matches"
            ),
            Error::MatchOverflow { matched, dataset_size } => write!(
                f,
                "corrupt counts: {matched} matches in a dataset of \
                 {dataset_size} instances"
            ),
            Error::EmptyDataset => write!(f, "dataset contains no instances"),
            Error::LiteralOverflow { literals, features } => write!(
                f,
                "rule has {literals} literals but the schema only has \
                 {features} features"
            ),
            Error::RatioOutOfRange { name, value } => {
                write!(f, "{name} must lie in [0, 1], got {value}")
            }
            Error::NoUtility => write!(
                f,
                "virtual samples requested but every rule has zero utility"
            ),
            Error::UnsatisfiableTemplate { rule_id, feature } => write!(
                f,
                "rule {rule_id} excludes every value of feature `{feature}`"
            ),
            Error::ScoreMisalignment { rules, scores } => {
                write!(f, "{rules} rules but {scores} scores")
            }
            Error::EmptyStratum { label } => write!(
                f,
                "training fraction leaves class `{label}` with no \
                 training instances"
            ),
            Error::EmptyTrainingSet => {
                write!(f, "cannot classify with an empty training set")
            }
            Error::SweepConflict => write!(
                f,
                "cannot sweep training fraction and virtual budget at once"
            ),
            Error::InvalidConfig(msg) => write!(f, "invalid config: {msg}"),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::Parse(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}
