//! The end-to-end refinement pipeline: parse → validate → operationalize →
//! score → generate → prune → assemble, with every failure annotated by the
//! stage that raised it.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::data::Dataset;
use crate::error::Error;
use crate::generate::{allocate, generate_allocated, Allocation};
use crate::prune::{prune, VoteRecord};
use crate::rules::{operationalize, parse_ruleset, validate};
use crate::scoring::{score_all, RuleScore};

/// Tuning knobs for one refinement run.
///
/// Defaults: 43% virtual samples, keep-vote 0.6, seed 0, 10,000-rule
/// expansion budget, both stages enabled.
#[derive(Debug, Clone, PartialEq)]
pub struct RefineConfig {
    /// I: virtual samples to add, as a fraction of the dataset size.
    /// May exceed 1 to more than double the data.
    pub virtual_fraction: f64,
    /// D: every original instance's inherent keep-vote during pruning.
    pub prune_threshold: f64,
    pub seed: u64,
    /// Cap on operational rules produced by DNF expansion.
    pub max_rules: usize,
    pub prune_enabled: bool,
    pub generate_enabled: bool,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig {
            virtual_fraction: 0.43,
            prune_threshold: 0.6,
            seed: 0,
            max_rules: 10_000,
            prune_enabled: true,
            generate_enabled: true,
        }
    }
}

impl RefineConfig {
    pub fn check(&self) -> Result<(), Error> {
        if !self.virtual_fraction.is_finite() || self.virtual_fraction < 0.0 {
            return Err(Error::InvalidConfig(
                "virtual-sample fraction I must be finite and >= 0".to_string(),
            ));
        }
        if !(0.0..=1.0).contains(&self.prune_threshold) {
            return Err(Error::InvalidConfig(
                "prune threshold D must lie in [0, 1]".to_string(),
            ));
        }
        if self.max_rules == 0 {
            return Err(Error::InvalidConfig("max_rules must be positive".to_string()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Parse,
    Validate,
    Operationalize,
    Score,
    Generate,
    Prune,
    Eval,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Config => "config",
            Stage::Parse => "parse",
            Stage::Validate => "validate",
            Stage::Operationalize => "operationalize",
            Stage::Score => "score",
            Stage::Generate => "generate",
            Stage::Prune => "prune",
            Stage::Eval => "eval",
        };
        f.write_str(name)
    }
}

/// An [`Error`] tagged with the pipeline stage that raised it.
#[derive(Debug, Clone, PartialEq)]
pub struct StageError {
    pub stage: Stage,
    pub error: Error,
}

impl StageError {
    pub fn new(stage: Stage, error: Error) -> Self {
        StageError { stage, error }
    }
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} stage: {}", self.stage, self.error)
    }
}

impl core::error::Error for StageError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// Everything a run did, for rendering or asserting on.
#[derive(Debug, Clone, PartialEq)]
pub struct RefineReport {
    pub config: RefineConfig,
    pub input_rules: usize,
    pub operational_rules: usize,
    pub dropped_unsatisfiable: usize,
    /// Size of the input dataset (N).
    pub original_instances: usize,
    pub generated: usize,
    pub pruned: usize,
    /// Virtual instances whose values and label coincide with some input
    /// instance.
    pub duplicates_of_original: usize,
    /// Virtual instances identical to an earlier virtual instance.
    pub duplicates_among_virtual: usize,
    pub scores: Vec<RuleScore>,
    pub allocations: Vec<Allocation>,
    pub votes: Vec<VoteRecord>,
    /// Wall-clock time, filled in by callers with a clock; the refinement
    /// itself never consults one.
    pub elapsed: Option<Duration>,
}

fn staged<T>(stage: Stage, result: Result<T, Error>) -> Result<T, StageError> {
    result.map_err(|error| StageError { stage, error })
}

/// Runs the whole refinement: flatten the ruleset, score it against the
/// dataset as given, synthesize the virtual-sample budget, vote out
/// contradicted originals, and return kept-originals-then-virtuals plus the
/// full report. Deterministic in `config.seed`.
pub fn refine(
    ruleset_text: &str,
    dataset: &Dataset,
    config: &RefineConfig,
) -> Result<(Dataset, RefineReport), StageError> {
    staged(Stage::Config, config.check())?;

    let ruleset = staged(
        Stage::Parse,
        parse_ruleset(ruleset_text, dataset.schema()).map_err(Error::Parse),
    )?;

    let diagnostics = validate(&ruleset);
    if !diagnostics.is_empty() {
        return Err(StageError::new(Stage::Validate, Error::Validation(diagnostics)));
    }

    let operational = staged(Stage::Operationalize, operationalize(&ruleset, config.max_rules))?;
    let rules = &operational.rules;

    let scores = staged(Stage::Score, score_all(dataset, rules))?;

    let generating = config.generate_enabled && config.virtual_fraction > 0.0;
    let (allocations, virtuals) = if generating {
        let allocations = staged(
            Stage::Generate,
            allocate(&scores, config.virtual_fraction, dataset.len()),
        )?;
        let virtuals = staged(
            Stage::Generate,
            generate_allocated(dataset.schema(), rules, &allocations, config.seed),
        )?;
        (allocations, virtuals)
    } else {
        let zeroed = scores
            .iter()
            .map(|s| Allocation { rule_id: s.rule_id, raw: 0.0, count: 0 })
            .collect();
        (zeroed, Vec::new())
    };

    let mut duplicates_of_original = 0;
    let mut duplicates_among_virtual = 0;
    {
        let originals: BTreeSet<(&[usize], usize)> = dataset
            .instances()
            .iter()
            .map(|i| (i.values.as_slice(), i.class_value))
            .collect();
        let mut seen: BTreeSet<(&[usize], usize)> = BTreeSet::new();
        for v in &virtuals {
            let key = (v.values.as_slice(), v.class_value);
            if originals.contains(&key) {
                duplicates_of_original += 1;
            }
            if !seen.insert(key) {
                duplicates_among_virtual += 1;
            }
        }
    }

    let (kept, votes) = if config.prune_enabled {
        staged(Stage::Prune, prune(dataset, rules, &scores, config.prune_threshold))?
    } else {
        (dataset.clone(), Vec::new())
    };
    let pruned = votes.iter().filter(|v| v.removed).count();

    let mut refined_instances = kept.instances().to_vec();
    refined_instances.extend(virtuals.iter().cloned());
    let refined = dataset
        .with_instances(refined_instances)
        .expect("kept and generated instances conform to the schema");

    let report = RefineReport {
        config: config.clone(),
        input_rules: ruleset.rules().len(),
        operational_rules: rules.len(),
        dropped_unsatisfiable: operational.dropped_unsatisfiable,
        original_instances: dataset.len(),
        generated: virtuals.len(),
        pruned,
        duplicates_of_original,
        duplicates_among_virtual,
        scores,
        allocations,
        votes,
        elapsed: None,
    };
    debug_assert_eq!(
        refined.len(),
        report.original_instances - report.pruned + report.generated
    );
    Ok((refined, report))
}
