//! Per-rule score components and their composites.
//!
//! For a rule r over a dataset of N instances and K features, with M
//! matching instances, S of them correctly classified, and L literals:
//!
//! - correctness      `C = S / (M + 1)` (the +1 avoids division by zero
//!   and discounts rules with very few matches)
//! - scope            `E = M / N`
//! - sample utility   `U_s = (C + E) / 2`, the voting weight in pruning
//! - generality       `G = (K - L) / K`, larger for shorter rules
//! - utility          `U = (C + E + G) / 3`, drives sample allocation
//!
//! Scores are computed once, against the dataset as given; downstream
//! stages never trigger re-scoring.

use alloc::vec::Vec;

use crate::data::{match_counts, Dataset};
use crate::error::Error;
use crate::rules::OperationalRule;

/// Every component for one rule, plus the counts they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleScore {
    pub rule_id: usize,
    /// L: literals in the rule.
    pub literal_count: usize,
    /// M: instances matching the antecedent.
    pub matched: usize,
    /// S: matching instances with the rule's class label.
    pub correct: usize,
    /// N: dataset size the counts were taken against.
    pub dataset_size: usize,
    /// K: features in the schema.
    pub feature_count: usize,
    pub correctness: f64,
    pub scope: f64,
    pub sample_utility: f64,
    pub generality: f64,
    pub utility: f64,
}

fn check_ratio(name: &'static str, value: f64) -> Result<(), Error> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::RatioOutOfRange { name, value })
    }
}

/// `C = S / (M + 1)`; always in [0, 1).
pub fn correctness(correct: usize, matched: usize) -> Result<f64, Error> {
    if correct > matched {
        return Err(Error::CountMismatch { correct, matched });
    }
    Ok(correct as f64 / (matched + 1) as f64)
}

/// `E = M / N`, the fraction of the dataset the rule matches.
pub fn scope(matched: usize, dataset_size: usize) -> Result<f64, Error> {
    if dataset_size == 0 {
        return Err(Error::EmptyDataset);
    }
    if matched > dataset_size {
        return Err(Error::MatchOverflow { matched, dataset_size });
    }
    Ok(matched as f64 / dataset_size as f64)
}

/// `U_s = (C + E) / 2`.
pub fn sample_utility(correctness: f64, scope: f64) -> Result<f64, Error> {
    check_ratio("correctness", correctness)?;
    check_ratio("scope", scope)?;
    Ok((correctness + scope) / 2.0)
}

/// `G = (K - L) / K`. A rule using every feature pins a single point and
/// scores 0; an empty rule scores 1.
pub fn generality(feature_count: usize, literal_count: usize) -> Result<f64, Error> {
    if feature_count == 0 {
        return Err(Error::InvalidConfig("schema has no features".into()));
    }
    if literal_count > feature_count {
        return Err(Error::LiteralOverflow {
            literals: literal_count,
            features: feature_count,
        });
    }
    Ok((feature_count - literal_count) as f64 / feature_count as f64)
}

/// `U = (C + E + G) / 3`.
pub fn utility(correctness: f64, scope: f64, generality: f64) -> Result<f64, Error> {
    check_ratio("correctness", correctness)?;
    check_ratio("scope", scope)?;
    check_ratio("generality", generality)?;
    Ok((correctness + scope + generality) / 3.0)
}

/// Scores every rule against the dataset, in input order. Duplicate rules
/// receive identical scores; an empty rule list yields an empty result.
pub fn score_all(dataset: &Dataset, rules: &[OperationalRule]) -> Result<Vec<RuleScore>, Error> {
    if rules.is_empty() {
        return Ok(Vec::new());
    }
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = dataset.len();
    let k = dataset.schema().feature_count();
    rules
        .iter()
        .map(|rule| {
            let (matched, correct) = match_counts(dataset, rule)?;
            let l = rule.literal_count();
            let c = correctness(correct, matched)?;
            let e = scope(matched, n)?;
            let g = generality(k, l)?;
            Ok(RuleScore {
                rule_id: rule.id,
                literal_count: l,
                matched,
                correct,
                dataset_size: n,
                feature_count: k,
                correctness: c,
                scope: e,
                sample_utility: sample_utility(c, e)?,
                generality: g,
                utility: utility(c, e, g)?,
            })
        })
        .collect()
}
