//! Utility-weighted voting that removes suspect original instances.
//!
//! Every original instance starts with an inherent keep-vote `D`. Each
//! conforming rule adds its sample utility to the keep side when it agrees
//! with the instance's label and to the remove side when it disagrees;
//! votes combine by probabilistic sum, so no pile of weak rules can
//! overpower a solid `D`. An instance is removed exactly when the remove
//! side ends up strictly ahead.

use alloc::vec::Vec;

use crate::data::{check_rule, conforms, Dataset, Instance};
use crate::error::Error;
use crate::rules::OperationalRule;
use crate::scoring::RuleScore;

/// The vote tally for one original instance.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteRecord {
    /// Position of the instance in the voted dataset.
    pub instance_index: usize,
    /// Combined evidence to keep: `D` unioned with the sample utility of
    /// every conforming, label-agreeing rule. Never below `D`.
    pub v_plus: f64,
    /// Combined evidence to remove, from conforming disagreeing rules.
    pub v_minus: f64,
    pub removed: bool,
}

/// Probabilistic-sum union `a + b − ab`. Commutative and associative with
/// identity 0 and absorber 1; for inputs in [0, 1] the result stays in
/// [0, 1], so chained votes never exceed certainty.
pub fn utility_union(a: f64, b: f64) -> Result<f64, Error> {
    for (name, value) in [("a", a), ("b", b)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::RatioOutOfRange { name, value });
        }
    }
    Ok(a + b - a * b)
}

/// Tallies the vote for one instance. `rules` and `scores` must align
/// one-to-one; rules must be bound to the instance's schema (checked by
/// [`prune`] once per dataset rather than here, on the hot path).
pub fn vote(
    instance_index: usize,
    instance: &Instance,
    rules: &[OperationalRule],
    scores: &[RuleScore],
    d: f64,
) -> Result<VoteRecord, Error> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::RatioOutOfRange { name: "D", value: d });
    }
    if rules.len() != scores.len() || rules.iter().zip(scores).any(|(r, s)| r.id != s.rule_id) {
        return Err(Error::ScoreMisalignment { rules: rules.len(), scores: scores.len() });
    }

    let mut v_plus = d;
    let mut v_minus = 0.0;
    for (rule, score) in rules.iter().zip(scores) {
        if conforms(instance, rule) {
            if instance.class_value == rule.class_value {
                v_plus = utility_union(v_plus, score.sample_utility)?;
            } else {
                v_minus = utility_union(v_minus, score.sample_utility)?;
            }
        }
    }

    Ok(VoteRecord { instance_index, v_plus, v_minus, removed: v_plus - v_minus < 0.0 })
}

/// Votes on every original instance and drops the losers. Virtual
/// instances are exempt (they conform to their origin rule by construction)
/// and pass through unvoted; order is preserved throughout.
pub fn prune(
    dataset: &Dataset,
    rules: &[OperationalRule],
    scores: &[RuleScore],
    d: f64,
) -> Result<(Dataset, Vec<VoteRecord>), Error> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::RatioOutOfRange { name: "D", value: d });
    }
    for rule in rules {
        check_rule(dataset.schema(), rule)?;
    }

    let mut records = Vec::new();
    let mut kept = Vec::new();
    for (index, instance) in dataset.instances().iter().enumerate() {
        if instance.is_virtual() {
            kept.push(instance.clone());
            continue;
        }
        let record = vote(index, instance, rules, scores, d)?;
        if !record.removed {
            kept.push(instance.clone());
        }
        records.push(record);
    }

    Ok((dataset.with_instances(kept)?, records))
}
