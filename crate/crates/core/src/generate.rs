//! Virtual-sample budget allocation and template-based instance synthesis.
//!
//! Each rule receives a share of `round(I × N)` virtual samples
//! proportional to its utility. A sample is built from the rule's
//! template: positive literals pin feature values, negated literals
//! exclude values, and everything else is drawn uniformly at random.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;

use rand::Rng;

use crate::data::{check_rule, Dataset, Instance};
use crate::error::Error;
use crate::math;
use crate::rng;
use crate::rules::OperationalRule;
use crate::schema::Schema;
use crate::scoring::RuleScore;

/// One rule's share of the virtual-sample budget.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation {
    pub rule_id: usize,
    /// Exact proportional share `U(r)/ΣU × I × N` before integering.
    pub raw: f64,
    /// Integer sample count: counts sum to `round(I × N)` and each stays
    /// within 1 of its raw share.
    pub count: usize,
}

/// Splits the budget `round(I × N)` across rules by largest-remainder
/// apportionment: every rule first gets `floor(raw)`, then the leftover
/// samples go to the largest fractional remainders, ties to the lower rule
/// index. Rules with higher utility never receive fewer samples than rules
/// with lower utility.
pub fn allocate(
    scores: &[RuleScore],
    budget_fraction: f64,
    dataset_size: usize,
) -> Result<Vec<Allocation>, Error> {
    if !budget_fraction.is_finite() || budget_fraction < 0.0 {
        return Err(Error::InvalidConfig(
            "virtual-sample fraction must be finite and >= 0".to_string(),
        ));
    }
    if dataset_size == 0 {
        return Err(Error::EmptyDataset);
    }
    for score in scores {
        if !(0.0..=1.0).contains(&score.utility) {
            return Err(Error::RatioOutOfRange { name: "utility", value: score.utility });
        }
    }

    if budget_fraction == 0.0 {
        return Ok(scores
            .iter()
            .map(|s| Allocation { rule_id: s.rule_id, raw: 0.0, count: 0 })
            .collect());
    }

    let target = budget_fraction * dataset_size as f64;
    let budget = math::round(target) as usize;

    let total_utility: f64 = scores.iter().map(|s| s.utility).sum();
    if total_utility <= 0.0 {
        // Zero utility is only a problem when the budget demands instances;
        // a budget that rounds to zero is satisfied by allocating nothing.
        if budget > 0 {
            return Err(Error::NoUtility);
        }
        return Ok(scores
            .iter()
            .map(|s| Allocation { rule_id: s.rule_id, raw: 0.0, count: 0 })
            .collect());
    }

    let raws: Vec<f64> = scores.iter().map(|s| s.utility / total_utility * target).collect();
    let mut counts: Vec<usize> = raws.iter().map(|&r| math::floor(r) as usize).collect();
    let assigned: usize = counts.iter().sum();

    // Σfloor(raw) ≤ floor(Σraw) ≤ round(target), so there is always a
    // non-negative leftover to hand out.
    let mut leftover = budget.saturating_sub(assigned);
    let mut order: Vec<usize> = (0..raws.len()).collect();
    order.sort_by(|&a, &b| {
        let rem_a = raws[a] - math::floor(raws[a]);
        let rem_b = raws[b] - math::floor(raws[b]);
        rem_b.total_cmp(&rem_a).then(a.cmp(&b))
    });
    let mut next = 0;
    while leftover > 0 {
        counts[order[next % order.len()]] += 1;
        next += 1;
        leftover -= 1;
    }

    Ok(scores
        .iter()
        .zip(raws)
        .zip(counts)
        .map(|((score, raw), count)| Allocation { rule_id: score.rule_id, raw, count })
        .collect())
}

/// A rule restated as constraints on each feature, ready for sampling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationTemplate {
    pub rule_id: usize,
    pub class_value: usize,
    /// Feature → forced value, from positive literals.
    pub fixed: BTreeMap<usize, usize>,
    /// Feature → excluded values, from negated literals. Never overlaps
    /// `fixed`, and never excludes a feature's whole domain.
    pub forbidden: BTreeMap<usize, BTreeSet<usize>>,
    /// Features the rule does not constrain, in ascending order.
    pub free: Vec<usize>,
    domain_sizes: Vec<usize>,
}

/// Reads a rule's literals into a [`GenerationTemplate`]. Fails if the rule
/// is unsatisfiable (it pins a feature to two values, pins an excluded
/// value, or excludes an entire domain) — such rules are normally dropped
/// during operationalization and never reach this point.
pub fn build_template(rule: &OperationalRule, schema: &Schema) -> Result<GenerationTemplate, Error> {
    check_rule(schema, rule)?;

    let unsatisfiable = |feature: usize| Error::UnsatisfiableTemplate {
        rule_id: rule.id,
        feature: schema.feature(feature).name().to_string(),
    };

    let mut fixed: BTreeMap<usize, usize> = BTreeMap::new();
    let mut forbidden: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for literal in &rule.literals {
        if !literal.negated
            && *fixed.entry(literal.feature).or_insert(literal.value) != literal.value
        {
            return Err(unsatisfiable(literal.feature));
        }
    }
    for literal in &rule.literals {
        if literal.negated {
            match fixed.get(&literal.feature) {
                Some(&pinned) if pinned == literal.value => {
                    return Err(unsatisfiable(literal.feature));
                }
                // Pinned elsewhere: the exclusion is already honoured.
                Some(_) => {}
                None => {
                    forbidden.entry(literal.feature).or_default().insert(literal.value);
                }
            }
        }
    }
    for (&feature, excluded) in &forbidden {
        if excluded.len() >= schema.feature(feature).arity() {
            return Err(unsatisfiable(feature));
        }
    }

    let free = (0..schema.feature_count())
        .filter(|f| !fixed.contains_key(f) && !forbidden.contains_key(f))
        .collect();

    Ok(GenerationTemplate {
        rule_id: rule.id,
        class_value: rule.class_value,
        fixed,
        forbidden,
        free,
        domain_sizes: schema.features().iter().map(|f| f.arity()).collect(),
    })
}

/// Draws `count` instances from the template. Free features are uniform
/// over their domain; forbidden-constrained features are uniform over the
/// remaining values. Every output conforms to the source rule and carries
/// `Virtual(rule_id)` provenance.
pub fn generate_from_rule<R: Rng>(
    template: &GenerationTemplate,
    count: usize,
    rng: &mut R,
) -> Vec<Instance> {
    let allowed: BTreeMap<usize, Vec<usize>> = template
        .forbidden
        .iter()
        .map(|(&feature, excluded)| {
            let values = (0..template.domain_sizes[feature])
                .filter(|v| !excluded.contains(v))
                .collect::<Vec<_>>();
            (feature, values)
        })
        .collect();

    (0..count)
        .map(|_| {
            let values = (0..template.domain_sizes.len())
                .map(|feature| {
                    if let Some(&value) = template.fixed.get(&feature) {
                        value
                    } else if let Some(choices) = allowed.get(&feature) {
                        choices[rng.gen_range(0..choices.len())]
                    } else {
                        rng.gen_range(0..template.domain_sizes[feature])
                    }
                })
                .collect();
            Instance::generated(values, template.class_value, template.rule_id)
        })
        .collect()
}

/// Generates each rule's allocated share using the substream
/// `(seed, position in the rule list)`, concatenated in rule order.
pub fn generate_allocated(
    schema: &Schema,
    rules: &[OperationalRule],
    allocations: &[Allocation],
    seed: u64,
) -> Result<Vec<Instance>, Error> {
    if rules.len() != allocations.len()
        || rules.iter().zip(allocations).any(|(r, a)| r.id != a.rule_id)
    {
        return Err(Error::ScoreMisalignment { rules: rules.len(), scores: allocations.len() });
    }
    let mut out = Vec::new();
    for (index, (rule, allocation)) in rules.iter().zip(allocations).enumerate() {
        if allocation.count == 0 {
            continue;
        }
        let template = build_template(rule, schema)?;
        let mut rng = rng::stream(seed, index as u64);
        out.extend(generate_from_rule(&template, allocation.count, &mut rng));
    }
    Ok(out)
}

/// Allocation plus generation in one step: exactly `round(I × N)` virtual
/// instances, deterministic in `seed`.
pub fn generate_all(
    dataset: &Dataset,
    rules: &[OperationalRule],
    scores: &[RuleScore],
    budget_fraction: f64,
    seed: u64,
) -> Result<Vec<Instance>, Error> {
    if rules.len() != scores.len() || rules.iter().zip(scores).any(|(r, s)| r.id != s.rule_id) {
        return Err(Error::ScoreMisalignment { rules: rules.len(), scores: scores.len() });
    }
    let allocations = allocate(scores, budget_fraction, dataset.len())?;
    generate_allocated(dataset.schema(), rules, &allocations, seed)
}
