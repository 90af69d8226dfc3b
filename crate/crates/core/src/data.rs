//! Nominal-feature datasets and the rule-conformance predicate.
//!
//! Values are stored as indices into the schema's domains, so instances are
//! plain `Vec<usize>` rows. Datasets are immutable once built; every
//! refinement stage produces a new one.

use alloc::format;
use alloc::vec::Vec;

use crate::error::Error;
use crate::rules::OperationalRule;
use crate::schema::Schema;

/// Where an instance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Original,
    /// Synthesized from the operational rule with this id.
    Virtual(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    /// One domain-value index per schema feature, positionally aligned.
    pub values: Vec<usize>,
    /// Index into the class domain.
    pub class_value: usize,
    pub provenance: Provenance,
}

impl Instance {
    pub fn original(values: Vec<usize>, class_value: usize) -> Self {
        Instance { values, class_value, provenance: Provenance::Original }
    }

    pub fn generated(values: Vec<usize>, class_value: usize, rule_id: usize) -> Self {
        Instance { values, class_value, provenance: Provenance::Virtual(rule_id) }
    }

    pub fn is_virtual(&self) -> bool {
        matches!(self.provenance, Provenance::Virtual(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    schema: Schema,
    instances: Vec<Instance>,
}

impl Dataset {
    /// Builds a dataset, checking every instance against the schema: row
    /// width equals the feature count and all value indices are in range.
    pub fn new(schema: Schema, instances: Vec<Instance>) -> Result<Self, Error> {
        for (index, instance) in instances.iter().enumerate() {
            if instance.values.len() != schema.feature_count() {
                return Err(Error::SchemaMismatch(format!(
                    "instance {index} has {} values but the schema has {} features",
                    instance.values.len(),
                    schema.feature_count()
                )));
            }
            for (feature, &value) in instance.values.iter().enumerate() {
                if value >= schema.feature(feature).arity() {
                    return Err(Error::SchemaMismatch(format!(
                        "instance {index}: value index {value} is outside feature `{}`'s domain",
                        schema.feature(feature).name()
                    )));
                }
            }
            if instance.class_value >= schema.class().arity() {
                return Err(Error::SchemaMismatch(format!(
                    "instance {index}: class index {} is outside the class domain",
                    instance.class_value
                )));
            }
        }
        Ok(Dataset { schema, instances })
    }

    /// Same schema, different rows.
    pub fn with_instances(&self, instances: Vec<Instance>) -> Result<Dataset, Error> {
        Dataset::new(self.schema.clone(), instances)
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }
}

/// The conformance predicate: true iff the instance satisfies every literal
/// of the rule. The empty conjunction conforms vacuously.
///
/// The instance and rule must be bound to the same schema. This hot-path
/// predicate panics on a rule referencing features beyond the instance's
/// width; aggregate entry points ([`match_counts`], scoring, pruning)
/// validate the rule once via [`check_rule`] and report a schema-mismatch
/// error instead.
pub fn conforms(instance: &Instance, rule: &OperationalRule) -> bool {
    rule.literals.iter().all(|l| l.matches(&instance.values))
}

/// Verifies that a rule only references features and values the schema
/// declares, so [`conforms`] cannot panic for it.
pub fn check_rule(schema: &Schema, rule: &OperationalRule) -> Result<(), Error> {
    for literal in &rule.literals {
        if literal.feature >= schema.feature_count() {
            return Err(Error::SchemaMismatch(format!(
                "rule {} references feature index {} but the schema has {} features",
                rule.id,
                literal.feature,
                schema.feature_count()
            )));
        }
        let feature = schema.feature(literal.feature);
        if literal.value >= feature.arity() {
            return Err(Error::SchemaMismatch(format!(
                "rule {} references value index {} outside feature `{}`'s domain",
                rule.id,
                literal.value,
                feature.name()
            )));
        }
    }
    if rule.class_value >= schema.class().arity() {
        return Err(Error::SchemaMismatch(format!(
            "rule {} concludes class index {} outside the class domain",
            rule.id, rule.class_value
        )));
    }
    Ok(())
}

/// Counts `(M, S)` for a rule over a dataset: `M` instances conform to the
/// rule's antecedent, of which `S` also carry the rule's class label.
pub fn match_counts(dataset: &Dataset, rule: &OperationalRule) -> Result<(usize, usize), Error> {
    check_rule(dataset.schema(), rule)?;
    let mut matched = 0;
    let mut correct = 0;
    for instance in dataset.instances() {
        if conforms(instance, rule) {
            matched += 1;
            if instance.class_value == rule.class_value {
                correct += 1;
            }
        }
    }
    Ok((matched, correct))
}
