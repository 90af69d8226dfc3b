//! Flattening a rule hierarchy into operational form: backward-chaining
//! substitution of non-atomic symbols, negation pushed to the leaves, and
//! expansion to disjunctive normal form with one flat rule per disjunct.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Literal, OperationalRule, Rule, RuleExpr, RuleHead, Ruleset};
use crate::error::Error;
use crate::schema::Schema;

/// Negation with De Morgan's laws applied all the way down: and/or swap,
/// literal flags flip, and double negation cancels. On inputs free of
/// non-atomic symbols the result contains no not-nodes.
pub fn negate(expr: &RuleExpr) -> RuleExpr {
    match expr {
        RuleExpr::Literal(l) => RuleExpr::Literal(l.complement()),
        // A symbol cannot be flipped without its definition; leave the
        // not-node for unfolding to resolve.
        RuleExpr::Symbol(s) => RuleExpr::Not(Box::new(RuleExpr::Symbol(s.clone()))),
        RuleExpr::And(children) => RuleExpr::Or(children.iter().map(negate).collect()),
        RuleExpr::Or(children) => RuleExpr::And(children.iter().map(negate).collect()),
        RuleExpr::Not(inner) => nnf(inner),
    }
}

/// Negation normal form without changing polarity.
fn nnf(expr: &RuleExpr) -> RuleExpr {
    match expr {
        RuleExpr::Literal(_) | RuleExpr::Symbol(_) => expr.clone(),
        RuleExpr::And(children) => RuleExpr::And(children.iter().map(nnf).collect()),
        RuleExpr::Or(children) => RuleExpr::Or(children.iter().map(nnf).collect()),
        RuleExpr::Not(inner) => negate(inner),
    }
}

/// Substitutes every non-atomic symbol with the disjunction of its defining
/// antecedents, repeatedly, and returns the class rules restated over
/// atomic literals only (negations already pushed to the leaves).
///
/// The ruleset must have passed [`validate`](super::validate); this
/// function panics on undefined symbols or definition cycles.
pub fn unfold(ruleset: &Ruleset) -> Vec<Rule> {
    let mut cache: BTreeMap<String, RuleExpr> = BTreeMap::new();
    let mut in_progress: BTreeSet<String> = BTreeSet::new();
    ruleset
        .rules()
        .iter()
        .filter(|rule| matches!(rule.head, RuleHead::Class(_)))
        .map(|rule| Rule {
            head: rule.head.clone(),
            antecedent: substitute(&rule.antecedent, ruleset, &mut cache, &mut in_progress),
            statement: rule.statement,
        })
        .collect()
}

fn substitute(
    expr: &RuleExpr,
    ruleset: &Ruleset,
    cache: &mut BTreeMap<String, RuleExpr>,
    in_progress: &mut BTreeSet<String>,
) -> RuleExpr {
    match expr {
        RuleExpr::Literal(l) => RuleExpr::Literal(*l),
        RuleExpr::Symbol(name) => resolve(name, ruleset, cache, in_progress),
        RuleExpr::And(children) => RuleExpr::And(
            children.iter().map(|c| substitute(c, ruleset, cache, in_progress)).collect(),
        ),
        RuleExpr::Or(children) => RuleExpr::Or(
            children.iter().map(|c| substitute(c, ruleset, cache, in_progress)).collect(),
        ),
        // The negand is symbol-free once substituted, so negate() fully
        // eliminates the not-node.
        RuleExpr::Not(inner) => negate(&substitute(inner, ruleset, cache, in_progress)),
    }
}

fn resolve(
    name: &str,
    ruleset: &Ruleset,
    cache: &mut BTreeMap<String, RuleExpr>,
    in_progress: &mut BTreeSet<String>,
) -> RuleExpr {
    if let Some(expr) = cache.get(name) {
        return expr.clone();
    }
    assert!(
        in_progress.insert(name.into()),
        "definition cycle through `{name}`; validate the ruleset first"
    );
    let defining = ruleset
        .definitions()
        .get(name)
        .unwrap_or_else(|| panic!("`{name}` has no definition; validate the ruleset first"));
    let mut bodies: Vec<RuleExpr> = defining
        .iter()
        .map(|&i| substitute(&ruleset.rules()[i].antecedent, ruleset, cache, in_progress))
        .collect();
    let body = if bodies.len() == 1 {
        bodies.pop().expect("one body")
    } else {
        RuleExpr::Or(bodies)
    };
    in_progress.remove(name);
    cache.insert(name.into(), body.clone());
    body
}

/// Result of [`operationalize`]: the flat rules plus how many disjuncts
/// were discarded as unsatisfiable along the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operationalization {
    pub rules: Vec<OperationalRule>,
    pub dropped_unsatisfiable: usize,
}

/// Unfolds the hierarchy and expands every class rule to disjunctive
/// normal form, emitting one [`OperationalRule`] per satisfiable disjunct.
///
/// Unsatisfiable disjuncts are dropped and counted: two positive literals
/// asserting different values for one feature, a literal conjoined with its
/// own negation, or negations that exclude a feature's entire domain.
/// Duplicate disjuncts (same literal set and class) are merged, keeping the
/// first occurrence. Deduplication and the unsatisfiability check run at
/// every expansion step, and the error fires as soon as any intermediate
/// disjunct count passes `max_rules`, so a blowup cannot exhaust memory
/// before being reported.
pub fn operationalize(ruleset: &Ruleset, max_rules: usize) -> Result<Operationalization, Error> {
    let schema = ruleset.schema();
    let mut rules: Vec<OperationalRule> = Vec::new();
    let mut seen: BTreeSet<(Vec<Literal>, usize)> = BTreeSet::new();
    let mut dropped = 0usize;

    for rule in unfold(ruleset) {
        let RuleHead::Class(class_value) = rule.head else {
            unreachable!("unfold returns class rules only");
        };
        let origin = format!(
            "{}={}@{}",
            schema.class().name(),
            schema.class().domain()[class_value],
            rule.statement
        );
        for literals in dnf(&rule.antecedent, schema, max_rules, &mut dropped)? {
            if seen.insert((literals.clone(), class_value)) {
                if rules.len() == max_rules {
                    return Err(Error::RuleBlowup { limit: max_rules });
                }
                rules.push(OperationalRule {
                    id: rules.len(),
                    literals,
                    class_value,
                    origin: origin.clone(),
                });
            }
        }
    }

    Ok(Operationalization { rules, dropped_unsatisfiable: dropped })
}

/// DNF expansion of a symbol-free expression. Each disjunct is a sorted,
/// deduplicated literal vector; unsatisfiable disjuncts are dropped and
/// counted in `dropped`.
fn dnf(
    expr: &RuleExpr,
    schema: &Schema,
    max_rules: usize,
    dropped: &mut usize,
) -> Result<Vec<Vec<Literal>>, Error> {
    match expr {
        RuleExpr::Literal(l) => Ok(vec![vec![*l]]),
        RuleExpr::Symbol(name) => {
            unreachable!("symbol `{name}` survived unfolding")
        }
        RuleExpr::Not(inner) => dnf(&negate(inner), schema, max_rules, dropped),
        RuleExpr::Or(children) => {
            let mut out: Vec<Vec<Literal>> = Vec::new();
            let mut seen: BTreeSet<Vec<Literal>> = BTreeSet::new();
            for child in children {
                for disjunct in dnf(child, schema, max_rules, dropped)? {
                    if seen.insert(disjunct.clone()) {
                        out.push(disjunct);
                        if out.len() > max_rules {
                            return Err(Error::RuleBlowup { limit: max_rules });
                        }
                    }
                }
            }
            Ok(out)
        }
        RuleExpr::And(children) => {
            let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
            for child in children {
                let rhs = dnf(child, schema, max_rules, dropped)?;
                let mut next: Vec<Vec<Literal>> = Vec::new();
                let mut seen: BTreeSet<Vec<Literal>> = BTreeSet::new();
                for left in &acc {
                    for right in &rhs {
                        match merge_conjunctions(left, right, schema) {
                            Some(merged) => {
                                if seen.insert(merged.clone()) {
                                    next.push(merged);
                                    if next.len() > max_rules {
                                        return Err(Error::RuleBlowup { limit: max_rules });
                                    }
                                }
                            }
                            None => *dropped += 1,
                        }
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
    }
}

/// Union of two sorted literal conjunctions, or `None` when the combination
/// can never be satisfied.
fn merge_conjunctions(a: &[Literal], b: &[Literal], schema: &Schema) -> Option<Vec<Literal>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    satisfiable(&out, schema).then_some(out)
}

/// Whether some instance can satisfy a sorted, deduplicated conjunction.
fn satisfiable(literals: &[Literal], schema: &Schema) -> bool {
    let mut start = 0;
    while start < literals.len() {
        let feature = literals[start].feature;
        let mut end = start;
        while end < literals.len() && literals[end].feature == feature {
            end += 1;
        }
        let group = &literals[start..end];

        let mut positive: Option<usize> = None;
        let mut negated_values = 0usize;
        for literal in group {
            if literal.negated {
                negated_values += 1;
            } else {
                if positive.is_some_and(|v| v != literal.value) {
                    return false;
                }
                positive = Some(literal.value);
            }
        }
        match positive {
            Some(v) => {
                if group.iter().any(|l| l.negated && l.value == v) {
                    return false;
                }
            }
            None => {
                if negated_values == schema.feature(feature).arity() {
                    return false;
                }
            }
        }
        start = end;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::parse_ruleset;
    use crate::schema::Feature;

    fn schema5() -> Schema {
        Schema::new(
            ["a", "b", "x", "y", "z"].map(Feature::binary).to_vec(),
            Feature::binary("class"),
        )
        .unwrap()
    }

    const HIERARCHY: &str = "k <- x & !y | z.\nj <- !a & !b.\nclass <- !j & k.";

    fn lit(schema: &Schema, name: &str, negated: bool) -> RuleExpr {
        RuleExpr::Literal(Literal {
            feature: schema.feature_index(name).unwrap(),
            value: 1,
            negated,
        })
    }

    /// Truth of a symbol-free expression under a total assignment.
    fn eval(expr: &RuleExpr, values: &[usize]) -> bool {
        match expr {
            RuleExpr::Literal(l) => l.matches(values),
            RuleExpr::Symbol(_) => panic!("symbol in a closed expression"),
            RuleExpr::And(cs) => cs.iter().all(|c| eval(c, values)),
            RuleExpr::Or(cs) => cs.iter().any(|c| eval(c, values)),
            RuleExpr::Not(inner) => !eval(inner, values),
        }
    }

    fn assignments(n: usize) -> impl Iterator<Item = Vec<usize>> {
        (0..1usize << n).map(move |bits| (0..n).map(|f| (bits >> f) & 1).collect())
    }

    #[test]
    fn negate_applies_de_morgan() {
        let schema = schema5();
        let not_j = RuleExpr::And(vec![lit(&schema, "a", true), lit(&schema, "b", true)]);
        assert_eq!(
            negate(&not_j),
            RuleExpr::Or(vec![lit(&schema, "a", false), lit(&schema, "b", false)])
        );
    }

    #[test]
    fn negate_is_an_involution_on_nnf() {
        let schema = schema5();
        let exprs = [
            lit(&schema, "x", false),
            RuleExpr::And(vec![lit(&schema, "x", false), lit(&schema, "y", true)]),
            RuleExpr::Or(vec![
                RuleExpr::And(vec![lit(&schema, "x", false), lit(&schema, "y", true)]),
                lit(&schema, "z", false),
            ]),
        ];
        for e in exprs {
            assert_eq!(negate(&negate(&e)), e);
        }
    }

    #[test]
    fn negate_agrees_with_truth_tables() {
        let schema = schema5();
        let e = RuleExpr::Or(vec![
            lit(&schema, "x", false),
            RuleExpr::And(vec![lit(&schema, "y", false), lit(&schema, "z", false)]),
        ]);
        let negated = negate(&e);
        assert_eq!(
            negated,
            RuleExpr::And(vec![
                lit(&schema, "x", true),
                RuleExpr::Or(vec![lit(&schema, "y", true), lit(&schema, "z", true)]),
            ])
        );
        for values in assignments(5) {
            assert_eq!(eval(&negated, &values), !eval(&e, &values));
        }
    }

    #[test]
    fn unfold_restates_the_hierarchy_over_literals() {
        let schema = schema5();
        let ruleset = parse_ruleset(HIERARCHY, &schema).unwrap();
        let unfolded = unfold(&ruleset);
        assert_eq!(unfolded.len(), 1);
        // (a | b) & ((x & !y) | z)
        assert_eq!(
            unfolded[0].antecedent,
            RuleExpr::And(vec![
                RuleExpr::Or(vec![lit(&schema, "a", false), lit(&schema, "b", false)]),
                RuleExpr::Or(vec![
                    RuleExpr::And(vec![lit(&schema, "x", false), lit(&schema, "y", true)]),
                    lit(&schema, "z", false),
                ]),
            ])
        );
    }

    #[test]
    fn unfold_leaves_atomic_rules_alone() {
        let schema = schema5();
        let ruleset = parse_ruleset("class <- a & !b.", &schema).unwrap();
        let unfolded = unfold(&ruleset);
        assert_eq!(unfolded[0].antecedent, ruleset.rules()[0].antecedent);
    }

    #[test]
    fn unfold_disjoins_multiple_definitions() {
        let schema = schema5();
        let ruleset = parse_ruleset("m <- a. m <- b. class <- m.", &schema).unwrap();
        let unfolded = unfold(&ruleset);
        assert_eq!(
            unfolded[0].antecedent,
            RuleExpr::Or(vec![lit(&schema, "a", false), lit(&schema, "b", false)])
        );
        // Equivalent to a | b under every assignment.
        for values in assignments(5) {
            assert_eq!(
                eval(&unfolded[0].antecedent, &values),
                values[0] == 1 || values[1] == 1
            );
        }
    }

    fn literal_sets(rules: &[OperationalRule]) -> BTreeSet<Vec<Literal>> {
        rules.iter().map(|r| r.literals.clone()).collect()
    }

    #[test]
    fn hierarchy_flattens_to_the_four_known_rules() {
        let schema = schema5();
        let ruleset = parse_ruleset(HIERARCHY, &schema).unwrap();
        let out = operationalize(&ruleset, 10_000).unwrap();
        assert_eq!(out.dropped_unsatisfiable, 0);

        let expected: BTreeSet<Vec<Literal>> = [
            // a & x & !y
            vec![
                Literal::positive(0, 1),
                Literal::positive(2, 1),
                Literal::negative(3, 1),
            ],
            // a & z
            vec![Literal::positive(0, 1), Literal::positive(4, 1)],
            // b & x & !y
            vec![
                Literal::positive(1, 1),
                Literal::positive(2, 1),
                Literal::negative(3, 1),
            ],
            // b & z
            vec![Literal::positive(1, 1), Literal::positive(4, 1)],
        ]
        .into_iter()
        .collect();
        assert_eq!(literal_sets(&out.rules), expected);
        assert!(out.rules.iter().all(|r| r.class_value == 1));
        assert_eq!(out.rules.iter().map(|r| r.id).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn operational_input_is_a_fixed_point() {
        let schema = schema5();
        let ruleset = parse_ruleset("class <- a & x & !y.", &schema).unwrap();
        let out = operationalize(&ruleset, 10_000).unwrap();
        assert_eq!(out.rules.len(), 1);
        assert_eq!(out.rules[0].literal_count(), 3);
        assert_eq!(out.dropped_unsatisfiable, 0);
    }

    #[test]
    fn contradiction_is_dropped_with_a_count() {
        let schema = schema5();
        let ruleset = parse_ruleset("class <- x & !x.", &schema).unwrap();
        let out = operationalize(&ruleset, 10_000).unwrap();
        assert!(out.rules.is_empty());
        assert_eq!(out.dropped_unsatisfiable, 1);
    }

    #[test]
    fn conflicting_positive_values_are_dropped() {
        let schema = Schema::new(
            vec![Feature::new("p", ["A", "C", "G"])],
            Feature::binary("class"),
        )
        .unwrap();
        let ruleset = parse_ruleset("class <- p=A & p=C.", &schema).unwrap();
        let out = operationalize(&ruleset, 10_000).unwrap();
        assert!(out.rules.is_empty());
        assert_eq!(out.dropped_unsatisfiable, 1);
    }

    #[test]
    fn exhaustive_negation_is_unsatisfiable_but_partial_is_kept() {
        let schema = Schema::new(
            vec![Feature::new("p", ["A", "C", "G"])],
            Feature::binary("class"),
        )
        .unwrap();

        let full = parse_ruleset("class <- !p=A & !p=C & !p=G.", &schema).unwrap();
        let out = operationalize(&full, 10_000).unwrap();
        assert!(out.rules.is_empty());
        assert_eq!(out.dropped_unsatisfiable, 1);

        // Two of three values excluded still admits p=G.
        let partial = parse_ruleset("class <- !p=A & !p=C.", &schema).unwrap();
        let out = operationalize(&partial, 10_000).unwrap();
        assert_eq!(out.rules.len(), 1);
        assert_eq!(out.rules[0].literal_count(), 2);
    }

    #[test]
    fn duplicate_disjuncts_are_merged() {
        let schema = schema5();
        let ruleset = parse_ruleset("class <- a | a.\nclass <- a.", &schema).unwrap();
        let out = operationalize(&ruleset, 10_000).unwrap();
        assert_eq!(out.rules.len(), 1);
        // Same literal set concluding a different class is a distinct rule.
        let split = parse_ruleset("class=T <- a.\nclass=F <- a.", &schema).unwrap();
        assert_eq!(operationalize(&split, 10_000).unwrap().rules.len(), 2);
    }

    #[test]
    fn blowup_is_an_error_not_a_truncation() {
        let schema = schema5();
        let ruleset = parse_ruleset("class <- (a | b) & (x | y | z).", &schema).unwrap();
        assert_eq!(operationalize(&ruleset, 10_000).unwrap().rules.len(), 6);
        assert_eq!(
            operationalize(&ruleset, 5).unwrap_err(),
            Error::RuleBlowup { limit: 5 }
        );
    }

    #[test]
    fn operationalize_is_deterministic() {
        let schema = schema5();
        let ruleset = parse_ruleset(HIERARCHY, &schema).unwrap();
        let a = operationalize(&ruleset, 10_000).unwrap();
        let b = operationalize(&ruleset, 10_000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn redundant_negation_on_an_asserted_feature_is_kept() {
        // p=A & p!=C is satisfiable; both literals stay and count toward L.
        let schema = Schema::new(
            vec![Feature::new("p", ["A", "C", "G"])],
            Feature::binary("class"),
        )
        .unwrap();
        let ruleset = parse_ruleset("class <- p=A & !p=C.", &schema).unwrap();
        let out = operationalize(&ruleset, 10_000).unwrap();
        assert_eq!(out.rules.len(), 1);
        assert_eq!(out.rules[0].literal_count(), 2);
    }
}
