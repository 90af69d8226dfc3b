//! Semantic equivalence of flattening: for random rule hierarchies, the
//! operational DNF must fire for exactly the same (assignment, class value)
//! pairs as a direct recursive evaluation of the parsed ruleset.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rascal_core::error::Error;
use rascal_core::rules::{
    operationalize, parse_ruleset, validate, OperationalRule, RuleExpr, RuleHead, Ruleset,
};
use rascal_core::schema::{Feature, Schema};

/// Direct evaluation of an antecedent under an assignment, resolving
/// symbols through the ruleset (assumed acyclic).
fn eval_expr(expr: &RuleExpr, ruleset: &Ruleset, values: &[usize]) -> bool {
    match expr {
        RuleExpr::Literal(l) => l.matches(values),
        RuleExpr::Symbol(s) => ruleset.definitions()[s]
            .iter()
            .any(|&i| eval_expr(&ruleset.rules()[i].antecedent, ruleset, values)),
        RuleExpr::And(children) => children.iter().all(|c| eval_expr(c, ruleset, values)),
        RuleExpr::Or(children) => children.iter().any(|c| eval_expr(c, ruleset, values)),
        RuleExpr::Not(inner) => !eval_expr(inner, ruleset, values),
    }
}

fn oracle_fires(ruleset: &Ruleset, class_value: usize, values: &[usize]) -> bool {
    ruleset
        .rules()
        .iter()
        .filter(|r| r.head == RuleHead::Class(class_value))
        .any(|r| eval_expr(&r.antecedent, ruleset, values))
}

fn dnf_fires(rules: &[OperationalRule], class_value: usize, values: &[usize]) -> bool {
    rules
        .iter()
        .filter(|r| r.class_value == class_value)
        .any(|r| r.literals.iter().all(|l| l.matches(values)))
}

/// Iterates every assignment of the schema's feature values (mixed radix).
fn assignments(schema: &Schema) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for feature in schema.features() {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 0..feature.arity() {
                let mut row = prefix.clone();
                row.push(v);
                next.push(row);
            }
        }
        out = next;
    }
    out
}

/// Emits a random antecedent expression in surface syntax.
fn random_expr(rng: &mut ChaCha8Rng, schema: &Schema, symbols: &[&str], depth: usize) -> String {
    let pick = if depth == 0 {
        rng.gen_range(0..2)
    } else {
        rng.gen_range(0..6)
    };
    match pick {
        0 | 1 => {
            if pick == 1 && !symbols.is_empty() {
                let name = symbols[rng.gen_range(0..symbols.len())];
                if rng.gen_bool(0.3) {
                    return format!("!{name}");
                }
                return name.to_string();
            }
            let index = rng.gen_range(0..schema.feature_count());
            let feature = schema.feature(index);
            let value = rng.gen_range(0..feature.arity());
            let negated = rng.gen_bool(0.4);
            let bang = if negated { "!" } else { "" };
            // Binary {F,T} features may abbreviate `=T` away.
            if feature.is_binary_tf() && value == 1 && rng.gen_bool(0.5) {
                format!("{bang}{}", feature.name())
            } else {
                format!("{bang}{}={}", feature.name(), feature.domain()[value])
            }
        }
        2 | 3 => {
            let n = rng.gen_range(2..=3);
            let glue = if pick == 2 { " & " } else { " | " };
            let parts: Vec<String> = (0..n)
                .map(|_| random_expr(rng, schema, symbols, depth - 1))
                .collect();
            format!("({})", parts.join(glue))
        }
        4 => format!("!({})", random_expr(rng, schema, symbols, depth - 1)),
        _ => random_expr(rng, schema, symbols, depth - 1),
    }
}

fn random_ruleset_text(rng: &mut ChaCha8Rng, schema: &Schema) -> String {
    let mut text = String::new();
    let mut symbols: Vec<&str> = Vec::new();
    if rng.gen_bool(0.8) {
        for _ in 0..rng.gen_range(1..=2) {
            text += &format!("shape <- {}.\n", random_expr(rng, schema, &[], 2));
        }
        symbols.push("shape");
    }
    if rng.gen_bool(0.5) {
        text += &format!("stack <- {}.\n", random_expr(rng, schema, &symbols, 2));
        symbols.push("stack");
    }
    let class = schema.class();
    for _ in 0..rng.gen_range(1..=3) {
        let value = rng.gen_range(0..class.arity());
        let head = if class.is_binary_tf() && value == 1 && rng.gen_bool(0.5) {
            class.name().to_string()
        } else {
            format!("{} = {}", class.name(), class.domain()[value])
        };
        text += &format!("{head} <- {}.\n", random_expr(rng, schema, &symbols, 3));
    }
    text
}

fn check_schema(schema: &Schema, seeds: core::ops::Range<u64>) {
    let all = assignments(schema);
    let mut blowups = 0;
    for seed in seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let text = random_ruleset_text(&mut rng, schema);
        let ruleset = parse_ruleset(&text, schema)
            .unwrap_or_else(|e| panic!("generated text must parse: {e}\n{text}"));
        assert!(validate(&ruleset).is_empty(), "generated hierarchy is well-formed");

        let operational = match operationalize(&ruleset, 50_000) {
            Ok(op) => op,
            Err(Error::RuleBlowup { .. }) => {
                blowups += 1;
                continue;
            }
            Err(other) => panic!("unexpected failure: {other}\n{text}"),
        };

        for rule in &operational.rules {
            // Flat rules are sorted, deduplicated conjunctions.
            assert!(rule.literals.windows(2).all(|w| w[0] < w[1]), "{text}");
        }
        for values in &all {
            for class_value in 0..schema.class().arity() {
                assert_eq!(
                    oracle_fires(&ruleset, class_value, values),
                    dnf_fires(&operational.rules, class_value, values),
                    "disagreement at {values:?} for class value {class_value}:\n{text}"
                );
            }
        }
    }
    assert!(blowups < 20, "too many expansions hit the cap: {blowups}");
}

#[test]
fn flattening_preserves_semantics_over_binary_features() {
    let schema = Schema::new(
        ["wa", "wb", "wc", "wd"].map(Feature::binary).to_vec(),
        Feature::binary("class"),
    )
    .unwrap();
    check_schema(&schema, 0..120);
}

#[test]
fn flattening_preserves_semantics_over_mixed_arities() {
    let schema = Schema::new(
        vec![
            Feature::binary("solid"),
            Feature::new("hue", ["red", "green", "blue"]),
            Feature::new("size", ["s", "m", "l", "xl"]),
        ],
        Feature::new("grade", ["lo", "hi"]),
    )
    .unwrap();
    check_schema(&schema, 1000..1080);
}
