//! The rule language: abstract syntax, parsing, validation, and flattening
//! into operational (purely conjunctive) form.
//!
//! Rules are written as `head <- antecedent.` statements. Heads are either
//! intermediate symbols or the class attribute; antecedents combine feature
//! literals and symbols with `&`, `|`, `!` and parentheses. A symbol defined
//! by several statements means the disjunction of their antecedents.

mod ops;
mod parse;
mod validate;

pub use ops::{negate, operationalize, unfold, Operationalization};
pub use parse::{parse_ruleset, ParseError};
pub use validate::{validate, Diagnostic};

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::schema::Schema;

/// An assertion about a single feature: `feature = value` or, when
/// `negated`, `feature != value`.
///
/// Both sides are indices into the bound [`Schema`]. A negated literal is
/// satisfied by *any* domain value other than `value`, which matters for
/// features with more than two values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub feature: usize,
    pub value: usize,
    pub negated: bool,
}

impl Literal {
    pub fn positive(feature: usize, value: usize) -> Self {
        Literal { feature, value, negated: false }
    }

    pub fn negative(feature: usize, value: usize) -> Self {
        Literal { feature, value, negated: true }
    }

    /// Whether the positionally indexed `values` satisfy this assertion.
    pub fn matches(&self, values: &[usize]) -> bool {
        (values[self.feature] == self.value) != self.negated
    }

    /// Same assertion with flipped polarity.
    pub fn complement(&self) -> Self {
        Literal { negated: !self.negated, ..*self }
    }
}

/// Antecedent expression tree. Leaves are schema literals or symbols
/// defined by other rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleExpr {
    Literal(Literal),
    Symbol(String),
    And(Vec<RuleExpr>),
    Or(Vec<RuleExpr>),
    Not(Box<RuleExpr>),
}

/// What a rule concludes: an intermediate symbol, or a class label given as
/// an index into the class domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleHead {
    Symbol(String),
    Class(usize),
}

/// One `head <- antecedent.` statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub head: RuleHead,
    pub antecedent: RuleExpr,
    /// 1-based statement position in the source text, used in diagnostics
    /// and operational-rule origins.
    pub statement: usize,
}

/// A parsed rule hierarchy bound to a schema.
///
/// `definitions` maps each defined symbol to the statements defining it, in
/// source order; a symbol with several definitions denotes the disjunction
/// of their antecedents.
#[derive(Debug, Clone)]
pub struct Ruleset {
    schema: Schema,
    rules: Vec<Rule>,
    definitions: BTreeMap<String, Vec<usize>>,
}

impl Ruleset {
    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn definitions(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.definitions
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

/// A flat rule: a conjunction of literals implying one class label.
///
/// Literals are sorted and deduplicated. The conjunction is satisfiable
/// (unsatisfiable combinations are dropped during flattening), and its
/// length is the rule's `L` in the generality score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationalRule {
    /// Position in the flattened ruleset; stable for a given source text.
    pub id: usize,
    pub literals: Vec<Literal>,
    /// Index into the class domain.
    pub class_value: usize,
    /// Head and statement number of the source rule, e.g. `class=T@3`.
    pub origin: String,
}

impl OperationalRule {
    /// Number of literals, the `L` in the generality score.
    pub fn literal_count(&self) -> usize {
        self.literals.len()
    }
}
