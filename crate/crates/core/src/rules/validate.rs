//! Structural checks that must pass before a ruleset can be flattened:
//! every referenced symbol has a definition, and definitions are acyclic
//! (backward-chaining substitution presumes a DAG).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::{RuleExpr, Ruleset};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagnostic {
    /// A symbol used in an antecedent with no defining rule. `statement`
    /// is the first rule referencing it.
    UndefinedSymbol { symbol: String, statement: usize },
    /// A group of symbols whose definitions depend on each other.
    Cycle { symbols: Vec<String> },
}

impl core::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Diagnostic::UndefinedSymbol { symbol, statement } => write!(
                f,
                "rule {statement} references `{symbol}`, which no rule defines"
            ),
            Diagnostic::Cycle { symbols } => {
                write!(f, "rule definitions form a cycle through {{")?;
                for (i, s) in symbols.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

fn referenced_symbols<'e>(expr: &'e RuleExpr, out: &mut Vec<&'e str>) {
    match expr {
        RuleExpr::Literal(_) => {}
        RuleExpr::Symbol(name) => out.push(name),
        RuleExpr::And(children) | RuleExpr::Or(children) => {
            for child in children {
                referenced_symbols(child, out);
            }
        }
        RuleExpr::Not(child) => referenced_symbols(child, out),
    }
}

/// Returns one diagnostic per violation; an empty list means the ruleset is
/// safe to operationalize. Callers must treat a non-empty list as fatal.
pub fn validate(ruleset: &Ruleset) -> Vec<Diagnostic> {
    let mut diagnostics = Vec::new();

    let mut reported: BTreeSet<&str> = BTreeSet::new();
    for rule in ruleset.rules() {
        let mut referenced = Vec::new();
        referenced_symbols(&rule.antecedent, &mut referenced);
        for symbol in referenced {
            if !ruleset.definitions().contains_key(symbol) && reported.insert(symbol) {
                diagnostics.push(Diagnostic::UndefinedSymbol {
                    symbol: symbol.into(),
                    statement: rule.statement,
                });
            }
        }
    }

    // Dependency graph restricted to defined symbols; undefined references
    // were already reported above and cannot participate in a cycle.
    let mut graph: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (symbol, defining) in ruleset.definitions() {
        let deps = graph.entry(symbol).or_default();
        for &rule_index in defining {
            let mut referenced = Vec::new();
            referenced_symbols(&ruleset.rules()[rule_index].antecedent, &mut referenced);
            for dep in referenced {
                if ruleset.definitions().contains_key(dep) {
                    deps.insert(dep);
                }
            }
        }
    }

    for scc in strongly_connected_components(&graph) {
        let cyclic = scc.len() > 1
            || graph.get(scc[0]).is_some_and(|deps| deps.contains(scc[0]));
        if cyclic {
            let mut symbols: Vec<String> = scc.iter().map(|&s| s.into()).collect();
            symbols.sort();
            diagnostics.push(Diagnostic::Cycle { symbols });
        }
    }

    diagnostics
}

/// Tarjan's algorithm. Node order (and therefore output order) follows the
/// sorted map, keeping diagnostics deterministic.
fn strongly_connected_components<'g>(
    graph: &BTreeMap<&'g str, BTreeSet<&'g str>>,
) -> Vec<Vec<&'g str>> {
    struct State<'g> {
        index: BTreeMap<&'g str, usize>,
        low: BTreeMap<&'g str, usize>,
        on_stack: BTreeSet<&'g str>,
        stack: Vec<&'g str>,
        next_index: usize,
        components: Vec<Vec<&'g str>>,
    }

    fn connect<'g>(
        node: &'g str,
        graph: &BTreeMap<&'g str, BTreeSet<&'g str>>,
        state: &mut State<'g>,
    ) {
        state.index.insert(node, state.next_index);
        state.low.insert(node, state.next_index);
        state.next_index += 1;
        state.stack.push(node);
        state.on_stack.insert(node);

        if let Some(deps) = graph.get(node) {
            for &dep in deps {
                if !state.index.contains_key(dep) {
                    connect(dep, graph, state);
                    let dep_low = state.low[dep];
                    let low = state.low.get_mut(node).expect("visited");
                    *low = (*low).min(dep_low);
                } else if state.on_stack.contains(dep) {
                    let dep_index = state.index[dep];
                    let low = state.low.get_mut(node).expect("visited");
                    *low = (*low).min(dep_index);
                }
            }
        }

        if state.low[node] == state.index[node] {
            let mut component = Vec::new();
            while let Some(top) = state.stack.pop() {
                state.on_stack.remove(top);
                component.push(top);
                if top == node {
                    break;
                }
            }
            state.components.push(component);
        }
    }

    let mut state = State {
        index: BTreeMap::new(),
        low: BTreeMap::new(),
        on_stack: BTreeSet::new(),
        stack: Vec::new(),
        next_index: 0,
        components: Vec::new(),
    };
    for &node in graph.keys() {
        if !state.index.contains_key(node) {
            connect(node, graph, &mut state);
        }
    }
    state.components
}
