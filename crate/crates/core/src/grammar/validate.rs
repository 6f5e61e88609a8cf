use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Grammar, RuleItem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn error(message: String) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            message,
        }
    }

    fn warning(message: String) -> Diagnostic {
        Diagnostic {
            severity: Severity::Warning,
            message,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{tag}: {}", self.message)
    }
}

/// Checks the grammar invariants. Returns one diagnostic per violation, in a
/// deterministic order; an empty list means the grammar is sound.
pub fn validate(g: &Grammar) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    for (cat, first, second) in g.arity_conflicts() {
        out.push(Diagnostic::error(format!(
            "arity conflict {cat}: used with {first} and {second} arguments"
        )));
    }

    let mut undefined = BTreeSet::new();
    for r in g.rules() {
        for item in &r.body {
            if let RuleItem::NonTerminal(nt) = item {
                if !g.has_rules_for(&nt.category) && nt.category != g.conj_category() {
                    undefined.insert(nt.category.clone());
                }
            }
        }
    }
    for cat in undefined {
        out.push(Diagnostic::error(format!("undefined category {cat}")));
    }

    if !g.has_rules_for(g.start()) {
        out.push(Diagnostic::error(format!(
            "start category {} has no rules",
            g.start()
        )));
    }

    match g.arity(g.conj_category()) {
        Some(1) => {}
        Some(n) => out.push(Diagnostic::error(format!(
            "conjunction category {} must have exactly one argument, has {n}",
            g.conj_category()
        ))),
        None => {}
    }

    for (cat, &pos) in g.scope_args() {
        match g.arity(cat) {
            Some(n) if pos == 0 || pos > n => out.push(Diagnostic::error(format!(
                "scope position {pos} out of range for {cat} with arity {n}"
            ))),
            None => out.push(Diagnostic::error(format!(
                "scope declared for unknown category {cat}"
            ))),
            _ => {}
        }
    }

    for r in g.rules() {
        for item in &r.body {
            if let RuleItem::Terminal(w) = item {
                let ok = !w.is_empty()
                    && w.chars()
                        .all(|c| c.is_lowercase() || c.is_ascii_digit() || c == '_');
                if !ok {
                    out.push(Diagnostic::error(format!(
                        "terminal {w} in rule {} is not a lowercase word",
                        r.id
                    )));
                }
            }
        }
    }

    for cat in unit_cycles(g) {
        out.push(Diagnostic::warning(format!("unit cycle {cat}")));
    }

    out
}

/// Categories lying on a cycle of single-item rules (`a --> b`, `b --> a`).
fn unit_cycles(g: &Grammar) -> BTreeSet<String> {
    let mut edges: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for r in g.rules() {
        if let [RuleItem::NonTerminal(nt)] = r.body.as_slice() {
            edges
                .entry(r.head.category.as_str())
                .or_default()
                .insert(nt.category.as_str());
        }
    }
    let mut cyclic = BTreeSet::new();
    for &start in edges.keys() {
        let mut stack: Vec<&str> = edges[start].iter().copied().collect();
        let mut seen = BTreeSet::new();
        while let Some(c) = stack.pop() {
            if c == start {
                cyclic.insert(start.to_string());
                break;
            }
            if seen.insert(c) {
                if let Some(next) = edges.get(c) {
                    stack.extend(next.iter().copied());
                }
            }
        }
    }
    cyclic
}
