use std::fmt;

use crate::grammar::Grammar;
use crate::term::Term;

use super::chart::{Chart, Edge, EdgeId, Provenance};

/// A complete parse: a start-category edge covering the whole input.
#[derive(Debug, Clone)]
pub struct ParseResult {
    pub root: EdgeId,
    pub logical_form: Term,
    pub derivation: DerivationTree,
}

/// The derivation of an edge, expanded down to the word facts. Coordinated
/// edges list their source and target conjuncts as children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTree {
    pub edge: EdgeId,
    pub label: String,
    pub children: Vec<DerivationTree>,
}

impl DerivationTree {
    pub fn build(chart: &Chart, id: EdgeId) -> DerivationTree {
        let e = chart.edge(id);
        let kids: Vec<EdgeId> = match &e.provenance {
            Provenance::Coordinated { source, target, .. } => {
                let (s, t) = (chart.edge(*source), chart.edge(*target));
                if s.start <= t.start {
                    vec![*source, *target]
                } else {
                    vec![*target, *source]
                }
            }
            // word facts are asserted first, so token i is edge i
            Provenance::Lexical { .. } => (e.start..e.end).collect(),
            _ => e.children().to_vec(),
        };
        DerivationTree {
            edge: id,
            label: format!("{}({},{})", e.category, e.start, e.end),
            children: kids
                .into_iter()
                .map(|c| DerivationTree::build(chart, c))
                .collect(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(DerivationTree::size)
            .sum::<usize>()
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        writeln!(f, "{:indent$}{}", "", self.label)?;
        for c in &self.children {
            c.write(f, indent + 2)?;
        }
        Ok(())
    }
}

impl fmt::Display for DerivationTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// The meaning carried by an edge: its only argument, the bare category
/// when it has none, and the whole theorem otherwise.
pub fn logical_form(edge: &Edge) -> Term {
    match edge.args.as_slice() {
        [one] => one.clone(),
        [] => Term::constant(&edge.category),
        args => Term::app(&edge.category, args.to_vec()),
    }
}

/// Every start-category edge spanning the input, in derivation order.
pub fn extract(chart: &Chart, grammar: &Grammar) -> Vec<ParseResult> {
    chart
        .ending_at(grammar.start(), chart.width())
        .iter()
        .map(|&id| chart.edge(id))
        .filter(|e| e.start == 0 && !e.is_gap())
        .map(|e| ParseResult {
            root: e.id,
            logical_form: logical_form(e),
            derivation: DerivationTree::build(chart, e.id),
        })
        .collect()
}
