use std::collections::HashMap;
use std::fmt;

use crate::grammar::{RuleId, INPUT_CATEGORY};
use crate::term::{canonical_args, Term};

use super::EngineError;

pub type EdgeId = usize;

/// How an edge came to be in the chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    /// A word fact.
    Input,
    /// A rule whose body is all terminals.
    Lexical { rule: RuleId },
    /// A rule seated on chart edges; one child per body item, in body order.
    Derived { rule: RuleId, children: Vec<EdgeId> },
    /// Built by top-down prediction. Gap edges have no rule and no children.
    Predicted {
        rule: Option<RuleId>,
        children: Vec<EdgeId>,
        gap: bool,
    },
    /// Result of combining two parallel conjuncts.
    Coordinated {
        constraint: usize,
        source: EdgeId,
        target: EdgeId,
    },
}

/// A derived theorem `category(args)` over the token span `start..end`.
#[derive(Debug, Clone)]
pub struct Edge {
    pub id: EdgeId,
    pub category: String,
    pub args: Vec<Term>,
    pub start: usize,
    pub end: usize,
    /// 1-based layer in which the edge was first derived.
    pub layer: usize,
    pub provenance: Provenance,
}

impl Edge {
    pub fn is_gap(&self) -> bool {
        matches!(self.provenance, Provenance::Predicted { gap: true, .. })
    }

    pub fn is_predicted(&self) -> bool {
        matches!(self.provenance, Provenance::Predicted { .. })
    }

    /// Child edges, in body order, for derived and predicted edges.
    pub fn children(&self) -> &[EdgeId] {
        match &self.provenance {
            Provenance::Derived { children, .. } | Provenance::Predicted { children, .. } => {
                children
            }
            _ => &[],
        }
    }

    /// Theorem notation with positions as trailing arguments: `np(V0,V1,2,5)`.
    pub fn notation(&self) -> String {
        let mut parts = canonical_args(&self.args);
        parts.push(self.start.to_string());
        parts.push(self.end.to_string());
        format!("{}({})", self.category, parts.join(","))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.notation())
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids = |c: &[EdgeId]| {
            c.iter()
                .map(|i| format!("#{i}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        match self {
            Provenance::Input => f.write_str("input"),
            Provenance::Lexical { rule } => write!(f, "lexical {rule}"),
            Provenance::Derived { rule, children } => write!(f, "{rule} <- {}", ids(children)),
            Provenance::Predicted { gap: true, .. } => f.write_str("gap"),
            Provenance::Predicted {
                rule: Some(rule),
                children,
                ..
            } => write!(f, "predicted {rule} <- {}", ids(children)),
            Provenance::Predicted { rule: None, .. } => f.write_str("predicted"),
            Provenance::Coordinated {
                constraint,
                source,
                target,
            } => write!(f, "coordinated C{constraint} <- #{source} #{target}"),
        }
    }
}

/// Outcome of [`Chart::insert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inserted {
    pub id: EdgeId,
    /// False when a variant already existed; `id` then names that edge.
    pub new: bool,
}

type SpanKey = (String, usize, usize);

/// Append-only store of edges with variant deduplication, positional and
/// categorical indexes, and per-layer membership.
#[derive(Debug, Clone, Default)]
pub struct Chart {
    tokens: Vec<String>,
    edges: Vec<Edge>,
    variants: HashMap<SpanKey, HashMap<Vec<String>, EdgeId>>,
    by_start: HashMap<(String, usize), Vec<EdgeId>>,
    by_end: HashMap<(String, usize), Vec<EdgeId>>,
    by_category: HashMap<String, Vec<EdgeId>>,
    layers: Vec<Vec<EdgeId>>,
}

impl Chart {
    /// Encodes the input as word facts `'D'(word)` over `i..i+1`, all in layer 1.
    pub fn assert_input<S: AsRef<str>>(tokens: &[S]) -> Result<Chart, EngineError> {
        if tokens.is_empty() {
            return Err(EngineError::EmptyInput);
        }
        let mut chart = Chart {
            tokens: tokens.iter().map(|t| t.as_ref().to_string()).collect(),
            ..Chart::default()
        };
        chart.open_layer();
        for i in 0..chart.tokens.len() {
            let word = Term::constant(&chart.tokens[i]);
            chart.insert(INPUT_CATEGORY, vec![word], i, i + 1, Provenance::Input);
        }
        Ok(chart)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Sentence length in tokens.
    pub fn width(&self) -> usize {
        self.tokens.len()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// Edge ids of layer `k` (1-based).
    pub fn layer(&self, k: usize) -> &[EdgeId] {
        &self.layers[k - 1]
    }

    /// Starts a new layer; subsequent inserts land in it.
    pub fn open_layer(&mut self) {
        self.layers.push(Vec::new());
    }

    pub(crate) fn drop_empty_layer(&mut self) {
        if self.layers.last().is_some_and(|l| l.is_empty()) {
            self.layers.pop();
        }
    }

    /// Existing edge with the same category and span whose arguments are a
    /// variant of `args`.
    pub fn find_variant(
        &self,
        category: &str,
        start: usize,
        end: usize,
        args: &[Term],
    ) -> Option<EdgeId> {
        self.variants
            .get(&(category.to_string(), start, end))?
            .get(&canonical_args(args))
            .copied()
    }

    /// Adds an edge to the newest layer unless a variant is already present.
    ///
    /// # Panics
    ///
    /// If no layer is open or the span lies outside the input.
    pub fn insert(
        &mut self,
        category: &str,
        args: Vec<Term>,
        start: usize,
        end: usize,
        provenance: Provenance,
    ) -> Inserted {
        assert!(
            start <= end && end <= self.tokens.len(),
            "span {start}..{end} out of range"
        );
        let key = canonical_args(&args);
        let slot = self
            .variants
            .entry((category.to_string(), start, end))
            .or_default();
        if let Some(&id) = slot.get(&key) {
            return Inserted { id, new: false };
        }
        let id = self.edges.len();
        slot.insert(key, id);
        let layer = self.layers.len();
        assert!(layer > 0, "no open layer");
        self.layers[layer - 1].push(id);
        self.by_start
            .entry((category.to_string(), start))
            .or_default()
            .push(id);
        self.by_end
            .entry((category.to_string(), end))
            .or_default()
            .push(id);
        self.by_category
            .entry(category.to_string())
            .or_default()
            .push(id);
        self.edges.push(Edge {
            id,
            category: category.to_string(),
            args,
            start,
            end,
            layer,
            provenance,
        });
        Inserted { id, new: true }
    }

    pub fn starting_at(&self, category: &str, pos: usize) -> &[EdgeId] {
        self.by_start
            .get(&(category.to_string(), pos))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn ending_at(&self, category: &str, pos: usize) -> &[EdgeId] {
        self.by_end
            .get(&(category.to_string(), pos))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn of_category(&self, category: &str) -> &[EdgeId] {
        self.by_category
            .get(category)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Non-input edges ending at `pos`, in id order.
    pub fn all_ending_at(&self, pos: usize) -> impl Iterator<Item = &Edge> {
        self.edges
            .iter()
            .filter(move |e| e.end == pos && e.category != INPUT_CATEGORY)
    }

    /// Non-input edges starting at `pos`, in id order.
    pub fn all_starting_at(&self, pos: usize) -> impl Iterator<Item = &Edge> {
        self.edges
            .iter()
            .filter(move |e| e.start == pos && e.category != INPUT_CATEGORY)
    }

    /// One trace line per edge in derivation order:
    /// `T<k>: cat(args,start,end)  [provenance]`.
    pub fn trace_line(&self, id: EdgeId) -> String {
        let e = &self.edges[id];
        format!(
            "T{}: {}  [#{} {}]",
            e.layer,
            e.notation(),
            e.id,
            e.provenance
        )
    }
}
