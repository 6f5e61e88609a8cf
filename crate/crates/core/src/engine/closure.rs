use std::collections::BTreeSet;

use crate::grammar::{Grammar, Rule, RuleId, RuleItem, INPUT_CATEGORY};
use crate::term::{Renamer, Substitution, Term};

use super::chart::{Chart, EdgeId, Provenance};
use super::EngineError;

/// Extension point run between closure layers.
pub trait ClosureHook {
    /// Called once layer `completed` is final. Edges inserted here land in
    /// layer `completed + 1`, alongside that layer's rule derivations.
    fn after_layer(&mut self, chart: &mut Chart, grammar: &Grammar, completed: usize);

    /// Called when the next layer came out empty. Inserting edges and
    /// returning true keeps the closure going.
    fn at_fixpoint(&mut self, _chart: &mut Chart, _grammar: &Grammar) -> bool {
        false
    }
}

/// A hook that does nothing.
pub struct NoHook;

impl ClosureHook for NoHook {
    fn after_layer(&mut self, _: &mut Chart, _: &Grammar, _: usize) {}
}

/// A rule instance seated on contiguous chart edges.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub rule: RuleId,
    pub category: String,
    pub args: Vec<Term>,
    pub start: usize,
    pub end: usize,
    /// One edge per body item, in body order.
    pub children: Vec<EdgeId>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Old,
    Delta,
    Hidden,
}

/// Semi-naive closure: layer `k + 1` holds everything derivable with at
/// least one edge from layer `k`, minus variants of edges already present.
/// Stops at the first empty layer.
pub fn close(
    chart: &mut Chart,
    grammar: &Grammar,
    hook: &mut dyn ClosureHook,
    layer_cap: usize,
) -> Result<(), EngineError> {
    assert!(chart.layer_count() >= 1, "close needs the input layer");
    loop {
        let k = chart.layer_count();
        let visible = chart.len();
        chart.open_layer();
        hook.after_layer(chart, grammar, k);

        let classify = |id: EdgeId, layer: usize| {
            if id >= visible {
                Class::Hidden
            } else if layer == k {
                Class::Delta
            } else {
                Class::Old
            }
        };
        let mut derived = Vec::new();
        for rule in grammar.rules() {
            derived.extend(seat_rule(rule, chart, &classify));
        }
        for d in derived {
            let prov = if grammar.rule(d.rule).is_lexical() {
                Provenance::Lexical { rule: d.rule }
            } else {
                Provenance::Derived {
                    rule: d.rule,
                    children: d.children,
                }
            };
            chart.insert(&d.category, d.args, d.start, d.end, prov);
        }

        if chart.layer(k + 1).is_empty()
            && (!hook.at_fixpoint(chart, grammar) || chart.layer(k + 1).is_empty())
        {
            chart.drop_empty_layer();
            return Ok(());
        }
        if k + 1 > layer_cap {
            return Err(EngineError::LayerCapExceeded { cap: layer_cap });
        }
    }
}

/// All seatings of `rule` on contiguous chart edges that use at least one
/// edge from `delta`. Terminals match word facts by token.
pub fn match_rule(rule: &Rule, delta: &BTreeSet<EdgeId>, chart: &Chart) -> Vec<Derivation> {
    seat_rule(rule, chart, &|id, _| {
        if delta.contains(&id) {
            Class::Delta
        } else {
            Class::Old
        }
    })
}

/// Seats body item `p` on a delta edge, items before it on old edges and
/// items after it on any visible edge, for every pivot `p`. Each seating is
/// produced exactly once.
fn seat_rule(
    rule: &Rule,
    chart: &Chart,
    classify: &dyn Fn(EdgeId, usize) -> Class,
) -> Vec<Derivation> {
    let (head, body) = rule.instantiate();
    let mut out = Vec::new();
    for pivot in 0..body.len() {
        let mut kids = Vec::with_capacity(body.len());
        Seating {
            chart,
            body: &body,
            pivot,
            classify,
        }
        .seat(
            0,
            None,
            &Substitution::new(),
            &mut kids,
            &mut |start, end, s, kids| {
                out.push(Derivation {
                    rule: rule.id,
                    category: rule.head.category.clone(),
                    args: s.apply_all(&head),
                    start,
                    end,
                    children: kids.to_vec(),
                });
            },
        );
    }
    out
}

type Emit<'e> = &'e mut dyn FnMut(usize, usize, &Substitution, &[EdgeId]);

struct Seating<'a> {
    chart: &'a Chart,
    body: &'a [RuleItem],
    pivot: usize,
    classify: &'a dyn Fn(EdgeId, usize) -> Class,
}

impl Seating<'_> {
    fn seat(
        &self,
        i: usize,
        cursor: Option<usize>,
        s: &Substitution,
        kids: &mut Vec<EdgeId>,
        emit: Emit<'_>,
    ) {
        if i == self.body.len() {
            let start = self.chart.edge(kids[0]).start;
            emit(start, cursor.unwrap_or(start), s, kids);
            return;
        }
        let item = &self.body[i];
        let cat = item.category();
        let candidates = match cursor {
            None => self.chart.of_category(cat),
            Some(p) => self.chart.starting_at(cat, p),
        };
        for &id in candidates {
            let e = self.chart.edge(id);
            if e.is_gap() {
                continue;
            }
            let class = (self.classify)(id, e.layer);
            let allowed = match class {
                Class::Hidden => false,
                Class::Delta => i >= self.pivot,
                Class::Old => i != self.pivot,
            };
            if !allowed {
                continue;
            }
            let next = match item {
                RuleItem::Terminal(w) => {
                    debug_assert_eq!(cat, INPUT_CATEGORY);
                    if e.args[0].functor() != Some(w.as_str()) {
                        continue;
                    }
                    s.clone()
                }
                RuleItem::NonTerminal(nt) => {
                    let renamed = Renamer::new().rename_all(&e.args);
                    match s.unify_args(&nt.args, &renamed) {
                        Some(s2) => s2,
                        None => continue,
                    }
                }
            };
            kids.push(id);
            self.seat(i + 1, Some(e.end), &next, kids, emit);
            kids.pop();
        }
    }
}
