//! Top-down prediction of a (possibly incomplete) constituent next to a
//! conjunction, with zero-width gaps rebuilt from a parallel source.

use crate::grammar::{Grammar, RuleId, RuleItem, INPUT_CATEGORY};
use crate::term::{abstract_over, Renamer, Substitution, Term};

use super::chart::{Chart, EdgeId, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// The constituent starts at the anchor; bodies are read left to right.
    Rightward,
    /// The constituent ends at the anchor; bodies are read right to left.
    Leftward,
}

#[derive(Debug, Clone, Copy)]
pub struct PredictOptions {
    /// Maximum number of zero-width gaps in one prediction.
    pub gap_budget: usize,
    /// Maximum nesting of recursive predictions.
    pub depth_cap: usize,
}

impl Default for PredictOptions {
    fn default() -> Self {
        PredictOptions {
            gap_budget: 1,
            depth_cap: 16,
        }
    }
}

/// A constituent of the source's derivation tree, with arguments expressed
/// in the source edge's own variables.
#[derive(Debug, Clone)]
pub struct SourceNode {
    pub edge: EdgeId,
    pub category: String,
    pub start: usize,
    pub end: usize,
    /// Distance from the source root.
    pub depth: usize,
    pub args: Vec<Term>,
}

/// Walks the derivation of `source` and instantiates every constituent
/// against the root, so that variables shared between a constituent and the
/// root are the same variables. The root itself, word facts and gaps are
/// left out.
pub fn source_constituents(chart: &Chart, grammar: &Grammar, source: EdgeId) -> Vec<SourceNode> {
    let root = chart.edge(source);
    let mut subst = Substitution::new();
    let mut raw = Vec::new();
    walk_source(
        chart,
        grammar,
        source,
        root.args.clone(),
        0,
        &mut subst,
        &mut raw,
    );
    raw.into_iter()
        .filter(|n| n.depth > 0 && !chart.edge(n.edge).is_gap())
        .map(|mut n| {
            n.args = subst.apply_all(&n.args);
            n
        })
        .collect()
}

fn walk_source(
    chart: &Chart,
    grammar: &Grammar,
    id: EdgeId,
    args: Vec<Term>,
    depth: usize,
    subst: &mut Substitution,
    out: &mut Vec<SourceNode>,
) {
    let e = chart.edge(id);
    out.push(SourceNode {
        edge: id,
        category: e.category.clone(),
        start: e.start,
        end: e.end,
        depth,
        args: args.clone(),
    });
    let (rule, children) = match &e.provenance {
        Provenance::Derived { rule, children }
        | Provenance::Predicted {
            rule: Some(rule),
            children,
            gap: false,
        } => (*rule, children),
        _ => return,
    };
    let (head, body) = grammar.rule(rule).instantiate();
    if !subst.unify_all_mut(&head, &args) {
        return;
    }
    for (item, &child) in body.iter().zip(children) {
        if let RuleItem::NonTerminal(nt) = item {
            let own = Renamer::new().rename_all(&chart.edge(child).args);
            if subst.unify_all_mut(&nt.args, &own) {
                walk_source(
                    chart,
                    grammar,
                    child,
                    nt.args.clone(),
                    depth + 1,
                    subst,
                    out,
                );
            }
        }
    }
}

/// Predicts a non-empty `category` constituent touching `anchor`.
///
/// Each body nonterminal is satisfied by an existing chart edge, else by a
/// nested prediction, else (budget permitting) by a zero-width gap whose
/// arguments come from the deepest, rightmost constituent of the same
/// category in the source's derivation: abstracted over its scope argument
/// when the category declares one, fresh variables otherwise.
///
/// On success every edge of the predicted tree is added to the chart and the
/// root's id is returned. On failure the chart is untouched.
pub fn predict(
    grammar: &Grammar,
    chart: &mut Chart,
    category: &str,
    anchor: usize,
    direction: Direction,
    source: EdgeId,
    options: PredictOptions,
) -> Option<EdgeId> {
    let sources = source_constituents(chart, grammar, source);
    let arity = grammar.arity(category)?;
    let pattern: Vec<Term> = (0..arity).map(|_| Term::fresh_var("P")).collect();

    let search = Search {
        grammar,
        chart,
        direction,
        sources: &sources,
        depth_cap: options.depth_cap,
    };
    let init = State {
        subst: Substitution::new(),
        budget: options.gap_budget,
        nodes: Vec::new(),
    };
    let mut found = None;
    search.constituent(category, &pattern, anchor, 0, init, &mut |root, _, st| {
        found = Some((root, st));
        true
    });
    let (root, state) = found?;
    Some(commit(chart, &state, root))
}

#[derive(Clone, Copy, Debug)]
enum ChildRef {
    Chart(EdgeId),
    Pending(usize),
}

#[derive(Clone, Debug)]
struct Pending {
    category: String,
    args: Vec<Term>,
    start: usize,
    end: usize,
    rule: Option<RuleId>,
    children: Vec<ChildRef>,
    gap: bool,
}

#[derive(Clone, Debug)]
struct State {
    subst: Substitution,
    budget: usize,
    /// Nodes of the partial tree; children always precede their parents.
    nodes: Vec<Pending>,
}

type Found<'k> = &'k mut dyn FnMut(ChildRef, usize, State) -> bool;
type Seated<'k> = &'k mut dyn FnMut(usize, State, Vec<ChildRef>) -> bool;

struct Search<'a> {
    grammar: &'a Grammar,
    chart: &'a Chart,
    direction: Direction,
    sources: &'a [SourceNode],
    depth_cap: usize,
}

impl Search<'_> {
    fn span(&self, anchor: usize, far: usize) -> (usize, usize) {
        match self.direction {
            Direction::Rightward => (anchor, far),
            Direction::Leftward => (far, anchor),
        }
    }

    /// Chart edges of `category` touching `pos` on the side being extended,
    /// paired with their far end.
    fn touching(&self, category: &str, pos: usize) -> Vec<(EdgeId, usize)> {
        let ids = match self.direction {
            Direction::Rightward => self.chart.starting_at(category, pos),
            Direction::Leftward => self.chart.ending_at(category, pos),
        };
        ids.iter()
            .map(|&id| self.chart.edge(id))
            .filter(|e| !e.is_gap())
            .map(|e| {
                let far = match self.direction {
                    Direction::Rightward => e.end,
                    Direction::Leftward => e.start,
                };
                (e.id, far)
            })
            .collect()
    }

    /// Enumerates non-empty constituents of `category` anchored at `anchor`
    /// whose head unifies with `pattern`, calling `k` on each until it
    /// returns true.
    fn constituent(
        &self,
        category: &str,
        pattern: &[Term],
        anchor: usize,
        depth: usize,
        state: State,
        k: Found<'_>,
    ) -> bool {
        if depth > self.depth_cap {
            return false;
        }
        for rule in self.grammar.rules_for(category) {
            let (head, body) = rule.instantiate();
            let mut st = state.clone();
            if !st.subst.unify_all_mut(&head, pattern) {
                continue;
            }
            let order: Vec<&RuleItem> = match self.direction {
                Direction::Rightward => body.iter().collect(),
                Direction::Leftward => body.iter().rev().collect(),
            };
            let stop = self.seat(
                &order,
                0,
                anchor,
                depth,
                st,
                Vec::new(),
                &mut |far, st, mut kids| {
                    if far == anchor {
                        return false;
                    }
                    if self.direction == Direction::Leftward {
                        kids.reverse();
                    }
                    let (start, end) = self.span(anchor, far);
                    let mut st = st;
                    st.nodes.push(Pending {
                        category: category.to_string(),
                        args: head.clone(),
                        start,
                        end,
                        rule: Some(rule.id),
                        children: kids,
                        gap: false,
                    });
                    let idx = st.nodes.len() - 1;
                    k(ChildRef::Pending(idx), far, st)
                },
            );
            if stop {
                return true;
            }
        }
        false
    }

    #[allow(clippy::too_many_arguments)]
    fn seat(
        &self,
        items: &[&RuleItem],
        i: usize,
        cursor: usize,
        depth: usize,
        state: State,
        kids: Vec<ChildRef>,
        k: Seated<'_>,
    ) -> bool {
        let Some(item) = items.get(i) else {
            return k(cursor, state, kids);
        };
        let with = |kids: &Vec<ChildRef>, c: ChildRef| {
            let mut v = kids.clone();
            v.push(c);
            v
        };
        match item {
            RuleItem::Terminal(w) => {
                for (id, far) in self.touching(INPUT_CATEGORY, cursor) {
                    if self.chart.edge(id).args[0].functor() == Some(w.as_str())
                        && self.seat(
                            items,
                            i + 1,
                            far,
                            depth,
                            state.clone(),
                            with(&kids, ChildRef::Chart(id)),
                            k,
                        )
                    {
                        return true;
                    }
                }
                false
            }
            RuleItem::NonTerminal(nt) => {
                for (id, far) in self.touching(&nt.category, cursor) {
                    let own = Renamer::new().rename_all(&self.chart.edge(id).args);
                    let mut st = state.clone();
                    if st.subst.unify_all_mut(&nt.args, &own)
                        && self.seat(
                            items,
                            i + 1,
                            far,
                            depth,
                            st,
                            with(&kids, ChildRef::Chart(id)),
                            k,
                        )
                    {
                        return true;
                    }
                }

                let nested = self.constituent(
                    &nt.category,
                    &nt.args,
                    cursor,
                    depth + 1,
                    state.clone(),
                    &mut |child, far, st| {
                        self.seat(items, i + 1, far, depth, st, with(&kids, child), k)
                    },
                );
                if nested {
                    return true;
                }

                if state.budget == 0 {
                    return false;
                }
                let Some(gap_args) = self.gap_args(&nt.category) else {
                    return false;
                };
                let mut st = state;
                st.budget -= 1;
                if !st.subst.unify_all_mut(&nt.args, &gap_args) {
                    return false;
                }
                st.nodes.push(Pending {
                    category: nt.category.clone(),
                    args: nt.args.clone(),
                    start: cursor,
                    end: cursor,
                    rule: None,
                    children: Vec::new(),
                    gap: true,
                });
                let idx = st.nodes.len() - 1;
                self.seat(
                    items,
                    i + 1,
                    cursor,
                    depth,
                    st,
                    with(&kids, ChildRef::Pending(idx)),
                    k,
                )
            }
        }
    }

    /// Arguments for a gap of `category`, or `None` when the source has no
    /// parallel constituent of that category.
    fn gap_args(&self, category: &str) -> Option<Vec<Term>> {
        let node = self
            .sources
            .iter()
            .filter(|n| n.category == category)
            .max_by_key(|n| (n.depth, n.start))?;
        match self.grammar.scope_arg(category) {
            Some(pos) if pos >= 1 && pos <= node.args.len() => {
                Some(abstract_over(&node.args, pos).0)
            }
            _ => Some(node.args.iter().map(|_| Term::fresh_var("G")).collect()),
        }
    }
}

fn commit(chart: &mut Chart, state: &State, root: ChildRef) -> EdgeId {
    let mut ids = Vec::with_capacity(state.nodes.len());
    for n in &state.nodes {
        let children = n
            .children
            .iter()
            .map(|c| match *c {
                ChildRef::Chart(id) => id,
                ChildRef::Pending(i) => ids[i],
            })
            .collect();
        let args = state.subst.apply_all(&n.args);
        let prov = Provenance::Predicted {
            rule: n.rule,
            children,
            gap: n.gap,
        };
        ids.push(chart.insert(&n.category, args, n.start, n.end, prov).id);
    }
    match root {
        ChildRef::Chart(id) => id,
        ChildRef::Pending(i) => ids[i],
    }
}
