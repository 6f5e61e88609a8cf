//! Meta-grammatical coordination. Every conjunction edge posts a suspended
//! constraint; between closure layers the constraint tries complete
//! constituents adjacent to the conjunction, predicts a parallel (possibly
//! elliptical) constituent on the other side and injects their combination.

use std::fmt;

use crate::engine::{
    predict, Chart, ClosureHook, Direction, Edge, EdgeId, PredictOptions, Provenance,
};
use crate::grammar::{Grammar, INPUT_CATEGORY};
use crate::term::{c_unify, Substitution, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Ends at the conjunction start; the target is predicted rightwards.
    Left,
    /// Starts at the conjunction end; the target is predicted leftwards.
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub edge: EdgeId,
    pub side: Side,
    pub tried: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Suspended,
    Resolved,
    Exhausted,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Suspended => "suspended",
            Status::Resolved => "resolved",
            Status::Exhausted => "exhausted",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    pub source: EdgeId,
    pub target: EdgeId,
    pub combined: EdgeId,
}

/// A pending obligation to find `Cat(Z,N)` and `Cat(M,P)` around the
/// conjunction `N..M` and add `Cat(Z,P)`.
#[derive(Debug, Clone)]
pub struct CoordConstraint {
    pub id: usize,
    pub conj: EdgeId,
    pub n: usize,
    pub m: usize,
    pub connective: String,
    pub agenda: Vec<Candidate>,
    pub status: Status,
    pub resolutions: Vec<Resolution>,
}

impl CoordConstraint {
    /// Rebuilds the agenda from the chart: left candidates by descending
    /// start, then right candidates by ascending end, ties by edge id.
    /// Candidates already tried stay tried.
    pub fn refresh_agenda(&mut self, chart: &Chart, grammar: &Grammar) {
        let eligible = |e: &&Edge| {
            e.category != INPUT_CATEGORY
                && e.category != grammar.conj_category()
                && !e.is_predicted()
        };
        let mut left: Vec<&Edge> = chart.all_ending_at(self.n).filter(eligible).collect();
        let mut right: Vec<&Edge> = chart.all_starting_at(self.m).filter(eligible).collect();
        left.sort_by_key(|e| (std::cmp::Reverse(e.start), e.id));
        right.sort_by_key(|e| (e.end, e.id));

        let tried = |id: EdgeId| self.agenda.iter().any(|c| c.edge == id && c.tried);
        let agenda = left
            .iter()
            .map(|e| (e.id, Side::Left))
            .chain(right.iter().map(|e| (e.id, Side::Right)))
            .map(|(edge, side)| Candidate {
                edge,
                side,
                tried: tried(edge),
            })
            .collect();
        self.agenda = agenda;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    Posted {
        conj: String,
        n: usize,
        m: usize,
        connective: String,
    },
    Tried {
        side: Side,
        candidate: String,
        /// Z for a left candidate, P for a right one.
        pos: usize,
        target: Option<String>,
    },
    Combined {
        left: String,
        right: String,
        combined: String,
    },
    Suspended,
    Revived,
    Resolved,
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogEntry {
    pub constraint: usize,
    /// Chart size when the event happened; edges with ids from here on came
    /// after it.
    pub edges_before: usize,
    pub event: Event,
}

impl fmt::Display for LogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}: ", self.constraint)?;
        match &self.event {
            Event::Posted {
                conj,
                n,
                m,
                connective,
            } => write!(f, "posted {conj} N={n} M={m} connective={connective}"),
            Event::Tried {
                side,
                candidate,
                pos,
                target,
            } => {
                let var = if *side == Side::Left { 'Z' } else { 'P' };
                write!(f, "try {side} {candidate} {var}={pos} -> ")?;
                match target {
                    Some(t) => f.write_str(t),
                    None => f.write_str("fail"),
                }
            }
            Event::Combined {
                left,
                right,
                combined,
            } => write!(f, "combine {left} + {right} -> {combined}"),
            Event::Suspended => f.write_str("suspend"),
            Event::Revived => f.write_str("revive"),
            Event::Resolved => f.write_str("resolved"),
            Event::Exhausted => f.write_str("exhausted"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CoordOptions {
    pub predict: PredictOptions,
    /// Keep trying every candidate after the first resolution.
    pub all_solutions: bool,
}

/// Pairwise c-unification of two parallel argument vectors under one
/// threaded substitution.
///
/// # Panics
///
/// If the vectors differ in length.
pub fn combine_args(left: &[Term], right: &[Term], connective: &str) -> Vec<Term> {
    assert_eq!(
        left.len(),
        right.len(),
        "combining edges of different arity"
    );
    let mut s = Substitution::new();
    let mut parts = Vec::with_capacity(left.len());
    for (a, b) in left.iter().zip(right) {
        let (t, s2) = c_unify(a, b, connective, &s);
        parts.push(t);
        s = s2;
    }
    s.apply_all(&parts)
}

/// The closure hook driving coordination.
#[derive(Debug, Default)]
pub struct Coordinator {
    options: CoordOptions,
    constraints: Vec<CoordConstraint>,
    log: Vec<LogEntry>,
    revived: bool,
}

impl Coordinator {
    pub fn new(options: CoordOptions) -> Coordinator {
        Coordinator {
            options,
            ..Coordinator::default()
        }
    }

    pub fn constraints(&self) -> &[CoordConstraint] {
        &self.constraints
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    pub fn into_parts(self) -> (Vec<CoordConstraint>, Vec<LogEntry>) {
        (self.constraints, self.log)
    }

    fn note(&mut self, chart: &Chart, constraint: usize, event: Event) {
        self.log.push(LogEntry {
            constraint,
            edges_before: chart.len(),
            event,
        });
    }

    /// Posts one constraint for every complete conjunction edge that does not
    /// own one yet. Returns the ids of the new constraints.
    pub fn post(&mut self, chart: &Chart, grammar: &Grammar) -> Vec<usize> {
        let mut posted = Vec::new();
        for &id in chart.of_category(grammar.conj_category()) {
            let e = chart.edge(id);
            if e.is_predicted() || self.constraints.iter().any(|c| c.conj == id) {
                continue;
            }
            let connective = e
                .args
                .first()
                .and_then(|a| {
                    if a.as_var().is_some() {
                        None
                    } else {
                        a.functor()
                    }
                })
                .unwrap_or("and")
                .to_string();
            let cid = self.constraints.len();
            self.constraints.push(CoordConstraint {
                id: cid,
                conj: id,
                n: e.start,
                m: e.end,
                connective: connective.clone(),
                agenda: Vec::new(),
                status: Status::Suspended,
                resolutions: Vec::new(),
            });
            let conj = e.notation();
            let (n, m) = (e.start, e.end);
            self.note(
                chart,
                cid,
                Event::Posted {
                    conj,
                    n,
                    m,
                    connective,
                },
            );
            posted.push(cid);
        }
        posted
    }

    fn active(&self, c: &CoordConstraint) -> bool {
        match c.status {
            Status::Suspended => true,
            Status::Resolved => self.options.all_solutions,
            Status::Exhausted => false,
        }
    }

    /// Tries the untried candidates of constraint `cid` in agenda order.
    /// Returns the combined edges that were added.
    pub fn attempt(&mut self, cid: usize, chart: &mut Chart, grammar: &Grammar) -> Vec<EdgeId> {
        let mut added = Vec::new();
        let mut tried_any = false;
        let mut i = 0;
        while i < self.constraints[cid].agenda.len() {
            let cand = self.constraints[cid].agenda[i].clone();
            i += 1;
            if cand.tried {
                continue;
            }
            self.constraints[cid].agenda[i - 1].tried = true;
            tried_any = true;

            let (n, m) = (self.constraints[cid].n, self.constraints[cid].m);
            let source = chart.edge(cand.edge).clone();
            let (anchor, dir, pos) = match cand.side {
                Side::Left => (m, Direction::Rightward, source.start),
                Side::Right => (n, Direction::Leftward, source.end),
            };
            let log_at = self.log.len();
            self.note(
                chart,
                cid,
                Event::Tried {
                    side: cand.side,
                    candidate: source.notation(),
                    pos,
                    target: None,
                },
            );
            let Some(target) = predict(
                grammar,
                chart,
                &source.category,
                anchor,
                dir,
                source.id,
                self.options.predict,
            ) else {
                continue;
            };
            if let Event::Tried { target: t, .. } = &mut self.log[log_at].event {
                *t = Some(chart.edge(target).notation());
            }

            let (l, r) = match cand.side {
                Side::Left => (source.id, target),
                Side::Right => (target, source.id),
            };
            let (le, re) = (chart.edge(l).clone(), chart.edge(r).clone());
            let connective = self.constraints[cid].connective.clone();
            let args = combine_args(&le.args, &re.args, &connective);
            let combine_at = self.log.len();
            self.note(
                chart,
                cid,
                Event::Combined {
                    left: le.notation(),
                    right: re.notation(),
                    combined: String::new(),
                },
            );
            let ins = chart.insert(
                &source.category,
                args,
                le.start,
                re.end,
                Provenance::Coordinated {
                    constraint: cid,
                    source: source.id,
                    target,
                },
            );
            if let Event::Combined { combined, .. } = &mut self.log[combine_at].event {
                *combined = chart.edge(ins.id).notation();
            }
            let c = &mut self.constraints[cid];
            c.resolutions.push(Resolution {
                source: source.id,
                target,
                combined: ins.id,
            });
            c.status = Status::Resolved;
            added.push(ins.id);
            if !self.options.all_solutions {
                break;
            }
        }
        if tried_any && self.constraints[cid].status == Status::Suspended {
            self.note(chart, cid, Event::Suspended);
        }
        added
    }

    fn round(&mut self, chart: &mut Chart, grammar: &Grammar) -> bool {
        self.post(chart, grammar);
        let mut any = false;
        for cid in 0..self.constraints.len() {
            if !self.active(&self.constraints[cid]) {
                continue;
            }
            self.constraints[cid].refresh_agenda(chart, grammar);
            any |= !self.attempt(cid, chart, grammar).is_empty();
        }
        any
    }

    /// Settles every constraint once the closure has finished: those with a
    /// resolution are resolved, the rest exhausted.
    pub fn finish(&mut self, chart: &Chart) {
        for cid in 0..self.constraints.len() {
            let status = if self.constraints[cid].resolutions.is_empty() {
                Status::Exhausted
            } else {
                Status::Resolved
            };
            self.constraints[cid].status = status;
            let event = match status {
                Status::Exhausted => Event::Exhausted,
                _ => Event::Resolved,
            };
            self.note(chart, cid, event);
        }
    }
}

fn has_full_parse(chart: &Chart, grammar: &Grammar) -> bool {
    chart
        .ending_at(grammar.start(), chart.width())
        .iter()
        .any(|&id| chart.edge(id).start == 0)
}

impl ClosureHook for Coordinator {
    fn after_layer(&mut self, chart: &mut Chart, grammar: &Grammar, _completed: usize) {
        self.round(chart, grammar);
    }

    /// Gives unresolved constraints one more pass over the whole chart when
    /// the closure would otherwise end without a full parse.
    fn at_fixpoint(&mut self, chart: &mut Chart, grammar: &Grammar) -> bool {
        if self.revived || has_full_parse(chart, grammar) {
            return false;
        }
        self.revived = true;
        let before = chart.len();
        for cid in 0..self.constraints.len() {
            let c = &mut self.constraints[cid];
            if c.status != Status::Suspended || c.agenda.is_empty() {
                continue;
            }
            c.agenda.iter_mut().for_each(|cand| cand.tried = false);
            self.note(chart, cid, Event::Revived);
        }
        self.round(chart, grammar);
        chart.len() > before
    }
}
