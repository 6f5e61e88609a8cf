//! Oracles and checks shared by the integration tests and the acceptance
//! runner.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use dlgram::coordination::{CoordOptions, Coordinator};
use dlgram::engine::{close, Chart, ClosureHook, NoHook, Provenance};
use dlgram::grammar::{parse_grammar, samples, Grammar, RuleItem, INPUT_CATEGORY};
use dlgram::reshape::{builtin_rules, reshape};
use dlgram::term::{
    abstract_over, apply, c_unify, canonical_args, is_variant, parse_term, rename_fresh, unify,
    Renamer, Substitution, Term, Var,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FRENCH_SENTENCES: &[&str] = &[
    "jean mange une pomme rouge et une verte",
    "jean mange une pomme rouge",
    "jean mange une pomme verte et une rouge",
    "jean mange une pomme",
    "jean mange et",
    "une pomme rouge",
    "jean mange jean et une pomme verte",
];

pub const ENGLISH_SENTENCES: &[&str] = &[
    "john drove the car through and demolished a window",
    "each man ate an apple and a pear",
    "john laughed",
    "john ate an apple",
    "mary saw a man and a woman",
    "john drove the car through and a window",
    "john and mary laughed",
    "each man ate an apple and mary ate a pear",
    "the man sat at the table",
    "john saw mary and heard a train",
    "a woman ate a pear or an apple",
    "john heard a train but mary laughed",
    "john drove a car through a window",
    "the woman laughed and john laughed",
    "apple ate john",
    "mary saw john and",
    "john saw and heard mary",
];

pub fn french() -> Grammar {
    parse_grammar(samples::FRENCH_SYN).unwrap()
}

pub fn english() -> Grammar {
    parse_grammar(samples::ENGLISH_SEM).unwrap()
}

pub fn data_file(rel: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join(rel);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

/// The `expected:` term of a pre-registered derivation transcript.
pub fn oracle_expected(name: &str) -> Term {
    let src = data_file(&format!("oracles/{name}"));
    let line = src
        .lines()
        .find_map(|l| l.strip_prefix("expected:"))
        .unwrap_or_else(|| panic!("{name} has no expected line"));
    parse_term(line.trim()).unwrap()
}

// ---------------------------------------------------------------------------
// naive evaluation

struct Found {
    category: String,
    args: Vec<Term>,
    start: usize,
    end: usize,
    lexical: bool,
    rule: dlgram::grammar::RuleId,
    children: Vec<usize>,
}

fn seat_all(g: &Grammar, chart: &Chart, out: &mut Vec<Found>) {
    for rule in g.rules() {
        let (head, body) = rule.instantiate();
        let mut kids = Vec::new();
        seat(
            chart,
            &body,
            0,
            None,
            &Substitution::new(),
            &mut kids,
            &mut |s, kids| {
                let first = chart.edge(kids[0]);
                let last = chart.edge(*kids.last().unwrap());
                out.push(Found {
                    category: rule.head.category.clone(),
                    args: s.apply_all(&head),
                    start: first.start,
                    end: last.end,
                    lexical: rule.is_lexical(),
                    rule: rule.id,
                    children: kids.to_vec(),
                });
            },
        );
    }
}

fn seat(
    chart: &Chart,
    body: &[RuleItem],
    i: usize,
    cursor: Option<usize>,
    s: &Substitution,
    kids: &mut Vec<usize>,
    emit: &mut dyn FnMut(&Substitution, &[usize]),
) {
    if i == body.len() {
        emit(s, kids);
        return;
    }
    for e in chart.edges() {
        if e.is_gap() || e.category != body[i].category() || cursor.is_some_and(|c| c != e.start) {
            continue;
        }
        let next = match &body[i] {
            RuleItem::Terminal(w) => {
                if e.category != INPUT_CATEGORY || e.args[0].functor() != Some(w.as_str()) {
                    continue;
                }
                s.clone()
            }
            RuleItem::NonTerminal(nt) => {
                match s.unify_args(&nt.args, &Renamer::new().rename_all(&e.args)) {
                    Some(s2) => s2,
                    None => continue,
                }
            }
        };
        kids.push(e.id);
        seat(chart, body, i + 1, Some(e.end), &next, kids, emit);
        kids.pop();
    }
}

/// Re-derives everything from the whole chart each round. Hook edges are
/// not visible to the round in which they were added.
pub fn naive_close(
    chart: &mut Chart,
    g: &Grammar,
    hook: &mut dyn ClosureHook,
    cap: usize,
) -> Result<(), String> {
    loop {
        let k = chart.layer_count();
        let snapshot = chart.clone();
        chart.open_layer();
        hook.after_layer(chart, g, k);
        let mut found = Vec::new();
        seat_all(g, &snapshot, &mut found);
        for f in found {
            let prov = if f.lexical {
                Provenance::Lexical { rule: f.rule }
            } else {
                Provenance::Derived {
                    rule: f.rule,
                    children: f.children,
                }
            };
            chart.insert(&f.category, f.args, f.start, f.end, prov);
        }
        if chart.layer(k + 1).is_empty()
            && (!hook.at_fixpoint(chart, g) || chart.layer(k + 1).is_empty())
        {
            return Ok(());
        }
        if k + 1 > cap {
            return Err(format!("naive evaluation passed {cap} layers"));
        }
    }
}

pub type Signature = BTreeSet<(String, Vec<String>, usize, usize, usize)>;

/// Edges up to ids and variable names, with their layers.
pub fn signature(chart: &Chart) -> Signature {
    chart
        .edges()
        .iter()
        .map(|e| {
            (
                e.category.clone(),
                canonical_args(&e.args),
                e.start,
                e.end,
                e.layer,
            )
        })
        .collect()
}

fn words(sentence: &str) -> Vec<&str> {
    sentence.split_whitespace().collect()
}

/// Compares semi-naive and naive closure on one sentence.
pub fn naive_agrees(g: &Grammar, sentence: &str, meta: bool) -> Result<usize, String> {
    let mut fast = Chart::assert_input(&words(sentence)).unwrap();
    let mut slow = fast.clone();
    let opts = CoordOptions::default();
    if meta {
        let mut co = Coordinator::new(opts);
        close(&mut fast, g, &mut co, 64).map_err(|e| e.to_string())?;
        let mut co = Coordinator::new(opts);
        naive_close(&mut slow, g, &mut co, 64)?;
    } else {
        close(&mut fast, g, &mut NoHook, 64).map_err(|e| e.to_string())?;
        naive_close(&mut slow, g, &mut NoHook, 64)?;
    }
    let (a, b) = (signature(&fast), signature(&slow));
    if a != b {
        let only_fast: Vec<_> = a.difference(&b).collect();
        let only_slow: Vec<_> = b.difference(&a).collect();
        return Err(format!(
            "{sentence:?} (meta={meta}): semi-naive only {only_fast:?}, naive only {only_slow:?}"
        ));
    }
    Ok(a.len())
}

/// Every shipped grammar against every corpus sentence, with and without
/// meta-coordination. Returns the number of comparisons.
pub fn naive_corpus() -> Result<usize, String> {
    let mut n = 0;
    for (g, sentences) in [(french(), FRENCH_SENTENCES), (english(), ENGLISH_SENTENCES)] {
        for s in sentences {
            for meta in [false, true] {
                naive_agrees(&g, s, meta)?;
                n += 1;
            }
        }
    }
    Ok(n)
}

// ---------------------------------------------------------------------------
// unification against ground enumeration

fn small_term(rng: &mut ChaCha8Rng, depth: usize, vars: &[Term; 2]) -> Term {
    if depth == 0 || rng.gen_bool(0.4) {
        match rng.gen_range(0..4) {
            0 => Term::constant("a"),
            1 => Term::constant("b"),
            i => vars[i - 2].clone(),
        }
    } else {
        Term::app(
            "f",
            vec![
                small_term(rng, depth - 1, vars),
                small_term(rng, depth - 1, vars),
            ],
        )
    }
}

fn ground_universe() -> Vec<Term> {
    let mut level = vec![Term::constant("a"), Term::constant("b")];
    for _ in 0..2 {
        let mut next = vec![Term::constant("a"), Term::constant("b")];
        for x in &level {
            for y in &level {
                next.push(Term::app("f", vec![x.clone(), y.clone()]));
            }
        }
        level = next;
    }
    level
}

fn ground(t: &Term, x: &Var, y: &Var, vx: &Term, vy: &Term) -> Term {
    match t {
        Term::Var(v) if v == x => vx.clone(),
        Term::Var(v) if v == y => vy.clone(),
        Term::Compound(f, args) => Term::Compound(
            f.clone(),
            args.iter().map(|a| ground(a, x, y, vx, vy)).collect(),
        ),
        _ => t.clone(),
    }
}

fn free_to_a(t: &Term) -> Term {
    match t {
        Term::Var(_) => Term::constant("a"),
        Term::Compound(f, args) => Term::Compound(f.clone(), args.iter().map(free_to_a).collect()),
        _ => t.clone(),
    }
}

/// Checks `unify` on `pairs` random pairs of depth-2 terms over `a`, `b`,
/// `f/2` and two variables against brute-force search for a common ground
/// instance. Returns how many pairs unified.
pub fn unify_oracle(pairs: usize, seed: u64) -> Result<usize, String> {
    let universe = ground_universe();
    assert_eq!(universe.len(), 38);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (x, y) = (Var::fresh("X"), Var::fresh("Y"));
    let vars = [Term::var(x.clone()), Term::var(y.clone())];
    let mut unified = 0;
    for _ in 0..pairs {
        let t1 = small_term(&mut rng, 2, &vars);
        let t2 = small_term(&mut rng, 2, &vars);
        let has = |v: &Var| t1.contains_var(v) || t2.contains_var(v);
        let xs: &[Term] = if has(&x) { &universe } else { &universe[..1] };
        let ys: &[Term] = if has(&y) { &universe } else { &universe[..1] };
        let witness = xs.iter().any(|vx| {
            ys.iter()
                .any(|vy| ground(&t1, &x, &y, vx, vy) == ground(&t2, &x, &y, vx, vy))
        });
        match unify(&t1, &t2, &Substitution::new()) {
            Some(s) => {
                unified += 1;
                if apply(&s, &t1) != apply(&s, &t2) {
                    return Err(format!("unifier of {t1} and {t2} does not equate them"));
                }
                for v in &vars {
                    let inst = free_to_a(&apply(&s, v));
                    if inst.depth() > 2 {
                        return Err(format!("universe too small for {t1} = {t2}"));
                    }
                }
                if !witness {
                    return Err(format!("{t1} and {t2} unified but have no common instance"));
                }
            }
            None if witness => {
                return Err(format!(
                    "{t1} and {t2} have a common instance but did not unify"
                ))
            }
            None => {}
        }
    }
    Ok(unified)
}

// ---------------------------------------------------------------------------
// randomized laws

#[derive(Debug, Clone)]
pub enum Shape {
    A,
    B,
    V(usize),
    F(Box<Shape>, Box<Shape>),
    G(Box<Shape>),
}

pub fn shape() -> impl Strategy<Value = Shape> {
    let leaf = prop_oneof![
        Just(Shape::A),
        Just(Shape::B),
        (0usize..3).prop_map(Shape::V)
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Shape::F(Box::new(a), Box::new(b))),
            inner.prop_map(|a| Shape::G(Box::new(a))),
        ]
    })
}

pub fn build(s: &Shape, pool: &[Term]) -> Term {
    match s {
        Shape::A => Term::constant("a"),
        Shape::B => Term::constant("b"),
        Shape::V(i) => pool[*i].clone(),
        Shape::F(a, b) => Term::app("f", vec![build(a, pool), build(b, pool)]),
        Shape::G(a) => Term::app("g", vec![build(a, pool)]),
    }
}

fn pool() -> Vec<Term> {
    ["X", "Y", "Z"].iter().map(|n| Term::fresh_var(n)).collect()
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(
            proptest::test_runner::RngAlgorithm::ChaCha,
        ),
    )
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

pub fn law_unify_sound() -> Result<(), String> {
    run(512, (shape(), shape()), |(a, b)| {
        let p = pool();
        let (t1, t2) = (build(&a, &p), build(&b, &p));
        if let Some(s) = unify(&t1, &t2, &Substitution::new()) {
            prop_assert_eq!(apply(&s, &t1), apply(&s, &t2));
        }
        Ok(())
    })
}

pub fn law_occurs_check() -> Result<(), String> {
    run(256, shape(), |a| {
        let p = pool();
        let t = Term::app("g", vec![build(&a, &p)]);
        let inner = Term::app("f", vec![p[0].clone(), build(&a, &p)]);
        prop_assert!(unify(&p[0], &inner, &Substitution::new()).is_none());
        prop_assert!(
            !t.contains_var(p[0].as_var().unwrap())
                || unify(&p[0], &t, &Substitution::new()).is_none()
        );
        Ok(())
    })
}

pub fn law_variant_equivalence() -> Result<(), String> {
    run(512, (shape(), shape(), shape()), |(a, b, c)| {
        let (p, q, r) = (pool(), pool(), pool());
        let (t1, t2, t3) = (build(&a, &p), build(&b, &q), build(&c, &r));
        prop_assert!(is_variant(&t1, &t1));
        prop_assert_eq!(is_variant(&t1, &t2), is_variant(&t2, &t1));
        if is_variant(&t1, &t2) && is_variant(&t2, &t3) {
            prop_assert!(is_variant(&t1, &t3));
        }
        let r1 = rename_fresh(&t1);
        let r2 = rename_fresh(&r1);
        prop_assert!(is_variant(&t1, &r1) && is_variant(&r1, &r2) && is_variant(&t1, &r2));
        // same shape over the same pool is a variant; over a renamed pool too
        prop_assert!(is_variant(&t1, &build(&a, &q)));
        Ok(())
    })
}

pub fn law_c_unify() -> Result<(), String> {
    run(512, (shape(), shape()), |(a, b)| {
        let p = pool();
        let (t1, t2) = (build(&a, &p), build(&b, &p));
        let (same, s) = c_unify(&t1, &t1, "and", &Substitution::new());
        prop_assert_eq!(&same, &t1);
        prop_assert!(s.is_empty());
        // total, and plain unification whenever that succeeds
        let (out, s) = c_unify(&t1, &t2, "and", &Substitution::new());
        match unify(&t1, &t2, &Substitution::new()) {
            Some(u) => prop_assert_eq!(apply(&s, &out), apply(&u, &t1)),
            None => prop_assert!(out.size() >= 1),
        }
        Ok(())
    })
}

pub fn law_abstract_round_trip() -> Result<(), String> {
    run(
        512,
        (
            prop::collection::vec(shape(), 1..4),
            any::<prop::sample::Index>(),
        ),
        |(shapes, idx)| {
            let p = pool();
            let args: Vec<Term> = shapes.iter().map(|s| build(s, &p)).collect();
            let pos = idx.index(args.len()) + 1;
            let (abs, v) = abstract_over(&args, pos);
            prop_assert_eq!(&abs[pos - 1], &Term::var(v.clone()));
            let s = unify(&Term::var(v), &args[pos - 1], &Substitution::new()).unwrap();
            prop_assert_eq!(s.apply_all(&abs), args);
            Ok(())
        },
    )
}

#[derive(Debug, Clone)]
pub enum Form {
    Pred(usize, usize),
    Quant(usize, usize, Box<Form>, Box<Form>),
    Conn(usize, Box<Form>, Box<Form>),
}

pub fn form() -> impl Strategy<Value = Form> {
    let leaf = (0usize..3, 0usize..3).prop_map(|(p, v)| Form::Pred(p, v));
    leaf.prop_recursive(4, 32, 3, |inner| {
        prop_oneof![
            (0usize..3, 0usize..3, inner.clone(), inner.clone())
                .prop_map(|(q, v, r, s)| Form::Quant(q, v, Box::new(r), Box::new(s))),
            (0usize..3, inner.clone(), inner).prop_map(|(c, a, b)| Form::Conn(
                c,
                Box::new(a),
                Box::new(b)
            )),
        ]
    })
}

pub fn build_form(f: &Form, pool: &[Term]) -> Term {
    match f {
        Form::Pred(p, v) => Term::app(["man", "apple", "window"][*p], vec![pool[*v].clone()]),
        Form::Quant(q, v, r, s) => Term::app(
            ["each", "exists", "def"][*q],
            vec![pool[*v].clone(), build_form(r, pool), build_form(s, pool)],
        ),
        Form::Conn(c, a, b) => Term::app(
            ["and", "or", "but"][*c],
            vec![build_form(a, pool), build_form(b, pool)],
        ),
    }
}

pub fn law_reshape_idempotent() -> Result<(), String> {
    let g = english();
    let rules = builtin_rules(&g, true, true);
    run(256, form(), |f| {
        let t = build_form(&f, &pool());
        let once = reshape(&t, &rules).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let twice = reshape(&once, &rules).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&once, &twice);
        Ok(())
    })
}

pub fn law_dedup_sound() -> Result<(), String> {
    let g = french();
    let lexicon = ["jean", "mange", "une", "pomme", "rouge", "et", "verte"];
    run(
        128,
        prop::collection::vec(0usize..lexicon.len(), 1..9),
        |idx| {
            let words: Vec<&str> = idx.iter().map(|&i| lexicon[i]).collect();
            let mut chart = Chart::assert_input(&words).unwrap();
            let mut co = Coordinator::new(CoordOptions::default());
            close(&mut chart, &g, &mut co, 64).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let before = chart.len();
            close(&mut chart, &g, &mut NoHook, 64)
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(chart.len(), before);
            Ok(())
        },
    )
}

// ---------------------------------------------------------------------------
// structural checks on finished parses

use dlgram::coordination::{Event, LogEntry, Side};

/// Within each uninterrupted run of trials: left candidates by descending
/// Z, then right candidates by ascending P. Equal-span candidates of
/// different categories tie unless `strict`.
pub fn ordering_law(log: &[LogEntry], strict: bool) -> Result<(), String> {
    let mut prev: Option<(usize, Side, usize)> = None;
    for e in log {
        let Event::Tried { side, pos, .. } = &e.event else {
            prev = None;
            continue;
        };
        if let Some((c, pside, ppos)) = prev {
            if c == e.constraint {
                let ok = match (pside, side) {
                    (Side::Left, Side::Left) => *pos < ppos || (!strict && *pos == ppos),
                    (Side::Right, Side::Right) => *pos > ppos || (!strict && *pos == ppos),
                    (Side::Left, Side::Right) => true,
                    (Side::Right, Side::Left) => false,
                };
                if !ok {
                    return Err(format!("out of order: {e}"));
                }
            }
        }
        prev = Some((e.constraint, *side, *pos));
    }
    Ok(())
}

/// Chart-level invariants that hold after every parse.
pub fn chart_invariants(p: &dlgram::Parse, all_coord: bool) -> Result<(), String> {
    let chart = &p.chart;
    for e in chart.edges() {
        if let Provenance::Derived { children, .. } = &e.provenance {
            let spans: Vec<(usize, usize)> = children
                .iter()
                .map(|&c| (chart.edge(c).start, chart.edge(c).end))
                .collect();
            let contiguous = spans.first().map(|s| s.0) == Some(e.start)
                && spans.last().map(|s| s.1) == Some(e.end)
                && spans.windows(2).all(|w| w[0].1 == w[1].0);
            if !contiguous {
                return Err(format!("{} has non-contiguous children", e.notation()));
            }
            if children.iter().any(|&c| chart.edge(c).is_gap()) {
                return Err(format!("{} is built on a gap", e.notation()));
            }
        }
        if e.is_gap() && e.start != e.end {
            return Err(format!("gap {} is not zero-width", e.notation()));
        }
        if e.is_gap() {
            let owned = chart
                .edges()
                .iter()
                .any(|o| matches!(&o.provenance, Provenance::Predicted { children, .. } if children.contains(&e.id)));
            if !owned {
                return Err(format!(
                    "gap {} outside a predicted derivation",
                    e.notation()
                ));
            }
        }
        if let Provenance::Coordinated { constraint, .. } = e.provenance {
            let c = &p.constraints[constraint];
            if !(e.start < c.n && c.m < e.end)
                && !(e.start <= c.n && c.m <= e.end && (e.start, e.end) != (c.n, c.m))
            {
                return Err(format!("{} does not contain its conjunction", e.notation()));
            }
        }
    }
    for c in &p.constraints {
        let n = chart
            .edges()
            .iter()
            .filter(|e| matches!(e.provenance, Provenance::Coordinated { constraint, .. } if constraint == c.id))
            .count();
        if !all_coord && n > 1 {
            return Err(format!("constraint C{} has {n} coordinated edges", c.id));
        }
    }
    ordering_law(&p.log, false)
}
