//! Rewriting of finished logical forms: quantifier distribution over
//! connectives in restrictions, and the expansion of "too".

use std::collections::HashMap;

use crate::grammar::Grammar;
use crate::term::{parse_terms, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReshapeError {
    #[error("reshaping did not settle within {cap} steps")]
    StepCapExceeded { cap: usize },
    #[error("rule {rule}: template variable {var} does not occur in the pattern")]
    UnboundTemplateVariable { rule: String, var: String },
}

pub const DEFAULT_STEP_CAP: usize = 1000;

pub type Bindings = HashMap<Var, Term>;

/// `pattern => template`, applied by one-way matching. Variables of the
/// term being rewritten are treated as constants.
#[derive(Debug, Clone)]
pub struct RewriteRule {
    pub name: String,
    pub pattern: Term,
    pub template: Term,
    pub guard: Option<fn(&Bindings) -> bool>,
}

impl RewriteRule {
    pub fn new(name: &str, pattern: Term, template: Term) -> Result<RewriteRule, ReshapeError> {
        let pv = pattern.vars();
        if let Some(v) = template.vars().into_iter().find(|v| !pv.contains(v)) {
            return Err(ReshapeError::UnboundTemplateVariable {
                rule: name.to_string(),
                var: v.name().to_string(),
            });
        }
        Ok(RewriteRule {
            name: name.to_string(),
            pattern,
            template,
            guard: None,
        })
    }

    fn from_text(name: &str, pattern: &str, template: &str) -> RewriteRule {
        let ts = parse_terms(&[pattern, template]).expect("built-in rule syntax");
        RewriteRule::new(name, ts[0].clone(), ts[1].clone()).expect("built-in rule variables")
    }

    /// The rewritten term, if `t` is an instance of the pattern.
    pub fn apply(&self, t: &Term) -> Option<Term> {
        let mut b = Bindings::new();
        if !matches(&self.pattern, t, &mut b) {
            return None;
        }
        if let Some(guard) = self.guard {
            if !guard(&b) {
                return None;
            }
        }
        Some(instantiate(&self.template, &b))
    }
}

fn matches(pattern: &Term, t: &Term, b: &mut Bindings) -> bool {
    match pattern {
        Term::Var(v) => match b.get(v) {
            Some(bound) => bound == t,
            None => {
                b.insert(v.clone(), t.clone());
                true
            }
        },
        _ => {
            pattern.functor().is_some()
                && pattern.functor() == t.functor()
                && pattern.args().len() == t.args().len()
                && pattern
                    .args()
                    .iter()
                    .zip(t.args())
                    .all(|(p, x)| matches(p, x, b))
        }
    }
}

fn instantiate(template: &Term, b: &Bindings) -> Term {
    match template {
        Term::Var(v) => b.get(v).cloned().unwrap_or_else(|| template.clone()),
        Term::Const(_) => template.clone(),
        Term::Compound(f, args) => {
            Term::Compound(f.clone(), args.iter().map(|a| instantiate(a, b)).collect())
        }
    }
}

/// `Q(X, C(R1,R2), S) => C(Q(X,R1,S), Q(X,R2,S))` for every declared
/// quantifier `Q` and connective `C`.
pub fn distrib_rules(grammar: &Grammar) -> Vec<RewriteRule> {
    let mut out = Vec::new();
    for q in grammar.quantifiers() {
        for c in grammar.connectives() {
            out.push(RewriteRule::from_text(
                &format!("distrib {q}/{c}"),
                &format!("{q}(X, {c}(R1, R2), S)"),
                &format!("{c}({q}(X, R1, S), {q}(X, R2, S))"),
            ));
        }
    }
    out
}

/// `but(if(P1,C1), if(too(P2),C2)) => and(if(and(P1,no(P2)),C1), if(and(P1,P2),C2))`
pub fn too_rule() -> RewriteRule {
    RewriteRule::from_text(
        "too",
        "but(if(P1, C1), if(too(P2), C2))",
        "and(if(and(P1, no(P2)), C1), if(and(P1, P2), C2))",
    )
}

/// The built-in rules selected by the two switches.
pub fn builtin_rules(grammar: &Grammar, distrib: bool, too: bool) -> Vec<RewriteRule> {
    let mut rules = Vec::new();
    if distrib {
        rules.extend(distrib_rules(grammar));
    }
    if too {
        rules.push(too_rule());
    }
    rules
}

/// One rewrite: the rule used and the whole term after it fired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: String,
    pub result: Term,
}

/// Rewrites the leftmost innermost redex until none is left.
pub fn reshape(t: &Term, rules: &[RewriteRule]) -> Result<Term, ReshapeError> {
    reshape_steps(t, rules, DEFAULT_STEP_CAP).map(|(t, _)| t)
}

/// Like [`reshape`], with an explicit step cap and the list of steps taken.
pub fn reshape_steps(
    t: &Term,
    rules: &[RewriteRule],
    cap: usize,
) -> Result<(Term, Vec<Step>), ReshapeError> {
    let mut current = t.clone();
    let mut steps = Vec::new();
    while let Some((next, rule)) = rewrite_once(&current, rules) {
        if steps.len() == cap {
            return Err(ReshapeError::StepCapExceeded { cap });
        }
        steps.push(Step {
            rule: rule.to_string(),
            result: next.clone(),
        });
        current = next;
    }
    Ok((current, steps))
}

fn rewrite_once<'r>(t: &Term, rules: &'r [RewriteRule]) -> Option<(Term, &'r str)> {
    if let Term::Compound(f, args) = t {
        for (i, a) in args.iter().enumerate() {
            if let Some((new, rule)) = rewrite_once(a, rules) {
                let mut args = args.clone();
                args[i] = new;
                return Some((Term::Compound(f.clone(), args), rule));
            }
        }
    }
    rules
        .iter()
        .find_map(|r| r.apply(t).map(|new| (new, r.name.as_str())))
}

/// Number of connective applications occurring inside the restriction of
/// some quantifier. Each distribution step lowers it by at least one.
pub fn restriction_connectives(t: &Term, grammar: &Grammar) -> usize {
    fn connectives(t: &Term, g: &Grammar) -> usize {
        let here =
            usize::from(t.args().len() == 2 && t.functor().is_some_and(|f| g.is_connective(f)));
        here + t.args().iter().map(|a| connectives(a, g)).sum::<usize>()
    }
    let here = match (t.functor(), t.args()) {
        (Some(q), [_, r, _]) if grammar.is_quantifier(q) => connectives(r, grammar),
        _ => 0,
    };
    here + t
        .args()
        .iter()
        .map(|a| restriction_connectives(a, grammar))
        .sum::<usize>()
}
