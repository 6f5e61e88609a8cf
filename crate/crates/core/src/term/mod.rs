//! First-order terms and the operations the grammar engine builds on:
//! substitutions, unification, variant testing, scope abstraction and
//! c-unification.

mod ops;
mod subst;
pub(crate) mod syntax;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

pub use ops::{abstract_over, c_unify, is_variant, is_variant_seq, rename_fresh, Renamer};
pub use subst::{apply, unify, Substitution};
pub use syntax::{parse_term, parse_terms, SyntaxError};

static NEXT_VAR: AtomicU64 = AtomicU64::new(0);

/// A logic variable. Identity is the numeric id; the name is only for display.
#[derive(Clone, Debug)]
pub struct Var {
    id: u64,
    name: Arc<str>,
}

impl Var {
    /// Allocates a variable with a globally unique id.
    pub fn fresh(name: &str) -> Var {
        Var {
            id: NEXT_VAR.fetch_add(1, Ordering::Relaxed),
            name: Arc::from(name),
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Var {}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.id.cmp(&other.id)
    }
}

/// A first-order term. Compounds always have at least one argument;
/// zero-arity symbols are constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Const(Arc<str>),
    Compound(Arc<str>, Vec<Term>),
}

impl Term {
    pub fn var(v: Var) -> Term {
        Term::Var(v)
    }

    /// A fresh variable term.
    pub fn fresh_var(name: &str) -> Term {
        Term::Var(Var::fresh(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(Arc::from(name))
    }

    /// Builds `functor(args...)`, or the constant `functor` when `args` is empty.
    pub fn app(functor: &str, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::constant(functor)
        } else {
            Term::Compound(Arc::from(functor), args)
        }
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    /// Functor name for constants and compounds.
    pub fn functor(&self) -> Option<&str> {
        match self {
            Term::Var(_) => None,
            Term::Const(c) => Some(c),
            Term::Compound(f, _) => Some(f),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Compound(_, args) => args,
            _ => &[],
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::Const(_) => false,
            Term::Compound(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    /// Variables in left-to-right first-occurrence order, without repeats.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Compound(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    /// Number of nodes in the term tree.
    pub fn size(&self) -> usize {
        match self {
            Term::Compound(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        }
    }

    /// Renders the term with variables named `V0, V1, ...` by first occurrence.
    pub fn canonical(&self) -> String {
        let mut names = CanonicalNames::default();
        names.render(self)
    }
}

/// Prints variables as `name_id`, which is valid variable syntax and
/// unambiguous.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}_{}", v.name, v.id),
            Term::Const(c) => write!(f, "{c}"),
            Term::Compound(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Assigns `V0, V1, ...` to variables in the order they are first rendered.
/// One instance shared across several terms keeps their names consistent.
#[derive(Default, Debug)]
pub struct CanonicalNames {
    names: HashMap<u64, usize>,
}

impl CanonicalNames {
    pub fn render(&mut self, t: &Term) -> String {
        let mut s = String::new();
        self.write(t, &mut s);
        s
    }

    fn write(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Var(v) => {
                let next = self.names.len();
                let n = *self.names.entry(v.id).or_insert(next);
                out.push('V');
                out.push_str(&n.to_string());
            }
            Term::Const(c) => out.push_str(c),
            Term::Compound(f, args) => {
                out.push_str(f);
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    self.write(a, out);
                }
                out.push(')');
            }
        }
    }
}

/// Canonical rendering of an argument vector with one shared naming.
pub fn canonical_args(args: &[Term]) -> Vec<String> {
    let mut names = CanonicalNames::default();
    args.iter().map(|a| names.render(a)).collect()
}
