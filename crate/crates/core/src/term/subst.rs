use std::collections::HashMap;
use std::sync::Arc;

use super::{Term, Var};

/// A mapping from variables to terms.
///
/// Bindings are kept triangular (a bound term may mention other bound
/// variables) and resolved on lookup. Extension is functional from the
/// caller's point of view: [`unify`] returns a new substitution and leaves
/// its input untouched, so discarding a substitution is all it takes to
/// undo a line of bindings.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    bindings: Arc<HashMap<u64, Term>>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.bindings.get(&v.id())
    }

    pub fn is_bound(&self, v: &Var) -> bool {
        self.bindings.contains_key(&v.id())
    }

    /// Adds `v ↦ t` without any checks. Callers guarantee `v` is unbound and
    /// does not occur in `apply(self, t)`.
    pub fn bind(&mut self, v: &Var, t: Term) {
        Arc::make_mut(&mut self.bindings).insert(v.id(), t);
    }

    /// Follows variable-to-variable chains until an unbound variable or a
    /// non-variable term is reached.
    pub fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.bindings.get(&v.id()) {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    /// Returns the idempotent form: every binding fully resolved.
    pub fn normalized(&self) -> Substitution {
        let resolved = self
            .bindings
            .iter()
            .map(|(id, t)| (*id, apply(self, t)))
            .collect();
        Substitution {
            bindings: Arc::new(resolved),
        }
    }

    /// Unifies in place. On failure `self` may hold partial bindings; the
    /// public [`unify`] works on a copy so callers never observe them.
    pub(crate) fn unify_mut(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.walk(a).clone();
        let b = self.walk(b).clone();
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), Term::Var(y)) => {
                // Younger variables point at older ones, so a term's own
                // variables survive when it is unified with fresh copies.
                if x.id() > y.id() {
                    self.bind(x, b.clone());
                } else {
                    self.bind(y, a.clone());
                }
                true
            }
            (Term::Var(x), t) | (t, Term::Var(x)) => {
                if self.occurs(x, t) {
                    return false;
                }
                self.bind(x, t.clone());
                true
            }
            (Term::Const(c), Term::Const(d)) => c == d,
            (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                f == g
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys.iter()).all(|(x, y)| self.unify_mut(x, y))
            }
            _ => false,
        }
    }

    pub(crate) fn unify_all_mut(&mut self, xs: &[Term], ys: &[Term]) -> bool {
        xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify_mut(x, y))
    }

    fn occurs(&self, v: &Var, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => w == v,
            Term::Const(_) => false,
            Term::Compound(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    /// Unifies two argument vectors pairwise, threading the bindings.
    pub fn unify_args(&self, xs: &[Term], ys: &[Term]) -> Option<Substitution> {
        let mut s = self.clone();
        s.unify_all_mut(xs, ys).then_some(s)
    }

    pub fn apply_all(&self, ts: &[Term]) -> Vec<Term> {
        ts.iter().map(|t| apply(self, t)).collect()
    }
}

/// Most general unifier of `s(a)` and `s(b)` extending `s`, with occurs-check.
pub fn unify(a: &Term, b: &Term, s: &Substitution) -> Option<Substitution> {
    let mut out = s.clone();
    out.unify_mut(a, b).then_some(out)
}

/// Replaces every bound variable in `t`, recursively, until no bound
/// variable remains.
pub fn apply(s: &Substitution, t: &Term) -> Term {
    if s.is_empty() {
        return t.clone();
    }
    match s.walk(t) {
        Term::Var(v) => Term::Var(v.clone()),
        Term::Const(c) => Term::Const(c.clone()),
        Term::Compound(f, args) => {
            Term::Compound(f.clone(), args.iter().map(|a| apply(s, a)).collect())
        }
    }
}
