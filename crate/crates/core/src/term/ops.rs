use std::collections::HashMap;

use super::subst::{apply, Substitution};
use super::{Term, Var};

/// Consistent fresh renaming: the same source variable maps to the same
/// fresh variable for the lifetime of one `Renamer`.
#[derive(Default, Debug)]
pub struct Renamer {
    map: HashMap<u64, Var>,
}

impl Renamer {
    pub fn new() -> Renamer {
        Renamer::default()
    }

    pub fn rename(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(v) => Term::Var(
                self.map
                    .entry(v.id())
                    .or_insert_with(|| Var::fresh(v.name()))
                    .clone(),
            ),
            Term::Const(_) => t.clone(),
            Term::Compound(f, args) => {
                Term::Compound(f.clone(), args.iter().map(|a| self.rename(a)).collect())
            }
        }
    }

    pub fn rename_all(&mut self, ts: &[Term]) -> Vec<Term> {
        ts.iter().map(|t| self.rename(t)).collect()
    }
}

/// A variant of `t` whose variables are all globally fresh.
pub fn rename_fresh(t: &Term) -> Term {
    Renamer::new().rename(t)
}

/// True iff a variable bijection maps `a` onto `b`.
pub fn is_variant(a: &Term, b: &Term) -> bool {
    is_variant_seq(std::slice::from_ref(a), std::slice::from_ref(b))
}

/// [`is_variant`] over argument vectors, with one bijection for the whole vector.
pub fn is_variant_seq(xs: &[Term], ys: &[Term]) -> bool {
    let mut fwd = HashMap::new();
    let mut bwd = HashMap::new();
    xs.len() == ys.len()
        && xs
            .iter()
            .zip(ys)
            .all(|(x, y)| variant_walk(x, y, &mut fwd, &mut bwd))
}

fn variant_walk(
    a: &Term,
    b: &Term,
    fwd: &mut HashMap<u64, u64>,
    bwd: &mut HashMap<u64, u64>,
) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let f = *fwd.entry(x.id()).or_insert(y.id());
            let g = *bwd.entry(y.id()).or_insert(x.id());
            f == y.id() && g == x.id()
        }
        (Term::Const(c), Term::Const(d)) => c == d,
        (Term::Compound(f, xs), Term::Compound(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| variant_walk(x, y, fwd, bwd))
        }
        _ => false,
    }
}

/// Abstracts an argument vector over its scope argument.
///
/// `scope_pos` is 1-based. Every occurrence of the scope value, at any depth
/// of any argument, becomes one shared fresh variable. Other variables are
/// kept, so the result still shares them with the source.
///
/// # Panics
///
/// If `scope_pos` is 0 or past the end of `args`.
pub fn abstract_over(args: &[Term], scope_pos: usize) -> (Vec<Term>, Var) {
    assert!(
        scope_pos >= 1 && scope_pos <= args.len(),
        "scope position {scope_pos} out of range for {} arguments",
        args.len()
    );
    let scope = &args[scope_pos - 1];
    let v = Var::fresh("Scope");
    let hole = Term::Var(v.clone());
    let out = args.iter().map(|a| replace(a, scope, &hole)).collect();
    (out, v)
}

fn replace(t: &Term, target: &Term, with: &Term) -> Term {
    if t == target {
        return with.clone();
    }
    match t {
        Term::Compound(f, args) => Term::Compound(
            f.clone(),
            args.iter().map(|a| replace(a, target, with)).collect(),
        ),
        _ => t.clone(),
    }
}

/// c-unification: unify what unifies, and join the parallel elements that
/// do not with the connective `conn`.
///
/// Never fails. Arguments of compounds with the same functor and arity are
/// combined left to right with one threaded substitution.
pub fn c_unify(a: &Term, b: &Term, conn: &str, s: &Substitution) -> (Term, Substitution) {
    if let Some(s2) = super::unify(a, b, s) {
        let t = apply(&s2, a);
        return (t, s2);
    }
    let a1 = apply(s, a);
    let b1 = apply(s, b);
    match (&a1, &b1) {
        (Term::Compound(f, xs), Term::Compound(g, ys)) if f == g && xs.len() == ys.len() => {
            let mut cur = s.clone();
            let mut parts = Vec::with_capacity(xs.len());
            for (x, y) in xs.iter().zip(ys) {
                let (p, next) = c_unify(x, y, conn, &cur);
                parts.push(p);
                cur = next;
            }
            // Later arguments may bind variables that earlier parts mention.
            let parts = parts.iter().map(|p| apply(&cur, p)).collect();
            (Term::Compound(f.clone(), parts), cur)
        }
        _ => (Term::app(conn, vec![a1, b1]), s.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_term, parse_terms, unify};

    #[test]
    fn rename_fresh_keeps_sharing() {
        let t = parse_term("np(X, S, S)").unwrap();
        let r = rename_fresh(&t);
        assert!(is_variant(&t, &r));
        let old = t.vars();
        assert!(r.vars().iter().all(|v| !old.contains(v)));
        assert_eq!(r.canonical(), "np(V0,V1,V1)");
    }

    #[test]
    fn rename_fresh_fixes_ground_terms() {
        let t = parse_term("john").unwrap();
        assert_eq!(rename_fresh(&t), t);
    }

    #[test]
    fn successive_renamings_are_disjoint() {
        let t = parse_term("np(X, S, S)").unwrap();
        let a = rename_fresh(&t).vars();
        let b = rename_fresh(&t).vars();
        assert!(a.iter().all(|v| !b.contains(v)));
    }

    #[test]
    fn variant_examples() {
        let ts = parse_terms(&["f(X, X)", "f(Y, Y)", "f(X, Y)", "f(Z, Z)", "f(a)"]).unwrap();
        assert!(is_variant(&ts[0], &ts[1]));
        assert!(!is_variant(&ts[2], &ts[3]));
        assert!(!is_variant(&ts[3], &ts[2]));
        assert!(is_variant(&ts[4], &ts[4]));
    }

    #[test]
    fn abstraction_over_nested_scope() {
        let args =
            parse_terms(&["W", "demolished(X, W)", "a(W, window(W), demolished(X, W))"]).unwrap();
        let (out, v) = abstract_over(&args, 2);
        let hole = Term::Var(v);
        assert_eq!(out[0], args[0]);
        assert_eq!(out[1], hole);
        assert_eq!(
            out[2],
            Term::app(
                "a",
                vec![
                    args[0].clone(),
                    Term::app("window", vec![args[0].clone()]),
                    hole.clone()
                ]
            )
        );
    }

    #[test]
    fn abstraction_over_bare_variable() {
        let args = parse_terms(&["X"]).unwrap();
        let (out, v) = abstract_over(&args, 1);
        assert_eq!(out, vec![Term::Var(v.clone())]);
        assert_ne!(out[0], args[0]);
    }

    #[test]
    fn abstraction_over_repeated_constant() {
        let args = parse_terms(&["a", "g(a)"]).unwrap();
        let (out, v) = abstract_over(&args, 1);
        let hole = Term::Var(v);
        assert_eq!(out, vec![hole.clone(), Term::app("g", vec![hole])]);
    }

    #[test]
    fn abstraction_round_trip() {
        let args =
            parse_terms(&["W", "demolished(X, W)", "a(W, window(W), demolished(X, W))"]).unwrap();
        let (out, v) = abstract_over(&args, 2);
        let s = unify(&Term::Var(v), &args[1], &Substitution::new()).unwrap();
        assert_eq!(s.apply_all(&out), args);
    }

    #[test]
    fn c_unify_identity() {
        let t = parse_term("f(X, g(a))").unwrap();
        let (r, s) = c_unify(&t, &t, "and", &Substitution::new());
        assert_eq!(r, t);
        assert!(s.is_empty());
    }

    #[test]
    fn c_unify_functor_clash_conjoins() {
        let ts = parse_terms(&["f(a, X)", "g(b)"]).unwrap();
        let (r, s) = c_unify(&ts[0], &ts[1], "and", &Substitution::new());
        assert_eq!(r, Term::app("and", ts.clone()));
        assert!(s.is_empty());
    }

    #[test]
    fn c_unify_parallel_vps() {
        let ts = parse_terms(&[
            "a(W, window(W), the(Y, car(Y), drove_through(X1, Y, W)))",
            "a(V, window(V), demolished(X, V))",
            "X1",
            "X",
            "a(W, window(W), and(the(Y, car(Y), drove_through(X, Y, W)), demolished(X, W)))",
        ])
        .unwrap();
        let s = unify(&ts[2], &ts[3], &Substitution::new()).unwrap();
        let (r, _) = c_unify(&ts[0], &ts[1], "and", &s);
        assert!(is_variant(&r, &ts[4]), "got {}", r.canonical());
    }
}
