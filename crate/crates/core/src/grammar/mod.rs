//! Grammar rules and the declarations the coordination machinery reads.

mod parse;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::term::{CanonicalNames, SyntaxError, Term};

pub use parse::parse_grammar;
pub use validate::{validate, Diagnostic, Severity};

/// Reserved category of input word facts.
pub const INPUT_CATEGORY: &str = "'D'";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleId(pub usize);

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonTerminal {
    pub category: String,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RuleItem {
    NonTerminal(NonTerminal),
    Terminal(String),
}

impl RuleItem {
    pub fn category(&self) -> &str {
        match self {
            RuleItem::NonTerminal(nt) => &nt.category,
            RuleItem::Terminal(_) => INPUT_CATEGORY,
        }
    }
}

/// `head --> body`. Head and body share one variable namespace.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub id: RuleId,
    pub head: NonTerminal,
    pub body: Vec<RuleItem>,
}

impl Rule {
    /// A rule whose body is made only of terminals.
    pub fn is_lexical(&self) -> bool {
        self.body.iter().all(|i| matches!(i, RuleItem::Terminal(_)))
    }

    /// Fresh copy of head arguments and body, sharing new variables.
    pub fn instantiate(&self) -> (Vec<Term>, Vec<RuleItem>) {
        let mut r = crate::term::Renamer::new();
        let head = r.rename_all(&self.head.args);
        let body = self
            .body
            .iter()
            .map(|item| match item {
                RuleItem::NonTerminal(nt) => RuleItem::NonTerminal(NonTerminal {
                    category: nt.category.clone(),
                    args: r.rename_all(&nt.args),
                }),
                RuleItem::Terminal(w) => RuleItem::Terminal(w.clone()),
            })
            .collect();
        (head, body)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = CanonicalNames::default();
        write_nt(f, &self.head, &mut names)?;
        f.write_str(" --> ")?;
        let mut i = 0;
        while i < self.body.len() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match &self.body[i] {
                RuleItem::NonTerminal(nt) => {
                    write_nt(f, nt, &mut names)?;
                    i += 1;
                }
                RuleItem::Terminal(_) => {
                    let mut words = Vec::new();
                    while let Some(RuleItem::Terminal(w)) = self.body.get(i) {
                        words.push(w.as_str());
                        i += 1;
                    }
                    write!(f, "[{}]", words.join(", "))?;
                }
            }
        }
        f.write_str(".")
    }
}

fn write_nt(
    f: &mut fmt::Formatter<'_>,
    nt: &NonTerminal,
    names: &mut CanonicalNames,
) -> fmt::Result {
    f.write_str(&nt.category)?;
    if !nt.args.is_empty() {
        let args: Vec<String> = nt.args.iter().map(|a| names.render(a)).collect();
        write!(f, "({})", args.join(", "))?;
    }
    Ok(())
}

/// Directive values collected from a grammar file or set programmatically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Declarations {
    pub start: Option<String>,
    pub conj_category: String,
    /// 1-based argument position of the scope argument per category.
    pub scope_args: BTreeMap<String, usize>,
    pub quantifiers: BTreeSet<String>,
    pub connectives: BTreeSet<String>,
}

impl Default for Declarations {
    fn default() -> Self {
        Declarations {
            start: None,
            conj_category: "conj".into(),
            scope_args: BTreeMap::new(),
            quantifiers: BTreeSet::new(),
            connectives: ["and", "or", "but"].iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("{line}:{col}: duplicate directive @{directive}")]
    DuplicateDirective {
        line: usize,
        col: usize,
        directive: String,
    },
    #[error("arity conflict {category}: used with {first} and {second} arguments")]
    ArityConflict {
        category: String,
        first: usize,
        second: usize,
    },
    #[error("@{directive} refers to unknown category {category}")]
    UnknownCategory { directive: String, category: String },
    #[error("grammar has no rules")]
    Empty,
}

/// A rule set with its declarations and derived indexes.
#[derive(Debug, Clone)]
pub struct Grammar {
    rules: Vec<Rule>,
    start: String,
    conj_category: String,
    scope_args: BTreeMap<String, usize>,
    quantifiers: BTreeSet<String>,
    connectives: BTreeSet<String>,
    category_arities: BTreeMap<String, usize>,
    arity_conflicts: Vec<(String, usize, usize)>,
    by_head: HashMap<String, Vec<usize>>,
}

impl Grammar {
    /// Builds a grammar from rules and declarations. Rule ids are reassigned
    /// to positions. No validation happens here; see [`validate`].
    pub fn new(rules: Vec<Rule>, decls: Declarations) -> Result<Grammar, GrammarError> {
        if rules.is_empty() {
            return Err(GrammarError::Empty);
        }
        let rules: Vec<Rule> = rules
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.id = RuleId(i);
                r
            })
            .collect();

        let mut category_arities = BTreeMap::new();
        let mut arity_conflicts = Vec::new();
        let mut by_head: HashMap<String, Vec<usize>> = HashMap::new();
        for r in &rules {
            by_head
                .entry(r.head.category.clone())
                .or_default()
                .push(r.id.0);
            let uses = std::iter::once(&r.head).chain(r.body.iter().filter_map(|i| match i {
                RuleItem::NonTerminal(nt) => Some(nt),
                RuleItem::Terminal(_) => None,
            }));
            for nt in uses {
                match category_arities.get(&nt.category) {
                    None => {
                        category_arities.insert(nt.category.clone(), nt.args.len());
                    }
                    Some(&a) if a != nt.args.len() => {
                        let c = (nt.category.clone(), a, nt.args.len());
                        if !arity_conflicts.contains(&c) {
                            arity_conflicts.push(c);
                        }
                    }
                    Some(_) => {}
                }
            }
        }

        let start = decls
            .start
            .unwrap_or_else(|| rules[0].head.category.clone());
        Ok(Grammar {
            rules,
            start,
            conj_category: decls.conj_category,
            scope_args: decls.scope_args,
            quantifiers: decls.quantifiers,
            connectives: decls.connectives,
            category_arities,
            arity_conflicts,
            by_head,
        })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: RuleId) -> &Rule {
        &self.rules[id.0]
    }

    /// Rules whose head is `category`, in file order.
    pub fn rules_for<'a>(&'a self, category: &str) -> impl Iterator<Item = &'a Rule> + 'a {
        self.by_head
            .get(category)
            .map(|ids| ids.as_slice())
            .unwrap_or(&[])
            .iter()
            .map(move |&i| &self.rules[i])
    }

    pub fn has_rules_for(&self, category: &str) -> bool {
        self.by_head.contains_key(category)
    }

    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn conj_category(&self) -> &str {
        &self.conj_category
    }

    pub fn scope_arg(&self, category: &str) -> Option<usize> {
        self.scope_args.get(category).copied()
    }

    pub fn scope_args(&self) -> &BTreeMap<String, usize> {
        &self.scope_args
    }

    pub fn quantifiers(&self) -> &BTreeSet<String> {
        &self.quantifiers
    }

    pub fn connectives(&self) -> &BTreeSet<String> {
        &self.connectives
    }

    pub fn is_quantifier(&self, functor: &str) -> bool {
        self.quantifiers.contains(functor)
    }

    pub fn is_connective(&self, name: &str) -> bool {
        self.connectives.contains(name)
    }

    pub fn arity(&self, category: &str) -> Option<usize> {
        if category == INPUT_CATEGORY {
            return Some(1);
        }
        self.category_arities.get(category).copied()
    }

    pub fn category_arities(&self) -> &BTreeMap<String, usize> {
        &self.category_arities
    }

    pub(crate) fn arity_conflicts(&self) -> &[(String, usize, usize)] {
        &self.arity_conflicts
    }

    pub fn declarations(&self) -> Declarations {
        Declarations {
            start: Some(self.start.clone()),
            conj_category: self.conj_category.clone(),
            scope_args: self.scope_args.clone(),
            quantifiers: self.quantifiers.clone(),
            connectives: self.connectives.clone(),
        }
    }
}

/// Pretty-prints in `.dlg` syntax; the output parses back to an equal grammar.
impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "@start {}.", self.start)?;
        writeln!(f, "@conj {}.", self.conj_category)?;
        for (cat, pos) in &self.scope_args {
            writeln!(f, "@scope {cat} {pos}.")?;
        }
        for q in &self.quantifiers {
            writeln!(f, "@quant {q}.")?;
        }
        for c in &self.connectives {
            writeln!(f, "@connective {c}.")?;
        }
        writeln!(f)?;
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Grammar files shipped with the crate.
pub mod samples {
    /// English with quantified logical forms and grammar-level np coordination.
    pub const ENGLISH_SEM: &str = include_str!("../../grammars/english_sem.dlg");
    /// Argument-free French grammar with no coordination rules.
    pub const FRENCH_SYN: &str = include_str!("../../grammars/french_syn.dlg");
}
