use std::collections::BTreeSet;

use crate::term::syntax::{Reader, Tok};

use super::{Declarations, Grammar, GrammarError, NonTerminal, Rule, RuleId, RuleItem};

/// Reads a `.dlg` grammar.
///
/// Statements end with `.`. Rules are `head --> item, item, ... .` with
/// terminals in square brackets. Directives: `@start cat.`, `@conj cat.`,
/// `@scope cat pos.`, `@quant functor.`, `@connective atom.`
pub fn parse_grammar(src: &str) -> Result<Grammar, GrammarError> {
    let mut r = Reader::new(src)?;
    let mut rules = Vec::new();
    let mut decls = Declarations::default();
    let mut seen_start = false;
    let mut seen_conj = false;
    let mut connectives = BTreeSet::new();
    let mut directive_refs: Vec<(String, String)> = Vec::new();

    while *r.peek() != Tok::Eof {
        if r.eat(&Tok::At) {
            let (line, col) = r.position();
            let name = r.atom()?;
            let dup = |directive: &str| GrammarError::DuplicateDirective {
                line,
                col,
                directive: directive.to_string(),
            };
            match name.as_str() {
                "start" => {
                    let cat = r.atom()?;
                    if std::mem::replace(&mut seen_start, true) {
                        return Err(dup("start"));
                    }
                    directive_refs.push(("start".into(), cat.clone()));
                    decls.start = Some(cat);
                }
                "conj" => {
                    let cat = r.atom()?;
                    if std::mem::replace(&mut seen_conj, true) {
                        return Err(dup("conj"));
                    }
                    directive_refs.push(("conj".into(), cat.clone()));
                    decls.conj_category = cat;
                }
                "scope" => {
                    let cat = r.atom()?;
                    let pos = match r.next().tok {
                        Tok::Int(n) => n,
                        other => {
                            return Err(GrammarError::Syntax(crate::term::SyntaxError {
                                line,
                                col,
                                message: format!(
                                    "@scope expects an argument position, found {other}"
                                ),
                            }))
                        }
                    };
                    if decls.scope_args.insert(cat.clone(), pos).is_some() {
                        return Err(dup("scope"));
                    }
                    directive_refs.push(("scope".into(), cat));
                }
                "quant" => {
                    let q = r.atom()?;
                    if !decls.quantifiers.insert(q) {
                        return Err(dup("quant"));
                    }
                }
                "connective" => {
                    let c = r.atom()?;
                    if !connectives.insert(c) {
                        return Err(dup("connective"));
                    }
                }
                other => {
                    return Err(GrammarError::Syntax(crate::term::SyntaxError {
                        line,
                        col,
                        message: format!("unknown directive @{other}"),
                    }))
                }
            }
            r.expect(Tok::Dot)?;
        } else {
            rules.push(rule(&mut r)?);
        }
    }

    if !connectives.is_empty() {
        decls.connectives = connectives;
    }
    let g = Grammar::new(rules, decls)?;
    if let Some((category, first, second)) = g.arity_conflicts().first().cloned() {
        return Err(GrammarError::ArityConflict {
            category,
            first,
            second,
        });
    }
    for (directive, category) in directive_refs {
        if g.arity(&category).is_none() {
            return Err(GrammarError::UnknownCategory {
                directive,
                category,
            });
        }
    }
    Ok(g)
}

fn rule(r: &mut Reader) -> Result<Rule, GrammarError> {
    r.reset_scope();
    let (category, args) = r.callable()?;
    let head = NonTerminal { category, args };
    r.expect(Tok::Arrow)?;
    let mut body = Vec::new();
    loop {
        if r.eat(&Tok::LBracket) {
            loop {
                body.push(RuleItem::Terminal(r.atom()?));
                if !r.eat(&Tok::Comma) {
                    break;
                }
            }
            r.expect(Tok::RBracket)?;
        } else {
            let (category, args) = r.callable()?;
            body.push(RuleItem::NonTerminal(NonTerminal { category, args }));
        }
        if !r.eat(&Tok::Comma) {
            break;
        }
    }
    r.expect(Tok::Dot)?;
    Ok(Rule {
        id: RuleId(0),
        head,
        body,
    })
}
