//! Front end shared by the `dlgram` binary and its tests.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use dlgram::engine::EngineError;
use dlgram::grammar::validate;
use dlgram::grammar::{parse_grammar, samples, Grammar};
use dlgram::reshape::{builtin_rules, reshape, RewriteRule};
use dlgram::{parse_sentence, tokenize, Parse, ParseOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_PARSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Default)]
pub enum Input {
    Sentence(String),
    File(PathBuf),
    #[default]
    None,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grammar: PathBuf,
    pub input: Input,
    pub trace: bool,
    pub reshape: bool,
    pub reshape_too: bool,
    pub all_coord: bool,
    pub no_meta_coord: bool,
    pub json: bool,
    pub layer_cap: usize,
    pub gap_budget: usize,
}

impl RunConfig {
    pub fn new(grammar: impl Into<PathBuf>, input: Input) -> RunConfig {
        let d = ParseOptions::default();
        RunConfig {
            grammar: grammar.into(),
            input,
            trace: false,
            reshape: false,
            reshape_too: false,
            all_coord: false,
            no_meta_coord: false,
            json: false,
            layer_cap: d.layer_cap,
            gap_budget: d.gap_budget,
        }
    }

    fn parse_options(&self) -> ParseOptions {
        ParseOptions {
            layer_cap: self.layer_cap,
            gap_budget: self.gap_budget,
            meta_coord: !self.no_meta_coord,
            all_coord: self.all_coord,
            ..ParseOptions::default()
        }
    }
}

/// Captured output of a run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: String) -> Outcome {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: message,
        }
    }
}

/// Reads a grammar file. A missing file named like one of the shipped
/// grammars falls back to the built-in copy.
pub fn load_grammar(path: &Path) -> Result<Grammar, String> {
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            let builtin = match path.file_name().and_then(|n| n.to_str()) {
                Some("english_sem.dlg") if !path.exists() => samples::ENGLISH_SEM,
                Some("french_syn.dlg") if !path.exists() => samples::FRENCH_SYN,
                _ => return Err(format!("{}: {e}", path.display())),
            };
            builtin.to_string()
        }
    };
    parse_grammar(&src).map_err(|e| format!("{}: {e}", path.display()))
}

/// Loads and validates a grammar; errors make it unusable.
fn checked_grammar(path: &Path) -> Result<(Grammar, Vec<String>), String> {
    let g = load_grammar(path)?;
    let diags = validate(&g);
    let lines: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
    if diags.iter().any(|d| d.is_error()) {
        return Err(lines.join("\n"));
    }
    Ok((g, lines))
}

/// `dlgram check`: prints diagnostics, then `ok` when there are no errors.
pub fn check(path: &Path) -> Outcome {
    match checked_grammar(path) {
        Ok((_, warnings)) => {
            let mut stdout = String::new();
            for w in warnings {
                let _ = writeln!(stdout, "{w}");
            }
            stdout.push_str("ok\n");
            Outcome {
                code: EXIT_OK,
                stdout,
                stderr: String::new(),
            }
        }
        Err(msg) => Outcome::usage(format!("{msg}\n")),
    }
}

#[derive(Serialize)]
pub struct JsonEdge {
    pub id: usize,
    pub cat: String,
    pub args: Vec<String>,
    pub start: usize,
    pub end: usize,
    pub layer: usize,
    pub provenance: String,
}

#[derive(Serialize)]
pub struct JsonParse {
    pub root_edge_id: usize,
    pub logical_form: String,
}

#[derive(Serialize)]
pub struct JsonResolution {
    pub source: usize,
    pub target: usize,
    pub combined: usize,
}

#[derive(Serialize)]
pub struct JsonConstraint {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub connective: String,
    pub status: String,
    pub resolutions: Vec<JsonResolution>,
}

#[derive(Serialize)]
pub struct JsonDocument {
    pub tokens: Vec<String>,
    pub edges: Vec<JsonEdge>,
    pub parses: Vec<JsonParse>,
    pub constraints: Vec<JsonConstraint>,
}

/// Chart dump of one parse. `forms` are the logical forms to report, one
/// per result (already reshaped if requested).
pub fn emit_json(parse: &Parse, forms: &[String]) -> JsonDocument {
    JsonDocument {
        tokens: parse.chart.tokens().to_vec(),
        edges: parse
            .chart
            .edges()
            .iter()
            .map(|e| JsonEdge {
                id: e.id,
                cat: e.category.clone(),
                args: dlgram::term::canonical_args(&e.args),
                start: e.start,
                end: e.end,
                layer: e.layer,
                provenance: e.provenance.to_string(),
            })
            .collect(),
        parses: parse
            .results
            .iter()
            .zip(forms)
            .map(|(r, f)| JsonParse {
                root_edge_id: r.root,
                logical_form: f.clone(),
            })
            .collect(),
        constraints: parse
            .constraints
            .iter()
            .map(|c| JsonConstraint {
                n: c.n,
                m: c.m,
                connective: c.connective.clone(),
                status: c.status.to_string(),
                resolutions: c
                    .resolutions
                    .iter()
                    .map(|r| JsonResolution {
                        source: r.source,
                        target: r.target,
                        combined: r.combined,
                    })
                    .collect(),
            })
            .collect(),
    }
}

struct SentenceOutput {
    parsed: bool,
    text: String,
    json: Option<JsonDocument>,
    error: Option<String>,
}

fn run_sentence(
    g: &Grammar,
    config: &RunConfig,
    rules: &[RewriteRule],
    sentence: &str,
) -> SentenceOutput {
    let mut text = String::new();
    let parse = match parse_sentence(g, sentence, &config.parse_options()) {
        Ok(p) => p,
        Err(e) => {
            let msg = match e {
                EngineError::EmptyInput => format!("{sentence:?}: empty input"),
                other => format!("{sentence:?}: {other}"),
            };
            return SentenceOutput {
                parsed: false,
                text,
                json: None,
                error: Some(msg),
            };
        }
    };

    let mut forms = Vec::with_capacity(parse.results.len());
    for r in &parse.results {
        let lf = if rules.is_empty() {
            r.logical_form.clone()
        } else {
            match reshape(&r.logical_form, rules) {
                Ok(t) => t,
                Err(e) => {
                    return SentenceOutput {
                        parsed: false,
                        text,
                        json: None,
                        error: Some(format!("{sentence:?}: {e}")),
                    }
                }
            }
        };
        forms.push(lf.canonical());
    }

    if config.json {
        return SentenceOutput {
            parsed: !forms.is_empty(),
            text,
            json: Some(emit_json(&parse, &forms)),
            error: None,
        };
    }

    let _ = writeln!(text, "sentence: {}", tokenize(sentence).join(" "));
    if config.trace {
        for line in parse.trace() {
            let _ = writeln!(text, "  {line}");
        }
    }
    if forms.is_empty() {
        text.push_str("  no parse\n");
    }
    for (r, f) in parse.results.iter().zip(&forms) {
        let _ = writeln!(text, "  #{}: {f}", r.root);
    }
    SentenceOutput {
        parsed: !forms.is_empty(),
        text,
        json: None,
        error: None,
    }
}

/// `dlgram parse`. Sentences are parsed in parallel; output keeps input
/// order.
pub fn run(config: &RunConfig) -> Outcome {
    if config.layer_cap == 0 {
        return Outcome::usage("layer cap must be at least 1\n".into());
    }
    let (g, warnings) = match checked_grammar(&config.grammar) {
        Ok(x) => x,
        Err(msg) => return Outcome::usage(format!("{msg}\n")),
    };
    let (sentences, as_array) = match &config.input {
        Input::Sentence(s) => (vec![s.clone()], false),
        Input::File(path) => match std::fs::read_to_string(path) {
            Ok(src) => (
                src.lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(String::from)
                    .collect(),
                true,
            ),
            Err(e) => return Outcome::usage(format!("{}: {e}\n", path.display())),
        },
        Input::None => return Outcome::usage("no input: give --sentence or --file\n".into()),
    };
    let rules = if config.reshape || config.reshape_too {
        builtin_rules(&g, config.reshape, config.reshape_too)
    } else {
        Vec::new()
    };

    let outputs: Vec<SentenceOutput> = sentences
        .par_iter()
        .map(|s| run_sentence(&g, config, &rules, s))
        .collect();

    let mut out = Outcome::default();
    for w in warnings {
        let _ = writeln!(out.stderr, "{w}");
    }
    let mut docs = Vec::new();
    for o in outputs {
        if !o.parsed {
            out.code = EXIT_NO_PARSE;
        }
        if let Some(e) = o.error {
            let _ = writeln!(out.stderr, "{e}");
        }
        out.stdout.push_str(&o.text);
        docs.extend(o.json);
    }
    if config.json {
        let rendered = if as_array {
            serde_json::to_string_pretty(&docs)
        } else {
            match docs.first() {
                Some(d) => serde_json::to_string_pretty(d),
                None => Ok("null".into()),
            }
        };
        out.stdout = rendered.expect("JSON of plain data") + "\n";
    }
    out
}
