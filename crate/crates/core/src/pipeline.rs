use crate::coordination::{CoordConstraint, CoordOptions, Coordinator, LogEntry};
use crate::engine::{close, extract, Chart, EngineError, NoHook, ParseResult, PredictOptions};
use crate::grammar::Grammar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    pub layer_cap: usize,
    pub gap_budget: usize,
    pub depth_cap: usize,
    /// Resolve coordination through suspended constraints.
    pub meta_coord: bool,
    /// Keep resolving constraints after their first solution.
    pub all_coord: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            layer_cap: 64,
            gap_budget: 1,
            depth_cap: 16,
            meta_coord: true,
            all_coord: false,
        }
    }
}

/// Everything a finished parse leaves behind.
#[derive(Debug, Clone)]
pub struct Parse {
    pub chart: Chart,
    pub results: Vec<ParseResult>,
    pub constraints: Vec<CoordConstraint>,
    pub log: Vec<LogEntry>,
}

impl Parse {
    /// Edge lines in derivation order with constraint events interleaved at
    /// the point they happened.
    pub fn trace(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.chart.len() + self.log.len());
        let mut log = self.log.iter().peekable();
        for id in 0..self.chart.len() {
            while let Some(entry) = log.next_if(|e| e.edges_before <= id) {
                out.push(entry.to_string());
            }
            out.push(self.chart.trace_line(id));
        }
        out.extend(log.map(|e| e.to_string()));
        out
    }
}

/// Lowercases, splits on whitespace and strips surrounding punctuation.
pub fn tokenize(sentence: &str) -> Vec<String> {
    sentence
        .split_whitespace()
        .map(|w| {
            w.trim_matches(|c: char| c.is_ascii_punctuation())
                .to_lowercase()
        })
        .filter(|w| !w.is_empty())
        .collect()
}

pub fn parse_tokens<S: AsRef<str>>(
    grammar: &Grammar,
    tokens: &[S],
    options: &ParseOptions,
) -> Result<Parse, EngineError> {
    let mut chart = Chart::assert_input(tokens)?;
    let (constraints, log) = if options.meta_coord {
        let mut co = Coordinator::new(CoordOptions {
            predict: PredictOptions {
                gap_budget: options.gap_budget,
                depth_cap: options.depth_cap,
            },
            all_solutions: options.all_coord,
        });
        close(&mut chart, grammar, &mut co, options.layer_cap)?;
        co.finish(&chart);
        co.into_parts()
    } else {
        close(&mut chart, grammar, &mut NoHook, options.layer_cap)?;
        (Vec::new(), Vec::new())
    };
    let results = extract(&chart, grammar);
    Ok(Parse {
        chart,
        results,
        constraints,
        log,
    })
}

pub fn parse_sentence(
    grammar: &Grammar,
    sentence: &str,
    options: &ParseOptions,
) -> Result<Parse, EngineError> {
    parse_tokens(grammar, &tokenize(sentence), options)
}
