use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dlgram_cli::{check, run, Input, RunConfig};

#[derive(Parser)]
#[command(
    name = "dlgram",
    version,
    about = "Parse sentences with Datalog grammars"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse sentences and print their logical forms.
    Parse(ParseArgs),
    /// Validate a grammar.
    Check {
        #[arg(short, long)]
        grammar: PathBuf,
    },
}

#[derive(Args)]
struct ParseArgs {
    #[arg(short, long)]
    grammar: PathBuf,
    /// Sentence to parse.
    #[arg(short, long, conflicts_with = "file", required_unless_present = "file")]
    sentence: Option<String>,
    /// File with one sentence per line.
    #[arg(short, long)]
    file: Option<PathBuf>,
    /// Print every edge and constraint event.
    #[arg(long)]
    trace: bool,
    /// Distribute quantifiers over conjoined restrictions.
    #[arg(long)]
    reshape: bool,
    /// Also expand "too" constructions.
    #[arg(long)]
    reshape_too: bool,
    /// Resolve every candidate instead of stopping at the first solution.
    #[arg(long)]
    all_coord: bool,
    /// Parse with grammar rules only.
    #[arg(long)]
    no_meta_coord: bool,
    /// Emit a JSON chart dump.
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    layer_cap: u32,
    #[arg(long, default_value_t = 1)]
    gap_budget: u32,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Check { grammar } => check(&grammar),
        Command::Parse(a) => {
            let input = match (a.sentence, a.file) {
                (Some(s), _) => Input::Sentence(s),
                (None, Some(f)) => Input::File(f),
                (None, None) => Input::None,
            };
            let mut config = RunConfig::new(a.grammar, input);
            config.trace = a.trace;
            config.reshape = a.reshape;
            config.reshape_too = a.reshape_too;
            config.all_coord = a.all_coord;
            config.no_meta_coord = a.no_meta_coord;
            config.json = a.json;
            config.layer_cap = a.layer_cap as usize;
            config.gap_budget = a.gap_budget as usize;
            run(&config)
        }
    };
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
