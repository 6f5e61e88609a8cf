//! Datalog grammars: context-free rules with first-order term arguments,
//! evaluated bottom-up by semi-naive closure over positional word facts,
//! with meta-grammatical coordination resolved through suspended
//! parallelism constraints.
//!
//! The usual entry point is [`parse_sentence`]:
//!
//! ```
//! use dlgram::{grammar::{parse_grammar, samples}, parse_sentence, ParseOptions};
//!
//! let g = parse_grammar(samples::FRENCH_SYN).unwrap();
//! let parse = parse_sentence(&g, "jean mange une pomme rouge et une verte", &ParseOptions::default()).unwrap();
//! assert_eq!(parse.results.len(), 1);
//! ```

pub mod coordination;
pub mod engine;
pub mod grammar;
pub mod reshape;
pub mod term;

mod pipeline;

pub use pipeline::{parse_sentence, parse_tokens, tokenize, Parse, ParseOptions};
