//! Bottom-up evaluation: the chart, semi-naive closure, top-down prediction
//! of incomplete conjuncts and extraction of finished parses.

pub mod chart;
pub mod closure;
pub mod extract;
pub mod predict;

pub use chart::{Chart, Edge, EdgeId, Inserted, Provenance};
pub use closure::{close, match_rule, ClosureHook, Derivation, NoHook};
pub use extract::{extract, logical_form, DerivationTree, ParseResult};
pub use predict::{predict, source_constituents, Direction, PredictOptions, SourceNode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("empty input")]
    EmptyInput,
    #[error("closure did not reach a fixpoint within {cap} layers")]
    LayerCapExceeded { cap: usize },
}
