//! Mining cohesive subgraphs with exceptional attributes (CSEA patterns) from vertex-attributed
//! graphs.
//!
//! A pattern `(U, S)` pairs a vertex set `U` with one-sided intervals `S` on the tail
//! probabilities of attribute counts under a maximum-entropy background model. Patterns are
//! ranked by subjective interestingness, the ratio of their information content to the length
//! of the shortest description of `U` as an intersection of hop neighborhoods plus exceptions.

pub mod background;
pub mod bitset;
pub mod description;
pub mod error;
pub mod export;
pub mod graph;
pub mod interestingness;
pub mod numfmt;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod pattern_enum;
pub mod pipeline;
pub mod record;
pub mod synth;

pub use background::{bin_tails, BackgroundModel, BinBoundaries, TailMatrix};
pub use bitset::VertexSet;
pub use description::{dl_optimise, Description, DlOptions, DlOutcome};
pub use error::{Error, Result};
pub use graph::{all_neighborhoods, neighborhood, AttributedGraph, Neighborhood, NeighborhoodSet};
pub use interestingness::{information_content, score_and_rank, ScoredPattern};
pub use pattern_enum::{
    enumerate_closed, tighten_s, transform_to_er, ClosedPattern, ErModel, Interval, Side,
};
pub use pipeline::{mine, MiningConfig, MiningResult, MiningStats};
pub use record::PatternRecord;
