//! Truncated globular colored operads of non-strict cells.

pub mod algebra;
pub mod coherence;
pub mod collections;
pub mod contraction;
pub mod enumerate;
pub mod fusion;
pub mod glob;
pub mod models;
pub mod monoid;
pub mod pasting;
pub mod term;
pub mod tgraph;
