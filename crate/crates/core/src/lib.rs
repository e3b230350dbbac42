//! Strong structural observability of structured linear systems and sensor
//! placement for water distribution networks.
//!
//! Patterns over `{0, *, ?}` are checked with the color-change rule on two
//! graphs; sensor sets are searched in order of a centrality-based cost.

pub mod centrality;
pub mod colorability;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod pattern;
pub mod placement;
pub mod verify;
pub mod wdn;

pub use error::{Error, Result};
pub use pattern::{PatternMatrix, PatternSymbol, RealMatrix};
