//! Asymptotic pattern counts in uniformly random graphs with a given degree
//! sequence, the martingale bounds behind them, and exact small-n oracles.

pub mod asymptotics;
pub mod error;
pub mod graph_model;
pub mod martingale;
pub mod moments;
pub mod numeric;
pub mod oracle;
pub mod pattern_stats;
pub mod tree_tools;

pub use error::{Error, Result};
pub use graph_model::{DegreeSequence, DegreeStats, Graph, PatternGraph};
