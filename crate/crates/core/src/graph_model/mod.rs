//! Degree sequences, their summary statistics, validity checks and the
//! labelled graph type used for both realizations and patterns.

mod degree;
mod graph;
mod io;

pub(crate) use degree::is_graphical_slice;
pub use degree::{
    check_assumptions, compute_stats, induced_assumption_value, is_graphical, raw_stats, subgraph_assumption_value,
    AssumptionReport, DegreeSequence, DegreeStats, DEFAULT_A, DEFAULT_EPS,
};
pub use graph::{Graph, PatternGraph};
pub use io::{format_degrees, format_graph, parse_degrees, parse_graph, read_degrees, read_graph};
