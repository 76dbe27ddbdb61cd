//! Sweepout widths of Schreier coset graphs: Folner profiles, approximate
//! bisection by translated bites, recursive sweepouts and the series bound,
//! plus the cover and token-game counting for intersection graphs.

pub mod bisect;
pub mod cli;
pub mod cobordism;
pub mod error;
pub mod folner;
pub mod graph;
pub mod groups;
pub mod sweepout;

pub use error::{Error, Result};
pub use graph::{Graph, VertexFunction, VertexSet};
