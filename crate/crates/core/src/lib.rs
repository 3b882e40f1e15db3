//! Exact analysis of parity vertex-removal games on undirected graphs.
//!
//! A move removes one vertex whose degree has the parity allowed by the
//! rule ([`VertexClass`]), together with its edges; a player with no move
//! loses. The crate provides
//!
//! * [`graph`]: graphs, positions and structural predicates,
//! * [`solver`]: Grundy values by memoized search with component splitting,
//! * [`theorems`]: closed forms and suites checking them against the solver,
//! * [`constructor`]: connected graphs of any Grundy value that fits,
//! * [`census`]: value statistics over all small labelled graphs.

pub mod bitset;
pub mod census;
pub mod constructor;
pub mod euler;
pub mod format;
pub mod generate;
pub mod graph;
pub mod solver;
pub mod theorems;

pub use bitset::{VertexSet, MAX_VERTICES};
pub use graph::{Graph, GraphError, Position, VertexClass};
pub use solver::{grundy, mex, nim_sum, GrundyValue, MemoTable, SolveError, SolveReport, Solver};
