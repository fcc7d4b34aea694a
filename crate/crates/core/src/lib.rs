//! Exact counting of 3-way contingency tables with two fixed plane-sum
//! margins.
//!
//! Three independent routes compute the same number:
//!
//! * [`flow::count_tables`] enumerates lattice points of the flow polytope
//!   of the `p`-complete bipartite quiver `Q^p_{m,n}`;
//! * [`lr::parabolic_kostka`] evaluates `K_{λ,ℛ}` with
//!   `λ = ((pN)^{pm})` and the rectangles listed in
//!   [`pipeline::kostka_instance_of`];
//! * [`pipeline::corollary_sum`] sums products of two parabolic Kostka
//!   coefficients in `GL(mp)`.
//!
//! [`pipeline::build_trace`] rebuilds the quiver reductions between them
//! and checks each intermediate dimension vector and weight.

pub mod error;
pub mod flow;
pub mod lr;
pub mod partition;
pub mod pipeline;
pub mod quiver;

pub use error::{Error, Result};
pub use flow::{count_tables, FlowPoint, TableInstance};
pub use lr::{KostkaInstance, SchurExpansion, TermBudget};
pub use partition::{Partition, SkewShape};
pub use pipeline::{verify, Budgets, CountReport, Method, PipelineTrace};
pub use quiver::{ExceptionalSequenceData, IntVector, Quiver};
