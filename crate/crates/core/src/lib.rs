//! Elimination distances to first-order definable graph properties.
//!
//! The library computes three variants of elimination distance from a graph G
//! to the class of graphs satisfying a first-order sentence f:
//!
//! * `ed_conn`: delete a vertex from each connected component recursively
//!   until every component satisfies f;
//! * `ed_prop`: as above, but recursion stops early on any graph satisfying f;
//! * `ed_depth`: minimum d such that some set X with elimination depth d - 1
//!   can be deleted so that the remaining graph satisfies f.
//!
//! Alongside the exact (exponential) solvers there are characterization-based
//! oracles driven by elimination-set search, fixed-parameter branching solvers
//! for (p,q)-unbreakable graphs, monadic second-order encodings of the three
//! parameterized properties, a deterministic separating-family construction,
//! and a Set Cover reduction showing the problems are hard for formulas with
//! three quantifier blocks.
//!
//! Graphs are capped at 64 vertices; every vertex set is a single-word bitset.

pub mod distance;
pub mod elimination;
pub mod fixture;
pub mod formula;
pub mod fpt;
pub mod graph;
pub mod hardness;
pub mod modelcheck;
pub mod msol;
pub mod separation;
pub mod set;

pub use distance::{Variant, Witness};
pub use elimination::Representation;
pub use formula::{Formula, Matrix, PrefixClass, Quantifier, QuantifierKind, Side};
pub use fpt::{
    cutoff, default_p, find_c, find_f, find_x, solve_unbreakable, Candidate, Coloring, FptError,
    SearchStats, SolveOutcome,
};
pub use graph::{Graph, Separation, Subgraph};
pub use hardness::{hard_formula, reduction_equivalence_check, setcover_to_graph, SetCoverInstance};
pub use modelcheck::{CatalogFormula, Property, Structure};
pub use msol::{emit_msol, emit_msol_catalog, eval_msol, MsolFormula};
pub use separation::{build_family, verify_family, SeparatingFamily};
pub use set::VertexSet;
