//! Covering set families by minimum-cost edge sets.
//!
//! The solver implements the two-phase primal-dual scheme (uniform dual
//! growth on the inclusion-minimal uncovered sets, then reverse delete) that
//! achieves ratio 2 on semi-uncrossable set families. Alongside it live
//! concrete family oracles for six classic network-design problems, a
//! brute-force exact solver for desk-scale ground truth, a classifier for
//! explicit families, and a certifier that replays a solve trace and checks
//! every claim the ratio argument rests on.

pub mod certify;
pub mod cost;
pub mod exact;
pub mod families;
pub mod family_props;
pub mod graph;
pub mod primal_dual;
pub mod sampler;

pub use cost::{format_cost, parse_cost, Cost};
pub use families::{FamilyError, FamilyKind, FamilySpec};
pub use graph::{Edge, EdgeId, EdgeSet, GraphError, Multigraph, NodeId, NodeSet};
pub use primal_dual::{solve, SolveError, SolveResult};
