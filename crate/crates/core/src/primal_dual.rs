//! The two-phase primal-dual solver.
//!
//! Phase 1 grows dual variables uniformly on the active cores until some
//! edge outside the partial solution becomes tight, adds that edge, and
//! repeats until the family is covered. Phase 2 scans the added edges in
//! reverse and drops every edge whose removal keeps the family covered.
//! The full iteration trace is recorded so the certifier can replay it.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::cost::Cost;
use crate::families::{FamilyError, FamilySpec};
use crate::graph::{EdgeId, EdgeSet, Multigraph, NodeSet};

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("invalid family spec: {0}")]
    InvalidSpec(FamilyError),
    #[error(
        "infeasible: no edge outside the solution covers an active core (iteration {iteration})"
    )]
    Infeasible { iteration: usize },
    #[error("edge set does not cover the family")]
    NotACover,
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// No edge outside the partial solution crosses any active core.
#[derive(Debug, PartialEq, Eq)]
pub struct NoCandidateEdge;

/// Dual values keyed by the raised set, plus the accumulated load
/// `sum of y_S over S with e in the cut of S` per edge.
#[derive(Clone, Debug, PartialEq)]
pub struct DualState {
    raised: BTreeMap<NodeSet, Cost>,
    load: Vec<Cost>,
}

impl DualState {
    pub fn new(edge_count: usize) -> Self {
        DualState {
            raised: BTreeMap::new(),
            load: vec![Cost::zero(); edge_count],
        }
    }

    pub fn load(&self, e: EdgeId) -> &Cost {
        &self.load[e]
    }

    pub fn value(&self, s: &NodeSet) -> Cost {
        self.raised.get(s).cloned().unwrap_or_else(Cost::zero)
    }

    pub fn raised_sets(&self) -> impl Iterator<Item = (&NodeSet, &Cost)> {
        self.raised.iter()
    }

    /// Sum of all dual values.
    pub fn total(&self) -> Cost {
        self.raised.values().fold(Cost::zero(), |acc, y| acc + y)
    }

    /// Raises every core by `epsilon`, updating per-edge loads.
    pub fn raise(&mut self, g: &Multigraph, cores: &[NodeSet], epsilon: &Cost) {
        for core in cores {
            let y = self.raised.entry(core.clone()).or_insert_with(Cost::zero);
            *y += epsilon;
            for (id, edge) in g.edges().iter().enumerate() {
                if edge.crosses(core) {
                    self.load[id] += epsilon;
                }
            }
        }
    }
}

/// One Phase-1 iteration: the active cores, how far their duals rose, and
/// the edge that went tight.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub cores: Vec<NodeSet>,
    pub epsilon: Cost,
    pub tight_edge: EdgeId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    /// Every edge Phase 1 added, in addition order.
    pub added: Vec<EdgeId>,
    /// The edges surviving reverse delete.
    pub final_edges: EdgeSet,
    /// Total cost of the surviving edges.
    pub cost: Cost,
    /// Sum of all dual values.
    pub dual_total: Cost,
    pub history: Vec<IterationRecord>,
}

impl SolveResult {
    /// Addition order restricted to the surviving edges.
    pub fn kept_in_order(&self) -> Vec<EdgeId> {
        self.added
            .iter()
            .copied()
            .filter(|e| self.final_edges.contains(e))
            .collect()
    }
}

/// Over the edges outside `sel` that cross at least one core, the largest
/// uniform raise before some edge goes tight, together with the first edge
/// (lowest id) attaining it. The raise can be zero.
pub fn compute_epsilon(
    g: &Multigraph,
    dual: &DualState,
    cores: &[NodeSet],
    sel: &EdgeSet,
) -> Result<(Cost, EdgeId), NoCandidateEdge> {
    let mut best: Option<(Cost, EdgeId)> = None;
    for (id, edge) in g.edges().iter().enumerate() {
        if sel.contains(&id) {
            continue;
        }
        let crossings = cores.iter().filter(|c| edge.crosses(c)).count();
        if crossings == 0 {
            continue;
        }
        let slack = edge.cost.clone() - dual.load(id);
        let candidate = slack / Cost::from_integer(crossings.into());
        match &best {
            Some((eps, _)) if *eps <= candidate => {}
            _ => best = Some((candidate, id)),
        }
    }
    best.ok_or(NoCandidateEdge)
}

/// Scans `added` from last to first, dropping each edge whose removal keeps
/// the family covered. The result is an inclusion-minimal cover.
pub fn reverse_delete(
    g: &Multigraph,
    spec: &FamilySpec,
    added: &[EdgeId],
) -> Result<EdgeSet, SolveError> {
    let mut kept: EdgeSet = added.iter().copied().collect();
    if !spec.is_covered(g, &kept)? {
        return Err(SolveError::NotACover);
    }
    for &e in added.iter().rev() {
        kept.remove(&e);
        if !spec.is_covered(g, &kept)? {
            kept.insert(e);
        }
    }
    Ok(kept)
}

/// Runs both phases and returns the surviving edges, the dual total, and
/// the full iteration trace.
pub fn solve(g: &Multigraph, spec: &FamilySpec) -> Result<SolveResult, SolveError> {
    spec.validate(g.n()).map_err(SolveError::InvalidSpec)?;
    let mut dual = DualState::new(g.edge_count());
    let mut added: Vec<EdgeId> = Vec::new();
    let mut sel = EdgeSet::new();
    let mut history = Vec::new();
    loop {
        let cores = spec.residual_cores(g, &sel)?;
        if cores.is_empty() {
            break;
        }
        let (epsilon, tight) =
            compute_epsilon(g, &dual, &cores, &sel).map_err(|NoCandidateEdge| {
                SolveError::Infeasible {
                    iteration: history.len(),
                }
            })?;
        dual.raise(g, &cores, &epsilon);
        history.push(IterationRecord {
            cores,
            epsilon,
            tight_edge: tight,
        });
        added.push(tight);
        sel.insert(tight);
    }
    let final_edges = reverse_delete(g, spec, &added)?;
    let cost = final_edges
        .iter()
        .fold(Cost::zero(), |acc, &e| acc + &g.edges()[e].cost);
    Ok(SolveResult {
        added,
        final_edges,
        cost,
        dual_total: dual.total(),
        history,
    })
}
