//! Post-hoc verification of a solve trace.
//!
//! The certifier replays the recorded iterations against the instance and
//! checks everything the ratio-2 argument needs: the rebuilt dual solution
//! is feasible and every added edge was tight, the final cost is within
//! twice the dual total, each iteration's cores see at most `2|C| - 1`
//! surviving later edges, the residual cores obey the containment-or-
//! disjointness law, and the final cover admits a laminar witness family
//! with every witness set crossed by exactly its own edge.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;
use thiserror::Error;

use crate::cost::{format_cost, Cost};
use crate::families::{FamilyError, FamilySpec};
use crate::graph::{EdgeId, EdgeSet, GraphError, Multigraph, NodeSet};
use crate::primal_dual::{DualState, IterationRecord, SolveResult};

#[derive(Debug, Error, PartialEq)]
pub enum CertifyError {
    #[error("malformed history: {0}")]
    MalformedHistory(String),
    #[error("edge {0} has no witness set; the cover is not inclusion-minimal")]
    NoWitness(EdgeId),
    #[error("no laminar witness assignment exists; {a} and {b} cannot be uncrossed")]
    NotSemiUncrossable { a: NodeSet, b: NodeSet },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One witness set per cover edge: the family member that edge alone covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessAssignment {
    pub by_edge: BTreeMap<EdgeId, NodeSet>,
}

impl WitnessAssignment {
    pub fn sets(&self) -> impl Iterator<Item = &NodeSet> {
        self.by_edge.values()
    }

    pub fn is_laminar(&self) -> bool {
        let sets: Vec<&NodeSet> = self.sets().collect();
        sets.iter()
            .enumerate()
            .all(|(i, a)| sets[i + 1..].iter().all(|b| a.is_laminar_with(b)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub dual_feasible: bool,
    pub ratio: bool,
    pub iteration_inequality: bool,
    pub core_laws: bool,
    pub laminar_witness: bool,
    /// Human-readable notes for every failed check.
    pub failures: Vec<String>,
}

impl Certificate {
    pub fn pass(&self) -> bool {
        self.dual_feasible
            && self.ratio
            && self.iteration_inequality
            && self.core_laws
            && self.laminar_witness
    }

    pub fn checks(&self) -> [(&'static str, bool); 5] {
        [
            ("dual_feasible", self.dual_feasible),
            ("ratio", self.ratio),
            ("iteration_inequality", self.iteration_inequality),
            ("core_laws", self.core_laws),
            ("laminar_witness", self.laminar_witness),
        ]
    }
}

/// Rebuilds the dual state from a recorded history, validating its shape.
pub fn replay_dual(g: &Multigraph, history: &[IterationRecord]) -> Result<DualState, CertifyError> {
    let mut dual = DualState::new(g.edge_count());
    let mut added = BTreeSet::new();
    for (idx, record) in history.iter().enumerate() {
        let bad = |msg: String| CertifyError::MalformedHistory(format!("iteration {idx}: {msg}"));
        if record.cores.is_empty() {
            return Err(bad("no active cores".into()));
        }
        for core in &record.cores {
            if core.universe() != g.n() || !core.is_proper() {
                return Err(bad(format!("core {core} is not a proper subset")));
            }
        }
        if record.epsilon.is_negative() {
            return Err(bad("negative epsilon".into()));
        }
        let edge = g
            .edge(record.tight_edge)
            .map_err(|_| bad(format!("unknown edge {}", record.tight_edge)))?;
        if !added.insert(record.tight_edge) {
            return Err(bad(format!("edge {} added twice", record.tight_edge)));
        }
        if !record.cores.iter().any(|c| edge.crosses(c)) {
            return Err(bad(format!(
                "edge {} covers no active core",
                record.tight_edge
            )));
        }
        dual.raise(g, &record.cores, &record.epsilon);
    }
    Ok(dual)
}

fn dual_feasibility_failure(
    g: &Multigraph,
    result: &SolveResult,
) -> Result<Option<String>, CertifyError> {
    let dual = replay_dual(g, &result.history)?;
    for (id, edge) in g.edges().iter().enumerate() {
        if *dual.load(id) > edge.cost {
            return Ok(Some(format!(
                "edge {id} overloaded: load {} exceeds cost {}",
                format_cost(dual.load(id)),
                format_cost(&edge.cost)
            )));
        }
    }
    for &id in &result.added {
        let edge = g.edge(id)?;
        if *dual.load(id) != edge.cost {
            return Ok(Some(format!("added edge {id} was not tight")));
        }
    }
    if !result.final_edges.iter().all(|e| result.added.contains(e)) {
        return Ok(Some(
            "final edges are not a subset of the added edges".into(),
        ));
    }
    let recomputed = result
        .final_edges
        .iter()
        .try_fold(Cost::from_integer(0.into()), |acc, &e| {
            g.edge(e).map(|ed| acc + &ed.cost)
        })?;
    if recomputed != result.cost {
        return Ok(Some(
            "recorded cost does not match the surviving edges".into(),
        ));
    }
    if dual.total() != result.dual_total {
        return Ok(Some(
            "recorded dual total does not match the replayed duals".into(),
        ));
    }
    Ok(None)
}

/// Replays the history and checks exact dual feasibility, tightness of every
/// added edge, and that the recorded totals match the replay.
pub fn check_dual_feasible(g: &Multigraph, result: &SolveResult) -> Result<bool, CertifyError> {
    Ok(dual_feasibility_failure(g, result)?.is_none())
}

/// Exact comparison `cost <= 2 * dual_total`.
pub fn check_ratio(result: &SolveResult) -> bool {
    result.cost <= Cost::from_integer(2.into()) * &result.dual_total
}

fn iteration_inequality_failure(
    g: &Multigraph,
    result: &SolveResult,
) -> Result<Option<String>, CertifyError> {
    for (idx, record) in result.history.iter().enumerate() {
        // surviving edges added at or after this iteration
        let later: EdgeSet = result.added[idx..]
            .iter()
            .copied()
            .filter(|e| result.final_edges.contains(e))
            .collect();
        let mut total = 0usize;
        for core in &record.cores {
            total += g.cut_degree(&later, core)?;
        }
        let bound = 2 * record.cores.len() - 1;
        if total > bound {
            return Ok(Some(format!(
                "iteration {idx}: cores see {total} surviving later edges, bound {bound}"
            )));
        }
    }
    Ok(None)
}

/// For every iteration with core family `C` and `I'` the surviving edges
/// added at or after it, checks `sum of d_{I'}(C) <= 2|C| - 1`.
pub fn check_iteration_inequality(
    g: &Multigraph,
    result: &SolveResult,
) -> Result<bool, CertifyError> {
    Ok(iteration_inequality_failure(g, result)?.is_none())
}

fn core_laws_failure(
    spec: &FamilySpec,
    g: &Multigraph,
    sel: &EdgeSet,
) -> Result<Option<String>, CertifyError> {
    let members = spec.enumerate_members(g.n())?;
    let mut residual = Vec::new();
    for m in members {
        if g.cut_degree(sel, &m)? == 0 {
            residual.push(m);
        }
    }
    let cores: Vec<&NodeSet> = residual
        .iter()
        .filter(|s| !residual.iter().any(|t| t != *s && t.is_subset_of(s)))
        .collect();
    for (i, a) in cores.iter().enumerate() {
        for b in &cores[i + 1..] {
            if !a.is_disjoint(b) {
                return Ok(Some(format!("cores {a} and {b} overlap")));
            }
        }
    }
    for core in &cores {
        for member in &residual {
            if !core.is_subset_of(member) && !core.is_disjoint(member) {
                return Ok(Some(format!(
                    "core {core} neither contained in nor disjoint from member {member}"
                )));
            }
        }
    }
    Ok(None)
}

/// Checks that the residual cores are pairwise disjoint and that every core
/// is contained in or disjoint from every residual member. Enumeration
/// backed, so the universe must be small.
pub fn check_core_laws(
    spec: &FamilySpec,
    g: &Multigraph,
    sel: &EdgeSet,
) -> Result<bool, CertifyError> {
    Ok(core_laws_failure(spec, g, sel)?.is_none())
}

/// Builds a laminar witness assignment for an inclusion-minimal cover.
///
/// Witness candidates per edge come from enumeration; the initial pick is
/// the smallest candidate. While two assigned sets cross, one of them is
/// replaced by the intersection or a difference when that set is itself a
/// witness for one of the two edges and strictly smaller, so the total size
/// shrinks every step. If no shrinking replacement exists the builder falls
/// back to an exhaustive search over the candidate lists; only when that
/// also fails is the family reported as violating semi-uncrossability.
pub fn build_laminar_witness(
    g: &Multigraph,
    spec: &FamilySpec,
    sel: &EdgeSet,
) -> Result<WitnessAssignment, CertifyError> {
    let members = spec.enumerate_members(g.n())?;
    let edges: Vec<EdgeId> = sel.iter().copied().collect();
    let mut candidates: BTreeMap<EdgeId, Vec<NodeSet>> = BTreeMap::new();
    for &e in &edges {
        let mut list = Vec::new();
        for s in &members {
            if g.cut_edges(sel, s)? == [e] {
                list.push(s.clone());
            }
        }
        if list.is_empty() {
            return Err(CertifyError::NoWitness(e));
        }
        list.sort_by_key(|s| (s.len(), s.clone()));
        candidates.insert(e, list);
    }
    let member_set: BTreeSet<NodeSet> = members.into_iter().collect();
    let mut assign: BTreeMap<EdgeId, NodeSet> = candidates
        .iter()
        .map(|(&e, list)| (e, list[0].clone()))
        .collect();

    loop {
        let crossing = first_crossing(&assign);
        let Some((e, f)) = crossing else {
            return Ok(WitnessAssignment { by_edge: assign });
        };
        let a = assign[&e].clone();
        let b = assign[&f].clone();
        let mut moved = false;
        for replacement in [a.intersection(&b), a.difference(&b), b.difference(&a)] {
            if !member_set.contains(&replacement) {
                continue;
            }
            let cut = g.cut_edges(sel, &replacement)?;
            let target = if cut == [e] && replacement.len() < a.len() {
                Some(e)
            } else if cut == [f] && replacement.len() < b.len() {
                Some(f)
            } else {
                None
            };
            if let Some(edge) = target {
                assign.insert(edge, replacement);
                moved = true;
                break;
            }
        }
        if !moved {
            // no shrinking replacement; search the candidate lists outright
            return exhaustive_witness(g, sel, &edges, &candidates)?
                .map(|by_edge| WitnessAssignment { by_edge })
                .ok_or(CertifyError::NotSemiUncrossable { a, b });
        }
    }
}

fn first_crossing(assign: &BTreeMap<EdgeId, NodeSet>) -> Option<(EdgeId, EdgeId)> {
    let items: Vec<(&EdgeId, &NodeSet)> = assign.iter().collect();
    for (i, (e, a)) in items.iter().enumerate() {
        for (f, b) in &items[i + 1..] {
            if !a.is_laminar_with(b) {
                return Some((**e, **f));
            }
        }
    }
    None
}

fn exhaustive_witness(
    _g: &Multigraph,
    _sel: &EdgeSet,
    edges: &[EdgeId],
    candidates: &BTreeMap<EdgeId, Vec<NodeSet>>,
) -> Result<Option<BTreeMap<EdgeId, NodeSet>>, CertifyError> {
    let mut order: Vec<EdgeId> = edges.to_vec();
    order.sort_by_key(|e| candidates[e].len());
    let mut chosen: Vec<(EdgeId, NodeSet)> = Vec::new();
    fn dfs(
        order: &[EdgeId],
        candidates: &BTreeMap<EdgeId, Vec<NodeSet>>,
        chosen: &mut Vec<(EdgeId, NodeSet)>,
    ) -> bool {
        let Some(&edge) = order.get(chosen.len()) else {
            return true;
        };
        for cand in &candidates[&edge] {
            if chosen.iter().all(|(_, s)| s.is_laminar_with(cand)) {
                chosen.push((edge, cand.clone()));
                if dfs(order, candidates, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if dfs(&order, candidates, &mut chosen) {
        Ok(Some(chosen.into_iter().collect()))
    } else {
        Ok(None)
    }
}

/// Validates a witness assignment against a cover: complete, every set a
/// proper subset crossed by exactly its own edge, and pairwise laminar.
pub fn witness_is_valid(
    g: &Multigraph,
    sel: &EdgeSet,
    witness: &WitnessAssignment,
) -> Result<bool, CertifyError> {
    if witness.by_edge.len() != sel.len() {
        return Ok(false);
    }
    for (&e, s) in &witness.by_edge {
        if !sel.contains(&e) || s.universe() != g.n() || !s.is_proper() {
            return Ok(false);
        }
        if g.cut_edges(sel, s)? != [e] {
            return Ok(false);
        }
    }
    Ok(witness.is_laminar())
}

/// Runs all five checks against a solve result.
pub fn certify(
    g: &Multigraph,
    spec: &FamilySpec,
    result: &SolveResult,
) -> Result<Certificate, CertifyError> {
    let mut failures = Vec::new();
    let dual_feasible = match dual_feasibility_failure(g, result)? {
        None => true,
        Some(msg) => {
            failures.push(format!("dual_feasible: {msg}"));
            false
        }
    };
    let ratio = check_ratio(result);
    if !ratio {
        failures.push(format!(
            "ratio: cost {} exceeds twice the dual total {}",
            format_cost(&result.cost),
            format_cost(&result.dual_total)
        ));
    }
    let iteration_inequality = match iteration_inequality_failure(g, result)? {
        None => true,
        Some(msg) => {
            failures.push(format!("iteration_inequality: {msg}"));
            false
        }
    };
    let core_laws = match core_laws_failure(spec, g, &result.final_edges)? {
        None => true,
        Some(msg) => {
            failures.push(format!("core_laws: {msg}"));
            false
        }
    };
    let laminar_witness = if !spec.is_covered(g, &result.final_edges)? {
        failures.push("laminar_witness: final edges do not cover the family".into());
        false
    } else {
        match build_laminar_witness(g, spec, &result.final_edges) {
            Ok(witness) => match witness_is_valid(g, &result.final_edges, &witness)? {
                true => true,
                false => {
                    failures.push("laminar_witness: built assignment failed validation".into());
                    false
                }
            },
            Err(CertifyError::NoWitness(e)) => {
                failures.push(format!("laminar_witness: edge {e} has no witness set"));
                false
            }
            Err(CertifyError::NotSemiUncrossable { a, b }) => {
                failures.push(format!("laminar_witness: {a} and {b} cannot be uncrossed"));
                false
            }
            Err(other) => return Err(other),
        }
    };
    Ok(Certificate {
        dual_feasible,
        ratio,
        iteration_inequality,
        core_laws,
        laminar_witness,
        failures,
    })
}
