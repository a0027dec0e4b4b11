//! Set-family specifications and the oracle queries the solver needs.
//!
//! A [`FamilySpec`] is a declarative description of a set family over the
//! instance's node universe. The solver never materializes the family; it
//! only asks for membership of a single set, for the inclusion-minimal
//! uncovered members under a partial solution (the residual cores), and for
//! coverage. Small ground sets can additionally be enumerated outright,
//! which is what the classifier and the verification suites build on.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::cost::Cost;
use crate::graph::{EdgeSet, GraphError, Multigraph, NodeId, NodeSet};

/// Ground sets up to this size can be enumerated member by member.
pub const ENUMERATION_LIMIT: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum FamilyError {
    #[error("node {node} out of range for a universe of {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("steiner forest parts must be pairwise disjoint")]
    OverlappingParts,
    #[error("steiner forest parts need at least two nodes each")]
    PartTooSmall,
    #[error("terminal count must be even")]
    OddTerminals,
    #[error("charges must sum to zero")]
    UnbalancedCharges,
    #[error("component bound k must be at least 2")]
    BoundTooSmall,
    #[error("the full node set would belong to the family, so no edge set can cover it")]
    FullSetMember,
    #[error("augmentation base graph must live on the instance node set")]
    BaseUniverseMismatch,
    #[error("demand endpoints must be distinct")]
    DemandLoop,
    #[error("path endpoints must be distinct")]
    PathLoop,
    #[error("explicit members must be proper nonempty subsets of the universe")]
    ImproperMember,
    #[error("membership queries take a proper nonempty subset")]
    ImproperQuery,
    #[error("universe of {n} nodes exceeds the enumeration limit of {limit}")]
    EnumerationLimit { n: usize, limit: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The problem kinds with built-in oracles; used by the random generators
/// and the combination search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    SteinerForest,
    TJoin,
    Gp2p,
    Kcf,
    Tkcf,
    Sna,
    StPath,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 7] = [
        FamilyKind::SteinerForest,
        FamilyKind::TJoin,
        FamilyKind::Gp2p,
        FamilyKind::Kcf,
        FamilyKind::Tkcf,
        FamilyKind::Sna,
        FamilyKind::StPath,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::SteinerForest => "steiner_forest",
            FamilyKind::TJoin => "t_join",
            FamilyKind::Gp2p => "gp2p",
            FamilyKind::Kcf => "kcf",
            FamilyKind::Tkcf => "tkcf",
            FamilyKind::Sna => "sna",
            FamilyKind::StPath => "st_path",
        }
    }
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Declarative set-family description, evaluated lazily through the oracle
/// queries below.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    /// Sets splitting some part of a subpartition: every part must end up
    /// inside one connected component.
    SteinerForest { parts: Vec<NodeSet> },
    /// Sets containing an odd number of terminals.
    TJoin { terminals: NodeSet },
    /// Sets with nonzero total charge; charges sum to zero overall.
    Gp2p { charges: Vec<i64> },
    /// Sets with fewer than `k` nodes: components must reach size `k`.
    Kcf { k: usize },
    /// Sets with at least one but fewer than `k` terminals.
    Tkcf { terminals: NodeSet, k: usize },
    /// Tight cuts of a base graph that separate a demand pair; covering one
    /// raises that pair's edge connectivity by one.
    Sna {
        base: Multigraph,
        demands: Vec<(NodeId, NodeId)>,
    },
    /// Sets separating `s` from `t`.
    StPath { s: NodeId, t: NodeId },
    /// A family given outright as a member list.
    Explicit { members: Vec<NodeSet> },
    /// Union of several families: cover all of them at once.
    Union { specs: Vec<FamilySpec> },
}

impl FamilySpec {
    /// Checks the structural invariants against a universe of `n` nodes,
    /// including that neither the empty set nor the full set could ever
    /// satisfy the defining predicate.
    pub fn validate(&self, n: usize) -> Result<(), FamilyError> {
        let check_node = |v: NodeId| {
            if v >= n {
                Err(FamilyError::NodeOutOfRange { node: v, n })
            } else {
                Ok(())
            }
        };
        match self {
            FamilySpec::SteinerForest { parts } => {
                let mut seen = NodeSet::empty(n);
                for part in parts {
                    if part.universe() != n {
                        return Err(FamilyError::NodeOutOfRange {
                            node: part.universe(),
                            n,
                        });
                    }
                    if part.len() < 2 {
                        return Err(FamilyError::PartTooSmall);
                    }
                    if !seen.is_disjoint(part) {
                        return Err(FamilyError::OverlappingParts);
                    }
                    seen = seen.union(part);
                }
                Ok(())
            }
            FamilySpec::TJoin { terminals } => {
                if terminals.universe() != n {
                    return Err(FamilyError::NodeOutOfRange {
                        node: terminals.universe(),
                        n,
                    });
                }
                if terminals.len() % 2 != 0 {
                    return Err(FamilyError::OddTerminals);
                }
                Ok(())
            }
            FamilySpec::Gp2p { charges } => {
                if charges.len() != n {
                    return Err(FamilyError::NodeOutOfRange {
                        node: charges.len(),
                        n,
                    });
                }
                if charges.iter().sum::<i64>() != 0 {
                    return Err(FamilyError::UnbalancedCharges);
                }
                Ok(())
            }
            FamilySpec::Kcf { k } => {
                if *k < 2 {
                    return Err(FamilyError::BoundTooSmall);
                }
                if *k > n {
                    // the full set would have fewer than k nodes
                    return Err(FamilyError::FullSetMember);
                }
                Ok(())
            }
            FamilySpec::Tkcf { terminals, k } => {
                if terminals.universe() != n {
                    return Err(FamilyError::NodeOutOfRange {
                        node: terminals.universe(),
                        n,
                    });
                }
                if *k < 2 {
                    return Err(FamilyError::BoundTooSmall);
                }
                let t = terminals.len();
                if t >= 1 && t < *k {
                    // the full set would contain all terminals, between 1 and k
                    return Err(FamilyError::FullSetMember);
                }
                Ok(())
            }
            FamilySpec::Sna { base, demands } => {
                if base.n() != n {
                    return Err(FamilyError::BaseUniverseMismatch);
                }
                for &(u, v) in demands {
                    check_node(u)?;
                    check_node(v)?;
                    if u == v {
                        return Err(FamilyError::DemandLoop);
                    }
                }
                Ok(())
            }
            FamilySpec::StPath { s, t } => {
                check_node(*s)?;
                check_node(*t)?;
                if s == t {
                    return Err(FamilyError::PathLoop);
                }
                Ok(())
            }
            FamilySpec::Explicit { members } => {
                for m in members {
                    if m.universe() != n {
                        return Err(FamilyError::NodeOutOfRange {
                            node: m.universe(),
                            n,
                        });
                    }
                    if !m.is_proper() {
                        return Err(FamilyError::ImproperMember);
                    }
                }
                Ok(())
            }
            FamilySpec::Union { specs } => {
                for s in specs {
                    s.validate(n)?;
                }
                Ok(())
            }
        }
    }

    /// Definitional membership test for a proper nonempty subset.
    pub fn contains(&self, n: usize, s: &NodeSet) -> Result<bool, FamilyError> {
        if s.universe() != n {
            return Err(FamilyError::NodeOutOfRange {
                node: s.universe(),
                n,
            });
        }
        if !s.is_proper() {
            return Err(FamilyError::ImproperQuery);
        }
        match self {
            FamilySpec::Sna { base, demands } => {
                let lambdas = sna_lambdas(base, demands)?;
                Ok(sna_member(base, demands, &lambdas, s)?)
            }
            FamilySpec::Union { specs } => {
                for sub in specs {
                    if sub.contains(n, s)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            _ => Ok(self.member_basic(s)),
        }
    }

    /// Membership for the kinds whose predicate needs no flow computation.
    /// Callers guarantee `s` is proper.
    fn member_basic(&self, s: &NodeSet) -> bool {
        match self {
            FamilySpec::SteinerForest { parts } => parts.iter().any(|p| {
                let inter = s.intersection(p);
                !inter.is_empty() && inter != *p
            }),
            FamilySpec::TJoin { terminals } => s.intersection(terminals).len() % 2 == 1,
            FamilySpec::Gp2p { charges } => s.iter().map(|v| charges[v]).sum::<i64>() != 0,
            FamilySpec::Kcf { k } => s.len() < *k,
            FamilySpec::Tkcf { terminals, k } => {
                let t = s.intersection(terminals).len();
                t >= 1 && t < *k
            }
            FamilySpec::StPath { s: a, t: b } => s.contains(*a) != s.contains(*b),
            FamilySpec::Explicit { members } => members.contains(s),
            FamilySpec::Sna { .. } | FamilySpec::Union { .. } => {
                unreachable!("handled by contains")
            }
        }
    }

    /// The inclusion-minimal members not yet covered by the selected edges,
    /// in canonical order.
    pub fn residual_cores(
        &self,
        g: &Multigraph,
        sel: &EdgeSet,
    ) -> Result<Vec<NodeSet>, FamilyError> {
        match self {
            FamilySpec::Explicit { members } => {
                let mut residual = Vec::new();
                for m in members {
                    if g.cut_degree(sel, m)? == 0 {
                        residual.push(m.clone());
                    }
                }
                if let Some(&id) = sel.iter().next_back() {
                    g.edge(id)?;
                }
                Ok(minimal_sorted(residual))
            }
            FamilySpec::Union { specs } => {
                let mut collected = Vec::new();
                for sub in specs {
                    collected.extend(sub.residual_cores(g, sel)?);
                }
                Ok(minimal_sorted(collected))
            }
            FamilySpec::Sna { base, demands } => self.sna_cores(g, sel, base, demands),
            _ => {
                // connectivity kinds: cores are the violated components
                let comps = g.components(sel)?;
                Ok(comps
                    .into_iter()
                    .filter(|c| !c.is_full() && self.member_basic(c))
                    .collect())
            }
        }
    }

    /// Residual cores for the augmentation family: for every demand whose
    /// connectivity the selection has not yet raised, the minimal source-side
    /// minimum cuts from both endpoints, filtered to inclusion-minimal sets.
    fn sna_cores(
        &self,
        g: &Multigraph,
        sel: &EdgeSet,
        base: &Multigraph,
        demands: &[(NodeId, NodeId)],
    ) -> Result<Vec<NodeSet>, FamilyError> {
        if base.n() != g.n() {
            return Err(FamilyError::BaseUniverseMismatch);
        }
        let mut pairs: Vec<(NodeId, NodeId, Cost)> = base
            .edges()
            .iter()
            .map(|e| (e.u, e.v, Cost::zero()))
            .collect();
        for &id in sel {
            let e = g.edge(id)?;
            pairs.push((e.u, e.v, Cost::zero()));
        }
        let combined = Multigraph::new(g.n(), pairs)?;
        let mut collected = Vec::new();
        for &(u, v) in demands {
            let before = base.max_flow_value(u, v)?;
            let after = combined.max_flow_value(u, v)?;
            if after == before {
                collected.push(combined.min_source_side_cut(u, v)?);
                collected.push(combined.min_source_side_cut(v, u)?);
            }
        }
        Ok(minimal_sorted(collected))
    }

    /// True when every member is crossed by at least one selected edge.
    pub fn is_covered(&self, g: &Multigraph, sel: &EdgeSet) -> Result<bool, FamilyError> {
        Ok(self.residual_cores(g, sel)?.is_empty())
    }

    /// All members over a small universe, in canonical order.
    pub fn enumerate_members(&self, n: usize) -> Result<Vec<NodeSet>, FamilyError> {
        if n > ENUMERATION_LIMIT {
            return Err(FamilyError::EnumerationLimit {
                n,
                limit: ENUMERATION_LIMIT,
            });
        }
        match self {
            FamilySpec::Union { specs } => {
                let mut all = BTreeSet::new();
                for sub in specs {
                    all.extend(sub.enumerate_members(n)?);
                }
                Ok(all.into_iter().collect())
            }
            FamilySpec::Sna { base, demands } => {
                if base.n() != n {
                    return Err(FamilyError::BaseUniverseMismatch);
                }
                let lambdas = sna_lambdas(base, demands)?;
                let mut out = Vec::new();
                for s in proper_subsets(n) {
                    if sna_member(base, demands, &lambdas, &s)? {
                        out.push(s);
                    }
                }
                Ok(out)
            }
            _ => Ok(proper_subsets(n).filter(|s| self.member_basic(s)).collect()),
        }
    }
}

/// All proper nonempty subsets of `[0, n)` in canonical order.
pub fn proper_subsets(n: usize) -> impl Iterator<Item = NodeSet> {
    assert!(
        n <= ENUMERATION_LIMIT + 4,
        "subset enumeration over {n} nodes"
    );
    let full = (1u32 << n) - 1;
    let mut sets: Vec<NodeSet> = (1..full)
        .map(move |bits| NodeSet::from_elems(n, (0..n).filter(move |&v| bits >> v & 1 == 1)))
        .collect();
    sets.sort();
    sets.into_iter()
}

fn sna_lambdas(base: &Multigraph, demands: &[(NodeId, NodeId)]) -> Result<Vec<usize>, FamilyError> {
    demands
        .iter()
        .map(|&(u, v)| base.max_flow_value(u, v).map_err(FamilyError::from))
        .collect()
}

fn sna_member(
    base: &Multigraph,
    demands: &[(NodeId, NodeId)],
    lambdas: &[usize],
    s: &NodeSet,
) -> Result<bool, FamilyError> {
    let all = base.all_edge_ids();
    for (&(u, v), &lambda) in demands.iter().zip(lambdas) {
        if s.contains(u) != s.contains(v) && base.cut_degree(&all, s)? == lambda {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Keeps the inclusion-minimal distinct sets, in canonical order.
fn minimal_sorted(mut sets: Vec<NodeSet>) -> Vec<NodeSet> {
    sets.sort();
    sets.dedup();
    let keep: Vec<bool> = sets
        .iter()
        .map(|s| !sets.iter().any(|t| t != s && t.is_subset_of(s)))
        .collect();
    sets.into_iter()
        .zip(keep)
        .filter_map(|(s, k)| k.then_some(s))
        .collect()
}
