//! Multigraphs over a dense node universe, node subsets, cuts, and
//! unit-capacity flow.
//!
//! Everything here is deterministic: components come back sorted by their
//! minimum element, edges are identified by their position in the edge list,
//! and set operations never depend on hash iteration order.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Signed;
use thiserror::Error;

use crate::cost::Cost;

pub type NodeId = usize;
pub type EdgeId = usize;

/// Edge ids selected out of a [`Multigraph`].
pub type EdgeSet = BTreeSet<EdgeId>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {node} out of range for a universe of {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("self-loop at node {0} rejected; loops cover no set")]
    SelfLoop(NodeId),
    #[error("edge {0} has a negative cost")]
    NegativeCost(EdgeId),
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("operation requires a proper nonempty node subset")]
    ImproperSubset,
    #[error("flow endpoints must be distinct")]
    EqualEndpoints,
    #[error("node sets belong to universes of different sizes")]
    UniverseMismatch,
}

/// A subset of the fixed node universe `[0, n)`, stored as a bitset.
///
/// Complement is always taken relative to the universe the set was created
/// with. Ordering is lexicographic on the sorted element sequence, which
/// makes "sort by minimum element" fall out of a plain sort.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    n: usize,
    words: Vec<u64>,
}

impl NodeSet {
    pub fn empty(n: usize) -> Self {
        NodeSet {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_elems<I: IntoIterator<Item = NodeId>>(n: usize, elems: I) -> Self {
        let mut s = Self::empty(n);
        for v in elems {
            s.insert(v);
        }
        s
    }

    /// Size of the universe this set lives in (not the cardinality).
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: NodeId) {
        assert!(v < self.n, "node {v} out of range for universe {}", self.n);
        self.words[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: NodeId) {
        if v < self.n {
            self.words[v / 64] &= !(1 << (v % 64));
        }
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v < self.n && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    /// Proper nonempty subset of the universe.
    pub fn is_proper(&self) -> bool {
        !self.is_empty() && !self.is_full()
    }

    fn zip_check(&self, other: &Self) {
        assert_eq!(self.n, other.n, "node sets from different universes");
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_check(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        NodeSet { n: self.n, words }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_check(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        NodeSet { n: self.n, words }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_check(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & !b)
            .collect();
        NodeSet { n: self.n, words }
    }

    pub fn complement(&self) -> Self {
        let mut out = Self::full(self.n);
        for (w, s) in out.words.iter_mut().zip(&self.words) {
            *w &= !s;
        }
        out
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.zip_check(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.zip_check(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Two sets are laminar when they are disjoint or nested.
    pub fn is_laminar_with(&self, other: &Self) -> bool {
        self.is_disjoint(other) || self.is_subset_of(other) || other.is_subset_of(self)
    }

    pub fn min_elem(&self) -> Option<NodeId> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.n).filter(move |&v| self.contains(v))
    }

    pub fn elems(&self) -> Vec<NodeId> {
        self.iter().collect()
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NodeSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub cost: Cost,
}

impl Edge {
    /// True when exactly one endpoint lies in `s`.
    pub fn crosses(&self, s: &NodeSet) -> bool {
        s.contains(self.u) != s.contains(self.v)
    }
}

/// An undirected multigraph with costed edges. Edge ids are list positions;
/// parallel edges are distinct edges that happen to share endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<Edge>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(NodeId, NodeId, Cost)>) -> Result<Self, GraphError> {
        let mut out = Vec::with_capacity(edges.len());
        for (id, (u, v, cost)) in edges.into_iter().enumerate() {
            if u >= n {
                return Err(GraphError::NodeOutOfRange { node: u, n });
            }
            if v >= n {
                return Err(GraphError::NodeOutOfRange { node: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if cost.is_negative() {
                return Err(GraphError::NegativeCost(id));
            }
            out.push(Edge { u, v, cost });
        }
        Ok(Multigraph { n, edges: out })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge, GraphError> {
        self.edges.get(id).ok_or(GraphError::UnknownEdge(id))
    }

    pub fn all_edge_ids(&self) -> EdgeSet {
        (0..self.edges.len()).collect()
    }

    fn check_selection(&self, sel: &EdgeSet) -> Result<(), GraphError> {
        if let Some(&id) = sel.iter().next_back() {
            if id >= self.edges.len() {
                return Err(GraphError::UnknownEdge(id));
            }
        }
        Ok(())
    }

    /// Connected components of `(V, sel)`, sorted by minimum element.
    pub fn components(&self, sel: &EdgeSet) -> Result<Vec<NodeSet>, GraphError> {
        self.check_selection(sel)?;
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        // merging larger root into smaller keeps each root at the
        // component minimum, so the output order needs no extra sort
        for &id in sel {
            let e = &self.edges[id];
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut comps: Vec<Option<NodeSet>> = vec![None; self.n];
        for v in 0..self.n {
            let root = find(&mut parent, v);
            comps[root]
                .get_or_insert_with(|| NodeSet::empty(self.n))
                .insert(v);
        }
        Ok(comps.into_iter().flatten().collect())
    }

    /// Number of selected edges with exactly one endpoint in `s`; parallel
    /// edges count with multiplicity.
    pub fn cut_degree(&self, sel: &EdgeSet, s: &NodeSet) -> Result<usize, GraphError> {
        self.check_selection(sel)?;
        if s.universe() != self.n {
            return Err(GraphError::UniverseMismatch);
        }
        if !s.is_proper() {
            return Err(GraphError::ImproperSubset);
        }
        Ok(sel.iter().filter(|&&id| self.edges[id].crosses(s)).count())
    }

    /// Edge ids in `sel` crossing `s`.
    pub fn cut_edges(&self, sel: &EdgeSet, s: &NodeSet) -> Result<Vec<EdgeId>, GraphError> {
        self.check_selection(sel)?;
        if s.universe() != self.n {
            return Err(GraphError::UniverseMismatch);
        }
        if !s.is_proper() {
            return Err(GraphError::ImproperSubset);
        }
        Ok(sel
            .iter()
            .copied()
            .filter(|&id| self.edges[id].crosses(s))
            .collect())
    }

    /// Maximum number of edge-disjoint `u`-`v` paths, all edges unit capacity.
    pub fn max_flow_value(&self, u: NodeId, v: NodeId) -> Result<usize, GraphError> {
        Ok(self.unit_flow(u, v)?.0)
    }

    /// The inclusion-minimal source side of a minimum `u`-`v` cut: the nodes
    /// reachable from `u` in the residual network of a maximum flow.
    pub fn min_source_side_cut(&self, u: NodeId, v: NodeId) -> Result<NodeSet, GraphError> {
        Ok(self.unit_flow(u, v)?.1)
    }

    fn unit_flow(&self, source: NodeId, sink: NodeId) -> Result<(usize, NodeSet), GraphError> {
        if source >= self.n {
            return Err(GraphError::NodeOutOfRange {
                node: source,
                n: self.n,
            });
        }
        if sink >= self.n {
            return Err(GraphError::NodeOutOfRange {
                node: sink,
                n: self.n,
            });
        }
        if source == sink {
            return Err(GraphError::EqualEndpoints);
        }
        // Each undirected unit edge becomes a forward/backward arc pair that
        // serve as each other's residual arcs.
        let mut cap: Vec<[i64; 2]> = vec![[1, 1]; self.edges.len()];
        let mut adj: Vec<Vec<(NodeId, EdgeId, usize)>> = vec![Vec::new(); self.n];
        for (id, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, id, 0));
            adj[e.v].push((e.u, id, 1));
        }
        let mut flow = 0;
        loop {
            let mut pred: Vec<Option<(NodeId, EdgeId, usize)>> = vec![None; self.n];
            let mut seen = vec![false; self.n];
            seen[source] = true;
            let mut queue = std::collections::VecDeque::from([source]);
            while let Some(x) = queue.pop_front() {
                if x == sink {
                    break;
                }
                for &(y, id, dir) in &adj[x] {
                    if !seen[y] && cap[id][dir] > 0 {
                        seen[y] = true;
                        pred[y] = Some((x, id, dir));
                        queue.push_back(y);
                    }
                }
            }
            if !seen[sink] {
                let side = NodeSet::from_elems(self.n, (0..self.n).filter(|&x| seen[x]));
                return Ok((flow, side));
            }
            flow += 1;
            let mut y = sink;
            while let Some((x, id, dir)) = pred[y] {
                cap[id][dir] -= 1;
                cap[id][1 - dir] += 1;
                y = x;
            }
        }
    }
}
