//! Seeded random generators for specs, instances, and explicit families.
//!
//! These feed the combination search, the randomized suites, and the tests.
//! All sampling goes through a caller-provided RNG so runs stay reproducible.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cost::Cost;
use crate::families::{FamilyKind, FamilySpec};
use crate::family_props::ExplicitFamily;
use crate::graph::{EdgeSet, Multigraph, NodeId, NodeSet};

/// A random valid spec of the given kind over `n >= 3` nodes.
pub fn random_spec<R: Rng>(kind: FamilyKind, n: usize, rng: &mut R) -> FamilySpec {
    assert!(n >= 3, "spec sampling needs at least 3 nodes");
    match kind {
        FamilyKind::SteinerForest => {
            let mut nodes: Vec<NodeId> = (0..n).collect();
            nodes.shuffle(rng);
            let want_parts = [1, 1, 2][rng.random_range(0..3)];
            let mut parts = Vec::new();
            let mut pos = 0;
            for _ in 0..want_parts {
                let size = [2, 2, 3][rng.random_range(0..3)];
                if pos + size > n {
                    break;
                }
                parts.push(NodeSet::from_elems(
                    n,
                    nodes[pos..pos + size].iter().copied(),
                ));
                pos += size;
            }
            if parts.is_empty() {
                parts.push(NodeSet::from_elems(n, nodes[..2].iter().copied()));
            }
            FamilySpec::SteinerForest { parts }
        }
        FamilyKind::TJoin => {
            let evens: Vec<usize> = (1..=n / 2).map(|h| 2 * h).collect();
            let size = evens[rng.random_range(0..evens.len())];
            FamilySpec::TJoin {
                terminals: sample_set(n, size, rng),
            }
        }
        FamilyKind::Gp2p => {
            let mut charges = vec![0i64; n];
            for _ in 0..[1, 1, 2][rng.random_range(0..3)] {
                let (u, v) = distinct_pair(n, rng);
                charges[u] += 1;
                charges[v] -= 1;
            }
            if charges.iter().all(|&c| c == 0) {
                let (u, v) = distinct_pair(n, rng);
                charges[u] += 1;
                charges[v] -= 1;
            }
            FamilySpec::Gp2p { charges }
        }
        FamilyKind::Kcf => {
            let choices = [2, 2, 3, 3, 4.min(n)];
            FamilySpec::Kcf {
                k: choices[rng.random_range(0..choices.len())].min(n),
            }
        }
        FamilyKind::Tkcf => {
            let k = [2usize, 2, 3][rng.random_range(0..3)].min(n);
            let size = rng.random_range(k..=n);
            FamilySpec::Tkcf {
                terminals: sample_set(n, size, rng),
                k,
            }
        }
        FamilyKind::Sna => {
            let base_count = [0, 1, 2, 2, 3, 4][rng.random_range(0..6)];
            let mut base_edges = Vec::new();
            for _ in 0..base_count {
                let (u, v) = distinct_pair(n, rng);
                base_edges.push((u, v, Cost::from_integer(0.into())));
            }
            let base = Multigraph::new(n, base_edges).expect("sampled base edges are valid");
            let mut demands = Vec::new();
            for _ in 0..[1, 1, 2][rng.random_range(0..3)] {
                demands.push(distinct_pair(n, rng));
            }
            FamilySpec::Sna { base, demands }
        }
        FamilyKind::StPath => {
            let (s, t) = distinct_pair(n, rng);
            FamilySpec::StPath { s, t }
        }
    }
}

/// A connected multigraph: a random spanning tree plus extra random edges,
/// integer costs drawn from `1..=10`. Capped at `max_edges`.
pub fn random_connected_graph<R: Rng>(n: usize, max_edges: usize, rng: &mut R) -> Multigraph {
    assert!(
        max_edges >= n.saturating_sub(1),
        "cap below spanning-tree size"
    );
    let mut order: Vec<NodeId> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        edges.push((order[i], order[j]));
    }
    let room = max_edges - edges.len();
    for _ in 0..rng.random_range(0..=room.min(7)) {
        edges.push(distinct_pair(n, rng));
    }
    let costed = edges
        .into_iter()
        .map(|(u, v)| (u, v, Cost::from_integer(rng.random_range(1..=10i64).into())))
        .collect();
    Multigraph::new(n, costed).expect("sampled edges are valid")
}

/// A uniformly random subset of the graph's edges.
pub fn random_edge_subset<R: Rng>(g: &Multigraph, rng: &mut R) -> EdgeSet {
    (0..g.edge_count())
        .filter(|_| rng.random_bool(0.5))
        .collect()
}

/// A random semi-uncrossable explicit family over `n <= 16` nodes: a few
/// random seeds closed under the failing pair condition (add the missing
/// intersection, then a missing difference, until no pair violates).
pub fn random_semi_uncrossable_family<R: Rng>(n: usize, rng: &mut R) -> ExplicitFamily {
    assert!((2..=16).contains(&n));
    let full: u64 = (1 << n) - 1;
    let mut members: Vec<u64> = Vec::new();
    for _ in 0..rng.random_range(2..=4usize) {
        let bits = rng.random_range(1..full);
        if !members.contains(&bits) {
            members.push(bits);
        }
    }
    loop {
        let mut grew = false;
        'pairs: for i in 0..members.len() {
            for j in i + 1..members.len() {
                let (a, b) = (members[i], members[j]);
                let inter = a & b;
                let (ab, ba, uni) = (a & !b, b & !a, a | b);
                let has = |m: u64| m != 0 && m != full && members.contains(&m);
                let ok = (has(inter) && (has(uni) || has(ab) || has(ba))) || (has(ab) && has(ba));
                if ok {
                    continue;
                }
                // violating pairs cross, so both candidates are proper
                let add = if inter != 0 && !members.contains(&inter) {
                    inter
                } else {
                    ab
                };
                debug_assert!(add != 0 && add != full);
                members.push(add);
                grew = true;
                break 'pairs;
            }
        }
        if !grew {
            break;
        }
    }
    let sets = members
        .into_iter()
        .map(|bits| NodeSet::from_elems(n, (0..n).filter(|&v| bits >> v & 1 == 1)))
        .collect();
    ExplicitFamily::new(n, sets).expect("closure keeps members proper")
}

fn sample_set<R: Rng>(n: usize, size: usize, rng: &mut R) -> NodeSet {
    let mut nodes: Vec<NodeId> = (0..n).collect();
    nodes.shuffle(rng);
    NodeSet::from_elems(n, nodes[..size].iter().copied())
}

fn distinct_pair<R: Rng>(n: usize, rng: &mut R) -> (NodeId, NodeId) {
    let u = rng.random_range(0..n);
    let mut v = rng.random_range(0..n - 1);
    if v >= u {
        v += 1;
    }
    (u, v)
}
