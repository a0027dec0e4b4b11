//! Brute-force exact covering for desk-scale ground truth.

use num_traits::Zero;
use thiserror::Error;

use crate::cost::Cost;
use crate::families::{FamilyError, FamilySpec};
use crate::graph::{EdgeId, EdgeSet, Multigraph};

/// Subset search is capped at this many edges.
pub const EDGE_LIMIT: usize = 22;

#[derive(Debug, Error, PartialEq)]
pub enum ExactError {
    #[error("no edge subset covers the family")]
    Infeasible,
    #[error("{m} edges exceed the exact search limit of {limit}")]
    TooManyEdges { m: usize, limit: usize },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactResult {
    pub cost: Cost,
    /// One optimal cover; ties broken by lexicographic edge-id order.
    pub edges: Vec<EdgeId>,
}

/// Minimum-cost covering edge subset by branch and bound over the edge list.
///
/// Branches exclude-first so cheap subsets are reached early; a branch dies
/// when its committed cost exceeds the incumbent or when the edges still
/// available cannot cover the family.
pub fn optimal_cover(g: &Multigraph, spec: &FamilySpec) -> Result<ExactResult, ExactError> {
    let m = g.edge_count();
    if m > EDGE_LIMIT {
        return Err(ExactError::TooManyEdges {
            m,
            limit: EDGE_LIMIT,
        });
    }
    spec.validate(g.n())?;
    let all = g.all_edge_ids();
    if !spec.is_covered(g, &all)? {
        return Err(ExactError::Infeasible);
    }
    let total = g.edges().iter().fold(Cost::zero(), |acc, e| acc + &e.cost);
    let mut best_cost = total;
    let mut best: Vec<EdgeId> = all.iter().copied().collect();

    // `available` = chosen edges plus everything not yet decided
    let mut available = all;
    let mut chosen: Vec<EdgeId> = Vec::new();
    search(
        g,
        spec,
        0,
        &mut chosen,
        Cost::zero(),
        &mut available,
        &mut best_cost,
        &mut best,
    )?;
    Ok(ExactResult {
        cost: best_cost,
        edges: best,
    })
}

#[allow(clippy::too_many_arguments)]
fn search(
    g: &Multigraph,
    spec: &FamilySpec,
    idx: usize,
    chosen: &mut Vec<EdgeId>,
    cost: Cost,
    available: &mut EdgeSet,
    best_cost: &mut Cost,
    best: &mut Vec<EdgeId>,
) -> Result<(), ExactError> {
    if cost > *best_cost {
        return Ok(());
    }
    if idx == g.edge_count() {
        if cost < *best_cost || (cost == *best_cost && chosen < best) {
            *best_cost = cost;
            *best = chosen.clone();
        }
        return Ok(());
    }
    // exclude idx, if coverage survives without it
    available.remove(&idx);
    if spec.is_covered(g, available)? {
        search(
            g,
            spec,
            idx + 1,
            chosen,
            cost.clone(),
            available,
            best_cost,
            best,
        )?;
    }
    available.insert(idx);
    // include idx
    chosen.push(idx);
    let with = cost + &g.edges()[idx].cost;
    search(g, spec, idx + 1, chosen, with, available, best_cost, best)?;
    chosen.pop();
    Ok(())
}

/// True when `sel` covers the family and no single-edge-removed subset does.
pub fn is_minimal_cover(
    g: &Multigraph,
    spec: &FamilySpec,
    sel: &EdgeSet,
) -> Result<bool, FamilyError> {
    if !spec.is_covered(g, sel)? {
        return Ok(false);
    }
    let mut trial = sel.clone();
    for &e in sel {
        trial.remove(&e);
        if spec.is_covered(g, &trial)? {
            return Ok(false);
        }
        trial.insert(e);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::parse_cost;
    use crate::graph::NodeSet;

    fn graph(n: usize, edges: &[(usize, usize, &str)]) -> Multigraph {
        Multigraph::new(
            n,
            edges
                .iter()
                .map(|&(u, v, c)| (u, v, parse_cost(c).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    fn ns(n: usize, elems: &[usize]) -> NodeSet {
        NodeSet::from_elems(n, elems.iter().copied())
    }

    /// Reference: plain enumeration of all edge subsets.
    fn optimal_by_enumeration(g: &Multigraph, spec: &FamilySpec) -> Option<(Cost, Vec<EdgeId>)> {
        let m = g.edge_count();
        let mut best: Option<(Cost, Vec<EdgeId>)> = None;
        for mask in 0u32..1 << m {
            let sub: EdgeSet = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
            if !spec.is_covered(g, &sub).unwrap() {
                continue;
            }
            let cost = sub
                .iter()
                .fold(Cost::zero(), |acc, &e| acc + &g.edges()[e].cost);
            let ids: Vec<EdgeId> = sub.into_iter().collect();
            match &best {
                Some((c, ids0)) if (c, ids0) <= (&cost, &ids) => {}
                _ => best = Some((cost, ids)),
            }
        }
        best
    }

    #[test]
    fn triangle_exact() {
        let g = graph(3, &[(0, 1, "1"), (1, 2, "1"), (0, 2, "3")]);
        let spec = FamilySpec::StPath { s: 0, t: 2 };
        let expected = optimal_by_enumeration(&g, &spec).unwrap();
        assert_eq!(expected, (parse_cost("2").unwrap(), vec![0, 1]));
        let result = optimal_cover(&g, &spec).unwrap();
        assert_eq!((result.cost, result.edges), expected);
    }

    #[test]
    fn star_exact_and_degenerate_cases() {
        let g = graph(3, &[(0, 1, "1"), (0, 2, "2")]);
        let spec = FamilySpec::Kcf { k: 2 };
        let expected = optimal_by_enumeration(&g, &spec).unwrap();
        assert_eq!(expected, (parse_cost("3").unwrap(), vec![0, 1]));
        let result = optimal_cover(&g, &spec).unwrap();
        assert_eq!((result.cost, result.edges), expected);

        let empty = FamilySpec::SteinerForest { parts: vec![] };
        let r = optimal_cover(&g, &empty).unwrap();
        assert_eq!(r.cost, parse_cost("0").unwrap());
        assert!(r.edges.is_empty());

        let bare = graph(2, &[]);
        assert_eq!(
            optimal_cover(&bare, &FamilySpec::StPath { s: 0, t: 1 }).unwrap_err(),
            ExactError::Infeasible
        );
    }

    #[test]
    fn matches_enumeration_on_mixed_instances() {
        let g = graph(
            5,
            &[
                (0, 1, "2"),
                (1, 2, "1"),
                (2, 3, "4"),
                (3, 4, "1"),
                (0, 4, "2"),
                (1, 3, "3"),
                (0, 2, "5"),
            ],
        );
        let specs = [
            FamilySpec::StPath { s: 0, t: 3 },
            FamilySpec::Kcf { k: 3 },
            FamilySpec::TJoin {
                terminals: ns(5, &[0, 2, 3, 4]),
            },
            FamilySpec::SteinerForest {
                parts: vec![ns(5, &[0, 3]), ns(5, &[1, 4])],
            },
            FamilySpec::Union {
                specs: vec![FamilySpec::StPath { s: 0, t: 3 }, FamilySpec::Kcf { k: 2 }],
            },
        ];
        for spec in specs {
            let expected = optimal_by_enumeration(&g, &spec).unwrap();
            let got = optimal_cover(&g, &spec).unwrap();
            assert_eq!((got.cost, got.edges), expected, "{spec:?}");
        }
    }

    #[test]
    fn matches_enumeration_on_random_instances() {
        use crate::families::FamilyKind;
        use crate::family_props::trial_rng;
        use crate::sampler;
        use rand::Rng;

        for trial in 0..25 {
            let mut rng = trial_rng(0xe8ac, trial);
            let n = rng.random_range(4..=7usize);
            let g = sampler::random_connected_graph(n, 12, &mut rng);
            let kind = FamilyKind::ALL[trial as usize % 7];
            let spec = sampler::random_spec(kind, n, &mut rng);
            let expected = optimal_by_enumeration(&g, &spec).unwrap();
            let got = optimal_cover(&g, &spec).unwrap();
            assert_eq!((got.cost, got.edges), expected, "{kind} on {g:?}");
        }
    }

    #[test]
    fn edge_limit_is_enforced() {
        let edges: Vec<(usize, usize, &str)> = (0..23).map(|i| (i % 5, (i + 1) % 5, "1")).collect();
        let g = graph(5, &edges);
        assert_eq!(
            optimal_cover(&g, &FamilySpec::Kcf { k: 2 }).unwrap_err(),
            ExactError::TooManyEdges {
                m: 23,
                limit: EDGE_LIMIT
            }
        );
    }

    #[test]
    fn minimality_checks() {
        let g = graph(3, &[(0, 1, "1"), (1, 2, "1"), (0, 2, "3")]);
        let spec = FamilySpec::StPath { s: 0, t: 2 };
        assert!(is_minimal_cover(&g, &spec, &EdgeSet::from([0, 1])).unwrap());
        assert!(!is_minimal_cover(&g, &spec, &EdgeSet::from([0, 1, 2])).unwrap());
        assert!(!is_minimal_cover(&g, &spec, &EdgeSet::from([0])).unwrap());

        let empty = FamilySpec::SteinerForest { parts: vec![] };
        assert!(is_minimal_cover(&g, &empty, &EdgeSet::new()).unwrap());
    }
}
