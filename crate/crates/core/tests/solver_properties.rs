//! Randomized solver invariants and property tests for the set algebra.

use famcover::certify;
use famcover::exact::{is_minimal_cover, optimal_cover};
use famcover::families::{FamilyKind, FamilySpec};
use famcover::family_props::trial_rng;
use famcover::graph::{EdgeSet, Multigraph, NodeSet};
use famcover::primal_dual::{solve, DualState};
use famcover::sampler;
use famcover::Cost;
use proptest::prelude::*;
use rand::Rng;

fn two(x: &Cost) -> Cost {
    Cost::from_integer(2.into()) * x
}

#[test]
fn solver_invariants_on_random_instances() {
    for kind in FamilyKind::ALL {
        for trial in 0..40 {
            let mut rng = trial_rng(0xf00d, kind as u64 * 997 + trial);
            let n = rng.random_range(3..=8usize);
            let g = sampler::random_connected_graph(n, 14, &mut rng);
            let spec = sampler::random_spec(kind, n, &mut rng);
            let result = solve(&g, &spec).expect("connected instances are feasible");

            // duals feasible after every iteration, added edges tight
            let mut dual = DualState::new(g.edge_count());
            for record in &result.history {
                dual.raise(&g, &record.cores, &record.epsilon);
                for (id, e) in g.edges().iter().enumerate() {
                    assert!(dual.load(id) <= &e.cost);
                }
                assert_eq!(
                    dual.load(record.tight_edge),
                    &g.edges()[record.tight_edge].cost
                );
            }

            // inclusion-minimal cover
            assert!(is_minimal_cover(&g, &spec, &result.final_edges).unwrap());

            // cost within twice the dual, dual within the optimum
            let exact = optimal_cover(&g, &spec).unwrap();
            assert!(result.cost <= two(&result.dual_total));
            assert!(result.dual_total <= exact.cost, "weak duality violated");
            assert!(exact.cost <= result.cost);
            assert!(result.cost <= two(&exact.cost));

            // the full certificate agrees
            let cert = certify::certify(&g, &spec, &result).unwrap();
            assert!(cert.pass(), "instance {g:?} {spec:?}: {:?}", cert.failures);
        }
    }
}

#[test]
fn cores_within_a_run_are_pairwise_disjoint() {
    for trial in 0..120 {
        let mut rng = trial_rng(0xd15c, trial);
        let n = rng.random_range(3..=8usize);
        let g = sampler::random_connected_graph(n, 14, &mut rng);
        let kind = FamilyKind::ALL[trial as usize % 7];
        let spec = sampler::random_spec(kind, n, &mut rng);
        let result = solve(&g, &spec).unwrap();
        for record in &result.history {
            for (i, a) in record.cores.iter().enumerate() {
                for b in &record.cores[i + 1..] {
                    assert!(a.is_disjoint(b), "overlapping cores {a} and {b}");
                }
            }
        }
    }
}

#[test]
fn zero_cost_edges_and_parallel_edges_are_handled() {
    use famcover::parse_cost;
    // parallel zero-cost edges go tight immediately
    let g = Multigraph::new(
        3,
        vec![
            (0, 1, parse_cost("0").unwrap()),
            (0, 1, parse_cost("0").unwrap()),
            (1, 2, parse_cost("2").unwrap()),
        ],
    )
    .unwrap();
    let spec = FamilySpec::StPath { s: 0, t: 2 };
    let result = solve(&g, &spec).unwrap();
    assert_eq!(result.history[0].epsilon, parse_cost("0").unwrap());
    assert!(is_minimal_cover(&g, &spec, &result.final_edges).unwrap());
    let exact = optimal_cover(&g, &spec).unwrap();
    assert_eq!(exact.cost, parse_cost("2").unwrap());
    assert!(result.cost <= two(&exact.cost));
}

#[test]
fn solve_is_deterministic() {
    for trial in 0..20 {
        let mut rng = trial_rng(0xabba, trial);
        let n = rng.random_range(3..=8usize);
        let g = sampler::random_connected_graph(n, 14, &mut rng);
        let spec = sampler::random_spec(FamilyKind::ALL[trial as usize % 7], n, &mut rng);
        let a = solve(&g, &spec).unwrap();
        let b = solve(&g, &spec).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn max_flow_matches_enumerated_min_cut_on_random_graphs() {
    for trial in 0..50 {
        let mut rng = trial_rng(0xf10f, trial);
        let n = rng.random_range(3..=10usize);
        let g = sampler::random_connected_graph(n, 14, &mut rng);
        let all = g.all_edge_ids();
        let u = rng.random_range(0..n);
        let mut v = rng.random_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        let mut best = usize::MAX;
        let mut minimal_sides: Vec<NodeSet> = Vec::new();
        for bits in 0u32..1 << n {
            let s = NodeSet::from_elems(n, (0..n).filter(|&x| bits >> x & 1 == 1));
            if !s.contains(u) || s.contains(v) {
                continue;
            }
            let d = g.cut_degree(&all, &s).unwrap();
            if d < best {
                best = d;
                minimal_sides = vec![s];
            } else if d == best {
                minimal_sides.push(s);
            }
        }
        assert_eq!(g.max_flow_value(u, v).unwrap(), best);
        assert_eq!(g.max_flow_value(v, u).unwrap(), best);
        let side = g.min_source_side_cut(u, v).unwrap();
        assert!(minimal_sides.contains(&side));
        for s in &minimal_sides {
            assert!(side.is_subset_of(s), "{side} not within min cut side {s}");
        }
    }
}

#[test]
fn solver_still_terminates_when_cores_overlap() {
    // two crossing minimal members: outside every guaranteed class, but the
    // solver must still terminate with a minimal cover and feasible duals
    let members = vec![
        NodeSet::from_elems(4, [0, 1]),
        NodeSet::from_elems(4, [1, 2]),
    ];
    let family = famcover::family_props::ExplicitFamily::new(4, members.clone()).unwrap();
    let report = famcover::family_props::classify(&family).unwrap();
    assert!(!report.semi_uncrossable);

    let spec = FamilySpec::Explicit {
        members: members.clone(),
    };
    let mut rng = trial_rng(0x0c0c, 0);
    for _ in 0..10 {
        let g = sampler::random_connected_graph(4, 10, &mut rng);
        let cores = spec.residual_cores(&g, &EdgeSet::new()).unwrap();
        assert_eq!(cores, members);
        assert!(!cores[0].is_disjoint(&cores[1]));
        let result = solve(&g, &spec).unwrap();
        assert!(is_minimal_cover(&g, &spec, &result.final_edges).unwrap());
        // duals stay feasible regardless of the family class
        let mut dual = DualState::new(g.edge_count());
        for record in &result.history {
            dual.raise(&g, &record.cores, &record.epsilon);
        }
        for (id, e) in g.edges().iter().enumerate() {
            assert!(dual.load(id) <= &e.cost);
        }
    }
}

proptest! {
    #[test]
    fn node_set_complement_and_cut_symmetry(
        bits in 1u16..255,
        edges in proptest::collection::vec((0usize..8, 0usize..8), 1..14),
    ) {
        let n = 8;
        let s = NodeSet::from_elems(n, (0..n).filter(|&v| bits >> v & 1 == 1));
        prop_assume!(s.is_proper());
        prop_assert_eq!(s.complement().complement(), s.clone());

        let list: Vec<(usize, usize, Cost)> = edges
            .into_iter()
            .filter(|(u, v)| u != v)
            .map(|(u, v)| (u, v, Cost::from_integer(1.into())))
            .collect();
        prop_assume!(!list.is_empty());
        let g = Multigraph::new(n, list).unwrap();
        let all = g.all_edge_ids();
        prop_assert_eq!(
            g.cut_degree(&all, &s).unwrap(),
            g.cut_degree(&all, &s.complement()).unwrap()
        );
    }

    #[test]
    fn components_partition_and_flow_symmetry(
        edges in proptest::collection::vec((0usize..7, 0usize..7), 0..12),
        sel_bits in 0u16..4096,
    ) {
        let n = 7;
        let list: Vec<(usize, usize, Cost)> = edges
            .into_iter()
            .filter(|(u, v)| u != v)
            .map(|(u, v)| (u, v, Cost::from_integer(1.into())))
            .collect();
        let g = Multigraph::new(n, list).unwrap();
        let sel: EdgeSet = (0..g.edge_count()).filter(|&e| sel_bits >> e & 1 == 1).collect();
        let comps = g.components(&sel).unwrap();
        let mut seen = NodeSet::empty(n);
        for c in &comps {
            prop_assert!(seen.is_disjoint(c));
            seen = seen.union(c);
        }
        prop_assert!(seen.is_full());

        if g.edge_count() > 0 {
            prop_assert_eq!(g.max_flow_value(0, 6).unwrap(), g.max_flow_value(6, 0).unwrap());
        }
    }
}
