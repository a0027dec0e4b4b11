//! Residual-core oracles vs. brute-force enumeration.
//!
//! For every family kind the fast oracle (component filtering, min-cut
//! collection, member filtering) must return exactly the inclusion-minimal
//! uncovered members, for the empty selection, random selections, and the
//! selection a solver run ends with.

use famcover::families::{FamilyKind, FamilySpec};
use famcover::family_props::trial_rng;
use famcover::graph::{EdgeSet, Multigraph, NodeSet};
use famcover::primal_dual::solve;
use famcover::sampler;
use rand::Rng;

/// Definitional oracle: enumerate members, drop covered ones, keep the
/// inclusion-minimal sets. Uses only `enumerate_members` and `cut_degree`.
fn cores_by_enumeration(spec: &FamilySpec, g: &Multigraph, sel: &EdgeSet) -> Vec<NodeSet> {
    let residual: Vec<NodeSet> = spec
        .enumerate_members(g.n())
        .unwrap()
        .into_iter()
        .filter(|m| g.cut_degree(sel, m).unwrap() == 0)
        .collect();
    residual
        .iter()
        .filter(|s| !residual.iter().any(|t| t != *s && t.is_subset_of(s)))
        .cloned()
        .collect()
}

fn check_instance(spec: &FamilySpec, g: &Multigraph, sel: &EdgeSet) {
    let fast = spec.residual_cores(g, sel).unwrap();
    let brute = cores_by_enumeration(spec, g, sel);
    assert_eq!(fast, brute, "spec {spec:?} selection {sel:?}");
    assert_eq!(spec.is_covered(g, sel).unwrap(), brute.is_empty());
}

#[test]
fn residual_cores_match_brute_force_for_every_kind() {
    let trials_per_kind = 60;
    for kind in FamilyKind::ALL {
        for trial in 0..trials_per_kind {
            let mut rng = trial_rng(0x0ac1e, kind as u64 * 1000 + trial);
            let n = rng.random_range(3..=10usize);
            let g = sampler::random_connected_graph(n, 14, &mut rng);
            let spec = sampler::random_spec(kind, n, &mut rng);

            check_instance(&spec, &g, &EdgeSet::new());
            check_instance(&spec, &g, &sampler::random_edge_subset(&g, &mut rng));
            let result = solve(&g, &spec).expect("connected instances are feasible");
            check_instance(&spec, &g, &result.final_edges);
        }
    }
}

#[test]
fn union_cores_match_brute_force() {
    for trial in 0..80 {
        let mut rng = trial_rng(0xdeed, trial);
        let n = rng.random_range(3..=9usize);
        let g = sampler::random_connected_graph(n, 14, &mut rng);
        let a = FamilyKind::ALL[rng.random_range(0..FamilyKind::ALL.len())];
        let b = FamilyKind::ALL[rng.random_range(0..FamilyKind::ALL.len())];
        let spec = FamilySpec::Union {
            specs: vec![
                sampler::random_spec(a, n, &mut rng),
                sampler::random_spec(b, n, &mut rng),
            ],
        };
        check_instance(&spec, &g, &EdgeSet::new());
        check_instance(&spec, &g, &sampler::random_edge_subset(&g, &mut rng));
        let result = solve(&g, &spec).expect("connected instances are feasible");
        check_instance(&spec, &g, &result.final_edges);
    }
}

#[test]
fn every_union_core_comes_from_a_side() {
    // each core of a union is a core of one of the sides, and conversely
    // the minimal sets among the sides' cores are the union's cores
    for trial in 0..60 {
        let mut rng = trial_rng(0xcafe, trial);
        let n = rng.random_range(3..=9usize);
        let g = sampler::random_connected_graph(n, 12, &mut rng);
        let a = sampler::random_spec(FamilyKind::ALL[trial as usize % 7], n, &mut rng);
        let b = sampler::random_spec(FamilyKind::ALL[(trial as usize + 3) % 7], n, &mut rng);
        let union = FamilySpec::Union {
            specs: vec![a.clone(), b.clone()],
        };
        let sel = sampler::random_edge_subset(&g, &mut rng);
        let union_cores = union.residual_cores(&g, &sel).unwrap();
        let mut side_cores = a.residual_cores(&g, &sel).unwrap();
        side_cores.extend(b.residual_cores(&g, &sel).unwrap());
        for core in &union_cores {
            assert!(side_cores.contains(core), "core {core} of neither side");
        }
        let minimal: Vec<&NodeSet> = side_cores
            .iter()
            .filter(|s| !side_cores.iter().any(|t| t != *s && t.is_subset_of(s)))
            .collect();
        let mut expected: Vec<NodeSet> = minimal.into_iter().cloned().collect();
        expected.sort();
        expected.dedup();
        assert_eq!(union_cores, expected);
    }
}

#[test]
fn explicit_residual_cores_and_closure() {
    use famcover::family_props::{classify, ExplicitFamily};

    // residual families of semi-uncrossable explicit families stay
    // semi-uncrossable, and the explicit oracle agrees with brute force
    for trial in 0..150 {
        let mut rng = trial_rng(0x5eed, trial);
        let n = rng.random_range(3..=7usize);
        let family = sampler::random_semi_uncrossable_family(n, &mut rng);
        let g = sampler::random_connected_graph(n, 12, &mut rng);
        let sel = sampler::random_edge_subset(&g, &mut rng);
        let spec = family.to_spec();
        check_instance(&spec, &g, &sel);
        let residual = family.residual(&g, &sel).unwrap();
        let report = classify(&residual).unwrap();
        assert!(
            report.semi_uncrossable,
            "residual family lost semi-uncrossability: {:?} under {sel:?}",
            residual.members()
        );
        assert!(ExplicitFamily::new(n, residual.members().to_vec()).is_ok());
    }
}
