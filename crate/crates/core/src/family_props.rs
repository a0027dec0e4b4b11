//! Classification of explicit set families over small ground sets.
//!
//! Every condition is decided by direct checking with a violating witness
//! on failure: symmetry and monotonicity per member, the disjointness
//! condition over all submasks of each member, and the uncrossing-style
//! conditions over all unordered member pairs. A seeded search over random
//! problem pairs classifies their unions, which is how the combination
//! table is validated end to end.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::families::{FamilyError, FamilyKind, FamilySpec};
use crate::graph::{EdgeSet, Multigraph, NodeSet};
use crate::sampler;

/// Classification enumerates submasks, so the ground set is capped.
pub const CLASSIFY_LIMIT: usize = 20;

/// A deduplicated explicit family: proper nonempty subsets of `[0, n)`,
/// kept in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitFamily {
    n: usize,
    members: Vec<NodeSet>,
}

impl ExplicitFamily {
    pub fn new(n: usize, mut members: Vec<NodeSet>) -> Result<Self, FamilyError> {
        for m in &members {
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
        members.sort();
        members.dedup();
        Ok(ExplicitFamily { n, members })
    }

    /// Materializes any enumerable spec.
    pub fn from_spec(spec: &FamilySpec, n: usize) -> Result<Self, FamilyError> {
        Self::new(n, spec.enumerate_members(n)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[NodeSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn to_spec(&self) -> FamilySpec {
        FamilySpec::Explicit {
            members: self.members.clone(),
        }
    }

    /// The members not covered by the selected edges, as a family.
    pub fn residual(&self, g: &Multigraph, sel: &EdgeSet) -> Result<Self, FamilyError> {
        let mut kept = Vec::new();
        for m in &self.members {
            if g.cut_degree(sel, m)? == 0 {
                kept.push(m.clone());
            }
        }
        ExplicitFamily::new(self.n, kept)
    }
}

/// A member together with a nonempty proper subset that witnesses a failed
/// subset condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetWitness {
    pub subset: NodeSet,
    pub member: NodeSet,
}

/// An unordered member pair violating a pairwise condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairWitness {
    pub a: NodeSet,
    pub b: NodeSet,
}

impl PairWitness {
    /// Compares disregarding orientation.
    pub fn same_pair(&self, x: &NodeSet, y: &NodeSet) -> bool {
        (self.a == *x && self.b == *y) || (self.a == *y && self.b == *x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    pub monotone: bool,
    pub symmetric: bool,
    pub disjointness_compliable: bool,
    pub uncrossable: bool,
    pub semi_uncrossable: bool,
    pub pliable: bool,
    pub proper: bool,
    pub monotone_witness: Option<SubsetWitness>,
    pub symmetry_witness: Option<NodeSet>,
    pub disjointness_witness: Option<SubsetWitness>,
    pub uncrossable_witness: Option<PairWitness>,
    pub semi_uncrossable_witness: Option<PairWitness>,
    pub pliable_witness: Option<PairWitness>,
}

impl ClassReport {
    /// The implications the flags must satisfy for any family.
    pub fn implications_hold(&self) -> bool {
        let implies = |p: bool, q: bool| !p || q;
        self.proper == (self.symmetric && self.disjointness_compliable)
            && implies(self.symmetric && self.semi_uncrossable, self.uncrossable)
            && implies(
                self.monotone,
                self.disjointness_compliable && self.uncrossable,
            )
            && implies(self.uncrossable, self.semi_uncrossable)
            && implies(self.semi_uncrossable, self.pliable)
    }
}

/// Computes every flag of [`ClassReport`] by direct checking, recording the
/// first violating witness (in canonical member order) per failed flag.
pub fn classify(family: &ExplicitFamily) -> Result<ClassReport, FamilyError> {
    let n = family.n();
    if n > CLASSIFY_LIMIT {
        return Err(FamilyError::EnumerationLimit {
            n,
            limit: CLASSIFY_LIMIT,
        });
    }
    let masks: Vec<u64> = family.members().iter().map(mask_of).collect();
    let set: HashSet<u64> = masks.iter().copied().collect();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let to_set = |mask: u64| NodeSet::from_elems(n, (0..n).filter(|&v| mask >> v & 1 == 1));

    let mut report = ClassReport {
        monotone: true,
        symmetric: true,
        disjointness_compliable: true,
        uncrossable: true,
        semi_uncrossable: true,
        pliable: true,
        proper: true,
        monotone_witness: None,
        symmetry_witness: None,
        disjointness_witness: None,
        uncrossable_witness: None,
        semi_uncrossable_witness: None,
        pliable_witness: None,
    };

    for (i, &a) in masks.iter().enumerate() {
        if report.symmetric && !set.contains(&(full & !a)) {
            report.symmetric = false;
            report.symmetry_witness = Some(family.members()[i].clone());
        }
        // closure under single-element removal is equivalent to closure
        // under all nonempty subsets
        if report.monotone && a.count_ones() >= 2 {
            for v in 0..n {
                let sub = a & !(1u64 << v);
                if sub != a && !set.contains(&sub) {
                    report.monotone = false;
                    report.monotone_witness = Some(SubsetWitness {
                        subset: to_set(sub),
                        member: to_set(a),
                    });
                    break;
                }
            }
        }
        if report.disjointness_compliable {
            // proper nonempty submasks, descending
            let mut sub = a.wrapping_sub(1) & a;
            while sub != 0 {
                if !set.contains(&sub) && !set.contains(&(a & !sub)) {
                    report.disjointness_compliable = false;
                    report.disjointness_witness = Some(SubsetWitness {
                        subset: to_set(sub),
                        member: to_set(a),
                    });
                    break;
                }
                sub = sub.wrapping_sub(1) & a;
            }
        }
        for &b in &masks[i + 1..] {
            let inter = set.contains(&(a & b));
            let uni = set.contains(&(a | b));
            let ab = set.contains(&(a & !b));
            let ba = set.contains(&(b & !a));
            if report.uncrossable && !((inter && uni) || (ab && ba)) {
                report.uncrossable = false;
                report.uncrossable_witness = Some(PairWitness {
                    a: to_set(a),
                    b: to_set(b),
                });
            }
            if report.semi_uncrossable && !((inter && (uni || ab || ba)) || (ab && ba)) {
                report.semi_uncrossable = false;
                report.semi_uncrossable_witness = Some(PairWitness {
                    a: to_set(a),
                    b: to_set(b),
                });
            }
            if report.pliable && [inter, uni, ab, ba].iter().filter(|&&x| x).count() < 2 {
                report.pliable = false;
                report.pliable_witness = Some(PairWitness {
                    a: to_set(a),
                    b: to_set(b),
                });
            }
        }
    }
    report.proper = report.symmetric && report.disjointness_compliable;
    Ok(report)
}

fn mask_of(s: &NodeSet) -> u64 {
    s.iter().fold(0u64, |acc, v| acc | 1 << v)
}

/// Re-checks that the computed flags satisfy all their implications.
pub fn implication_audit(family: &ExplicitFamily) -> Result<bool, FamilyError> {
    Ok(classify(family)?.implications_hold())
}

#[derive(Clone, Debug, PartialEq)]
pub enum CombinationVerdict {
    /// Every sampled union classified uncrossable.
    AlwaysUncrossable,
    /// Every sampled union classified semi-uncrossable, and at least one
    /// was not uncrossable.
    AlwaysSemiUncrossable,
    /// Some sampled union was not semi-uncrossable.
    Counterexample(Box<CombinationCounterexample>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CombinationCounterexample {
    pub trial: usize,
    pub n: usize,
    pub spec_a: FamilySpec,
    pub spec_b: FamilySpec,
    pub witness: PairWitness,
}

/// Samples `trials` random problem pairs of the two kinds, materializes
/// each union, classifies it, and aggregates. Deterministic per seed; each
/// trial draws from its own stream so the search can be split or replayed.
pub fn search_combination(
    kind_a: FamilyKind,
    kind_b: FamilyKind,
    trials: usize,
    seed: u64,
    max_nodes: usize,
) -> CombinationVerdict {
    let mut saw_not_uncrossable = false;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let n = rng.random_range(4..=max_nodes.max(4));
        let spec_a = sampler::random_spec(kind_a, n, &mut rng);
        let spec_b = sampler::random_spec(kind_b, n, &mut rng);
        let union = FamilySpec::Union {
            specs: vec![spec_a.clone(), spec_b.clone()],
        };
        let family = ExplicitFamily::from_spec(&union, n)
            .expect("sampled specs stay within the enumeration limit");
        let report = classify(&family).expect("sampled universes stay classifiable");
        if !report.semi_uncrossable {
            return CombinationVerdict::Counterexample(Box::new(CombinationCounterexample {
                trial,
                n,
                spec_a,
                spec_b,
                witness: report.semi_uncrossable_witness.unwrap(),
            }));
        }
        if !report.uncrossable {
            saw_not_uncrossable = true;
        }
    }
    if saw_not_uncrossable {
        CombinationVerdict::AlwaysSemiUncrossable
    } else {
        CombinationVerdict::AlwaysUncrossable
    }
}

/// Known union behavior per kind pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellExpectation {
    /// Every union of the two kinds is uncrossable: both kinds are
    /// symmetric (the union of symmetric families is symmetric, and a
    /// symmetric semi-uncrossable family is uncrossable), or both are
    /// monotone (the union of monotone families is monotone).
    AlwaysUncrossable,
    /// Every union is semi-uncrossable, but some unions are not
    /// uncrossable.
    SemiUncrossableOnly,
    /// Some unions are not semi-uncrossable.
    NotSemiUncrossable,
}

/// The upper-triangular table of kind pairs with their expected verdicts,
/// including the separator-family row that cross-checks the rest (it is a
/// special case of every kind except the pure size bound).
pub fn combination_table() -> Vec<(FamilyKind, FamilyKind, CellExpectation)> {
    use CellExpectation::*;
    use FamilyKind::*;
    vec![
        (SteinerForest, SteinerForest, AlwaysUncrossable),
        (SteinerForest, TJoin, AlwaysUncrossable),
        (SteinerForest, Gp2p, AlwaysUncrossable),
        (SteinerForest, Kcf, SemiUncrossableOnly),
        (SteinerForest, Tkcf, SemiUncrossableOnly),
        (SteinerForest, Sna, NotSemiUncrossable),
        (TJoin, TJoin, AlwaysUncrossable),
        (TJoin, Gp2p, AlwaysUncrossable),
        (TJoin, Kcf, SemiUncrossableOnly),
        (TJoin, Tkcf, SemiUncrossableOnly),
        (TJoin, Sna, NotSemiUncrossable),
        (Gp2p, Gp2p, AlwaysUncrossable),
        (Gp2p, Kcf, SemiUncrossableOnly),
        (Gp2p, Tkcf, SemiUncrossableOnly),
        (Gp2p, Sna, NotSemiUncrossable),
        (Kcf, Kcf, AlwaysUncrossable),
        (Kcf, Tkcf, SemiUncrossableOnly),
        (Kcf, Sna, SemiUncrossableOnly),
        (Tkcf, Tkcf, NotSemiUncrossable),
        (Tkcf, Sna, NotSemiUncrossable),
        (Sna, Sna, NotSemiUncrossable),
        (StPath, SteinerForest, AlwaysUncrossable),
        (StPath, TJoin, AlwaysUncrossable),
        (StPath, Gp2p, AlwaysUncrossable),
        (StPath, Kcf, SemiUncrossableOnly),
        (StPath, Tkcf, SemiUncrossableOnly),
        (StPath, Sna, NotSemiUncrossable),
        (StPath, StPath, AlwaysUncrossable),
    ]
}

/// Per-cell seed so the searches stay independent of table order.
pub fn cell_seed(seed: u64, a: FamilyKind, b: FamilyKind) -> u64 {
    let idx = |k: FamilyKind| FamilyKind::ALL.iter().position(|&x| x == k).unwrap() as u64;
    seed ^ (idx(a) * 131 + idx(b) + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Independent per-trial stream: splitmix64 over (seed, salt).
pub fn trial_rng(seed: u64, salt: u64) -> ChaCha8Rng {
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ns(n: usize, elems: &[usize]) -> NodeSet {
        NodeSet::from_elems(n, elems.iter().copied())
    }

    fn fam(n: usize, members: &[&[usize]]) -> ExplicitFamily {
        ExplicitFamily::new(n, members.iter().map(|m| ns(n, m)).collect()).unwrap()
    }

    /// x=0, y=1, s=2, t=3: {s,t}, {x,s}, {s}, {t}.
    fn semi_only_family() -> ExplicitFamily {
        fam(4, &[&[2, 3], &[0, 2], &[2], &[3]])
    }

    #[test]
    fn semi_but_not_uncrossable() {
        let report = classify(&semi_only_family()).unwrap();
        assert!(report.semi_uncrossable);
        assert!(!report.uncrossable);
        assert!(!report.symmetric);
        let w = report.uncrossable_witness.clone().unwrap();
        assert!(w.same_pair(&ns(4, &[2, 3]), &ns(4, &[0, 2])));
        assert!(report.implications_hold());
    }

    #[test]
    fn adding_complements_breaks_semi() {
        let base = semi_only_family();
        let mut members = base.members().to_vec();
        for m in base.members() {
            members.push(m.complement());
        }
        let sym = ExplicitFamily::new(4, members).unwrap();
        let report = classify(&sym).unwrap();
        assert!(report.symmetric);
        assert!(!report.semi_uncrossable);
        assert!(!report.uncrossable);
        assert!(report.implications_hold());
    }

    #[test]
    fn intersection_only_union_fails_semi() {
        // s=0, t=1, x=2, y=3: {{s,t},{s}} joined with {{s,x},{s}}
        let union = fam(4, &[&[0, 1], &[0], &[0, 2]]);
        let report = classify(&union).unwrap();
        assert!(!report.semi_uncrossable);
        let w = report.semi_uncrossable_witness.unwrap();
        assert!(w.same_pair(&ns(4, &[0, 1]), &ns(4, &[0, 2])));
        // each half alone is uncrossable and disjointness compliable
        for half in [fam(4, &[&[0, 1], &[0]]), fam(4, &[&[0, 2], &[0]])] {
            let r = classify(&half).unwrap();
            assert!(r.uncrossable && r.disjointness_compliable);
        }
    }

    #[test]
    fn path_family_with_symmetric_pair_fails_semi() {
        // x=0, y=1, s=2, t=3: separators of {s,t} plus {{x,y},{s,t}}
        let st = FamilySpec::StPath { s: 2, t: 3 };
        let mut members = st.enumerate_members(4).unwrap();
        members.push(ns(4, &[0, 1]));
        members.push(ns(4, &[2, 3]));
        let union = ExplicitFamily::new(4, members).unwrap();
        let report = classify(&union).unwrap();
        assert!(!report.semi_uncrossable);
        let w = report.semi_uncrossable_witness.unwrap();
        assert!(w.same_pair(&ns(4, &[0, 2]), &ns(4, &[0, 1])));
        // the separator family alone is proper
        let path = ExplicitFamily::from_spec(&st, 4).unwrap();
        let r = classify(&path).unwrap();
        assert!(r.proper && r.uncrossable);
    }

    #[test]
    fn small_sets_family_is_monotone() {
        let spec = FamilySpec::Kcf { k: 3 };
        let family = ExplicitFamily::from_spec(&spec, 6).unwrap();
        let report = classify(&family).unwrap();
        assert!(report.monotone);
        assert!(report.disjointness_compliable);
        assert!(report.uncrossable);
        assert!(!report.symmetric);
        assert!(report.implications_hold());
    }

    #[test]
    fn witnesses_are_reported_for_failed_flags() {
        // {0,1} without its subsets: monotonicity and disjointness fail
        let family = fam(3, &[&[0, 1]]);
        let report = classify(&family).unwrap();
        assert!(!report.monotone);
        let w = report.monotone_witness.clone().unwrap();
        assert!(w.subset.is_subset_of(&w.member));
        assert!(!report.disjointness_compliable);
        let d = report.disjointness_witness.clone().unwrap();
        assert_eq!(d.member, ns(3, &[0, 1]));
        assert!(!report.symmetric);
        assert_eq!(report.symmetry_witness.clone().unwrap(), ns(3, &[0, 1]));
        assert!(report.implications_hold());
    }

    #[test]
    fn classify_is_order_independent() {
        let a = fam(4, &[&[2, 3], &[0, 2], &[2], &[3]]);
        let b = fam(4, &[&[3], &[2], &[0, 2], &[2, 3]]);
        assert_eq!(classify(&a).unwrap(), classify(&b).unwrap());
    }

    #[test]
    fn symmetric_families_have_semi_equal_uncrossable() {
        for trial in 0..120 {
            let mut rng = trial_rng(99, trial);
            let n = rng.random_range(3..=6usize);
            let mut members = Vec::new();
            for _ in 0..rng.random_range(1..=4usize) {
                let bits = rng.random_range(1..(1u64 << n) - 1);
                let s = NodeSet::from_elems(n, (0..n).filter(|&v| bits >> v & 1 == 1));
                members.push(s.complement());
                members.push(s);
            }
            let family = ExplicitFamily::new(n, members).unwrap();
            let report = classify(&family).unwrap();
            assert!(report.symmetric);
            assert_eq!(report.semi_uncrossable, report.uncrossable);
            assert!(report.implications_hold(), "family {:?}", family.members());
        }
    }

    #[test]
    fn random_families_pass_implication_audit() {
        for trial in 0..200 {
            let mut rng = trial_rng(7, trial);
            let n = rng.random_range(3..=7usize);
            let count = rng.random_range(1..=5usize);
            let mut members = Vec::new();
            for _ in 0..count {
                let bits = rng.random_range(1..(1u64 << n) - 1);
                members.push(NodeSet::from_elems(
                    n,
                    (0..n).filter(|&v| bits >> v & 1 == 1),
                ));
            }
            let family = ExplicitFamily::new(n, members).unwrap();
            assert!(
                implication_audit(&family).unwrap(),
                "family {:?}",
                family.members()
            );
        }
    }

    #[test]
    fn ground_set_cap() {
        let family = ExplicitFamily::new(24, vec![ns(24, &[0])]).unwrap();
        assert_eq!(
            classify(&family).unwrap_err(),
            FamilyError::EnumerationLimit {
                n: 24,
                limit: CLASSIFY_LIMIT
            }
        );
    }
}
