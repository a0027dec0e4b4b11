//! The five commands behind the binary: solve, exact, verify, classify,
//! and the randomized combination suite.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use famcover::certify::{self, CertifyError};
use famcover::cost::{format_cost, Cost};
use famcover::exact::{self, ExactError};
use famcover::families::{FamilyError, FamilyKind, FamilySpec};
use famcover::family_props::{
    cell_seed, classify, combination_table, search_combination, trial_rng, CellExpectation,
    ClassReport, CombinationVerdict, ExplicitFamily,
};
use famcover::primal_dual::{solve, SolveError};
use famcover::sampler;

use crate::io::{self, Instance, IoError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(#[from] IoError),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("{0}")]
    Limit(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Internal(_) => 1,
            CliError::Infeasible(_) => 2,
            CliError::Limit(_) => 3,
        }
    }
}

fn map_solve_err(e: SolveError) -> CliError {
    match e {
        SolveError::Infeasible { iteration } => {
            CliError::Infeasible(format!("stuck at iteration {iteration}"))
        }
        other => CliError::Internal(other.to_string()),
    }
}

fn map_family_err(e: FamilyError) -> CliError {
    match e {
        FamilyError::EnumerationLimit { .. } => CliError::Limit(e.to_string()),
        other => CliError::Internal(other.to_string()),
    }
}

fn map_certify_err(e: CertifyError) -> CliError {
    match e {
        CertifyError::Family(inner) => map_family_err(inner),
        other => CliError::Internal(other.to_string()),
    }
}

fn load(path: &Path) -> Result<Instance, CliError> {
    Ok(io::load_instance(path)?)
}

#[derive(Serialize)]
struct EdgeReport {
    id: usize,
    u: usize,
    v: usize,
    cost: String,
    kept: bool,
}

#[derive(Serialize)]
struct IterationReport {
    cores: Vec<Vec<usize>>,
    epsilon: String,
    tight_edge: usize,
}

#[derive(Serialize)]
struct SolveReport {
    cost: String,
    dual_total: String,
    ratio_bound_holds: bool,
    added: Vec<EdgeReport>,
    final_edges: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    history: Option<Vec<IterationReport>>,
}

pub fn cmd_solve(path: &Path, trace: bool, json: bool) -> Result<(), CliError> {
    let instance = load(path)?;
    let result = solve(&instance.graph, &instance.spec).map_err(map_solve_err)?;
    let ratio_ok = certify::check_ratio(&result);
    if json {
        let report = SolveReport {
            cost: format_cost(&result.cost),
            dual_total: format_cost(&result.dual_total),
            ratio_bound_holds: ratio_ok,
            added: result
                .added
                .iter()
                .map(|&id| {
                    let e = &instance.graph.edges()[id];
                    EdgeReport {
                        id,
                        u: e.u,
                        v: e.v,
                        cost: format_cost(&e.cost),
                        kept: result.final_edges.contains(&id),
                    }
                })
                .collect(),
            final_edges: result.final_edges.iter().copied().collect(),
            history: trace.then(|| {
                result
                    .history
                    .iter()
                    .map(|rec| IterationReport {
                        cores: rec.cores.iter().map(|c| c.elems()).collect(),
                        epsilon: format_cost(&rec.epsilon),
                        tight_edge: rec.tight_edge,
                    })
                    .collect()
            }),
        };
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
        return Ok(());
    }
    println!("cost: {}", format_cost(&result.cost));
    println!("dual total: {}", format_cost(&result.dual_total));
    println!(
        "ratio bound (cost <= 2 * dual): {}",
        if ratio_ok { "ok" } else { "VIOLATED" }
    );
    let order: Vec<String> = result
        .added
        .iter()
        .map(|&id| {
            let star = if result.final_edges.contains(&id) {
                "*"
            } else {
                ""
            };
            format!("{}{}", instance.edge_label(id), star)
        })
        .collect();
    println!("addition order (* = kept): {}", order.join(" "));
    let kept: Vec<String> = result
        .final_edges
        .iter()
        .map(|&id| id.to_string())
        .collect();
    println!("final edges: [{}]", kept.join(", "));
    if trace {
        for (i, rec) in result.history.iter().enumerate() {
            let cores: Vec<String> = rec.cores.iter().map(|c| instance.set_label(c)).collect();
            println!(
                "iter {i}: epsilon {}, tight {}, cores {}",
                format_cost(&rec.epsilon),
                instance.edge_label(rec.tight_edge),
                cores.join(" ")
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ExactReport {
    optimum: String,
    edges: Vec<usize>,
}

pub fn cmd_exact(path: &Path, json: bool) -> Result<(), CliError> {
    let instance = load(path)?;
    let result = exact::optimal_cover(&instance.graph, &instance.spec).map_err(|e| match e {
        ExactError::Infeasible => CliError::Infeasible("no edge subset covers the family".into()),
        ExactError::TooManyEdges { .. } => CliError::Limit(e.to_string()),
        ExactError::Family(inner) => map_family_err(inner),
    })?;
    if json {
        let report = ExactReport {
            optimum: format_cost(&result.cost),
            edges: result.edges.clone(),
        };
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
        return Ok(());
    }
    println!("optimum: {}", format_cost(&result.cost));
    let ids: Vec<String> = result
        .edges
        .iter()
        .map(|&id| instance.edge_label(id))
        .collect();
    println!("edges: [{}]", ids.join(", "));
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport {
    checks: Vec<(String, bool)>,
    overall: bool,
    failures: Vec<String>,
    cost: String,
    dual_total: String,
}

pub fn cmd_verify(path: &Path, json: bool) -> Result<(), CliError> {
    let instance = load(path)?;
    let result = solve(&instance.graph, &instance.spec).map_err(map_solve_err)?;
    let cert =
        certify::certify(&instance.graph, &instance.spec, &result).map_err(map_certify_err)?;
    if json {
        let report = VerifyReport {
            checks: cert
                .checks()
                .iter()
                .map(|&(n, p)| (n.to_string(), p))
                .collect(),
            overall: cert.pass(),
            failures: cert.failures.clone(),
            cost: format_cost(&result.cost),
            dual_total: format_cost(&result.dual_total),
        };
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
        return Ok(());
    }
    for (name, pass) in cert.checks() {
        println!("{name:<22} {}", if pass { "PASS" } else { "FAIL" });
    }
    println!(
        "{:<22} {}",
        "overall",
        if cert.pass() { "PASS" } else { "FAIL" }
    );
    for failure in &cert.failures {
        println!("  {failure}");
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassifyReport {
    members: usize,
    monotone: bool,
    symmetric: bool,
    disjointness_compliable: bool,
    uncrossable: bool,
    semi_uncrossable: bool,
    pliable: bool,
    proper: bool,
    implications_hold: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    uncrossable_witness: Option<(Vec<usize>, Vec<usize>)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    semi_uncrossable_witness: Option<(Vec<usize>, Vec<usize>)>,
}

fn family_for_classify(instance: &Instance) -> Result<ExplicitFamily, CliError> {
    let n = instance.graph.n();
    match &instance.spec {
        FamilySpec::Explicit { members } => {
            ExplicitFamily::new(n, members.clone()).map_err(map_family_err)
        }
        spec => ExplicitFamily::from_spec(spec, n).map_err(map_family_err),
    }
}

pub fn cmd_classify(path: &Path, json: bool) -> Result<(), CliError> {
    let instance = load(path)?;
    let family = family_for_classify(&instance)?;
    let report = classify(&family).map_err(map_family_err)?;
    if json {
        let pair = |w: &Option<famcover::family_props::PairWitness>| {
            w.as_ref().map(|p| (p.a.elems(), p.b.elems()))
        };
        let out = ClassifyReport {
            members: family.len(),
            monotone: report.monotone,
            symmetric: report.symmetric,
            disjointness_compliable: report.disjointness_compliable,
            uncrossable: report.uncrossable,
            semi_uncrossable: report.semi_uncrossable,
            pliable: report.pliable,
            proper: report.proper,
            implications_hold: report.implications_hold(),
            uncrossable_witness: pair(&report.uncrossable_witness),
            semi_uncrossable_witness: pair(&report.semi_uncrossable_witness),
        };
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
        return Ok(());
    }
    print_classify_report(&instance, &family, &report);
    Ok(())
}

fn print_classify_report(instance: &Instance, family: &ExplicitFamily, report: &ClassReport) {
    let yes_no = |flag: bool| if flag { "yes" } else { "no" };
    let pair_note = |w: &Option<famcover::family_props::PairWitness>| match w {
        Some(p) => {
            format!(
                " (witness A={}, B={})",
                instance.set_label(&p.a),
                instance.set_label(&p.b)
            )
        }
        None => String::new(),
    };
    println!("members: {}", family.len());
    let mono_note = match &report.monotone_witness {
        Some(w) => format!(
            " (witness {} misses subset {})",
            instance.set_label(&w.member),
            instance.set_label(&w.subset)
        ),
        None => String::new(),
    };
    println!("monotone: {}{}", yes_no(report.monotone), mono_note);
    let sym_note = match &report.symmetry_witness {
        Some(s) => format!(" (witness {})", instance.set_label(s)),
        None => String::new(),
    };
    println!("symmetric: {}{}", yes_no(report.symmetric), sym_note);
    let disj_note = match &report.disjointness_witness {
        Some(w) => format!(
            " (witness {} splits as {})",
            instance.set_label(&w.member),
            instance.set_label(&w.subset)
        ),
        None => String::new(),
    };
    println!(
        "disjointness compliable: {}{}",
        yes_no(report.disjointness_compliable),
        disj_note
    );
    println!(
        "uncrossable: {}{}",
        yes_no(report.uncrossable),
        pair_note(&report.uncrossable_witness)
    );
    println!(
        "semi-uncrossable: {}{}",
        yes_no(report.semi_uncrossable),
        pair_note(&report.semi_uncrossable_witness)
    );
    println!(
        "pliable: {}{}",
        yes_no(report.pliable),
        pair_note(&report.pliable_witness)
    );
    println!("proper: {}", yes_no(report.proper));
    println!("implications hold: {}", yes_no(report.implications_hold()));
}

#[derive(Serialize)]
pub struct CellReport {
    pub kind_a: String,
    pub kind_b: String,
    pub expected: String,
    pub verdict: String,
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_ratio: Option<String>,
    pub audited: usize,
    pub audit_violations: usize,
}

#[derive(Serialize)]
pub struct CounterexampleReport {
    pub trial: usize,
    pub nodes: usize,
    pub witness_a: Vec<usize>,
    pub witness_b: Vec<usize>,
}

#[derive(Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub max_nodes: usize,
    pub cells: Vec<CellReport>,
    pub all_match: bool,
}

fn expectation_name(e: CellExpectation) -> &'static str {
    match e {
        CellExpectation::AlwaysUncrossable => "always_uncrossable",
        CellExpectation::SemiUncrossableOnly => "always_semi_uncrossable",
        CellExpectation::NotSemiUncrossable => "counterexample",
    }
}

fn verdict_name(v: &CombinationVerdict) -> &'static str {
    match v {
        CombinationVerdict::AlwaysUncrossable => "always_uncrossable",
        CombinationVerdict::AlwaysSemiUncrossable => "always_semi_uncrossable",
        CombinationVerdict::Counterexample(_) => "counterexample",
    }
}

/// Solve-vs-exact audit over random instances of the union of two kinds.
/// Returns (instances audited, violations, worst cost/optimum ratio).
fn audit_cell(
    a: FamilyKind,
    b: FamilyKind,
    trials: usize,
    seed: u64,
    max_nodes: usize,
) -> (usize, usize, Option<Cost>) {
    let mut worst: Option<Cost> = None;
    let mut violations = 0;
    for trial in 0..trials {
        let mut rng = trial_rng(seed ^ 0xa0d1_7000, trial as u64);
        let n = rand::Rng::random_range(&mut rng, 4..=max_nodes.max(4));
        let g = sampler::random_connected_graph(n, 14, &mut rng);
        let spec = FamilySpec::Union {
            specs: vec![
                sampler::random_spec(a, n, &mut rng),
                sampler::random_spec(b, n, &mut rng),
            ],
        };
        let Ok(result) = solve(&g, &spec) else {
            violations += 1;
            continue;
        };
        let Ok(best) = exact::optimal_cover(&g, &spec) else {
            violations += 1;
            continue;
        };
        let two = Cost::from_integer(2.into());
        if result.cost > two.clone() * &best.cost
            || result.cost > two * &result.dual_total
            || result.dual_total > best.cost
        {
            violations += 1;
        }
        if best.cost > Cost::from_integer(0.into()) {
            let ratio = result.cost / best.cost;
            if worst.as_ref().is_none_or(|w| ratio > *w) {
                worst = Some(ratio);
            }
        }
    }
    (trials, violations, worst)
}

/// Runs the whole combination table: verdict search per cell, plus ratio
/// audits on the cells whose unions the solver is expected to handle.
pub fn run_suite(seed: u64, trials: usize, max_nodes: usize) -> SuiteReport {
    let cells: Vec<CellReport> = combination_table()
        .into_par_iter()
        .map(|(a, b, expected)| {
            let cseed = cell_seed(seed, a, b);
            let verdict = search_combination(a, b, trials, cseed, max_nodes);
            let matches = verdict_name(&verdict) == expectation_name(expected);
            let counterexample = match &verdict {
                CombinationVerdict::Counterexample(cex) => Some(CounterexampleReport {
                    trial: cex.trial,
                    nodes: cex.n,
                    witness_a: cex.witness.a.elems(),
                    witness_b: cex.witness.b.elems(),
                }),
                _ => None,
            };
            let (audited, audit_violations, worst_ratio) =
                if expected != CellExpectation::NotSemiUncrossable {
                    audit_cell(a, b, trials, cseed, max_nodes)
                } else {
                    (0, 0, None)
                };
            CellReport {
                kind_a: a.name().to_string(),
                kind_b: b.name().to_string(),
                expected: expectation_name(expected).to_string(),
                verdict: verdict_name(&verdict).to_string(),
                matches,
                counterexample,
                worst_ratio: worst_ratio.as_ref().map(format_cost),
                audited,
                audit_violations,
            }
        })
        .collect();
    let all_match = cells.iter().all(|c| c.matches && c.audit_violations == 0);
    SuiteReport {
        seed,
        trials,
        max_nodes,
        cells,
        all_match,
    }
}

pub fn cmd_suite(seed: u64, trials: usize, max_nodes: usize, json: bool) -> Result<(), CliError> {
    let report = run_suite(seed, trials, max_nodes);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
        return Ok(());
    }
    println!(
        "combination suite: seed {}, {} trials per cell, up to {} nodes",
        report.seed, report.trials, report.max_nodes
    );
    println!(
        "{:<16} {:<16} {:<26} {:<8} {:>12} {:>6}",
        "family a", "family b", "verdict", "match", "worst ratio", "bad"
    );
    for cell in &report.cells {
        println!(
            "{:<16} {:<16} {:<26} {:<8} {:>12} {:>6}",
            cell.kind_a,
            cell.kind_b,
            cell.verdict,
            if cell.matches { "yes" } else { "NO" },
            cell.worst_ratio.as_deref().unwrap_or("-"),
            cell.audit_violations,
        );
        if let Some(cex) = &cell.counterexample {
            println!(
                "    counterexample at trial {} on {} nodes: A={:?}, B={:?}",
                cex.trial, cex.nodes, cex.witness_a, cex.witness_b
            );
        }
    }
    println!(
        "all cells match: {}",
        if report.all_match { "yes" } else { "NO" }
    );
    Ok(())
}

/// Shared by `classify` tests and callers needing label-aware output.
pub fn classify_instance(instance: &Instance) -> Result<(ExplicitFamily, ClassReport), CliError> {
    let family = family_for_classify(instance)?;
    let report = classify(&family).map_err(map_family_err)?;
    Ok((family, report))
}
