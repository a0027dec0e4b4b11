//! The JSON instance format.
//!
//! An instance is a node count, a costed edge list, and a family spec:
//!
//! ```json
//! {
//!   "nodes": 3,
//!   "names": ["s", "a", "t"],
//!   "edges": [[0, 1, "1"], [1, 2, "1"], [0, 2, "3"]],
//!   "family": { "st_path": { "s": 0, "t": 2 } }
//! }
//! ```
//!
//! Costs travel as strings (`"3"`, `"2.5"`, `"7/2"`) so exact values survive
//! the JSON boundary. `names` is an optional per-node label list used only
//! for reporting. The `family` object is tagged by kind: `steiner_forest`
//! (parts), `t_join` (terminals), `gp2p` (charges), `kcf` (k), `tkcf`
//! (terminals, k), `sna` (base_edges, demands), `st_path` (s, t),
//! `explicit` (members), `union` (specs).

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use famcover::cost::{format_cost, parse_cost, Cost, CostError};
use famcover::families::FamilySpec;
use famcover::graph::{Multigraph, NodeId, NodeSet};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("edge {index}: {source}")]
    EdgeCost { index: usize, source: CostError },
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
}

fn invalid(context: &str, message: impl ToString) -> IoError {
    IoError::Invalid {
        context: context.to_string(),
        message: message.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub nodes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    pub edges: Vec<(NodeId, NodeId, String)>,
    pub family: FamilySpecJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpecJson {
    SteinerForest {
        parts: Vec<Vec<NodeId>>,
    },
    TJoin {
        terminals: Vec<NodeId>,
    },
    Gp2p {
        charges: Vec<i64>,
    },
    Kcf {
        k: usize,
    },
    Tkcf {
        terminals: Vec<NodeId>,
        k: usize,
    },
    Sna {
        base_edges: Vec<(NodeId, NodeId)>,
        demands: Vec<(NodeId, NodeId)>,
    },
    StPath {
        s: NodeId,
        t: NodeId,
    },
    Explicit {
        members: Vec<Vec<NodeId>>,
    },
    Union {
        specs: Vec<FamilySpecJson>,
    },
}

/// A fully validated instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub graph: Multigraph,
    pub spec: FamilySpec,
    pub names: Option<Vec<String>>,
}

impl Instance {
    pub fn label(&self, v: NodeId) -> String {
        match &self.names {
            Some(names) => names[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn set_label(&self, s: &NodeSet) -> String {
        let inner: Vec<String> = s.iter().map(|v| self.label(v)).collect();
        format!("{{{}}}", inner.join(","))
    }

    pub fn edge_label(&self, id: usize) -> String {
        let e = &self.graph.edges()[id];
        format!("{}({}-{})", id, self.label(e.u), self.label(e.v))
    }
}

fn node_set(n: usize, elems: &[NodeId], context: &str) -> Result<NodeSet, IoError> {
    for &v in elems {
        if v >= n {
            return Err(invalid(
                context,
                format!("node {v} out of range for {n} nodes"),
            ));
        }
    }
    Ok(NodeSet::from_elems(n, elems.iter().copied()))
}

fn spec_from_json(json: &FamilySpecJson, n: usize) -> Result<FamilySpec, IoError> {
    Ok(match json {
        FamilySpecJson::SteinerForest { parts } => FamilySpec::SteinerForest {
            parts: parts
                .iter()
                .enumerate()
                .map(|(i, p)| node_set(n, p, &format!("family.steiner_forest.parts[{i}]")))
                .collect::<Result<_, _>>()?,
        },
        FamilySpecJson::TJoin { terminals } => FamilySpec::TJoin {
            terminals: node_set(n, terminals, "family.t_join.terminals")?,
        },
        FamilySpecJson::Gp2p { charges } => FamilySpec::Gp2p {
            charges: charges.clone(),
        },
        FamilySpecJson::Kcf { k } => FamilySpec::Kcf { k: *k },
        FamilySpecJson::Tkcf { terminals, k } => FamilySpec::Tkcf {
            terminals: node_set(n, terminals, "family.tkcf.terminals")?,
            k: *k,
        },
        FamilySpecJson::Sna {
            base_edges,
            demands,
        } => {
            let costed = base_edges
                .iter()
                .map(|&(u, v)| (u, v, Cost::from_integer(0.into())))
                .collect();
            let base =
                Multigraph::new(n, costed).map_err(|e| invalid("family.sna.base_edges", e))?;
            FamilySpec::Sna {
                base,
                demands: demands.clone(),
            }
        }
        FamilySpecJson::StPath { s, t } => FamilySpec::StPath { s: *s, t: *t },
        FamilySpecJson::Explicit { members } => FamilySpec::Explicit {
            members: members
                .iter()
                .enumerate()
                .map(|(i, m)| node_set(n, m, &format!("family.explicit.members[{i}]")))
                .collect::<Result<_, _>>()?,
        },
        FamilySpecJson::Union { specs } => FamilySpec::Union {
            specs: specs
                .iter()
                .map(|s| spec_from_json(s, n))
                .collect::<Result<_, _>>()?,
        },
    })
}

fn spec_to_json(spec: &FamilySpec) -> FamilySpecJson {
    match spec {
        FamilySpec::SteinerForest { parts } => FamilySpecJson::SteinerForest {
            parts: parts.iter().map(|p| p.elems()).collect(),
        },
        FamilySpec::TJoin { terminals } => FamilySpecJson::TJoin {
            terminals: terminals.elems(),
        },
        FamilySpec::Gp2p { charges } => FamilySpecJson::Gp2p {
            charges: charges.clone(),
        },
        FamilySpec::Kcf { k } => FamilySpecJson::Kcf { k: *k },
        FamilySpec::Tkcf { terminals, k } => FamilySpecJson::Tkcf {
            terminals: terminals.elems(),
            k: *k,
        },
        FamilySpec::Sna { base, demands } => FamilySpecJson::Sna {
            base_edges: base.edges().iter().map(|e| (e.u, e.v)).collect(),
            demands: demands.clone(),
        },
        FamilySpec::StPath { s, t } => FamilySpecJson::StPath { s: *s, t: *t },
        FamilySpec::Explicit { members } => FamilySpecJson::Explicit {
            members: members.iter().map(|m| m.elems()).collect(),
        },
        FamilySpec::Union { specs } => FamilySpecJson::Union {
            specs: specs.iter().map(spec_to_json).collect(),
        },
    }
}

/// Parses and validates an instance from JSON text.
pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    instance_from_file(&file)
}

pub fn instance_from_file(file: &InstanceFile) -> Result<Instance, IoError> {
    let n = file.nodes;
    if let Some(names) = &file.names {
        if names.len() != n {
            return Err(invalid(
                "names",
                format!("expected {n} labels, got {}", names.len()),
            ));
        }
    }
    let mut edges = Vec::with_capacity(file.edges.len());
    for (index, (u, v, cost)) in file.edges.iter().enumerate() {
        let cost = parse_cost(cost).map_err(|source| IoError::EdgeCost { index, source })?;
        edges.push((*u, *v, cost));
    }
    let graph = Multigraph::new(n, edges).map_err(|e| invalid("edges", e))?;
    let spec = spec_from_json(&file.family, n)?;
    spec.validate(n).map_err(|e| invalid("family", e))?;
    Ok(Instance {
        graph,
        spec,
        names: file.names.clone(),
    })
}

pub fn instance_to_file(instance: &Instance) -> InstanceFile {
    InstanceFile {
        nodes: instance.graph.n(),
        names: instance.names.clone(),
        edges: instance
            .graph
            .edges()
            .iter()
            .map(|e| (e.u, e.v, format_cost(&e.cost)))
            .collect(),
        family: spec_to_json(&instance.spec),
    }
}

pub fn load_instance(path: &Path) -> Result<Instance, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_validate_and_round_trip() {
        let text = r#"{
            "nodes": 3,
            "names": ["s", "a", "t"],
            "edges": [[0, 1, "1"], [1, 2, "1"], [0, 2, "3"]],
            "family": { "st_path": { "s": 0, "t": 2 } }
        }"#;
        let instance = parse_instance(text).unwrap();
        assert_eq!(instance.graph.n(), 3);
        assert_eq!(instance.spec, FamilySpec::StPath { s: 0, t: 2 });
        assert_eq!(instance.label(1), "a");

        let file = instance_to_file(&instance);
        let json = serde_json::to_string_pretty(&file).unwrap();
        let again = parse_instance(&json).unwrap();
        assert_eq!(instance, again);
    }

    #[test]
    fn rejects_bad_instances() {
        let loop_edge = r#"{"nodes": 2, "edges": [[0, 0, "1"]], "family": {"kcf": {"k": 2}}}"#;
        assert!(matches!(
            parse_instance(loop_edge),
            Err(IoError::Invalid { .. })
        ));

        let bad_cost = r#"{"nodes": 2, "edges": [[0, 1, "x"]], "family": {"kcf": {"k": 2}}}"#;
        assert!(matches!(
            parse_instance(bad_cost),
            Err(IoError::EdgeCost { index: 0, .. })
        ));

        let neg_cost = r#"{"nodes": 2, "edges": [[0, 1, "-1"]], "family": {"kcf": {"k": 2}}}"#;
        assert!(matches!(
            parse_instance(neg_cost),
            Err(IoError::EdgeCost { .. })
        ));

        let bad_family =
            r#"{"nodes": 4, "edges": [], "family": {"t_join": {"terminals": [0, 1, 2]}}}"#;
        assert!(matches!(
            parse_instance(bad_family),
            Err(IoError::Invalid { .. })
        ));

        let out_of_range =
            r#"{"nodes": 2, "edges": [], "family": {"explicit": {"members": [[5]]}}}"#;
        assert!(matches!(
            parse_instance(out_of_range),
            Err(IoError::Invalid { .. })
        ));

        let syntax = "{not json";
        assert!(matches!(parse_instance(syntax), Err(IoError::Json(_))));
    }

    #[test]
    fn union_and_sna_specs_round_trip() {
        let text = r#"{
            "nodes": 4,
            "edges": [[0, 2, "1"], [2, 1, "2.5"], [0, 1, "7/2"]],
            "family": { "union": { "specs": [
                { "st_path": { "s": 0, "t": 1 } },
                { "sna": { "base_edges": [[0, 1], [2, 3]], "demands": [[0, 2]] } }
            ] } }
        }"#;
        let instance = parse_instance(text).unwrap();
        let file = instance_to_file(&instance);
        // exact costs survive: 2.5 canonicalizes to 5/2
        assert_eq!(file.edges[1].2, "5/2");
        let again = parse_instance(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(instance, again);
    }
}
