//! JSON encodings and DOT export.
//!
//! A partition is an array of arrays of element strings in canonical order,
//! e.g. `[["1","3"],["2"]]`; a behavior is an array of partitions. A
//! structure file is
//!
//! ```json
//! {
//!   "signature": [
//!     {"name":"kappa","in":3,"out":1,"behavior":[[["i1","i2","o1"],["i3"]]]}
//!   ],
//!   "vertices": [{"id":"a","label":"a"}, {"id":"k"}],
//!   "edges": [{"type":"kappa","inputs":["a","b","c"],"outputs":["k"]}]
//! }
//! ```
//!
//! The signature array lists only link types that are not resolvable from
//! their name alone; `ax`, `cut`, `tensor`, `par`, the `_N` arity families,
//! and `G(u,v)` / `Gd(u,v)` are reconstructed by name on load.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connectives::{girard_type_bounded, parse_girard_name, ConnectiveError};
use crate::hypergraph::{GraphError, Hypergraph, VertexId};
use crate::mstructure::{
    builtin_link, LinkType, MStructure, Signature, StructureError, Switching,
};
use crate::partitions::{Partition, PartitionError, PartitionSet};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Connective(#[from] ConnectiveError),
}

pub fn partition_to_value(p: &Partition) -> serde_json::Value {
    serde_json::json!(p
        .blocks()
        .iter()
        .map(|b| b.iter().map(|e| e.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

pub fn partition_from_value(v: &serde_json::Value) -> Result<Partition, JsonError> {
    let blocks: Vec<Vec<String>> = serde_json::from_value(v.clone())?;
    Ok(Partition::new(blocks)?)
}

pub fn partition_set_to_value(ps: &PartitionSet) -> serde_json::Value {
    serde_json::Value::Array(ps.iter().map(partition_to_value).collect())
}

pub fn partition_set_from_value(v: &serde_json::Value) -> Result<PartitionSet, JsonError> {
    let members: Vec<Vec<Vec<String>>> = serde_json::from_value(v.clone())?;
    let parts = members
        .into_iter()
        .map(Partition::new)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PartitionSet::new(parts)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct LinkTypeDto {
    name: String,
    #[serde(rename = "in")]
    n_in: usize,
    #[serde(rename = "out")]
    n_out: usize,
    behavior: Vec<Vec<Vec<String>>>,
}

pub fn link_type_to_value(t: &LinkType) -> serde_json::Value {
    let dto = LinkTypeDto {
        name: t.name.clone(),
        n_in: t.n_in,
        n_out: t.n_out,
        behavior: t
            .behavior()
            .iter()
            .map(|p| {
                p.blocks()
                    .iter()
                    .map(|b| b.iter().map(|e| e.to_string()).collect())
                    .collect()
            })
            .collect(),
    };
    serde_json::to_value(dto).expect("serializable")
}

pub fn link_type_from_value(v: &serde_json::Value) -> Result<LinkType, JsonError> {
    let dto: LinkTypeDto = serde_json::from_value(v.clone())?;
    let members = dto
        .behavior
        .into_iter()
        .map(Partition::new)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LinkType::new(dto.name, dto.n_in, dto.n_out, PartitionSet::new(members)?)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct VertexDto {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeDto {
    #[serde(rename = "type")]
    ty: String,
    inputs: Vec<String>,
    outputs: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct StructureDto {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    signature: Vec<LinkTypeDto>,
    vertices: Vec<VertexDto>,
    edges: Vec<EdgeDto>,
}

pub fn structure_to_value(s: &MStructure) -> serde_json::Value {
    let signature: Vec<serde_json::Value> = s
        .signature()
        .types()
        .filter(|t| builtin_link(&t.name).as_ref() != Some(*t))
        .map(link_type_to_value)
        .collect();
    let vertices: Vec<serde_json::Value> = s
        .graph()
        .labels()
        .iter()
        .map(|(id, label)| {
            serde_json::to_value(VertexDto { id: id.to_string(), label: label.clone() })
                .expect("serializable")
        })
        .collect();
    let edges: Vec<serde_json::Value> = s
        .graph()
        .edges()
        .iter()
        .map(|e| {
            serde_json::to_value(EdgeDto {
                ty: e.payload.clone(),
                inputs: e.inputs.iter().map(|v| v.to_string()).collect(),
                outputs: e.outputs.iter().map(|v| v.to_string()).collect(),
            })
            .expect("serializable")
        })
        .collect();
    serde_json::json!({
        "signature": signature,
        "vertices": vertices,
        "edges": edges,
    })
}

pub fn structure_to_string(s: &MStructure) -> String {
    serde_json::to_string_pretty(&structure_to_value(s)).expect("serializable")
}

/// Loads a structure; link names missing from the file's signature are
/// resolved as builtins or Girard connectives.
pub fn structure_from_value(v: &serde_json::Value) -> Result<MStructure, JsonError> {
    let dto: StructureDto = serde_json::from_value(v.clone())?;
    let mut signature = Signature::new();
    for t in dto.signature {
        let name = t.name.clone();
        signature
            .insert(link_type_from_value(&serde_json::to_value(t)?)?)
            .map_err(|_| StructureError::DuplicateLinkType(name))?;
    }
    for e in &dto.edges {
        if signature.get(&e.ty).is_none() && builtin_link(&e.ty).is_none() {
            if let Some((u, v, pol)) = parse_girard_name(&e.ty) {
                signature.register(girard_type_bounded(u, v, pol, 12)?.link);
            }
        }
    }
    let mut graph = Hypergraph::new();
    for vx in dto.vertices {
        graph.add_vertex(vx.id, vx.label.as_deref())?;
    }
    for e in dto.edges {
        graph.add_edge(
            e.ty,
            e.inputs.into_iter().map(VertexId::new).collect(),
            e.outputs.into_iter().map(VertexId::new).collect(),
        )?;
    }
    Ok(MStructure::new(graph, &signature)?)
}

pub fn structure_from_str(text: &str) -> Result<MStructure, JsonError> {
    structure_from_value(&serde_json::from_str(text)?)
}

/// A switching as a JSON array of per-edge assignments.
pub fn switching_to_value(s: &MStructure, sw: &Switching) -> serde_json::Value {
    let parts = s.assignments(sw).expect("switching covers the structure");
    serde_json::Value::Array(
        parts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                serde_json::json!({
                    "edge": i,
                    "type": s.graph().edges()[i].payload,
                    "partition": partition_to_value(p),
                })
            })
            .collect(),
    )
}

/// DOT export: vertices as ellipses, links as boxes; arcs run from input
/// vertices down into the box and from the box down to output vertices.
pub fn dot_export(s: &MStructure, name: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("digraph \"{}\" {{\n", name.replace('"', "'")));
    out.push_str("  rankdir=TB;\n");
    for (id, label) in s.graph().labels() {
        let text = match label {
            Some(l) if l != id.as_str() => format!("{id}\\n({l})"),
            _ => id.to_string(),
        };
        out.push_str(&format!("  \"v:{id}\" [shape=ellipse, label=\"{text}\"];\n"));
    }
    for (i, e) in s.graph().edges().iter().enumerate() {
        out.push_str(&format!(
            "  \"e{i}\" [shape=box, label=\"{}\"];\n",
            e.payload.replace('"', "'")
        ));
        for v in &e.inputs {
            out.push_str(&format!("  \"v:{v}\" -> \"e{i}\";\n"));
        }
        for v in &e.outputs {
            out.push_str(&format!("  \"e{i}\" -> \"v:{v}\";\n"));
        }
    }
    out.push_str("}\n");
    out
}
