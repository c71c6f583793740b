//! JSON graph description files.
//!
//! ```json
//! {
//!   "name": "lasso",
//!   "vertices": [{ "id": "v1", "condition": { "type": "neumann_kirchhoff" } }],
//!   "edges": [
//!     { "id": "e1", "endpoints": ["v1"], "length": "lead" },
//!     { "id": "e2", "endpoints": ["v1", "v1"], "length": 1.0 }
//!   ],
//!   "metadata": {}
//! }
//! ```
//!
//! Conditions are `neumann_kirchhoff`, `dirichlet`, `general` (with `a` and
//! `b` matrices) or `constant` (with a prescribed unitary `matrix`). Complex
//! entries are `[re, im]` pairs; matrices are lists of rows.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeKind, EdgeLength, EdgeSpec, GraphSpec, MetricGraph};
use crate::linalg::{CMatrix, C64};
use crate::qmap::QuantumGraph;
use crate::vertex::VertexCondition;

pub type ComplexEntry = [f64; 2];
pub type MatrixEntry = Vec<Vec<ComplexEntry>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub metadata: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: String,
    #[serde(default = "default_condition")]
    pub condition: ConditionEntry,
}

fn default_condition() -> ConditionEntry {
    ConditionEntry::NeumannKirchhoff
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConditionEntry {
    NeumannKirchhoff,
    Dirichlet,
    General { a: MatrixEntry, b: MatrixEntry },
    Constant { matrix: MatrixEntry },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub id: String,
    pub endpoints: Vec<String>,
    pub length: LengthEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LengthEntry {
    Finite(f64),
    Marker(String),
}

fn matrix_from_entry(m: &MatrixEntry, what: &str, vertex: &str) -> Result<CMatrix> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) || (rows != cols) {
        return Err(Error::InvalidCondition {
            vertex: vertex.to_string(),
            reason: format!("{what} must be a square list of rows"),
        });
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| C64::new(m[i][j][0], m[i][j][1])))
}

fn matrix_to_entry(m: &CMatrix) -> MatrixEntry {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl GraphFile {
    pub fn to_quantum_graph(&self) -> Result<QuantumGraph> {
        let mut spec = GraphSpec::new();
        for v in &self.vertices {
            spec = spec.vertex(&v.id);
        }
        for e in &self.edges {
            let length = match &e.length {
                LengthEntry::Finite(l) => EdgeLength::Finite(*l),
                LengthEntry::Marker(s) if s == "lead" => EdgeLength::Infinite,
                LengthEntry::Marker(s) => {
                    return Err(Error::Parse(format!(
                        "edge `{}`: length must be a number or \"lead\", got \"{s}\"",
                        e.id
                    )))
                }
            };
            spec.edges.push(EdgeSpec {
                name: e.id.clone(),
                endpoints: e.endpoints.clone(),
                length,
            });
        }
        let graph = MetricGraph::build(&spec)?;
        let conditions = self
            .vertices
            .iter()
            .map(|v| {
                Ok(match &v.condition {
                    ConditionEntry::NeumannKirchhoff => VertexCondition::NeumannKirchhoff,
                    ConditionEntry::Dirichlet => VertexCondition::Dirichlet,
                    ConditionEntry::General { a, b } => VertexCondition::General {
                        a: matrix_from_entry(a, "a", &v.id)?,
                        b: matrix_from_entry(b, "b", &v.id)?,
                    },
                    ConditionEntry::Constant { matrix } => {
                        VertexCondition::Constant(matrix_from_entry(matrix, "matrix", &v.id)?)
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        QuantumGraph::new(graph, conditions)
    }

    pub fn from_quantum_graph(q: &QuantumGraph, name: Option<&str>) -> Self {
        let g = q.graph();
        let vertices = g
            .vertices()
            .iter()
            .zip(q.conditions())
            .map(|(v, c)| VertexEntry {
                id: v.name.clone(),
                condition: match c {
                    VertexCondition::NeumannKirchhoff => ConditionEntry::NeumannKirchhoff,
                    VertexCondition::Dirichlet => ConditionEntry::Dirichlet,
                    VertexCondition::General { a, b } => ConditionEntry::General {
                        a: matrix_to_entry(a),
                        b: matrix_to_entry(b),
                    },
                    VertexCondition::Constant(m) => ConditionEntry::Constant {
                        matrix: matrix_to_entry(m),
                    },
                },
            })
            .collect();
        let edges = g
            .edges()
            .iter()
            .map(|e| match &e.kind {
                EdgeKind::Bond { tail, head, length } => EdgeEntry {
                    id: e.name.clone(),
                    endpoints: vec![g.vertex(*tail).name.clone(), g.vertex(*head).name.clone()],
                    length: LengthEntry::Finite(*length),
                },
                EdgeKind::Lead { vertex } => EdgeEntry {
                    id: e.name.clone(),
                    endpoints: vec![g.vertex(*vertex).name.clone()],
                    length: LengthEntry::Marker("lead".to_string()),
                },
            })
            .collect();
        GraphFile {
            name: name.map(str::to_string),
            vertices,
            edges,
            metadata: serde_json::Value::Null,
        }
    }
}

/// Parse and validate a graph description.
pub fn parse_graph_file(text: &str) -> Result<QuantumGraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_quantum_graph()
}

pub fn load_graph_file(path: impl AsRef<Path>) -> Result<QuantumGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_graph_file(&text)
}

/// Serialize a quantum graph. Floats are written in shortest round-trip form.
pub fn emit_graph_file(q: &QuantumGraph, name: Option<&str>) -> String {
    serde_json::to_string_pretty(&GraphFile::from_quantum_graph(q, name))
        .expect("graph files always serialize")
}
