//! Immutable metric-graph model.
//!
//! Directed-edge layout used by every matrix in the crate: bond number `b`
//! (bonds in declaration order) owns indices `2b` (the `+` direction, towards
//! increasing coordinate) and `2b + 1` (the `-` direction). Leads follow
//! after all directed bonds, in declaration order.
//!
//! Each vertex keeps an ordered list of ports (edge ends). The port order is
//! the row/column order of that vertex's matching matrices: edges in
//! declaration order, tail end (`x = 0`) before head end (`x = length`).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum End {
    /// The `x = 0` end. Leads only have this end.
    Tail,
    /// The `x = length` end.
    Head,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Port {
    pub edge: EdgeId,
    pub end: End,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeLength {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EdgeKind {
    Bond {
        tail: VertexId,
        head: VertexId,
        length: f64,
    },
    Lead {
        vertex: VertexId,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub name: String,
    pub kind: EdgeKind,
}

impl EdgeRecord {
    pub fn is_lead(&self) -> bool {
        matches!(self.kind, EdgeKind::Lead { .. })
    }

    pub fn length(&self) -> EdgeLength {
        match self.kind {
            EdgeKind::Bond { length, .. } => EdgeLength::Finite(length),
            EdgeKind::Lead { .. } => EdgeLength::Infinite,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexRecord {
    pub name: String,
    pub ports: Vec<Port>,
}

impl VertexRecord {
    pub fn degree(&self) -> usize {
        self.ports.len()
    }
}

/// Structural description from which a [`MetricGraph`] is built.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSpec {
    pub name: String,
    /// `[tail, head]` for a bond, `[vertex]` for a lead.
    pub endpoints: Vec<String>,
    pub length: EdgeLength,
}

impl GraphSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, name: &str) -> Self {
        self.vertices.push(name.to_string());
        self
    }

    pub fn bond(mut self, name: &str, tail: &str, head: &str, length: f64) -> Self {
        self.edges.push(EdgeSpec {
            name: name.to_string(),
            endpoints: vec![tail.to_string(), head.to_string()],
            length: EdgeLength::Finite(length),
        });
        self
    }

    pub fn lead(mut self, name: &str, vertex: &str) -> Self {
        self.edges.push(EdgeSpec {
            name: name.to_string(),
            endpoints: vec![vertex.to_string()],
            length: EdgeLength::Infinite,
        });
        self
    }

    pub fn build(&self) -> Result<MetricGraph> {
        MetricGraph::build(self)
    }
}

/// A point `(edge, coordinate)` on the graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphPoint {
    pub edge: EdgeId,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
    bonds: Vec<EdgeId>,
    leads: Vec<EdgeId>,
    /// Position of each edge inside `bonds` or `leads`.
    slot: Vec<usize>,
}

impl MetricGraph {
    pub fn build(spec: &GraphSpec) -> Result<Self> {
        let mut vertex_ids = HashMap::new();
        for (i, name) in spec.vertices.iter().enumerate() {
            if vertex_ids.insert(name.as_str(), VertexId(i)).is_some() {
                return Err(Error::DuplicateId(name.clone()));
            }
        }
        let mut seen = HashMap::new();
        let mut edges = Vec::with_capacity(spec.edges.len());
        for e in &spec.edges {
            if seen.insert(e.name.as_str(), ()).is_some() || vertex_ids.contains_key(e.name.as_str())
            {
                return Err(Error::DuplicateId(e.name.clone()));
            }
            let lookup = |v: &String| {
                vertex_ids.get(v.as_str()).copied().ok_or_else(|| Error::UnknownVertex {
                    edge: e.name.clone(),
                    vertex: v.clone(),
                })
            };
            let kind = match e.length {
                EdgeLength::Infinite => {
                    if e.endpoints.len() != 1 {
                        return Err(Error::InvalidEndpoints {
                            edge: e.name.clone(),
                            reason: format!(
                                "a lead needs exactly one endpoint, got {}",
                                e.endpoints.len()
                            ),
                        });
                    }
                    EdgeKind::Lead {
                        vertex: lookup(&e.endpoints[0])?,
                    }
                }
                EdgeLength::Finite(length) => {
                    if !(length.is_finite() && length > 0.0) {
                        return Err(Error::InvalidLength {
                            edge: e.name.clone(),
                            length,
                        });
                    }
                    if e.endpoints.len() != 2 {
                        return Err(Error::InvalidEndpoints {
                            edge: e.name.clone(),
                            reason: format!(
                                "a bond needs exactly two endpoints, got {}",
                                e.endpoints.len()
                            ),
                        });
                    }
                    EdgeKind::Bond {
                        tail: lookup(&e.endpoints[0])?,
                        head: lookup(&e.endpoints[1])?,
                        length,
                    }
                }
            };
            edges.push(EdgeRecord {
                name: e.name.clone(),
                kind,
            });
        }

        let mut vertices: Vec<VertexRecord> = spec
            .vertices
            .iter()
            .map(|name| VertexRecord {
                name: name.clone(),
                ports: Vec::new(),
            })
            .collect();
        for (i, e) in edges.iter().enumerate() {
            let edge = EdgeId(i);
            match e.kind {
                EdgeKind::Bond { tail, head, .. } => {
                    vertices[tail.0].ports.push(Port { edge, end: End::Tail });
                    vertices[head.0].ports.push(Port { edge, end: End::Head });
                }
                EdgeKind::Lead { vertex } => {
                    vertices[vertex.0].ports.push(Port { edge, end: End::Tail });
                }
            }
        }
        Ok(Self::from_parts(vertices, edges))
    }

    /// Assemble from records whose ports are already ordered. Callers must
    /// keep the port lists consistent with the edge records.
    pub(crate) fn from_parts(vertices: Vec<VertexRecord>, edges: Vec<EdgeRecord>) -> Self {
        let mut bonds = Vec::new();
        let mut leads = Vec::new();
        let mut slot = vec![0; edges.len()];
        for (i, e) in edges.iter().enumerate() {
            if e.is_lead() {
                slot[i] = leads.len();
                leads.push(EdgeId(i));
            } else {
                slot[i] = bonds.len();
                bonds.push(EdgeId(i));
            }
        }
        Self {
            vertices,
            edges,
            bonds,
            leads,
            slot,
        }
    }

    pub fn vertices(&self) -> &[VertexRecord] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &EdgeRecord {
        &self.edges[id.0]
    }

    pub fn vertex(&self, id: VertexId) -> &VertexRecord {
        &self.vertices[id.0]
    }

    pub fn bonds(&self) -> &[EdgeId] {
        &self.bonds
    }

    pub fn leads(&self) -> &[EdgeId] {
        &self.leads
    }

    pub fn n_bonds(&self) -> usize {
        self.bonds.len()
    }

    pub fn n_leads(&self) -> usize {
        self.leads.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Number of directed bonds, `2 N_B`.
    pub fn n_directed(&self) -> usize {
        2 * self.bonds.len()
    }

    /// Dimension of the full quantum map, `2 N_B + N_L`.
    pub fn dim(&self) -> usize {
        2 * self.bonds.len() + self.leads.len()
    }

    pub fn is_compact(&self) -> bool {
        self.leads.is_empty()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vertices[v.0].degree()
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .map(EdgeId)
            .ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.name == name).map(VertexId)
    }

    pub fn bond_length(&self, e: EdgeId) -> Option<f64> {
        match self.edges[e.0].kind {
            EdgeKind::Bond { length, .. } => Some(length),
            EdgeKind::Lead { .. } => None,
        }
    }

    /// Index of a directed bond in the quantum-map layout.
    pub fn directed(&self, e: EdgeId, dir: Direction) -> Option<usize> {
        if self.edges[e.0].is_lead() {
            return None;
        }
        let b = self.slot[e.0];
        Some(match dir {
            Direction::Plus => 2 * b,
            Direction::Minus => 2 * b + 1,
        })
    }

    /// Index of a lead in the quantum-map layout (after all directed bonds).
    pub fn lead_index(&self, e: EdgeId) -> Option<usize> {
        if self.edges[e.0].is_lead() {
            Some(self.n_directed() + self.slot[e.0])
        } else {
            None
        }
    }

    /// Position of a lead within the lead block (`0..N_L`).
    pub fn lead_slot(&self, e: EdgeId) -> Option<usize> {
        self.edges[e.0].is_lead().then(|| self.slot[e.0])
    }

    /// Index of the amplitude arriving at the vertex through this port.
    pub fn incoming_index(&self, port: Port) -> usize {
        match (self.lead_index(port.edge), port.end) {
            (Some(l), _) => l,
            (None, End::Head) => self.directed(port.edge, Direction::Plus).unwrap(),
            (None, End::Tail) => self.directed(port.edge, Direction::Minus).unwrap(),
        }
    }

    /// Index of the amplitude leaving the vertex through this port.
    pub fn outgoing_index(&self, port: Port) -> usize {
        match (self.lead_index(port.edge), port.end) {
            (Some(l), _) => l,
            (None, End::Tail) => self.directed(port.edge, Direction::Plus).unwrap(),
            (None, End::Head) => self.directed(port.edge, Direction::Minus).unwrap(),
        }
    }

    /// Bond lengths over the directed bonds (each length twice).
    pub fn directed_lengths(&self) -> Vec<f64> {
        self.bonds
            .iter()
            .flat_map(|&e| {
                let l = self.bond_length(e).unwrap();
                [l, l]
            })
            .collect()
    }

    /// Diagonal length matrix `L` and direction-swap permutation `Pi`, both
    /// over the directed bonds.
    pub fn length_and_permutation(&self) -> (CMatrix, CMatrix) {
        let n = self.n_directed();
        let lengths = self.directed_lengths();
        let l = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::from(lengths[i])
            } else {
                C64::from(0.0)
            }
        });
        let pi = CMatrix::from_fn(n, n, |i, j| {
            if i ^ 1 == j {
                C64::from(1.0)
            } else {
                C64::from(0.0)
            }
        });
        (l, pi)
    }

    pub fn total_length(&self) -> f64 {
        self.bonds.iter().map(|&e| self.bond_length(e).unwrap()).sum()
    }

    pub fn min_length(&self) -> Option<f64> {
        self.bonds
            .iter()
            .map(|&e| self.bond_length(e).unwrap())
            .reduce(f64::min)
    }

    /// Check that a point lies on its edge.
    pub fn locate(&self, point: GraphPoint) -> Result<GraphPoint> {
        let edge = self
            .edges
            .get(point.edge.0)
            .ok_or_else(|| Error::UnknownEdge(format!("#{}", point.edge.0)))?;
        let max = match edge.kind {
            EdgeKind::Bond { length, .. } => length,
            EdgeKind::Lead { .. } => f64::INFINITY,
        };
        if !(point.x >= 0.0 && point.x <= max) {
            return Err(Error::CoordinateOutOfRange {
                edge: edge.name.clone(),
                x: point.x,
                max,
            });
        }
        Ok(point)
    }

    /// Named-edge convenience around [`MetricGraph::locate`].
    pub fn point(&self, edge: &str, x: f64) -> Result<GraphPoint> {
        let edge = self.edge_id(edge)?;
        self.locate(GraphPoint { edge, x })
    }

    /// Remove bond `cut` and attach two leads in its place: `T` at the tail
    /// vertex and `H` at the head vertex, each taking over the port slot of
    /// the end it replaces. Returns the new graph together with the ids of
    /// the `T` and `H` leads. Edge ids after `cut` shift down by one.
    pub fn cut_bond(&self, cut: EdgeId) -> Result<(MetricGraph, EdgeId, EdgeId)> {
        let (tail, head) = match self.edges.get(cut.0).map(|e| &e.kind) {
            Some(EdgeKind::Bond { tail, head, .. }) => (*tail, *head),
            Some(EdgeKind::Lead { .. }) => return Err(Error::NotABond(self.edges[cut.0].name.clone())),
            None => return Err(Error::UnknownEdge(format!("#{}", cut.0))),
        };
        let remap = |e: EdgeId| if e.0 > cut.0 { EdgeId(e.0 - 1) } else { e };
        let mut edges: Vec<EdgeRecord> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != cut.0)
            .map(|(_, e)| e.clone())
            .collect();
        let t_id = EdgeId(edges.len());
        let h_id = EdgeId(edges.len() + 1);
        let base = &self.edges[cut.0].name;
        edges.push(EdgeRecord {
            name: format!("{base}#T"),
            kind: EdgeKind::Lead { vertex: tail },
        });
        edges.push(EdgeRecord {
            name: format!("{base}#H"),
            kind: EdgeKind::Lead { vertex: head },
        });
        let vertices = self
            .vertices
            .iter()
            .map(|v| VertexRecord {
                name: v.name.clone(),
                ports: v
                    .ports
                    .iter()
                    .map(|p| {
                        if p.edge == cut {
                            let edge = if p.end == End::Tail { t_id } else { h_id };
                            Port { edge, end: End::Tail }
                        } else {
                            Port {
                                edge: remap(p.edge),
                                end: p.end,
                            }
                        }
                    })
                    .collect(),
            })
            .collect();
        Ok((MetricGraph::from_parts(vertices, edges), t_id, h_id))
    }

    /// Replace every lead by a bond of length `length` ending in a new
    /// degree-one vertex. Edge ids are preserved; the new vertices are
    /// appended in lead order and returned.
    pub fn truncate_leads(&self, length: f64) -> Result<(MetricGraph, Vec<VertexId>)> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "truncation length must be positive, got {length}"
            )));
        }
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        let mut dangling = Vec::new();
        for &lead in &self.leads {
            let vertex = match edges[lead.0].kind {
                EdgeKind::Lead { vertex } => vertex,
                _ => unreachable!(),
            };
            let new_v = VertexId(vertices.len());
            vertices.push(VertexRecord {
                name: format!("{}#end", edges[lead.0].name),
                ports: vec![Port {
                    edge: lead,
                    end: End::Head,
                }],
            });
            edges[lead.0].kind = EdgeKind::Bond {
                tail: vertex,
                head: new_v,
                length,
            };
            dangling.push(new_v);
        }
        Ok((MetricGraph::from_parts(vertices, edges), dangling))
    }
}
