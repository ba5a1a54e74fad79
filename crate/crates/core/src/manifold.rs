//! Branched 1-manifolds as directed graphs with two gates at every vertex.
//!
//! Each edge contributes a `start` half-edge at its initial vertex and an
//! `end` half-edge at its terminal vertex. The half-edges at a vertex are
//! split into exactly two gates; a path through the vertex is smooth (legal)
//! when it arrives through one gate and leaves through the other.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

/// Which end of an edge a half-edge sits at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Start,
    End,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::Start => End::End,
            End::End => End::Start,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            End::Start => "start",
            End::End => "end",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdge {
    pub edge: EdgeId,
    pub end: End,
}

impl HalfEdge {
    pub fn start(edge: EdgeId) -> Self {
        HalfEdge { edge, end: End::Start }
    }

    pub fn end(edge: EdgeId) -> Self {
        HalfEdge { edge, end: End::End }
    }
}

/// Gate index at a vertex, always 0 or 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gate(pub u8);

impl Gate {
    pub fn other(self) -> Gate {
        Gate(1 - self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub from: VertexId,
    pub to: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge name `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("vertex `{0}` has no gate declaration")]
    MissingGates(String),
    #[error("vertex `{0}` has gates declared twice")]
    DuplicateGates(String),
    #[error("vertex `{vertex}` has an empty gate")]
    EmptyGate { vertex: String },
    #[error("half-edge `{half_edge}` is not incident to vertex `{vertex}`")]
    NotIncident { vertex: String, half_edge: String },
    #[error("half-edge `{0}` appears in more than one gate")]
    RepeatedHalfEdge(String),
    #[error("half-edge `{0}` is not assigned to a gate")]
    UnassignedHalfEdge(String),
    #[error("the graph is not connected")]
    Disconnected,
    #[error("the graph has no vertices")]
    Empty,
}

/// A connected graph with a two-gate smoothing at every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchedManifold {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    /// Gate of the `start` and `end` half-edge of each edge.
    half_edge_gates: Vec<[Gate; 2]>,
}

impl BranchedManifold {
    pub fn builder() -> ManifoldBuilder {
        ManifoldBuilder::default()
    }

    /// The type I barbell: loops `names[0]` at `u` and `names[1]` at `v`,
    /// joined by the arc `names[2]` from `u` to `v`. Gates are
    /// `{loop0.start, loop0.end} | {arc.start}` at `u` and
    /// `{loop1.start, loop1.end} | {arc.end}` at `v`.
    pub fn barbell(names: [&str; 3]) -> Self {
        let [a, b, arc] = names;
        let mut builder = Self::builder();
        builder.vertex("u").vertex("v");
        builder.edge(a, "u", "u").edge(b, "v", "v").edge(arc, "u", "v");
        builder
            .gates_by_name("u", &[(a, End::Start), (a, End::End)], &[(arc, End::Start)])
            .expect("fresh vertex");
        builder
            .gates_by_name("v", &[(b, End::Start), (b, End::End)], &[(arc, End::End)])
            .expect("fresh vertex");
        builder.build().expect("barbell is a valid branched manifold")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name).map(VertexId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    /// Vertex a half-edge is attached to.
    pub fn vertex_of(&self, h: HalfEdge) -> VertexId {
        let edge = &self.edges[h.edge.0];
        match h.end {
            End::Start => edge.from,
            End::End => edge.to,
        }
    }

    pub fn gate_of(&self, h: HalfEdge) -> Gate {
        let gates = self.half_edge_gates[h.edge.0];
        match h.end {
            End::Start => gates[0],
            End::End => gates[1],
        }
    }

    /// Half-edges at `v` in a given gate, in edge order.
    pub fn gate_members(&self, v: VertexId, gate: Gate) -> Vec<HalfEdge> {
        self.half_edges_at(v)
            .into_iter()
            .filter(|h| self.gate_of(*h) == gate)
            .collect()
    }

    pub fn half_edges_at(&self, v: VertexId) -> Vec<HalfEdge> {
        let mut out = Vec::new();
        for (i, edge) in self.edges.iter().enumerate() {
            if edge.from == v {
                out.push(HalfEdge::start(EdgeId(i)));
            }
            if edge.to == v {
                out.push(HalfEdge::end(EdgeId(i)));
            }
        }
        out
    }

    pub fn half_edge_name(&self, h: HalfEdge) -> String {
        format!("{}.{}", self.edge_name(h.edge), h.end.as_str())
    }

    /// First Betti number `|E| - |V| + components`.
    pub fn genus(&self) -> usize {
        let components = self.component_count();
        self.edges.len() + components - self.vertices.len()
    }

    fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = self.vertices.len();
        for edge in &self.edges {
            let a = find(&mut parent, edge.from.0);
            let b = find(&mut parent, edge.to.0);
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        components
    }

    /// Vertices with a gate holding at least two half-edges.
    pub fn branch_set(&self) -> Vec<VertexId> {
        self.vertex_ids()
            .filter(|&v| {
                [Gate(0), Gate(1)]
                    .iter()
                    .any(|&g| self.gate_members(v, g).len() >= 2)
            })
            .collect()
    }

    /// Same manifold with vertices and edges relabelled by the given
    /// permutations (`perm[old] = new`).
    pub fn relabel(&self, vertex_perm: &[usize], edge_perm: &[usize]) -> Self {
        let mut vertices = vec![String::new(); self.vertices.len()];
        for (old, name) in self.vertices.iter().enumerate() {
            vertices[vertex_perm[old]] = name.clone();
        }
        let mut edges = vec![
            Edge { name: String::new(), from: VertexId(0), to: VertexId(0) };
            self.edges.len()
        ];
        let mut half_edge_gates = vec![[Gate(0), Gate(0)]; self.edges.len()];
        for (old, edge) in self.edges.iter().enumerate() {
            edges[edge_perm[old]] = Edge {
                name: edge.name.clone(),
                from: VertexId(vertex_perm[edge.from.0]),
                to: VertexId(vertex_perm[edge.to.0]),
            };
            half_edge_gates[edge_perm[old]] = self.half_edge_gates[old];
        }
        BranchedManifold { vertices, edges, half_edge_gates }
    }
}

impl fmt::Display for BranchedManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            writeln!(f, "vertex {v}")?;
        }
        for e in &self.edges {
            writeln!(
                f,
                "edge {} {} {}",
                e.name, self.vertices[e.from.0], self.vertices[e.to.0]
            )?;
        }
        for v in self.vertex_ids() {
            let side = |g| {
                self.gate_members(v, g)
                    .into_iter()
                    .map(|h| self.half_edge_name(h))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            writeln!(
                f,
                "gate {} : {} | {}",
                self.vertex_name(v),
                side(Gate(0)),
                side(Gate(1))
            )?;
        }
        Ok(())
    }
}

#[derive(Default, Debug, Clone)]
pub struct ManifoldBuilder {
    vertices: Vec<String>,
    edges: Vec<(String, String, String)>,
    gates: HashMap<String, (Vec<(String, End)>, Vec<(String, End)>)>,
    errors: Vec<ManifoldError>,
}

impl ManifoldBuilder {
    pub fn vertex(&mut self, name: &str) -> &mut Self {
        if self.vertices.iter().any(|v| v == name) {
            self.errors.push(ManifoldError::DuplicateVertex(name.to_string()));
        } else {
            self.vertices.push(name.to_string());
        }
        self
    }

    pub fn edge(&mut self, name: &str, from: &str, to: &str) -> &mut Self {
        if self.edges.iter().any(|e| e.0 == name) {
            self.errors.push(ManifoldError::DuplicateEdge(name.to_string()));
        } else {
            self.edges.push((name.to_string(), from.to_string(), to.to_string()));
        }
        self
    }

    pub fn gates_by_name(
        &mut self,
        vertex: &str,
        first: &[(&str, End)],
        second: &[(&str, End)],
    ) -> Result<&mut Self, ManifoldError> {
        if self.gates.contains_key(vertex) {
            return Err(ManifoldError::DuplicateGates(vertex.to_string()));
        }
        let own = |side: &[(&str, End)]| side.iter().map(|(e, end)| (e.to_string(), *end)).collect();
        self.gates.insert(vertex.to_string(), (own(first), own(second)));
        Ok(self)
    }

    pub fn build(&self) -> Result<BranchedManifold, ManifoldError> {
        if let Some(err) = self.errors.first() {
            return Err(err.clone());
        }
        if self.vertices.is_empty() {
            return Err(ManifoldError::Empty);
        }
        let lookup = |name: &str| {
            self.vertices
                .iter()
                .position(|v| v == name)
                .map(VertexId)
                .ok_or_else(|| ManifoldError::UnknownVertex(name.to_string()))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for (name, from, to) in &self.edges {
            edges.push(Edge { name: name.clone(), from: lookup(from)?, to: lookup(to)? });
        }
        let edge_index = |name: &str| {
            edges
                .iter()
                .position(|e| e.name == name)
                .ok_or_else(|| ManifoldError::UnknownEdge(name.to_string()))
        };
        for vertex in self.gates.keys() {
            lookup(vertex)?;
        }

        let mut assigned: Vec<[Option<Gate>; 2]> = vec![[None, None]; edges.len()];
        for (vi, vname) in self.vertices.iter().enumerate() {
            let (first, second) = self
                .gates
                .get(vname)
                .ok_or_else(|| ManifoldError::MissingGates(vname.clone()))?;
            if first.is_empty() || second.is_empty() {
                return Err(ManifoldError::EmptyGate { vertex: vname.clone() });
            }
            for (gate, side) in [(Gate(0), first), (Gate(1), second)] {
                for (ename, end) in side {
                    let ei = edge_index(ename)?;
                    let edge = &edges[ei];
                    let at = match end {
                        End::Start => edge.from,
                        End::End => edge.to,
                    };
                    let label = format!("{}.{}", ename, end.as_str());
                    if at.0 != vi {
                        return Err(ManifoldError::NotIncident { vertex: vname.clone(), half_edge: label });
                    }
                    let slot = &mut assigned[ei][matches!(end, End::End) as usize];
                    if slot.is_some() {
                        return Err(ManifoldError::RepeatedHalfEdge(label));
                    }
                    *slot = Some(gate);
                }
            }
        }
        let mut half_edge_gates = Vec::with_capacity(edges.len());
        for (edge, slots) in edges.iter().zip(&assigned) {
            let mut pair = [Gate(0); 2];
            for (k, slot) in slots.iter().enumerate() {
                pair[k] = slot.ok_or_else(|| {
                    let end = if k == 0 { "start" } else { "end" };
                    ManifoldError::UnassignedHalfEdge(format!("{}.{}", edge.name, end))
                })?;
            }
            half_edge_gates.push(pair);
        }
        let manifold = BranchedManifold { vertices: self.vertices.clone(), edges, half_edge_gates };
        if manifold.component_count() != 1 {
            return Err(ManifoldError::Disconnected);
        }
        Ok(manifold)
    }
}
