//! Self-maps of branched 1-manifolds given by edge words.

use thiserror::Error;

use crate::manifold::{BranchedManifold, EdgeId, VertexId};
use crate::matrix::TransitionMatrix;
use crate::word::{EdgeWord, Letter, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphMapError {
    #[error("expected {expected} edge images, got {got}")]
    WrongImageCount { expected: usize, got: usize },
    #[error("image of `{edge}` is empty")]
    EmptyImage { edge: String },
    #[error("image of `{edge}` is not a path: letters {position} and {} do not meet", position + 1)]
    NotComposable { edge: String, position: usize },
    #[error(
        "vertex `{vertex}` would map to both `{first}` and `{second}` (image of `{edge}`)"
    )]
    InconsistentVertexImage { vertex: String, first: String, second: String, edge: String },
    #[error("image of `{edge}` runs {actual_from}->{actual_to}, expected {expected_from}->{expected_to}")]
    WrongEndpoints {
        edge: String,
        expected_from: String,
        expected_to: String,
        actual_from: String,
        actual_to: String,
    },
}

/// A graph self-map: a vertex map plus a nonempty edge path for every edge,
/// with each image running between the images of the edge's endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    domain: BranchedManifold,
    vertex_map: Vec<VertexId>,
    images: Vec<EdgeWord>,
}

impl GraphMap {
    /// Builds a map from edge images, inferring the vertex map from the
    /// endpoints of the image paths.
    pub fn new(domain: BranchedManifold, images: Vec<EdgeWord>) -> Result<Self, GraphMapError> {
        if images.len() != domain.edge_count() {
            return Err(GraphMapError::WrongImageCount {
                expected: domain.edge_count(),
                got: images.len(),
            });
        }
        let mut vertex_map: Vec<Option<VertexId>> = vec![None; domain.vertex_count()];
        for e in domain.edge_ids() {
            let (from, to) = image_endpoints(&domain, e, &images[e.0])?;
            let edge = domain.edge(e);
            for (v, image) in [(edge.from, from), (edge.to, to)] {
                match vertex_map[v.0] {
                    None => vertex_map[v.0] = Some(image),
                    Some(existing) if existing == image => {}
                    Some(existing) => {
                        return Err(GraphMapError::InconsistentVertexImage {
                            vertex: domain.vertex_name(v).to_string(),
                            first: domain.vertex_name(existing).to_string(),
                            second: domain.vertex_name(image).to_string(),
                            edge: domain.edge_name(e).to_string(),
                        })
                    }
                }
            }
        }
        // Every vertex carries two nonempty gates, so every vertex is hit.
        let vertex_map = vertex_map.into_iter().map(|v| v.expect("vertex has incident edges")).collect();
        Ok(GraphMap { domain, vertex_map, images })
    }

    /// Builds a map with an explicit vertex map and checks every image
    /// against it.
    pub fn with_vertex_map(
        domain: BranchedManifold,
        vertex_map: Vec<VertexId>,
        images: Vec<EdgeWord>,
    ) -> Result<Self, GraphMapError> {
        let g = GraphMap::new(domain, images)?;
        for e in g.domain.edge_ids() {
            let edge = g.domain.edge(e);
            let want = (vertex_map[edge.from.0], vertex_map[edge.to.0]);
            let got = (g.vertex_map[edge.from.0], g.vertex_map[edge.to.0]);
            if want != got {
                let name = |v: VertexId| g.domain.vertex_name(v).to_string();
                return Err(GraphMapError::WrongEndpoints {
                    edge: g.domain.edge_name(e).to_string(),
                    expected_from: name(want.0),
                    expected_to: name(want.1),
                    actual_from: name(got.0),
                    actual_to: name(got.1),
                });
            }
        }
        Ok(g)
    }

    /// Parses one image word per edge, in edge order.
    pub fn from_word_strs(domain: BranchedManifold, words: &[&str]) -> Result<Self, String> {
        let images = words
            .iter()
            .map(|w| EdgeWord::parse(&domain, w))
            .collect::<Result<Vec<_>, WordError>>()
            .map_err(|e| e.to_string())?;
        GraphMap::new(domain, images).map_err(|e| e.to_string())
    }

    pub fn identity(domain: BranchedManifold) -> Self {
        let images = domain.edge_ids().map(|e| EdgeWord::single(Letter::forward(e))).collect();
        GraphMap::new(domain, images).expect("identity is a graph map")
    }

    pub fn domain(&self) -> &BranchedManifold {
        &self.domain
    }

    pub fn vertex_image(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.0]
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.vertex_map
    }

    pub fn image(&self, e: EdgeId) -> &EdgeWord {
        &self.images[e.0]
    }

    pub fn images(&self) -> &[EdgeWord] {
        &self.images
    }

    /// Image of a path: concatenation of letter images, no reduction.
    pub fn apply(&self, w: &EdgeWord) -> EdgeWord {
        let mut out = Vec::new();
        for l in w.letters() {
            let image = &self.images[l.edge.0];
            if l.inverse {
                out.extend(image.letters().iter().rev().map(|x| x.inv()));
            } else {
                out.extend_from_slice(image.letters());
            }
        }
        EdgeWord::new(out)
    }

    /// `self ∘ other` on a shared domain.
    pub fn compose(&self, other: &GraphMap) -> GraphMap {
        let images = other.images.iter().map(|w| self.apply(w)).collect();
        GraphMap::new(self.domain.clone(), images).expect("composition of graph maps is a graph map")
    }

    pub fn transition_matrix(&self) -> TransitionMatrix {
        transition_matrix(self)
    }
}

fn image_endpoints(
    m: &BranchedManifold,
    e: EdgeId,
    w: &EdgeWord,
) -> Result<(VertexId, VertexId), GraphMapError> {
    w.endpoints(m).map_err(|err| match err {
        WordError::NotComposable { position } => GraphMapError::NotComposable {
            edge: m.edge_name(e).to_string(),
            position,
        },
        _ => GraphMapError::EmptyImage { edge: m.edge_name(e).to_string() },
    })
}

/// Unsigned letter counts: entry `(i, j)` is the number of times edge `j`
/// occurs in the image of edge `i`, edges in declaration order.
pub fn transition_matrix(g: &GraphMap) -> TransitionMatrix {
    TransitionMatrix::from_words(g.domain.edge_count(), &g.images)
}
