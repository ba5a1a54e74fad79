//! Branched 1-manifolds, graph maps satisfying the Williams axioms, the
//! dynamics of their inverse limits, and the group theory of the induced
//! maps on fundamental groups.

pub mod dynamics;
pub mod export;
pub mod fixtures;
pub mod free_group;
pub mod graph_map;
pub mod heegaard;
pub mod group;
pub mod manifold;
pub mod mapfile;
pub mod matrix;
pub mod williams;
pub mod text;
pub mod word;

pub use graph_map::{transition_matrix, GraphMap, GraphMapError};
pub use manifold::{BranchedManifold, EdgeId, End, Gate, HalfEdge, ManifoldError, VertexId};
pub use matrix::{is_irreducible, pf_eigenvalue, TransitionMatrix};
pub use williams::{check_williams, WilliamsReport};
pub use word::{is_legal_path, EdgeWord, Letter};
