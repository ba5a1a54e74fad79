//! Small named maps used throughout the tests and the command-line demos.

use crate::graph_map::GraphMap;
use crate::manifold::{BranchedManifold, End};

/// Image words of the type I barbell map `K1 -> K3^-1 K1 K3`,
/// `K2 -> K3 K2 K3^-1`, `K3 -> K2 K3^-1 K1`.
pub const EXAMPLE_K_WORDS: [&str; 3] = ["K3^-1 K1 K3", "K3 K2 K3^-1", "K2 K3^-1 K1"];

/// Spine-map image words `J1, J2, J3` from the handlebody construction, as
/// printed. They have letter counts (1,1,1), (4,2,1), (3,1,2) but do not
/// form a graph map on any two-vertex graph: the image of `J3` uses the
/// arc `J1` an odd number of times yet must close up.
pub const PRINTED_SPINE_WORDS: [&str; 3] = [
    "J2 J1^-1 J3",
    "J1 J2 J1^-1 J3 J1 J2 J1^-1",
    "J1^-1 J3 J1 J2 J1^-1 J3",
];

pub fn barbell_k() -> BranchedManifold {
    BranchedManifold::barbell(["K1", "K2", "K3"])
}

pub fn example_k_map() -> GraphMap {
    GraphMap::from_word_strs(barbell_k(), &EXAMPLE_K_WORDS).expect("valid map")
}

/// Circle with one vertex `o` and one loop `e`, gates `{e.start} | {e.end}`.
pub fn circle() -> BranchedManifold {
    let mut b = BranchedManifold::builder();
    b.vertex("o").edge("e", "o", "o");
    b.gates_by_name("o", &[("e", End::Start)], &[("e", End::End)]).expect("fresh vertex");
    b.build().expect("valid circle")
}

pub fn doubling_map() -> GraphMap {
    GraphMap::from_word_strs(circle(), &["e e"]).expect("valid map")
}

/// Rose with loops `e1, e2` at `o`, gates `{e1.start, e2.start} | {e1.end, e2.end}`.
pub fn two_loop_rose() -> BranchedManifold {
    let mut b = BranchedManifold::builder();
    b.vertex("o").edge("e1", "o", "o").edge("e2", "o", "o");
    b.gates_by_name("o", &[("e1", End::Start), ("e2", End::Start)], &[("e1", End::End), ("e2", End::End)])
        .expect("fresh vertex");
    b.build().expect("valid rose")
}

pub fn identity_rose() -> GraphMap {
    GraphMap::identity(two_loop_rose())
}

/// `e1 -> e1 e1`, `e2 -> e2 e2`: expanding but block diagonal.
pub fn block_diagonal_rose() -> GraphMap {
    GraphMap::from_word_strs(two_loop_rose(), &["e1 e1", "e2 e2"]).expect("valid map")
}

/// Rose with loops `J1, J2, J3` at one vertex, gates
/// `{J1.start, J2.start, J2.end} | {J1.end, J3.start, J3.end}`.
pub fn three_loop_rose() -> BranchedManifold {
    let mut b = BranchedManifold::builder();
    b.vertex("w").edge("J1", "w", "w").edge("J2", "w", "w").edge("J3", "w", "w");
    b.gates_by_name(
        "w",
        &[("J1", End::Start), ("J2", End::Start), ("J2", End::End)],
        &[("J1", End::End), ("J3", End::Start), ("J3", End::End)],
    )
    .expect("fresh vertex");
    b.build().expect("valid rose")
}

/// The printed spine words read on a one-vertex rose, the only graph on
/// which they compose. All-positive transition matrix, irrational
/// eigenvalue `2 + 2√2`.
pub fn positive_three_edge_rose_map() -> GraphMap {
    GraphMap::from_word_strs(three_loop_rose(), &PRINTED_SPINE_WORDS).expect("valid map")
}
