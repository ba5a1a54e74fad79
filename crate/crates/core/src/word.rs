//! Edge paths written as words in signed edge letters.

use std::fmt;

use thiserror::Error;

use crate::manifold::{BranchedManifold, EdgeId, End, HalfEdge, VertexId};

/// An edge traversed forwards (`e`) or backwards (`e^-1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub edge: EdgeId,
    pub inverse: bool,
}

impl Letter {
    pub fn forward(edge: EdgeId) -> Self {
        Letter { edge, inverse: false }
    }

    pub fn backward(edge: EdgeId) -> Self {
        Letter { edge, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { edge: self.edge, inverse: !self.inverse }
    }

    /// Half-edge through which the letter leaves its source vertex.
    pub fn departing(self) -> HalfEdge {
        HalfEdge { edge: self.edge, end: if self.inverse { End::End } else { End::Start } }
    }

    /// Half-edge through which the letter enters its target vertex.
    pub fn arriving(self) -> HalfEdge {
        HalfEdge { edge: self.edge, end: if self.inverse { End::Start } else { End::End } }
    }

    pub fn source(self, m: &BranchedManifold) -> VertexId {
        m.vertex_of(self.departing())
    }

    pub fn target(self, m: &BranchedManifold) -> VertexId {
        m.vertex_of(self.arriving())
    }

    pub fn display(self, m: &BranchedManifold) -> String {
        if self.inverse {
            format!("{}^-1", m.edge_name(self.edge))
        } else {
            m.edge_name(self.edge).to_string()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("empty word has no endpoints")]
    Empty,
    #[error("letters {position} and {} are not composable", position + 1)]
    NotComposable { position: usize },
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("malformed letter `{0}`")]
    BadLetter(String),
}

/// A turn inside a path: arrival through one half-edge, departure through
/// another, at the same vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Turn {
    /// Index of the letter the turn follows.
    pub position: usize,
    pub arriving: HalfEdge,
    pub departing: HalfEdge,
}

impl Turn {
    pub fn describe(&self, m: &BranchedManifold) -> String {
        format!(
            "{} -> {} at {} (after letter {})",
            m.half_edge_name(self.arriving),
            m.half_edge_name(self.departing),
            m.vertex_name(m.vertex_of(self.arriving)),
            self.position + 1
        )
    }
}

/// A word in signed edge letters. Composability is a property checked
/// against a manifold, not an invariant of the type.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeWord(pub Vec<Letter>);

impl EdgeWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        EdgeWord(letters)
    }

    pub fn empty() -> Self {
        EdgeWord(Vec::new())
    }

    pub fn single(letter: Letter) -> Self {
        EdgeWord(vec![letter])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        EdgeWord(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &EdgeWord) -> Self {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        EdgeWord(letters)
    }

    /// Parses space-separated letters such as `K1 K3^-1`.
    pub fn parse(m: &BranchedManifold, text: &str) -> Result<Self, WordError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let (name, inverse) = match token.split_once('^') {
                None => (token, false),
                Some((name, "-1")) => (name, true),
                Some((name, "1")) => (name, false),
                Some(_) => return Err(WordError::BadLetter(token.to_string())),
            };
            let edge = m
                .edge_by_name(name)
                .ok_or_else(|| WordError::UnknownEdge(name.to_string()))?;
            letters.push(Letter { edge, inverse });
        }
        Ok(EdgeWord(letters))
    }

    /// Checks composability and returns `(initial, terminal)` vertices.
    pub fn endpoints(&self, m: &BranchedManifold) -> Result<(VertexId, VertexId), WordError> {
        let first = self.0.first().ok_or(WordError::Empty)?;
        for (i, pair) in self.0.windows(2).enumerate() {
            if pair[0].target(m) != pair[1].source(m) {
                return Err(WordError::NotComposable { position: i + 1 });
            }
        }
        let last = self.0.last().expect("nonempty");
        Ok((first.source(m), last.target(m)))
    }

    pub fn turns(&self) -> impl Iterator<Item = Turn> + '_ {
        self.0.windows(2).enumerate().map(|(i, pair)| Turn {
            position: i,
            arriving: pair[0].arriving(),
            departing: pair[1].departing(),
        })
    }

    /// First turn that stays inside one gate, if any.
    pub fn first_illegal_turn(&self, m: &BranchedManifold) -> Option<Turn> {
        self.turns().find(|t| m.gate_of(t.arriving) == m.gate_of(t.departing))
    }

    /// A composable path is legal when every interior turn crosses gates.
    pub fn is_legal(&self, m: &BranchedManifold) -> bool {
        self.first_illegal_turn(m).is_none()
    }

    pub fn display(&self, m: &BranchedManifold) -> String {
        self.0.iter().map(|l| l.display(m)).collect::<Vec<_>>().join(" ")
    }

    /// Number of occurrences of each edge, either sign.
    pub fn edge_counts(&self, edge_count: usize) -> Vec<u64> {
        let mut counts = vec![0u64; edge_count];
        for l in &self.0 {
            counts[l.edge.0] += 1;
        }
        counts
    }
}

impl fmt::Display for EdgeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| format!("e{}{}", l.edge.0, if l.inverse { "^-1" } else { "" }))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromIterator<Letter> for EdgeWord {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        EdgeWord(iter.into_iter().collect())
    }
}

/// Whether `w` is a legal path in `m`.
pub fn is_legal_path(m: &BranchedManifold, w: &EdgeWord) -> bool {
    w.is_legal(m)
}
